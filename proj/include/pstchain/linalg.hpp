#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <type_traits>
#include <vector>

#include "pstchain/errors.hpp"

namespace pstchain {

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

template <typename Scalar>
struct EigenSystem {
  RealVector values;                                           // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // columns
  int sweeps = 0;
};

struct JacobiOptions {
  double off_norm_tolerance = 1e-13;  // relative to max(1, ||A||_F)
  int max_sweeps = 100;
};

namespace detail {

inline double abs2(double x) { return x * x; }
inline double abs2(const std::complex<double>& z) { return std::norm(z); }

}  // namespace detail

/// Cyclic Jacobi diagonalization of a real symmetric or complex Hermitian
/// matrix. Only the Hermitian part of `input` is meaningful.
template <typename Derived>
EigenSystem<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                   const JacobiOptions& opt = {}) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  constexpr bool kComplex = !std::is_same_v<Scalar, double>;

  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw DomainError("jacobi_eigen: matrix must be square");

  Matrix a = input;
  Matrix v = Matrix::Identity(n, n);

  double frob = 0.0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) frob += detail::abs2(a(i, j));
  const double threshold = opt.off_norm_tolerance * std::max(1.0, std::sqrt(frob));

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i)
        if (i != j) s += detail::abs2(a(i, j));
    return std::sqrt(s);
  };

  int sweep = 0;
  while (off_norm() > threshold) {
    if (sweep == opt.max_sweeps)
      throw NumericError("jacobi_eigen: no convergence within sweep limit");
    ++sweep;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag == 0.0) continue;

        double apq = 0.0;
        if constexpr (kComplex) {
          // Rotate the phase of a(p,q) away so the 2x2 block becomes real.
          const Scalar phase = std::conj(a(p, q)) / mag;
          a.col(q) *= phase;
          a.row(q) *= std::conj(phase);
          v.col(q) *= phase;
          a(q, q) = std::real(a(q, q));
          apq = mag;
        } else {
          apq = a(p, q);
        }

        const double app = std::real(a(p, p));
        const double aqq = std::real(a(q, q));
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index r = 0; r < n; ++r) {
          const Scalar arp = a(r, p);
          const Scalar arq = a(r, q);
          a(r, p) = c * arp - s * arq;
          a(r, q) = s * arp + c * arq;
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const Scalar apr = a(p, r);
          const Scalar aqr = a(q, r);
          a(p, r) = c * apr - s * aqr;
          a(q, r) = s * apr + c * aqr;
        }
        a(p, q) = Scalar(0);
        a(q, p) = Scalar(0);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;

        for (Eigen::Index r = 0; r < n; ++r) {
          const Scalar vrp = v(r, p);
          const Scalar vrq = v(r, q);
          v(r, p) = c * vrp - s * vrq;
          v(r, q) = s * vrp + c * vrq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) {
    return std::real(a(x, x)) < std::real(a(y, y));
  });

  EigenSystem<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = std::real(a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]));
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace pstchain
