#include "pstchain/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include <Eigen/SVD>

#include "pstchain/errors.hpp"
#include "pstchain/linalg.hpp"

namespace pstchain {

namespace {

constexpr double kDensityTolerance = 1e-10;
// Density eigenvalues this far below the trace are rounding noise and are
// treated as exact zeros; concurrence is not Lipschitz at rank-deficient
// states, so keeping them would cost ~1e-8 accuracy on pure states.
constexpr double kRankTolerance = 1e-14;

Eigen::Matrix4cd hermitian_sqrt(const Eigen::Matrix4cd& m) {
  const auto eig = jacobi_eigen(m);
  Eigen::Vector4d root;
  for (int k = 0; k < 4; ++k) {
    if (eig.values(k) < -kDensityTolerance) throw NumericError("concurrence: density matrix is not PSD");
    root(k) = eig.values(k) > kRankTolerance ? std::sqrt(eig.values(k)) : 0.0;
  }
  return eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
}

double binary_entropy(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace

void TwoQubitDensity::validate() const {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kDensityTolerance)
    throw DomainError("TwoQubitDensity: not Hermitian");
  if (std::abs(rho.trace() - Complex(1.0)) > kDensityTolerance) throw DomainError("TwoQubitDensity: trace != 1");
}

double fidelity_basis(const SparseState& state, BasisMask target) {
  double f = 0.0;
  const auto& amps = state.amplitudes();
  for (auto it = amps.lower_bound({target, 0}); it != amps.end() && it->first.chain == target; ++it)
    f += std::norm(it->second);
  return f;
}

TwoQubitDensity reduce_two_sites(const SparseState& state, int site_a, int site_b) {
  const int n = state.n_sites();
  if (site_a == site_b || site_a < 1 || site_b < 1 || site_a > n || site_b > n)
    throw DomainError("reduce_two_sites: sites must be distinct and within the chain");
  const BasisMask bit_a = site_bit(site_a);
  const BasisMask bit_b = site_bit(site_b);

  std::map<StateKey, std::array<Complex, 4>> groups;
  for (const auto& [key, amp] : state.amplitudes()) {
    const int idx = ((key.chain & bit_a) ? 2 : 0) + ((key.chain & bit_b) ? 1 : 0);
    groups[{key.chain & ~(bit_a | bit_b), key.reg}][static_cast<std::size_t>(idx)] += amp;
  }

  TwoQubitDensity out;
  for (const auto& [rest, v] : groups)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        out.rho(i, j) += v[static_cast<std::size_t>(i)] * std::conj(v[static_cast<std::size_t>(j)]);
  return out;
}

double concurrence(const TwoQubitDensity& density) {
  density.validate();
  const Eigen::Matrix4cd& rho = density.rho;

  // sigma_y (x) sigma_y in the |00>,|01>,|10>,|11> order.
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1.0;
  yy(1, 2) = 1.0;
  yy(2, 1) = 1.0;
  yy(3, 0) = -1.0;

  // The lambda_i are the singular values of sqrt(rho) (Y(x)Y) sqrt(rho)^*.
  const Eigen::Matrix4cd root = hermitian_sqrt(rho / rho.trace().real());
  const Eigen::Matrix4cd m = root * yy * root.conjugate();
  const Eigen::Vector4d sv = Eigen::JacobiSVD<Eigen::Matrix4cd>(m).singularValues();
  std::array<double, 4> lambda{sv(0), sv(1), sv(2), sv(3)};
  std::sort(lambda.begin(), lambda.end(), std::greater<>());
  const double c = lambda[0] - lambda[1] - lambda[2] - lambda[3];
  return std::clamp(c, 0.0, 1.0);
}

double eof_from_concurrence(double c) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - c * c))));
}

double eof(const TwoQubitDensity& rho) { return eof_from_concurrence(concurrence(rho)); }

Observer fidelity_observer(std::string name, BasisMask target) {
  return {std::move(name), [target](const SparseState& s) { return fidelity_basis(s, target); }};
}

Observer eof_observer(std::string name, int site_a, int site_b) {
  return {std::move(name), [=](const SparseState& s) {
            TwoQubitDensity rho = reduce_two_sites(s, site_a, site_b);
            // Subnormalized mid-protocol states are scored by their conditional density.
            const double tr = rho.rho.trace().real();
            if (tr > 0.0) rho.rho /= tr;
            return eof(rho);
          }};
}

Observer norm_observer(std::string name) {
  return {std::move(name), [](const SparseState& s) { return std::sqrt(s.norm_squared()); }};
}

namespace {

PeakReport refine_peak(const std::vector<double>& tau, const std::vector<double>& value, std::size_t lo,
                       std::size_t hi, const std::function<double(double)>& evaluate) {
  PeakReport rep;
  rep.window_lo = tau[lo];
  rep.window_hi = tau[hi];
  std::size_t best = lo;
  for (std::size_t i = lo; i <= hi; ++i)
    if (value[i] > value[best]) best = i;
  rep.tau_star = tau[best];
  rep.value = value[best];
  if (best == lo || best == hi) {
    rep.edge = true;
    return rep;
  }

  const double t0 = tau[best - 1], t1 = tau[best], t2 = tau[best + 1];
  const double f0 = value[best - 1], f1 = value[best], f2 = value[best + 1];
  const double denom = (t0 - t1) * (t0 - t2) * (t1 - t2);
  const double a = (t2 * (f1 - f0) + t1 * (f0 - f2) + t0 * (f2 - f1)) / denom;
  const double b = (t2 * t2 * (f0 - f1) + t1 * t1 * (f2 - f0) + t0 * t0 * (f1 - f2)) / denom;
  double t_par = t1;
  if (a < 0.0) t_par = std::clamp(-b / (2.0 * a), t0, t2);

  if (!evaluate) {
    const double c = f1 - a * t1 * t1 - b * t1;
    const double v_par = a * t_par * t_par + b * t_par + c;
    if (v_par > rep.value) {
      rep.tau_star = t_par;
      rep.value = v_par;
    }
    return rep;
  }

  // Golden-section maximization on the bracketing interval.
  constexpr double kInvPhi = 0.6180339887498949;
  double x_lo = t0, x_hi = t2;
  double x1 = x_hi - kInvPhi * (x_hi - x_lo);
  double x2 = x_lo + kInvPhi * (x_hi - x_lo);
  double g1 = evaluate(x1), g2 = evaluate(x2);
  while (x_hi - x_lo > 1e-6) {
    if (g1 < g2) {
      x_lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = x_lo + kInvPhi * (x_hi - x_lo);
      g2 = evaluate(x2);
    } else {
      x_hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = x_hi - kInvPhi * (x_hi - x_lo);
      g1 = evaluate(x1);
    }
  }
  for (double t : {0.5 * (x_lo + x_hi), t_par}) {
    const double v = evaluate(t);
    if (v > rep.value) {
      rep.value = v;
      rep.tau_star = t;
    }
  }
  return rep;
}

}  // namespace

PeakReport find_peak(const TimeSeries& series, const std::string& column, double tau_center, double half_width,
                     const std::function<double(double)>& evaluate) {
  const auto values = series.column(column);
  const double lo_t = tau_center - half_width, hi_t = tau_center + half_width;
  std::size_t lo = series.size(), hi = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.tau[i] < lo_t - 1e-12 || series.tau[i] > hi_t + 1e-12) continue;
    lo = std::min(lo, i);
    hi = std::max(hi, i);
  }
  if (lo == series.size()) throw DomainError("find_peak: window holds no samples");
  return refine_peak(series.tau, values, lo, hi, evaluate);
}

PeakReport find_peak(const std::function<double(double)>& evaluate, double tau_center, double half_width) {
  const double step = 1e-3;
  const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / step));
  std::vector<double> tau(n + 1), value(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    tau[i] = tau_center - half_width + static_cast<double>(i) * step;
    value[i] = evaluate(tau[i]);
  }
  return refine_peak(tau, value, 0, n, evaluate);
}

}  // namespace pstchain
