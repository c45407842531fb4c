#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>

#include "pstchain/dynamics.hpp"
#include "pstchain/state.hpp"

namespace pstchain {

/// Reduced state of two chain sites in the order |00>,|01>,|10>,|11>; the
/// first label belongs to the first requested site.
struct TwoQubitDensity {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();

  /// Throws DomainError unless Hermitian and unit trace within 1e-10.
  void validate() const;
};

/// Sum over register keys of |<target, reg|psi>|^2.
double fidelity_basis(const SparseState& state, BasisMask target);

/// Partial trace over every other chain site and all registers.
TwoQubitDensity reduce_two_sites(const SparseState& state, int site_a, int site_b);

/// Wootters concurrence; the lambda_i are taken as singular values of
/// sqrt(rho) (Y (x) Y) sqrt(rho)^*.
double concurrence(const TwoQubitDensity& rho);

/// Binary-entropy map from concurrence to entanglement of formation.
double eof_from_concurrence(double c);
double eof(const TwoQubitDensity& rho);

Observer fidelity_observer(std::string name, BasisMask target);
Observer eof_observer(std::string name, int site_a, int site_b);
Observer norm_observer(std::string name = "norm");

struct PeakReport {
  double tau_star = 0.0;
  double value = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  bool edge = false;  // grid maximum sits on the window boundary
};

/// Maximum of `column` within [center - half_width, center + half_width].
/// The grid maximum is refined by a parabola through its neighbours and,
/// when `evaluate` is given, by golden-section search of the metric itself
/// to a time tolerance of 1e-6.
PeakReport find_peak(const TimeSeries& series, const std::string& column, double tau_center, double half_width,
                     const std::function<double(double)>& evaluate = {});

/// Samples `evaluate` on a local grid (spacing 1e-3) and refines as above.
PeakReport find_peak(const std::function<double(double)>& evaluate, double tau_center, double half_width);

}  // namespace pstchain
