#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pstchain/chain_model.hpp"
#include "pstchain/dynamics.hpp"
#include "pstchain/experiments.hpp"
#include "pstchain/injection.hpp"
#include "pstchain/state.hpp"

namespace pstchain {

/// Flat run description read from a key=value file. Section headers
/// ("[chain]") are accepted for readability and ignored; every key is global.
///
/// Observables for evolve are tokens of the form
///   self | twin | norm | fidelity:<ket> | eof:<a>:<b>
struct RunConfig {
  std::string subcommand = "evolve";  // evolve | inject | scan | fit | selftest

  int n = 6;
  double j_max = 1.0;
  std::string epsilon_scale_ref;  // "", "J0" or "Jmax"
  std::optional<double> gamma;
  std::optional<double> epsilon;
  std::vector<double> site_d;
  std::optional<double> delta;
  bool nnn_dipole = false;
  bool nnn_tunnelling = false;
  double tunnel_u = 1.0;
  double tunnel_kappa = 1.0;
  double tunnel_prefactor = 0.0;
  std::optional<double> eta;

  std::string state;  // ket | bell12 | plus-ends
  std::vector<std::string> observe{"self", "twin"};

  std::string method = "swap";      // swap | rabi
  double delay = 0.0;
  std::string correction = "none";  // none | measure_site | measure_register
  int measure_site = 1;
  double measure_tau = 1.0;
  int first_site = 1;
  int second_site = 2;
  double reflection = 0.0;
  double theta = M_PI;
  double phi = 0.0;
  std::string payload = "one";      // one | plus
  bool conditioned = true;

  double t_max = 1.0;
  int steps_per_period = 1000;

  int n_realizations = 200;
  std::uint64_t seed = 0;
  std::uint64_t realization = 0;
  int threads = 1;

  std::string scan = "gamma_epsilon";  // gamma_epsilon | chain_length
  std::string family = "unentangled";  // unentangled | type1 | type2
  std::string perturbation = "delta";  // delta | epsilon
  std::vector<double> values;
  std::vector<double> gamma_grid;
  std::vector<double> epsilon_grid;
  int scan_n = 6;
  int n_min = 4;
  int n_max = 15;

  double floor = 0.05;
  std::string fit_input;

  std::string out_dir = ".";
  bool svg = false;

  bool operator==(const RunConfig&) const = default;

  ChainSpec chain_spec() const;
  SparseState initial_state() const;
  std::vector<Observer> observers() const;
  ProtocolConfig protocol() const;
  TimeGrid grid() const;
  ScanOptions scan_options() const;
};

/// Parses and validates; throws ConfigError naming the key and line.
/// `overrides` (e.g. from command-line flags) replace file values before
/// validation.
RunConfig parse_config(std::string_view text, const std::map<std::string, std::string>& overrides = {});

/// Every key in canonical form; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace pstchain
