#include "pstchain/injection.hpp"

#include <cmath>

#include "pstchain/errors.hpp"

namespace pstchain {

namespace {

void check_site(const SparseState& s, int site, const char* who) {
  if (site < 1 || site > s.n_sites()) throw DomainError(std::string(who) + ": site out of range");
}

void check_register(const SparseState& s, int reg, const char* who) {
  if (reg < 0 || reg >= s.n_registers()) throw DomainError(std::string(who) + ": no such register");
}

MeasurementPair project(const SparseState& state, BasisMask chain_bit, BasisMask reg_bit) {
  SparseState one(state.n_sites(), state.n_registers());
  SparseState zero(state.n_sites(), state.n_registers());
  for (const auto& [k, a] : state.amplitudes()) {
    const bool set = (k.chain & chain_bit) || (k.reg & reg_bit);
    (set ? one : zero).set(k.chain, k.reg, a);
  }
  const double total = state.norm_squared();
  if (!(total > 0.0)) throw DomainError("measure: zero state");

  auto finish = [&](SparseState&& s, int outcome) {
    MeasurementOutcome m{outcome, s.norm_squared() / total, std::move(s), false};
    if (m.probability > 0.0)
      m.post_state.normalize();
    else
      m.empty = true;
    return m;
  };
  return {finish(std::move(one), 1), finish(std::move(zero), 0)};
}

double weight_outside(const SparseState& s, int n_exc) {
  double w = 0.0;
  for (const auto& [k, a] : s.amplitudes())
    if (popcount(k.chain) != n_exc || k.reg != 0) w += std::norm(a);
  return w / s.norm_squared();
}

const std::vector<int> kInjectionSectors = {0, 1, 2};

}  // namespace

void ProtocolConfig::validate() const {
  chain.validate();
  const int n = chain.n_sites;
  if (first_site < 1 || first_site > n || second_site < 1 || second_site > n)
    throw ConfigError("first_site/second_site: must lie in 1..n");
  if (first_site == second_site) throw ConfigError("second_site: must differ from first_site");
  if (!(delay >= 0.0)) throw ConfigError("delay: must be >= 0");
  if (std::abs(std::norm(payload.alpha) + std::norm(payload.beta) - 1.0) > 1e-10)
    throw ConfigError("payload: |alpha|^2 + |beta|^2 must be 1");
  if (const auto* rabi = std::get_if<RabiPulse>(&method)) {
    if (!(rabi->theta >= 0.0 && rabi->theta <= M_PI)) throw ConfigError("theta: must lie in [0, pi]");
    if (std::holds_alternative<MeasureRegisterImmediately>(correction))
      throw ConfigError("correction: measure_register needs method=swap");
  } else {
    const double r = std::get<SwapRegister>(method).reflection;
    if (!(r >= 0.0 && r <= 1.0)) throw ConfigError("reflection: must lie in [0, 1]");
  }
  if (const auto* m = std::get_if<MeasureSiteAt>(&correction)) {
    if (m->site < 1 || m->site > n) throw ConfigError("measure_site: must lie in 1..n");
    if (!(m->tau >= delay)) throw ConfigError("measure_tau: must not precede the second injection");
  }
}

SparseState apply_rabi(const SparseState& state, int site, double theta, double phi) {
  check_site(state, site, "apply_rabi");
  const BasisMask bit = site_bit(site);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex raise = Complex(0.0, -1.0) * std::polar(s, phi);   // <1|U|0>
  const Complex lower = Complex(0.0, -1.0) * std::polar(s, -phi);  // <0|U|1>

  SparseState out(state.n_sites(), state.n_registers());
  for (const auto& [k, a] : state.amplitudes()) {
    out.add(k.chain, k.reg, c * a);
    out.add(k.chain ^ bit, k.reg, ((k.chain & bit) ? lower : raise) * a);
  }
  return out;
}

SparseState swap_inject(const SparseState& state, int site, int register_index, double reflection) {
  check_site(state, site, "swap_inject");
  check_register(state, register_index, "swap_inject");
  if (!(reflection >= 0.0 && reflection <= 1.0)) throw DomainError("swap_inject: reflection outside [0,1]");
  const BasisMask cbit = site_bit(site);
  const BasisMask rbit = BasisMask{1} << register_index;
  const double t = std::sqrt(1.0 - reflection * reflection);

  SparseState out(state.n_sites(), state.n_registers());
  for (const auto& [k, a] : state.amplitudes()) {
    const bool in_chain = k.chain & cbit;
    const bool in_reg = k.reg & rbit;
    if (in_chain == in_reg) {
      out.add(k.chain, k.reg, a);
      continue;
    }
    out.add(k.chain ^ cbit, k.reg ^ rbit, t * a);
    out.add(k.chain, k.reg, reflection * a);
  }
  return out;
}

MeasurementPair measure_site(const SparseState& state, int site) {
  check_site(state, site, "measure_site");
  return project(state, site_bit(site), 0);
}

MeasurementPair measure_register(const SparseState& state, int register_index) {
  check_register(state, register_index, "measure_register");
  return project(state, 0, BasisMask{1} << register_index);
}

double ProtocolRun::fidelity(BasisMask mask, double tau) const {
  double f = 0.0;
  for (const auto& b : branches) f += b.weight * fidelity_basis(b.trajectory.state_at(tau), mask);
  return f;
}

namespace {

struct Branch {
  double weight;
  std::vector<std::pair<double, SparseState>> segments;
};

SparseState inject(const SparseState& s, int site, const InjectionMethod& method, const Payload& payload,
                   double reflection) {
  if (const auto* rabi = std::get_if<RabiPulse>(&method)) return apply_rabi(s, site, rabi->theta, rabi->phi);
  SparseState with_reg = s;
  const int reg = with_reg.add_register(payload.alpha, payload.beta);
  return swap_inject(with_reg, site, reg, reflection);
}

// Splits every branch on a measurement taken at `tau`, keeping `keep` when
// conditioned.
std::vector<Branch> split(std::vector<Branch> branches, double tau, bool conditioned, int keep,
                          double& kept_probability, const PreparedChain& chain,
                          const std::function<MeasurementPair(const SparseState&)>& measure) {
  std::vector<Branch> out;
  double kept = 0.0;
  for (auto& b : branches) {
    const auto& [t0, last] = b.segments.back();
    const MeasurementPair m = measure(tau == t0 ? last : propagate(last, chain, tau - t0));
    for (int outcome : {1, 0}) {
      const auto& branch = m[outcome];
      if (branch.empty) continue;
      if (conditioned && outcome != keep) continue;
      Branch next = b;
      next.weight = conditioned ? 1.0 : b.weight * branch.probability;
      if (next.segments.back().first == tau)
        next.segments.back().second = branch.post_state;
      else
        next.segments.emplace_back(tau, branch.post_state);
      out.push_back(std::move(next));
    }
    kept += b.weight * m[keep].probability;
  }
  if (out.empty()) throw NumericError("protocol: conditioned measurement outcome has zero probability");
  kept_probability *= kept;
  return out;
}

}  // namespace

ProtocolRun run_delayed_pair(const ProtocolConfig& config, const TimeGrid& grid) {
  config.validate();
  const int n = config.chain.n_sites;

  ProtocolRun run;
  run.chain = std::make_shared<const PreparedChain>(
      prepare_chain(config.chain, kInjectionSectors, config.seed, config.realization));
  run.target = site_bit(config.first_site) | site_bit(config.second_site);
  run.twin = mirror_mask(run.target, n);

  const double reflection =
      std::holds_alternative<SwapRegister>(config.method) ? std::get<SwapRegister>(config.method).reflection : 0.0;

  // The first injection meets an empty chain and is treated as perfect.
  SparseState s0 = inject(SparseState::basis_state(n, 0), config.first_site, config.method, config.payload, 0.0);
  s0.prune();
  SparseState s1 = propagate(s0, *run.chain, config.delay);
  SparseState s2 = inject(s1, config.second_site, config.method, config.payload, reflection);
  s2.prune();
  run.error_weight = weight_outside(s2, 2);

  std::vector<Branch> branches{{1.0, {{0.0, s0}, {config.delay, s2}}}};

  if (std::holds_alternative<MeasureRegisterImmediately>(config.correction)) {
    const int reg = s2.n_registers() - 1;
    branches = split(std::move(branches), config.delay, config.conditioned, 0, run.kept_probability, *run.chain,
                     [reg](const SparseState& s) { return measure_register(s, reg); });
  } else if (const auto* m = std::get_if<MeasureSiteAt>(&config.correction)) {
    const int site = m->site;
    branches = split(std::move(branches), m->tau, config.conditioned, 1, run.kept_probability, *run.chain,
                     [site](const SparseState& s) { return measure_site(s, site); });
  }

  for (auto& b : branches) {
    WeightedBranch wb{b.weight, {}};
    for (auto& [t, st] : b.segments) wb.trajectory.add_segment(t, st, *run.chain);
    run.branches.push_back(std::move(wb));
  }

  // Observers act on each branch; the mixture is the weighted sum.
  const BasisMask target = run.target, twin = run.twin;
  const std::vector<std::pair<std::string, std::function<double(const SparseState&)>>> columns = {
      {"target", [target](const SparseState& s) { return fidelity_basis(s, target); }},
      {"twin", [twin](const SparseState& s) { return fidelity_basis(s, twin); }},
      {"vacuum", [](const SparseState& s) { return fidelity_basis(s, 0); }},
      {"error_weight", [](const SparseState& s) { return weight_outside(s, 2); }},
  };
  for (const auto& c : columns) run.series.columns.push_back(c.first);
  run.series.tau = grid.tau;
  for (double t : grid.tau) {
    std::vector<double> row(columns.size(), 0.0);
    for (const auto& b : run.branches) {
      const SparseState s = b.trajectory.state_at(t);
      for (std::size_t c = 0; c < columns.size(); ++c) row[c] += b.weight * columns[c].second(s);
    }
    run.series.rows.push_back(std::move(row));
  }
  return run;
}

PeakReport run_type2_delay(const ChainSpec& chain, double delay, InjectionKind method,
                           const DelaySweepOptions& options) {
  chain.validate();
  if (!(delay >= 0.0)) throw ConfigError("delay: must be >= 0");
  const int n = chain.n_sites;
  const PreparedChain prepared = prepare_chain(chain, kInjectionSectors, options.seed, options.realization);

  const Payload plus{M_SQRT1_2, M_SQRT1_2};
  const InjectionMethod how = method == InjectionKind::Rabi ? InjectionMethod{RabiPulse{M_PI / 2.0, 0.0}}
                                                            : InjectionMethod{SwapRegister{0.0}};

  SparseState s = inject(SparseState::basis_state(n, 0), 1, how, plus, 0.0);
  s = propagate(s, prepared, delay);
  s = inject(s, n, how, plus, 0.0);
  if (method == InjectionKind::Swap) s = measure_register(s, s.n_registers() - 1).zero.post_state;
  s.prune();

  const SpectralState evolving(s, prepared);
  auto eof_at = [&](double tau) {
    TwoQubitDensity rho = reduce_two_sites(evolving.at(tau - delay), 1, n);
    return eof(rho);
  };
  return find_peak(eof_at, 0.5 + 0.5 * delay, 0.2);
}

PeakReport run_bell_delay(const ChainSpec& chain, double delay, InjectionKind method,
                          const DelaySweepOptions& options) {
  chain.validate();
  if (!(delay >= 0.0)) throw ConfigError("delay: must be >= 0");
  const int n = chain.n_sites;
  const PreparedChain prepared = prepare_chain(chain, kInjectionSectors, options.seed, options.realization);

  // Registers A (bit 0) and B (bit 1) share (|10> + |01>)/sqrt(2).
  SparseState s(n, 2);
  s.set(0, 0b01, M_SQRT1_2);
  s.set(0, 0b10, M_SQRT1_2);
  s = swap_inject(s, 1, 0, 0.0);
  s = propagate(s, prepared, delay);
  s = swap_inject(s, 2, 1, 0.0);
  if (method == InjectionKind::Swap) {
    s = measure_register(s, 0).zero.post_state;
    s = measure_register(s, 1).zero.post_state;
  }
  s.prune();

  const SpectralState evolving(s, prepared);
  auto eof_at = [&](double tau) {
    TwoQubitDensity rho = reduce_two_sites(evolving.at(tau - delay), n - 1, n);
    rho.rho /= rho.rho.trace().real();
    return eof(rho);
  };
  return find_peak(eof_at, 0.5 + 0.5 * delay, 0.2);
}

}  // namespace pstchain
