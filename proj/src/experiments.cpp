#include "pstchain/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "pstchain/dynamics.hpp"
#include "pstchain/errors.hpp"

namespace pstchain {

Summary run_realizations(int n_real, const std::function<double(std::uint64_t)>& task, int threads) {
  if (n_real < 1) throw DomainError("run_realizations: n_real must be >= 1");
  std::vector<double> values(static_cast<std::size_t>(n_real));

  const int workers = std::clamp(threads, 1, n_real);
  if (workers == 1) {
    for (int k = 0; k < n_real; ++k) values[static_cast<std::size_t>(k)] = task(static_cast<std::uint64_t>(k));
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int k = w; k < n_real; k += workers)
            values[static_cast<std::size_t>(k)] = task(static_cast<std::uint64_t>(k));
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  Summary s;
  s.n_realizations = n_real;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n_real;
  if (n_real > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.standard_error = std::sqrt(ss / (n_real - 1)) / std::sqrt(double(n_real));
  }
  return s;
}

double ObservableSpec::operator()(const SparseState& state) const {
  if (kind == Kind::Fidelity) return fidelity_basis(state, target);
  return eof(reduce_two_sites(state, site_a, site_b));
}

double evaluate_scenario(const Scenario& scenario, std::uint64_t seed, std::uint64_t realization) {
  const auto sectors_set = scenario.initial.sectors();
  const std::vector<int> sectors(sectors_set.begin(), sectors_set.end());
  const PreparedChain chain = prepare_chain(scenario.chain, sectors, seed, realization);
  const SpectralState evolving(scenario.initial, chain);
  auto value_at = [&](double tau) { return scenario.observable(evolving.at(tau)); };
  if (!scenario.refine_peak) return value_at(scenario.tau);
  return find_peak(value_at, scenario.tau, scenario.half_width).value;
}

Summary run_scenario(const Scenario& scenario, int n_real, std::uint64_t seed, int threads) {
  if (!scenario.chain.is_stochastic()) n_real = 1;
  return run_realizations(
      n_real, [&](std::uint64_t k) { return evaluate_scenario(scenario, seed, k); }, threads);
}

Scenario family_scenario(Family family, const ChainSpec& chain) {
  Scenario s;
  s.chain = chain;
  const int n = chain.n_sites;
  switch (family) {
    case Family::Unentangled110:
      s.initial = SparseState::basis_state(n, 0b11);
      s.observable = ObservableSpec::fidelity(0b11);
      s.tau = 1.0;
      break;
    case Family::BellType1:
      s.initial = bell_first_pair(n);
      s.observable = ObservableSpec::entanglement(1, 2);
      s.tau = 1.0;
      break;
    case Family::GateType2:
      s.initial = plus_on_ends(n);
      s.observable = ObservableSpec::entanglement(1, n);
      s.tau = 0.5;
      break;
  }
  return s;
}

ScanResult scan_gamma_epsilon(const std::vector<double>& gamma_grid, const std::vector<double>& epsilon_grid,
                              const ScanOptions& options, int n_sites) {
  ScanResult out;
  out.axes = {"gamma", "epsilon"};
  const BasisMask input = (BasisMask{1} << (n_sites / 2)) - 1;
  for (double gamma : gamma_grid) {
    for (double epsilon : epsilon_grid) {
      Scenario s;
      s.chain.n_sites = n_sites;
      s.chain.epsilon_scale = EnergyScale::J0;
      if (gamma > 0.0) s.chain.perturbations.push_back(ExcitationInteraction{gamma});
      if (epsilon > 0.0) s.chain.perturbations.push_back(SiteEnergies{epsilon, {}});
      s.initial = SparseState::basis_state(n_sites, input);
      s.observable = ObservableSpec::fidelity(input);
      s.tau = 1.0;
      s.refine_peak = true;
      s.half_width = 0.1;
      out.points.push_back({{gamma, epsilon}, run_scenario(s, options.n_realizations, options.seed, options.threads)});
    }
  }
  return out;
}

ScanResult scan_chain_length(Family family, ScanPerturbation perturbation, const std::vector<double>& values,
                             int n_min, int n_max, const ScanOptions& options) {
  if (n_min < 3 || n_max < n_min) throw DomainError("scan_chain_length: need 3 <= n_min <= n_max");
  ScanResult out;
  out.axes = {"n", "p"};
  for (double p : values) {
    for (int n = n_min; n <= n_max; ++n) {
      ChainSpec chain;
      chain.n_sites = n;
      if (perturbation == ScanPerturbation::NnnAveraged) {
        chain.perturbations.push_back(NnnAveraged{p});
      } else {
        chain.epsilon_scale = EnergyScale::Jmax;
        chain.perturbations.push_back(SiteEnergies{p, {}});
      }
      const Scenario s = family_scenario(family, chain);
      out.points.push_back({{double(n), p}, run_scenario(s, options.n_realizations, options.seed, options.threads)});
    }
  }
  return out;
}

FitResult fit_decay(const std::vector<DecayPoint>& points, double floor) {
  FitResult fit;
  double sxx = 0.0, sxy = 0.0;
  std::vector<std::pair<double, double>> used;
  for (const auto& pt : points) {
    if (!(pt.value >= floor)) {
      ++fit.points_excluded;
      continue;
    }
    const double x = pt.n * pt.p * pt.p;
    const double y = -std::log(pt.value);
    sxx += x * x;
    sxy += x * y;
    used.emplace_back(x, pt.value);
  }
  fit.points_used = static_cast<int>(used.size());
  if (fit.points_used < 3) throw NumericError("fit_decay: fewer than 3 points above the floor");
  if (!(sxy > 0.0)) throw NumericError("fit_decay: data show no decay");
  fit.p0 = std::sqrt(sxx / sxy);
  double ss = 0.0;
  for (const auto& [x, v] : used) {
    const double r = v - std::exp(-x / (fit.p0 * fit.p0));
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / static_cast<double>(used.size()));
  return fit;
}

std::vector<DecayPoint> decay_points(const ScanResult& scan) {
  if (scan.axes.size() != 2 || scan.axes[0] != "n") throw DomainError("decay_points: expects (n, p) axes");
  std::vector<DecayPoint> out;
  for (const auto& pt : scan.points)
    out.push_back({static_cast<int>(pt.coords[0]), pt.coords[1], pt.summary.mean});
  return out;
}

}  // namespace pstchain
