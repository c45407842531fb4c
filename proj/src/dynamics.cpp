#include "pstchain/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "pstchain/errors.hpp"

namespace pstchain {

namespace {

constexpr double kResidualTolerance = 1e-10;

}  // namespace

SpectralDecomposition decompose(const RealMatrix& h) {
  const auto eig = jacobi_eigen(h);
  SpectralDecomposition out{eig.values, eig.vectors};

  const auto n = h.rows();
  const RealMatrix recon = out.eigenvectors * out.eigenvalues.asDiagonal() * out.eigenvectors.transpose();
  const double rec_err = n == 0 ? 0.0 : (recon - h).cwiseAbs().maxCoeff();
  const double orth_err =
      n == 0 ? 0.0
             : (out.eigenvectors.transpose() * out.eigenvectors - RealMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (rec_err > kResidualTolerance || orth_err > kResidualTolerance)
    throw NumericError("decompose: residual contract violated");
  return out;
}

SpectralDecomposition decompose(const HamiltonianBlock& block) { return decompose(block.matrix); }

const PreparedSector& PreparedChain::sector(int n_exc) const {
  auto it = sectors_.find(n_exc);
  if (it == sectors_.end())
    throw DomainError("PreparedChain: sector " + std::to_string(n_exc) + " was not prepared");
  return it->second;
}

void PreparedChain::add_sector(PreparedSector sector) {
  const int k = sector.block.basis.n_exc();
  sectors_.insert_or_assign(k, std::move(sector));
}

PreparedChain prepare_chain(const ChainSpec& spec, std::span<const int> sectors, std::uint64_t seed,
                            std::uint64_t realization) {
  spec.validate();
  Rng site_rng(seed, realization, Rng::kSiteEnergies);
  const ChainSpec device = realize(spec, site_rng);
  const CouplingProfile profile = coupling_profile(device);

  PreparedChain chain(spec.n_sites);
  for (int k : sectors) {
    if (chain.has_sector(k)) continue;
    Rng noise_rng(seed, realization, Rng::noise_purpose(k));
    HamiltonianBlock block = build_block(device, profile, k, &noise_rng);
    SpectralDecomposition spectrum = decompose(block);
    chain.add_sector({std::move(block), std::move(spectrum)});
  }
  return chain;
}

PreparedChain prepare_all_sectors(const ChainSpec& spec, std::uint64_t seed, std::uint64_t realization) {
  std::vector<int> all(static_cast<std::size_t>(spec.n_sites + 1));
  for (int k = 0; k <= spec.n_sites; ++k) all[static_cast<std::size_t>(k)] = k;
  return prepare_chain(spec, all, seed, realization);
}

SpectralState::SpectralState(const SparseState& initial, const PreparedChain& chain)
    : n_sites_(initial.n_sites()), n_registers_(initial.n_registers()) {
  if (initial.n_sites() != chain.n_sites()) throw DomainError("SpectralState: chain length mismatch");

  // Group amplitudes by (sector, register) so every group evolves in one block.
  std::map<std::pair<int, BasisMask>, std::vector<std::pair<BasisMask, Complex>>> groups;
  for (const auto& [key, amp] : initial.amplitudes())
    groups[{popcount(key.chain), key.reg}].emplace_back(key.chain, amp);

  for (const auto& [gk, entries] : groups) {
    const PreparedSector& sector = chain.sector(gk.first);
    const auto dim = static_cast<Eigen::Index>(sector.block.basis.size());
    ComplexVector a = ComplexVector::Zero(dim);
    for (const auto& [mask, amp] : entries) a(static_cast<Eigen::Index>(*sector.block.basis.index_of(mask))) = amp;
    blocks_.push_back({&sector, gk.second, sector.spectrum.eigenvectors.transpose() * a});
  }
}

SparseState SpectralState::at(double dtau) const {
  SparseState out(n_sites_, n_registers_);
  for (const auto& b : blocks_) {
    const auto& spec = b.sector->spectrum;
    ComplexVector phased(b.coefficients.size());
    for (Eigen::Index k = 0; k < phased.size(); ++k)
      phased(k) = b.coefficients(k) * std::polar(1.0, -M_PI * spec.eigenvalues(k) * dtau);
    const ComplexVector a = spec.eigenvectors * phased;
    const auto& masks = b.sector->block.basis.masks();
    for (Eigen::Index i = 0; i < a.size(); ++i)
      if (std::abs(a(i)) >= kPruneTolerance) out.set(masks[static_cast<std::size_t>(i)], b.reg, a(i));
  }
  return out;
}

SparseState propagate(const SparseState& state, const PreparedChain& chain, double dtau) {
  return SpectralState(state, chain).at(dtau);
}

void Trajectory::add_segment(double start_tau, const SparseState& state, const PreparedChain& chain) {
  if (!segments_.empty() && start_tau < segments_.back().start)
    throw DomainError("Trajectory: segments must be added in time order");
  segments_.push_back({start_tau, SpectralState(state, chain)});
}

SparseState Trajectory::state_at(double tau) const {
  if (segments_.empty()) throw DomainError("Trajectory: no segments");
  auto it = std::upper_bound(segments_.begin(), segments_.end(), tau,
                             [](double t, const Segment& s) { return t < s.start; });
  if (it == segments_.begin()) throw DomainError("Trajectory: time precedes the first segment");
  --it;
  return it->state.at(tau - it->start);
}

double Trajectory::start() const {
  if (segments_.empty()) throw DomainError("Trajectory: no segments");
  return segments_.front().start;
}

TimeGrid TimeGrid::uniform(double t_max, int steps_per_period, double t_start) {
  if (steps_per_period < 1) throw DomainError("TimeGrid: steps_per_period must be >= 1");
  if (!(t_max >= t_start)) throw DomainError("TimeGrid: t_max must be >= t_start");
  TimeGrid g;
  g.steps_per_period = steps_per_period;
  const double steps = steps_per_period;
  const auto k0 = static_cast<long long>(std::ceil(t_start * steps - 1e-9));
  const auto k1 = static_cast<long long>(std::floor(t_max * steps + 1e-9));
  for (long long k = k0; k <= k1; ++k) g.tau.push_back(static_cast<double>(k) / steps);
  return g;
}

TimeGrid TimeGrid::single(double tau) {
  TimeGrid g;
  g.tau = {tau};
  return g;
}

std::size_t TimeSeries::column_index(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw DomainError("TimeSeries: no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> TimeSeries::column(const std::string& name) const {
  const auto c = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

namespace {

void check_grid(const TimeGrid& grid) {
  for (std::size_t i = 1; i < grid.tau.size(); ++i)
    if (!(grid.tau[i] > grid.tau[i - 1])) throw DomainError("TimeGrid: times must be strictly increasing");
}

template <typename StateAt>
TimeSeries record_with(StateAt&& state_at, const TimeGrid& grid, const std::vector<Observer>& observers) {
  check_grid(grid);
  TimeSeries ts;
  for (const auto& o : observers) ts.columns.push_back(o.name);
  ts.tau = grid.tau;
  ts.rows.reserve(grid.tau.size());
  for (double t : grid.tau) {
    const SparseState s = state_at(t);
    std::vector<double> row;
    row.reserve(observers.size());
    for (const auto& o : observers) row.push_back(o.fn(s));
    ts.rows.push_back(std::move(row));
  }
  return ts;
}

}  // namespace

TimeSeries record(const Trajectory& trajectory, const TimeGrid& grid, const std::vector<Observer>& observers) {
  return record_with([&](double t) { return trajectory.state_at(t); }, grid, observers);
}

TimeSeries evolve_series(const SparseState& initial, const PreparedChain& chain, const TimeGrid& grid,
                         const std::vector<Observer>& observers) {
  const SpectralState spectral(initial, chain);
  return record_with([&](double t) { return spectral.at(t); }, grid, observers);
}

}  // namespace pstchain
