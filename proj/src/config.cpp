#include "pstchain/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <set>
#include <variant>

#include "pstchain/errors.hpp"

namespace pstchain {

namespace {

using Field = std::variant<int RunConfig::*, double RunConfig::*, std::uint64_t RunConfig::*, bool RunConfig::*,
                           std::string RunConfig::*, std::optional<double> RunConfig::*,
                           std::vector<double> RunConfig::*, std::vector<std::string> RunConfig::*>;

// Emission order; also the list of accepted keys.
const std::vector<std::pair<std::string_view, Field>>& fields() {
  static const std::vector<std::pair<std::string_view, Field>> table{
      {"subcommand", &RunConfig::subcommand},
      {"n", &RunConfig::n},
      {"j_max", &RunConfig::j_max},
      {"epsilon_scale_ref", &RunConfig::epsilon_scale_ref},
      {"gamma", &RunConfig::gamma},
      {"epsilon", &RunConfig::epsilon},
      {"site_d", &RunConfig::site_d},
      {"delta", &RunConfig::delta},
      {"nnn_dipole", &RunConfig::nnn_dipole},
      {"nnn_tunnelling", &RunConfig::nnn_tunnelling},
      {"tunnel_u", &RunConfig::tunnel_u},
      {"tunnel_kappa", &RunConfig::tunnel_kappa},
      {"tunnel_prefactor", &RunConfig::tunnel_prefactor},
      {"eta", &RunConfig::eta},
      {"state", &RunConfig::state},
      {"observe", &RunConfig::observe},
      {"method", &RunConfig::method},
      {"delay", &RunConfig::delay},
      {"correction", &RunConfig::correction},
      {"measure_site", &RunConfig::measure_site},
      {"measure_tau", &RunConfig::measure_tau},
      {"first_site", &RunConfig::first_site},
      {"second_site", &RunConfig::second_site},
      {"reflection", &RunConfig::reflection},
      {"theta", &RunConfig::theta},
      {"phi", &RunConfig::phi},
      {"payload", &RunConfig::payload},
      {"conditioned", &RunConfig::conditioned},
      {"t_max", &RunConfig::t_max},
      {"steps_per_period", &RunConfig::steps_per_period},
      {"n_realizations", &RunConfig::n_realizations},
      {"seed", &RunConfig::seed},
      {"realization", &RunConfig::realization},
      {"threads", &RunConfig::threads},
      {"scan", &RunConfig::scan},
      {"family", &RunConfig::family},
      {"perturbation", &RunConfig::perturbation},
      {"values", &RunConfig::values},
      {"gamma_grid", &RunConfig::gamma_grid},
      {"epsilon_grid", &RunConfig::epsilon_grid},
      {"scan_n", &RunConfig::scan_n},
      {"n_min", &RunConfig::n_min},
      {"n_max", &RunConfig::n_max},
      {"floor", &RunConfig::floor},
      {"fit_input", &RunConfig::fit_input},
      {"out_dir", &RunConfig::out_dir},
      {"svg", &RunConfig::svg},
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T parse_number(std::string_view s) {
  T value{};
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc{} || ptr != end) throw ConfigError(fmt::format("cannot parse '{}' as a number", s));
  return value;
}

bool parse_bool(std::string_view s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError(fmt::format("cannot parse '{}' as a boolean", s));
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void assign(RunConfig& c, const Field& field, std::string_view v) {
  std::visit(Overloaded{
                 [&](int RunConfig::*m) { c.*m = parse_number<int>(v); },
                 [&](double RunConfig::*m) { c.*m = parse_number<double>(v); },
                 [&](std::uint64_t RunConfig::*m) { c.*m = parse_number<std::uint64_t>(v); },
                 [&](bool RunConfig::*m) { c.*m = parse_bool(v); },
                 [&](std::string RunConfig::*m) { c.*m = std::string(v); },
                 [&](std::optional<double> RunConfig::*m) { c.*m = parse_number<double>(v); },
                 [&](std::vector<double> RunConfig::*m) {
                   (c.*m).clear();
                   for (auto item : split_list(v)) (c.*m).push_back(parse_number<double>(item));
                 },
                 [&](std::vector<std::string> RunConfig::*m) {
                   (c.*m).clear();
                   for (auto item : split_list(v)) (c.*m).emplace_back(item);
                 },
             },
             field);
}

// Empty optional: the key is omitted.
std::optional<std::string> render(const RunConfig& c, const Field& field) {
  return std::visit(Overloaded{
                        [&](int RunConfig::*m) -> std::optional<std::string> { return fmt::format("{}", c.*m); },
                        [&](double RunConfig::*m) -> std::optional<std::string> { return fmt::format("{}", c.*m); },
                        [&](std::uint64_t RunConfig::*m) -> std::optional<std::string> {
                          return fmt::format("{}", c.*m);
                        },
                        [&](bool RunConfig::*m) -> std::optional<std::string> {
                          return std::string(c.*m ? "true" : "false");
                        },
                        [&](std::string RunConfig::*m) -> std::optional<std::string> { return c.*m; },
                        [&](std::optional<double> RunConfig::*m) -> std::optional<std::string> {
                          if (!(c.*m)) return std::nullopt;
                          return fmt::format("{}", *(c.*m));
                        },
                        [&](std::vector<double> RunConfig::*m) -> std::optional<std::string> {
                          return fmt::format("{}", fmt::join(c.*m, ","));
                        },
                        [&](std::vector<std::string> RunConfig::*m) -> std::optional<std::string> {
                          return fmt::format("{}", fmt::join(c.*m, ","));
                        },
                    },
                    field);
}

class Validator {
 public:
  Validator(const RunConfig& c, const std::map<std::string, int>& lines) : c_(c), lines_(lines) {}

  [[noreturn]] void fail(const std::string& key, const std::string& message) const {
    const auto it = lines_.find(key);
    if (it != lines_.end() && it->second == 0) throw ConfigError(fmt::format("command line: key '{}': {}", key, message));
    if (it != lines_.end()) throw ConfigError(fmt::format("line {}: key '{}': {}", it->second, key, message));
    throw ConfigError(fmt::format("key '{}': {}", key, message));
  }

  void require(bool ok, const std::string& key, const std::string& message) const {
    if (!ok) fail(key, message);
  }

  void one_of(const std::string& key, const std::string& value, std::initializer_list<std::string_view> allowed) const {
    if (std::find(allowed.begin(), allowed.end(), value) == allowed.end())
      fail(key, fmt::format("'{}' is not one of {}", value, fmt::join(allowed, "|")));
  }

  // Re-labels "key: message" errors thrown by the domain layers.
  template <typename F>
  void forward(F&& f) const {
    try {
      f();
    } catch (const ConfigError& e) {
      relabel(e.what());
    } catch (const DomainError& e) {
      relabel(e.what());
    }
  }

 private:
  [[noreturn]] void relabel(std::string_view what) const {
    const auto colon = what.find(':');
    std::string key(what.substr(0, std::min(colon, what.find('/'))));
    const std::string message(colon == std::string_view::npos ? what : trim(what.substr(colon + 1)));
    fail(key, message);
  }

  const RunConfig& c_;
  const std::map<std::string, int>& lines_;
};

void validate(const RunConfig& c, const std::map<std::string, int>& lines) {
  const Validator v(c, lines);
  v.one_of("subcommand", c.subcommand, {"evolve", "inject", "scan", "fit", "selftest"});
  v.require(c.n >= 2 && c.n <= kMaxSites, "n", "chain length must lie in [2, 24]");
  v.one_of("epsilon_scale_ref", c.epsilon_scale_ref, {"", "J0", "Jmax"});
  v.require(c.site_d.empty() || c.epsilon.has_value(), "site_d", "given without epsilon");
  v.forward([&] { c.chain_spec().validate(); });

  v.one_of("method", c.method, {"swap", "rabi"});
  v.one_of("correction", c.correction, {"none", "measure_site", "measure_register"});
  v.one_of("payload", c.payload, {"one", "plus"});
  v.forward([&] { c.protocol().validate(); });

  v.require(c.t_max > 0.0, "t_max", "must be positive");
  v.require(c.steps_per_period >= 1, "steps_per_period", "must be >= 1");
  v.require(c.n_realizations >= 1, "n_realizations", "must be >= 1");
  v.require(c.threads >= 1, "threads", "must be >= 1");

  if (c.subcommand == "evolve") {
    v.require(!c.state.empty(), "state", "required for evolve");
    v.require(!c.observe.empty(), "observe", "needs at least one observable");
    v.forward([&] { (void)c.observers(); });
  }
  if (!c.state.empty()) v.forward([&] {
      try {
        (void)c.initial_state();
      } catch (const DomainError& e) {
        throw ConfigError(std::string("state: ") + e.what());
      }
    });

  v.one_of("scan", c.scan, {"gamma_epsilon", "chain_length"});
  v.one_of("family", c.family, {"unentangled", "type1", "type2"});
  v.one_of("perturbation", c.perturbation, {"delta", "epsilon"});
  v.require(c.scan_n >= 2 && c.scan_n <= kMaxSites, "scan_n", "must lie in [2, 24]");
  v.require(c.n_min >= 3 && c.n_min <= kMaxSites, "n_min", "must lie in [3, 24]");
  v.require(c.n_max >= c.n_min && c.n_max <= kMaxSites, "n_max", "must lie in [n_min, 24]");
  for (double x : c.values) v.require(x >= 0.0, "values", "entries must be >= 0");
  for (double x : c.gamma_grid) v.require(x >= 0.0, "gamma_grid", "entries must be >= 0");
  for (double x : c.epsilon_grid) v.require(x >= 0.0, "epsilon_grid", "entries must be >= 0");
  if (c.subcommand == "scan") {
    if (c.scan == "gamma_epsilon") {
      v.require(!c.gamma_grid.empty(), "gamma_grid", "required for scan=gamma_epsilon");
      v.require(!c.epsilon_grid.empty(), "epsilon_grid", "required for scan=gamma_epsilon");
    } else {
      v.require(!c.values.empty(), "values", "required for scan=chain_length");
    }
  }
  v.require(c.floor > 0.0 && c.floor < 1.0, "floor", "must lie in (0, 1)");
  if (c.subcommand == "fit") v.require(!c.fit_input.empty(), "fit_input", "required for fit");
}

}  // namespace

ChainSpec RunConfig::chain_spec() const {
  ChainSpec spec;
  spec.n_sites = n;
  spec.j_max = j_max;
  if (epsilon_scale_ref == "J0") spec.epsilon_scale = EnergyScale::J0;
  if (epsilon_scale_ref == "Jmax") spec.epsilon_scale = EnergyScale::Jmax;
  if (epsilon) spec.perturbations.push_back(SiteEnergies{*epsilon, site_d});
  if (gamma) spec.perturbations.push_back(ExcitationInteraction{*gamma});
  if (delta) spec.perturbations.push_back(NnnAveraged{*delta});
  if (nnn_dipole) spec.perturbations.push_back(NnnDipole{});
  if (nnn_tunnelling) spec.perturbations.push_back(NnnTunnelling{tunnel_u, tunnel_kappa, tunnel_prefactor});
  if (eta) spec.perturbations.push_back(RandomNoise{*eta});
  return spec;
}

SparseState RunConfig::initial_state() const {
  if (state == "bell12") return bell_first_pair(n);
  if (state == "plus-ends") return plus_on_ends(n);
  const BasisMask mask = parse_ket(state);
  const auto len = state.size() - (state.front() == '|' ? 2 : 0);
  if (len != static_cast<std::size_t>(n)) throw DomainError("ket length differs from n");
  return SparseState::basis_state(n, mask);
}

std::vector<Observer> RunConfig::observers() const {
  std::vector<Observer> out;
  const auto reference = [&] {
    if (state.empty() || state == "bell12" || state == "plus-ends")
      throw ConfigError("observe: self/twin need a ket initial state");
    return parse_ket(state);
  };
  for (const auto& token : observe) {
    if (token == "self") {
      out.push_back(fidelity_observer("self", reference()));
    } else if (token == "twin") {
      out.push_back(fidelity_observer("twin", mirror_mask(reference(), n)));
    } else if (token == "norm") {
      out.push_back(norm_observer());
    } else if (token.rfind("fidelity:", 0) == 0) {
      const auto ket = token.substr(9);
      if (ket.size() != static_cast<std::size_t>(n)) throw ConfigError("observe: ket length differs from n");
      try {
        out.push_back(fidelity_observer(token, parse_ket(ket)));
      } catch (const DomainError& e) {
        throw ConfigError(std::string("observe: ") + e.what());
      }
    } else if (token.rfind("eof:", 0) == 0) {
      const auto rest = std::string_view(token).substr(4);
      const auto colon = rest.find(':');
      if (colon == std::string_view::npos) throw ConfigError("observe: expected eof:<a>:<b>");
      int a = 0, b = 0;
      try {
        a = parse_number<int>(rest.substr(0, colon));
        b = parse_number<int>(rest.substr(colon + 1));
      } catch (const ConfigError&) {
        throw ConfigError("observe: expected eof:<a>:<b>");
      }
      if (a < 1 || b < 1 || a > n || b > n || a == b) throw ConfigError("observe: eof sites must be distinct, in 1..n");
      out.push_back(eof_observer(token, a, b));
    } else {
      throw ConfigError("observe: unknown observable '" + token + "'");
    }
  }
  return out;
}

ProtocolConfig RunConfig::protocol() const {
  ProtocolConfig p;
  p.chain = chain_spec();
  p.first_site = first_site;
  p.second_site = second_site;
  p.delay = delay;
  if (method == "rabi")
    p.method = RabiPulse{theta, phi};
  else
    p.method = SwapRegister{reflection};
  if (correction == "measure_site") p.correction = MeasureSiteAt{measure_site, measure_tau};
  if (correction == "measure_register") p.correction = MeasureRegisterImmediately{};
  if (payload == "plus") p.payload = {Complex(M_SQRT1_2, 0.0), Complex(M_SQRT1_2, 0.0)};
  p.conditioned = conditioned;
  p.seed = seed;
  p.realization = realization;
  return p;
}

TimeGrid RunConfig::grid() const { return TimeGrid::uniform(t_max, steps_per_period); }

ScanOptions RunConfig::scan_options() const { return {n_realizations, seed, threads}; }

RunConfig parse_config(std::string_view text, const std::map<std::string, std::string>& overrides) {
  RunConfig config;
  std::map<std::string, int> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3)
        throw ConfigError(fmt::format("line {}: malformed section header '{}'", line_no, line));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key=value", line_no));
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));

    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
    if (it == table.end()) throw ConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    if (!lines.emplace(key, line_no).second)
      throw ConfigError(fmt::format("line {}: key '{}' given twice", line_no, key));
    try {
      assign(config, it->second, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("line {}: key '{}': {}", line_no, key, e.what()));
    }
  }
  for (const auto& [key, value] : overrides) {
    const auto& table = fields();
    const auto it = std::find_if(table.begin(), table.end(), [&](const auto& f) { return f.first == key; });
    if (it == table.end()) throw ConfigError(fmt::format("command line: unknown key '{}'", key));
    try {
      assign(config, it->second, value);
    } catch (const ConfigError& e) {
      throw ConfigError(fmt::format("command line: key '{}': {}", key, e.what()));
    }
    lines[key] = 0;
  }
  validate(config, lines);
  return config;
}

std::string emit_config(const RunConfig& config) {
  std::string out;
  for (const auto& [key, field] : fields())
    if (auto value = render(config, field)) out += fmt::format("{}={}\n", key, *value);
  return out;
}

}  // namespace pstchain
