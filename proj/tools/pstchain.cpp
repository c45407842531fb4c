#include <fmt/format.h>

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>

#include "pstchain/config.hpp"
#include "pstchain/errors.hpp"
#include "pstchain/output.hpp"
#include "pstchain/runs.hpp"
#include "pstchain/selftest.hpp"

namespace fs = std::filesystem;
using namespace pstchain;

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool svg = false;
};

RunConfig load(const std::string& subcommand, const Flags& flags) {
  std::map<std::string, std::string> overrides{{"subcommand", subcommand}};
  if (!flags.out.empty()) overrides["out_dir"] = flags.out;
  if (flags.seed) overrides["seed"] = std::to_string(*flags.seed);
  if (flags.threads) overrides["threads"] = std::to_string(*flags.threads);
  if (flags.svg) overrides["svg"] = "true";
  const std::string text = flags.config.empty() ? std::string() : read_text(flags.config);
  return parse_config(text, overrides);
}

fs::path emit(const RunConfig& config, const std::string& stem, const std::string& csv) {
  const fs::path dir = config.out_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  const fs::path path = dir / (stem + ".csv");
  write_text(path, csv);
  write_text(metadata_path(path), metadata(config));
  return path;
}

void emit_svg(const RunConfig& config, const std::string& stem, const TimeSeries& series,
              const std::vector<std::string>& columns) {
  if (!config.svg) return;
  write_text(fs::path(config.out_dir) / (stem + ".svg"), render_svg(series, columns));
}

int evolve_command(const RunConfig& config) {
  const TimeSeries series = run_evolve(config);
  const auto path = emit(config, "evolve", series_csv(series));
  emit_svg(config, "evolve", series, series.columns);
  fmt::print("wrote {}\n", path.string());
  return 0;
}

int inject_command(const RunConfig& config) {
  const ProtocolRun run = run_inject(config);
  const auto path = emit(config, "inject", series_csv(run.series));
  emit_svg(config, "inject", run.series, {"target", "twin"});
  fmt::print("wrote {}\nerror_weight={} kept_probability={}\n", path.string(), format_value(run.error_weight),
             format_value(run.kept_probability));
  return 0;
}

int scan_command(const RunConfig& config) {
  fmt::print("wrote {}\n", emit(config, "scan", scan_csv(run_scan(config))).string());
  return 0;
}

int fit_command(const RunConfig& config) {
  const ScanResult scan = parse_scan_csv(read_text(config.fit_input));
  const FitResult fit = fit_decay(decay_points(scan), config.floor);
  fmt::print("p0={} residual_rms={} points_used={}\n", format_value(fit.p0), format_value(fit.residual_rms),
             fit.points_used);
  fmt::print("wrote {}\n", emit(config, "fit", fit_csv(fit)).string());
  return 0;
}

int run_selftest_command() {
  const int failures = print_report(run_selftest(), std::cout);
  fmt::print("{}\n", failures ? fmt::format("{} check(s) failed", failures) : std::string("all checks passed"));
  return failures ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator of perturbed perfect-state-transfer spin chains"};
  app.set_version_flag("--version", PSTCHAIN_VERSION);
  app.require_subcommand(1);

  Flags flags;
  app.add_option("--config", flags.config, "key=value run description");
  app.add_option("--out", flags.out, "output directory (overrides out_dir)");
  app.add_option("--seed", flags.seed, "master seed (overrides seed)");
  app.add_option("--threads", flags.threads, "worker threads; results do not depend on it")->check(CLI::PositiveNumber);
  app.add_flag("--svg", flags.svg, "also write an SVG plot");

  std::string chosen;
  for (const char* name : {"evolve", "inject", "scan", "fit", "selftest"}) {
    auto* sub = app.add_subcommand(name);
    sub->fallthrough();
    sub->callback([&chosen, name] { chosen = name; });
  }
  app.get_subcommand("evolve")->description("time series of fidelities and EoF for one initial state");
  app.get_subcommand("inject")->description("delayed two-excitation injection protocol");
  app.get_subcommand("scan")->description("disorder-averaged parameter scan");
  app.get_subcommand("fit")->description("fit the exp(-N p^2/p0^2) decay law to a chain-length scan");
  app.get_subcommand("selftest")->description("invariant suites and dense-oracle comparisons");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (chosen == "selftest") return run_selftest_command();
    const RunConfig config = load(chosen, flags);
    if (chosen == "evolve") return evolve_command(config);
    if (chosen == "inject") return inject_command(config);
    if (chosen == "scan") return scan_command(config);
    return fit_command(config);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 3;
  }
}
