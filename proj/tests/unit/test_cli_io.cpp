#include <doctest.h>

#include <filesystem>

#include "pstchain/config.hpp"
#include "pstchain/errors.hpp"
#include "pstchain/output.hpp"
#include "pstchain/selftest.hpp"

using namespace pstchain;

TEST_SUITE("cli_io") {
TEST_CASE("minimal config picks up defaults") {
  const auto c = parse_config("n=6\nstate=110000\n");
  CHECK(c.n == 6);
  CHECK(c.n_realizations == 200);
  CHECK(c.steps_per_period == 1000);
  CHECK(c.seed == 0);
  CHECK(c.initial_state().amplitude(parse_ket("110000")) == Complex(1.0));
}

TEST_CASE("rejections name key and line") {
  CHECK_THROWS_WITH_AS(parse_config("n=6\nstate=110000\nbogus=1\n"), doctest::Contains("line 3: unknown key 'bogus'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("n=6\nmethod=rabi\ncorrection=measure_register\n"),
                       doctest::Contains("'correction'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("subcommand=inject\nn=6\nepsilon=0.1\n"), doctest::Contains("J0|Jmax"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("n=6\nstate=110000\nn=7"), doctest::Contains("twice"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("n=40\nstate=110000"), doctest::Contains("line 1: key 'n'"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("n=six"), doctest::Contains("line 1"), ConfigError);
  CHECK_THROWS_AS(parse_config("n=6\nstate=1100"), ConfigError);
  CHECK_THROWS_AS(parse_config("n=6\nstate=110000\nobserve=eof:1:1"), ConfigError);
  CHECK_THROWS_AS(parse_config("[chain\nn=6"), ConfigError);
}

TEST_CASE("sections and comments") {
  const auto c = parse_config(
      "# device\n[chain]\nn = 8  # sites\nnnn_dipole = true\n\n[run]\nstate = 11000000\nobserve = twin, eof:1:8\n");
  CHECK(c.nnn_dipole);
  CHECK(c.observe == std::vector<std::string>{"twin", "eof:1:8"});
  CHECK(c.observers().size() == 2);
}

TEST_CASE("metadata round trip") {
  auto c = parse_config(
      "subcommand=scan\nn=7\nepsilon_scale_ref=Jmax\nepsilon=0.1\ngamma=0.05\ndelta=0.01\neta=0.1\nscan=chain_length\n"
      "family=type2\nvalues=0.05,0.1,0.2\nseed=18446744073709551615\nthreads=3\ntheta=0.3333333333333333\n");
  CHECK(parse_config(metadata(c)) == c);
  const auto d = parse_config("n=6\nstate=110000\n");
  CHECK(parse_config(emit_config(d)) == d);
}

TEST_CASE("command-line overrides") {
  const auto c = parse_config("n=6\nstate=110000\nseed=4", {{"seed", "9"}, {"threads", "2"}});
  CHECK(c.seed == 9);
  CHECK(c.threads == 2);
  CHECK_THROWS_WITH_AS(parse_config("n=6\nstate=110000", {{"threads", "0"}}), doctest::Contains("command line"),
                       ConfigError);
}

TEST_CASE("series CSV") {
  const auto c = parse_config("n=6\nstate=110000\nt_max=1\n");
  const std::vector<int> sectors{2};
  const auto chain = prepare_chain(c.chain_spec(), sectors);
  const auto series = evolve_series(c.initial_state(), chain, c.grid(), c.observers());
  const auto csv = series_csv(series);
  CHECK(csv.rfind("tau_over_tS,self,twin\n", 0) == 0);
  CHECK(csv.find("\n0.500000000000,") != std::string::npos);
  const auto row = csv.substr(csv.find("\n0.500000000000,") + 1);
  const auto twin = row.substr(row.rfind(',', row.find('\n')) + 1, row.find('\n') - row.rfind(',', row.find('\n')) - 1);
  CHECK(std::stod(twin) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(format_value(1.0) == "1.00000000000");
  CHECK(format_value(0.000123456789012345) == "0.000123456789012");
}

TEST_CASE("scan and fit CSV") {
  ScanResult scan;
  scan.axes = {"n", "p"};
  scan.points = {{{4, 0.1}, {0.9, 0.01, 200}}, {{5, 0.1}, {0.8, 0.02, 200}}};
  const auto csv = scan_csv(scan);
  CHECK(csv.rfind("n,p,mean,stderr,n_realizations\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  const auto back = parse_scan_csv(csv);
  CHECK(back.points.size() == 2);
  CHECK(back.points[1].summary.mean == doctest::Approx(0.8));

  const auto fit = fit_csv({0.21, 0.001, 30, 6});
  CHECK(fit.rfind("p0,residual_rms,points_used", 0) == 0);
  CHECK(std::count(fit.begin(), fit.end(), '\n') == 2);
}

TEST_CASE("SVG") {
  TimeSeries s;
  s.columns = {"a", "b"};
  for (int i = 0; i <= 10; ++i) {
    s.tau.push_back(0.1 * i);
    s.rows.push_back({0.1 * i, 1.0 - 0.1 * i});
  }
  const auto svg = render_svg(s, {"a", "b"});
  CHECK(svg == render_svg(s, {"a", "b"}));
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find(">a</text>") != std::string::npos);
  // Affine map: the first point of "a" sits at the bottom-left corner of the plot box.
  CHECK(svg.find("points=\"60.000,350.000") != std::string::npos);
  s.columns = {"<a&b>", "b"};
  CHECK(render_svg(s, {"<a&b>"}).find(">&lt;a&amp;b&gt;</text>") != std::string::npos);
  CHECK_THROWS(render_svg(TimeSeries{}, {"a"}));
}

TEST_CASE("file errors carry the path") {
  const auto bad = std::filesystem::path("/nonexistent-dir/x.csv");
  CHECK_THROWS_WITH_AS(write_text(bad, "x"), doctest::Contains("/nonexistent-dir/x.csv"), IoError);
  CHECK_THROWS_WITH_AS(read_text(bad), doctest::Contains("/nonexistent-dir/x.csv"), IoError);
  CHECK(metadata_path("out/run.csv").string() == "out/run.csv.meta");
}

TEST_CASE("selftest") {
  const auto results = run_selftest();
  for (const auto& r : results) {
    INFO(r.name << " worst " << r.worst);
    CHECK(r.passed());
  }
}
}
