#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "morsewig/cli.hpp"
#include "morsewig/error.hpp"
#include "morsewig/io.hpp"

using namespace morsewig;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("morsewig_cli_" + name)).string();
}

// Value printed on the "key  value" line of a report.
double field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size()));
  }
  FAIL("missing field " << key);
  return 0.0;
}

// P(n) from the occupation table.
double occupation_at(const std::string& text, int n) {
  std::istringstream in(text);
  std::string line;
  bool table = false;
  while (std::getline(in, line)) {
    if (line.rfind("n ", 0) == 0) {
      table = true;
      continue;
    }
    if (table) {
      std::istringstream row(line);
      int k;
      double p;
      row >> k >> p;
      if (k == n) return p;
    }
  }
  FAIL("missing P(" << n << ")");
  return 0.0;
}

}  // namespace

TEST_CASE("time expressions") {
  const double tau = 8.0;
  CHECK(cli::parse_time("1.5", tau) == 1.5);
  CHECK(cli::parse_time("-2e-1", tau) == -0.2);
  CHECK(cli::parse_time("tau", tau) == 8.0);
  CHECK(cli::parse_time("tau/4", tau) == 2.0);
  CHECK(cli::parse_time("3/4 tau", tau) == 6.0);
  CHECK(cli::parse_time("3tau/4", tau) == 6.0);
  CHECK(cli::parse_time("1/64 tau", tau) == 0.125);
  CHECK_THROWS_AS(cli::parse_time("1/65 tau", tau), DomainError);
  CHECK_THROWS_AS(cli::parse_time("1/0 tau", tau), DomainError);
  CHECK_THROWS_AS(cli::parse_time("tau/2/2", tau), DomainError);
  CHECK_THROWS_AS(cli::parse_time("soon", tau), DomainError);
}

TEST_CASE("output formats") {
  CHECK(cli::output_format("a/b.csv") == "csv");
  CHECK(cli::output_format("grid.JSON") == "json");
  CHECK(cli::output_format("x.ppm") == "ppm");
  CHECK(cli::output_format("x.svg") == "svg");
  CHECK_THROWS_AS(cli::output_format("x.png"), DomainError);
  CHECK_THROWS_AS(cli::output_format("dir.d/file"), DomainError);
}

TEST_CASE("job json round trip") {
  const nlohmann::json j = {{"N", 12},      {"dpacs", true}, {"m", 2},
                            {"nbar", 0.4},  {"phase", 0.3},  {"time", "1/8 tau"},
                            {"nx", 31},     {"np", 41},      {"method", "quad"},
                            {"tol", 1e-9},  {"xmin", -3.0},  {"out", {"a.csv", "b.ppm"}}};
  const cli::JobSpec job = cli::job_from_json(j);
  CHECK(job.n_bound == 12);
  CHECK(job.state.kind == cli::RecipeKind::dpacs);
  CHECK(job.state.level == 2);
  CHECK(job.config.method == WignerMethod::quadrature);
  CHECK(job.outputs.size() == 2);
  CHECK(cli::job_to_json(cli::job_from_json(cli::job_to_json(job))) == cli::job_to_json(job));

  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}}), DomainError);
  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}, {"docs", true}, {"eigen", 1}}), DomainError);
  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}, {"dpacs", true}}), DomainError);
  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}, {"docs", true}, {"zeta", 0.1}, {"nbar", 1.0}}),
                  DomainError);
  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}, {"docs", true}, {"colour", 1}}), DomainError);
  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}, {"docs", true}, {"method", "fast"}}), DomainError);
  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}, {"docs", true}, {"tol", 0.5}}), DomainError);
  CHECK_THROWS_AS(cli::job_from_json({{"N", "ten"}, {"docs", true}}), DomainError);

  const cli::JobSpec z = cli::job_from_json({{"N", 10}, {"docs", true}, {"zeta", "0.1,-0.2"}});
  CHECK(*z.state.zeta == Complex(0.1, -0.2));
  CHECK_THROWS_AS(cli::job_from_json({{"N", 10}, {"docs", true}, {"zeta", "0.1;2"}}), DomainError);
}

TEST_CASE("state command") {
  const Result d = run({"state", "--N", "10", "--docs", "--nbar", "0.25"});
  CHECK(d.code == 0);
  CHECK(std::abs(field(d.out, "<n>") - 0.25) < 1e-6);

  const Result e = run({"state", "--N", "10", "--eigen", "0"});
  CHECK(e.code == 0);
  CHECK(occupation_at(e.out, 0) == 1.0);

  const Result p = run({"state", "--N", "10", "--dpacs", "--m", "2", "--nbar", "0.25"});
  CHECK(p.code == 0);
  CHECK(occupation_at(p.out, 0) == 0.0);
  CHECK(occupation_at(p.out, 1) == 0.0);

  const std::string path = temp_path("state.json");
  CHECK(run({"state", "--N", "10", "--docs", "--zeta", "0.1,0.05", "--out", path}).code == 0);
  const BoundState back = state_from_json(nlohmann::json::parse(read_file(path)));
  CHECK(back.coeffs()[0] == docs(make_system(10), Complex(0.1, 0.05)).coeffs()[0]);
  std::filesystem::remove(path);
}

TEST_CASE("usage errors exit with 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"state", "--N", "10"}).code == 1);
  CHECK(run({"state", "--N", "10", "--docs", "--eigen", "2"}).code == 1);
  CHECK(run({"state", "--N", "1", "--eigen", "0"}).code == 1);
  CHECK(run({"state", "--N", "10", "--eigen", "0", "--bogus"}).code == 1);
  CHECK(run({"state", "--N", "10", "--eigen", "0", "--out", "x.csv"}).code == 1);
  CHECK(run({"wigner", "--N", "10", "--eigen", "0", "--out", "x.png"}).code == 1);
  CHECK(run({"evolve", "--N", "10", "--eigen", "0"}).code == 1);
  CHECK(run({"state", "--N", "10", "--eigen", "0", "--time", "1/99 tau"}).code == 1);
  CHECK(run({"state", "--config", temp_path("missing.json")}).code == 1);
  const Result help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("wigner") != std::string::npos);
}

TEST_CASE("config file with flag overrides") {
  const std::string cfg = temp_path("job.json");
  write_file_atomic(cfg, R"({"N": 10, "docs": true, "nbar": 0.25, "nx": 5, "np": 5,
    "xmin": -1, "xmax": 3, "pmin": -1, "pmax": 1, "max_boundary": 1})");
  const std::string out = temp_path("cfg.json");
  const Result r = run({"wigner", "--config", cfg, "--np", "7", "--eigen", "1", "--out", out});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(read_file(out));
  CHECK(j.at("grid").at("np") == 7);
  CHECK(j.at("grid").at("nx") == 5);
  CHECK(j.at("meta").at("label") == "eigen:n=1");
  CHECK(j.at("meta").at("job").at("eigen") == 1);
  CHECK(j.at("meta").at("job").at("np") == 7);
  CHECK(j.at("meta").count("timestamp") == 1);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

TEST_CASE("wigner command") {
  const std::string csv = temp_path("g.csv"), ppm = temp_path("g.ppm"), svg = temp_path("g.svg");
  const Result r = run({"wigner", "--N", "10", "--docs", "--zeta", "0", "--nx", "41", "--np", "41",
                        "--out", csv, "--out", ppm, "--out", svg});
  CHECK(r.code == 0);
  const PhaseSpaceGrid g = grid_from_csv(read_file(csv));
  CHECK(g.spec.nx == 41);
  double peak = -1.0, low = 0.0;
  int peak_j = -1;
  for (int i = 0; i < g.spec.nx; ++i) {
    for (int j = 0; j < g.spec.np; ++j) {
      if (g.at(i, j) > peak) {
        peak = g.at(i, j);
        peak_j = j;
      }
      low = std::min(low, g.at(i, j));
    }
  }
  CHECK(std::abs(g.spec.p_at(peak_j)) < 1e-12);
  // The ground state dips to about -2e-8 (not below -1e-10 as one might
  // expect); see the unit tests of the Wigner module.
  CHECK(low > -3e-8);
  CHECK(read_file(ppm).rfind("P6\n41 41\n255\n", 0) == 0);
  CHECK(read_file(svg).find("<svg") != std::string::npos);

  const Result m1 = run({"wigner", "--N", "10", "--dpacs", "--m", "1", "--nbar", "0.25",
                         "--nx", "41", "--np", "41", "--out", csv});
  CHECK(m1.code == 0);
  CHECK(field(m1.out, "min W") < 0.0);

  const Result stdout_csv =
      run({"wigner", "--N", "10", "--eigen", "0", "--nx", "3", "--np", "3"});
  CHECK(stdout_csv.code == 0);
  CHECK(stdout_csv.out.rfind("# morsewig grid v1", 0) == 0);
  for (const auto& p : {csv, ppm, svg}) std::filesystem::remove(p);
}

TEST_CASE("revival through the command line") {
  const std::string a = temp_path("t0.csv"), b = temp_path("tau.csv");
  const std::vector<std::string> base = {"--N", "10", "--docs", "--nbar", "0.25",
                                         "--nx", "31", "--np", "31"};
  auto with = [&](std::vector<std::string> extra) {
    std::vector<std::string> v = {"wigner"};
    v.insert(v.end(), base.begin(), base.end());
    v.insert(v.end(), extra.begin(), extra.end());
    return v;
  };
  CHECK(run(with({"--out", a})).code == 0);
  CHECK(run(with({"--time", "1/1 tau", "--out", b})).code == 0);
  const PhaseSpaceGrid g0 = grid_from_csv(read_file(a));
  const PhaseSpaceGrid g1 = grid_from_csv(read_file(b));
  double diff = 0.0;
  for (std::size_t i = 0; i < g0.values.size(); ++i) {
    diff = std::max(diff, std::abs(g0.values[i] - g1.values[i]));
  }
  CHECK(diff < 1e-8);
  std::filesystem::remove(a);
  std::filesystem::remove(b);
}

TEST_CASE("evolve command") {
  const std::string path = temp_path("ev.json");
  const Result r = run({"evolve", "--N", "10", "--docs", "--nbar", "0.25", "--time", "tau/2",
                        "--out", path});
  CHECK(r.code == 0);
  CHECK(field(r.out, "fidelity") < 1.0);
  const auto j = nlohmann::json::parse(read_file(path));
  CHECK(j.at("time").get<double>() == doctest::Approx(21.0 * 3.14159265358979).epsilon(1e-12));
  CHECK(std::abs(field(run({"evolve", "--N", "10", "--docs", "--nbar", "0.25", "--time", "tau"}).out,
                       "fidelity") - 1.0) < 1e-12);
  std::filesystem::remove(path);
}

TEST_CASE("coverage failures exit with 3") {
  const std::string path = temp_path("narrow.csv");
  const Result r = run({"wigner", "--N", "10", "--eigen", "0", "--xmin", "-1", "--xmax", "3",
                        "--pmin", "-1", "--pmax", "1", "--nx", "5", "--np", "5", "--out", path});
  CHECK(r.code == 3);
  CHECK(r.err.find("(x, p) =") != std::string::npos);
  CHECK(std::filesystem::exists(path));
  std::filesystem::remove(path);
}

TEST_CASE("accuracy failures exit with 2") {
  const Result r = run({"wigner", "--N", "10", "--eigen", "0", "--method", "quad",
                        "--quad-window", "1", "--nx", "3", "--np", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("x =") != std::string::npos);
}
