#include "morsewig/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "morsewig/acceptance.hpp"
#include "morsewig/error.hpp"
#include "morsewig/io.hpp"

namespace morsewig::cli {
namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {
    "N",    "hbar", "omega", "mass",  "eigen", "docs",         "dpacs",
    "m",    "zeta", "nbar",  "phase", "time",  "xmin",         "xmax",
    "nx",   "pmin", "pmax",  "np",    "method", "tol",         "scaling",
    "quad_points",  "quad_window",    "max_boundary", "out"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw DomainError(std::string("config: bad value for '") + key + "'");
  }
}

bool parse_real(std::string s, double& out) {
  s.erase(0, s.find_first_not_of(' '));
  s.erase(s.find_last_not_of(' ') + 1);
  if (!s.empty() && s[0] == '+') s.erase(0, 1);
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return !s.empty() && ec == std::errc() && ptr == end;
}

Complex parse_zeta(const json& v) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto comma = s.find(',');
    double re = 0.0, im = 0.0;
    if (parse_real(s.substr(0, comma), re) &&
        (comma == std::string::npos || parse_real(s.substr(comma + 1), im))) {
      return {re, im};
    }
  }
  throw DomainError("zeta: expected re[,im], got " + v.dump());
}

const char* method_name(WignerMethod m) {
  return m == WignerMethod::closed_form ? "closed" : "quad";
}

const char* scaling_name(BesselScaling s) {
  return s == BesselScaling::log_scaled ? "log" : "direct";
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Flags as parsed; only the ones present on the command line are laid over
// the config.
struct Raw {
  std::optional<int> n_bound, eigen, m, nx, np, quad_points;
  std::optional<double> hbar, omega, mass, nbar, phase, xmin, xmax, pmin,
      pmax, tol, quad_window, max_boundary;
  std::optional<std::string> zeta, time, method, scaling, config;
  bool docs = false;
  bool dpacs = false;
  std::vector<std::string> out;
};

void add_job_options(CLI::App& app, Raw& raw) {
  app.add_option("--N", raw.n_bound, "number of bound levels (>= 2)");
  app.add_option("--hbar", raw.hbar, "reduced Planck constant (default 1)");
  app.add_option("--omega", raw.omega, "harmonic frequency (default 1)");
  app.add_option("--mass", raw.mass, "reduced mass (default 1)");
  app.add_option("--eigen", raw.eigen, "Morse eigenstate n");
  app.add_flag("--docs", raw.docs, "deformed coherent state");
  app.add_flag("--dpacs", raw.dpacs, "deformed photon-added coherent state");
  app.add_option("--m", raw.m, "photons added (dpacs)");
  app.add_option("--zeta", raw.zeta, "coherent parameter re[,im]");
  app.add_option("--nbar", raw.nbar, "mean level of the coherent state");
  app.add_option("--phase", raw.phase, "phase of zeta with --nbar (rad)");
  app.add_option("--time", raw.time, "real time or 'p/q tau'");
  app.add_option("--xmin", raw.xmin);
  app.add_option("--xmax", raw.xmax);
  app.add_option("--nx", raw.nx, "x lattice points (default 201)");
  app.add_option("--pmin", raw.pmin);
  app.add_option("--pmax", raw.pmax);
  app.add_option("--np", raw.np, "p lattice points (default 201)");
  app.add_option("--method", raw.method, "closed | quad");
  app.add_option("--tol", raw.tol, "Bessel relative tolerance");
  app.add_option("--scaling", raw.scaling, "log | direct");
  app.add_option("--quad-points", raw.quad_points);
  app.add_option("--quad-window", raw.quad_window);
  app.add_option("--max-boundary", raw.max_boundary,
                 "largest boundary |W| / max |W| accepted (default 1e-12)");
  app.add_option("--out", raw.out, "output path; format from extension");
  app.add_option("--config", raw.config, "JSON file with flat job keys");
}

json merge(const Raw& raw) {
  json j = json::object();
  if (raw.config) {
    try {
      j = json::parse(read_file(*raw.config));
    } catch (const json::exception& e) {
      throw DomainError("config: " + std::string(e.what()));
    }
    if (!j.is_object()) throw DomainError("config: expected a JSON object");
  }
  // A recipe given as a flag replaces the config's whole recipe, and a zeta
  // flag replaces the config's nbar (and the reverse).
  if (raw.eigen || raw.docs || raw.dpacs) {
    for (const char* key : {"eigen", "docs", "dpacs", "m", "zeta", "nbar", "phase"}) {
      j.erase(key);
    }
  }
  if (raw.zeta) j.erase("nbar");
  if (raw.nbar) j.erase("zeta");

  auto put = [&](const char* key, const auto& v) {
    if (v) j[key] = *v;
  };
  put("N", raw.n_bound);
  put("hbar", raw.hbar);
  put("omega", raw.omega);
  put("mass", raw.mass);
  put("eigen", raw.eigen);
  if (raw.docs) j["docs"] = true;
  if (raw.dpacs) j["dpacs"] = true;
  put("m", raw.m);
  put("zeta", raw.zeta);
  put("nbar", raw.nbar);
  put("phase", raw.phase);
  put("time", raw.time);
  put("xmin", raw.xmin);
  put("xmax", raw.xmax);
  put("nx", raw.nx);
  put("pmin", raw.pmin);
  put("pmax", raw.pmax);
  put("np", raw.np);
  put("method", raw.method);
  put("tol", raw.tol);
  put("scaling", raw.scaling);
  put("quad_points", raw.quad_points);
  put("quad_window", raw.quad_window);
  put("max_boundary", raw.max_boundary);
  if (!raw.out.empty()) j["out"] = raw.out;
  return j;
}

void print_state(const BoundState& s, std::ostream& out) {
  const auto p = occupation(s);
  out << "label    " << s.label() << "\n"
      << "norm^2   " << num(norm_sq(s)) << "\n"
      << "<n>      " << num(mean_n(s)) << "\n"
      << "n        P(n)\n";
  for (std::size_t n = 0; n < p.size(); ++n) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%-8zu %.17g\n", n, p[n]);
    out << buf;
  }
}

void require_outputs(const JobSpec& job, const std::set<std::string>& ok,
                     const char* command) {
  for (const auto& path : job.outputs) {
    if (!ok.count(output_format(path))) {
      throw DomainError(std::string(command) + ": cannot write " + path);
    }
  }
}

int cmd_state(const JobSpec& job, std::ostream& out) {
  require_outputs(job, {"json"}, "state");
  const BoundState s = build_state(job);
  print_state(s, out);
  for (const auto& path : job.outputs) {
    write_file_atomic(path, state_to_json(s).dump(2) + "\n");
  }
  return 0;
}

int cmd_evolve(const JobSpec& job, std::ostream& out) {
  require_outputs(job, {"json"}, "evolve");
  if (!job.time) throw DomainError("evolve: --time is required");
  JobSpec initial = job;
  initial.time.reset();
  const BoundState s0 = build_state(initial);
  const BoundState st = build_state(job);
  const double tau = revival_period(s0.system());
  const double t = parse_time(*job.time, tau);
  out << "t        " << num(t) << "\n"
      << "tau      " << num(tau) << "\n"
      << "fidelity " << num(fidelity(s0, st)) << "\n";
  print_state(st, out);
  for (const auto& path : job.outputs) {
    json j = state_to_json(st);
    j["time"] = t;
    write_file_atomic(path, j.dump(2) + "\n");
  }
  return 0;
}

int cmd_wigner(const JobSpec& job, std::ostream& out, std::ostream& err) {
  require_outputs(job, {"csv", "json", "ppm", "svg"}, "wigner");
  const BoundState s = build_state(job);

  GridSpec spec{0.0, 1.0, job.nx, 0.0, 1.0, job.np};
  if (!job.x_min || !job.x_max || !job.p_min || !job.p_max) {
    spec = auto_window(s, job.nx, job.np, job.config);
  }
  spec.x_min = job.x_min.value_or(spec.x_min);
  spec.x_max = job.x_max.value_or(spec.x_max);
  spec.p_min = job.p_min.value_or(spec.p_min);
  spec.p_max = job.p_max.value_or(spec.p_max);

  PhaseSpaceGrid grid = wigner_grid(s, spec, job.config);
  JobSpec echoed = job;
  echoed.x_min = spec.x_min;
  echoed.x_max = spec.x_max;
  echoed.p_min = spec.p_min;
  echoed.p_max = spec.p_max;
  grid.meta["job"] = job_to_json(echoed).dump();
  grid.meta["timestamp"] = utc_timestamp();

  if (job.outputs.empty()) {
    out << grid_to_csv(grid);
  }
  for (const auto& path : job.outputs) {
    const std::string f = output_format(path);
    if (f == "csv") write_file_atomic(path, grid_to_csv(grid));
    if (f == "json") {
      json j = grid_to_json(grid);
      j["meta"]["job"] = job_to_json(echoed);
      write_file_atomic(path, j.dump(2) + "\n");
    }
    if (f == "ppm") write_file_atomic(path, grid_to_ppm(grid));
    if (f == "svg") write_file_atomic(path, grid_to_svg(grid));
  }

  const Negativity neg = negativity(grid);
  const double ratio = boundary_ratio(grid);
  if (!job.outputs.empty()) {
    out << "grid     " << spec.nx << " x " << spec.np << ", x in ["
        << num(spec.x_min) << ", " << num(spec.x_max) << "], p in ["
        << num(spec.p_min) << ", " << num(spec.p_max) << "]\n"
        << "min W    " << num(neg.min_value) << " at (" << num(neg.min_x)
        << ", " << num(neg.min_p) << ")\n"
        << "boundary " << num(ratio) << "\n";
    if (ratio <= job.max_boundary) {
      out << "integral " << num(normalization(grid, job.max_boundary)) << "\n";
    }
  }
  if (ratio > job.max_boundary) {
    // Locate the boundary cell that breaks coverage.
    double peak = 0.0;
    for (double v : grid.values) peak = std::max(peak, std::abs(v));
    int bi = 0, bj = 0;
    double worst = -1.0;
    for (int i = 0; i < spec.nx; ++i) {
      for (int j = 0; j < spec.np; ++j) {
        const bool edge =
            i == 0 || j == 0 || i == spec.nx - 1 || j == spec.np - 1;
        if (edge && std::abs(grid.at(i, j)) > worst) {
          worst = std::abs(grid.at(i, j));
          bi = i;
          bj = j;
        }
      }
    }
    err << "coverage: |W| / max |W| = " << num(ratio) << " at (x, p) = ("
        << num(spec.x_at(bi)) << ", " << num(spec.p_at(bj))
        << ") exceeds " << num(job.max_boundary)
        << "; widen the window or pass --max-boundary\n";
    return 3;
  }
  return 0;
}

int cmd_check(double tol, std::ostream& out) {
  AcceptanceOptions opts;
  opts.bessel_rel_tol = tol;
  const auto results = run_acceptance(opts);
  int passed = 0;
  for (const auto& r : results) {
    out << format_result(r) << "\n";
    passed += r.pass ? 1 : 0;
  }
  out << passed << "/" << results.size() << " criteria passed\n";
  return passed == static_cast<int>(results.size()) ? 0 : 2;
}

}  // namespace

json job_to_json(const JobSpec& job) {
  json j;
  j["N"] = job.n_bound;
  j["hbar"] = job.hbar;
  j["omega"] = job.omega;
  j["mass"] = job.mass;
  switch (job.state.kind) {
    case RecipeKind::eigen:
      j["eigen"] = job.state.level;
      break;
    case RecipeKind::docs:
      j["docs"] = true;
      break;
    case RecipeKind::dpacs:
      j["dpacs"] = true;
      j["m"] = job.state.level;
      break;
  }
  if (job.state.zeta) {
    j["zeta"] = {job.state.zeta->real(), job.state.zeta->imag()};
  }
  if (job.state.nbar) {
    j["nbar"] = *job.state.nbar;
    j["phase"] = job.state.phase;
  }
  if (job.time) j["time"] = *job.time;
  if (job.x_min) j["xmin"] = *job.x_min;
  if (job.x_max) j["xmax"] = *job.x_max;
  if (job.p_min) j["pmin"] = *job.p_min;
  if (job.p_max) j["pmax"] = *job.p_max;
  j["nx"] = job.nx;
  j["np"] = job.np;
  j["method"] = method_name(job.config.method);
  j["tol"] = job.config.bessel_rel_tol;
  j["scaling"] = scaling_name(job.config.scaling);
  j["quad_points"] = job.config.quad_points;
  if (job.config.quad_window) j["quad_window"] = *job.config.quad_window;
  j["max_boundary"] = job.max_boundary;
  j["out"] = job.outputs;
  return j;
}

JobSpec job_from_json(const json& j) {
  if (!j.is_object()) throw DomainError("job: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw DomainError("config: unknown key '" + key + "'");
  }
  JobSpec job;
  if (!j.contains("N")) throw DomainError("--N is required");
  job.n_bound = get<int>(j, "N");
  if (j.contains("hbar")) job.hbar = get<double>(j, "hbar");
  if (j.contains("omega")) job.omega = get<double>(j, "omega");
  if (j.contains("mass")) job.mass = get<double>(j, "mass");

  auto flag = [&](const char* key) {
    return j.contains(key) && get<bool>(j, key);
  };
  const int recipes = (j.contains("eigen") ? 1 : 0) + (flag("docs") ? 1 : 0) +
                      (flag("dpacs") ? 1 : 0);
  if (recipes != 1) {
    throw DomainError("exactly one of --eigen, --docs, --dpacs is required");
  }
  if (j.contains("eigen")) {
    job.state.kind = RecipeKind::eigen;
    job.state.level = get<int>(j, "eigen");
    if (j.contains("zeta") || j.contains("nbar") || j.contains("m")) {
      throw DomainError("--eigen takes no --zeta, --nbar or --m");
    }
  } else if (flag("docs")) {
    job.state.kind = RecipeKind::docs;
    if (j.contains("m")) throw DomainError("--m applies to --dpacs only");
  } else {
    job.state.kind = RecipeKind::dpacs;
    if (!j.contains("m")) throw DomainError("--dpacs needs --m");
    job.state.level = get<int>(j, "m");
  }
  if (j.contains("zeta") && j.contains("nbar")) {
    throw DomainError("give either --zeta or --nbar, not both");
  }
  if (j.contains("zeta")) job.state.zeta = parse_zeta(j.at("zeta"));
  if (j.contains("nbar")) job.state.nbar = get<double>(j, "nbar");
  if (j.contains("phase")) {
    if (!job.state.nbar) throw DomainError("--phase needs --nbar");
    job.state.phase = get<double>(j, "phase");
  }

  if (j.contains("time")) {
    const json& t = j.at("time");
    if (t.is_number()) {
      job.time = num(t.get<double>());
    } else {
      job.time = get<std::string>(j, "time");
    }
    parse_time(*job.time, 1.0);  // syntax check only
  }
  if (j.contains("xmin")) job.x_min = get<double>(j, "xmin");
  if (j.contains("xmax")) job.x_max = get<double>(j, "xmax");
  if (j.contains("pmin")) job.p_min = get<double>(j, "pmin");
  if (j.contains("pmax")) job.p_max = get<double>(j, "pmax");
  if (j.contains("nx")) job.nx = get<int>(j, "nx");
  if (j.contains("np")) job.np = get<int>(j, "np");
  if (job.nx < 2 || job.np < 2) throw DomainError("--nx and --np must be >= 2");

  if (j.contains("method")) {
    const auto m = get<std::string>(j, "method");
    if (m == "closed") {
      job.config.method = WignerMethod::closed_form;
    } else if (m == "quad") {
      job.config.method = WignerMethod::quadrature;
    } else {
      throw DomainError("--method must be closed or quad, got " + m);
    }
  }
  if (j.contains("tol")) job.config.bessel_rel_tol = get<double>(j, "tol");
  if (j.contains("scaling")) {
    const auto s = get<std::string>(j, "scaling");
    if (s == "log") {
      job.config.scaling = BesselScaling::log_scaled;
    } else if (s == "direct") {
      job.config.scaling = BesselScaling::direct;
    } else {
      throw DomainError("--scaling must be log or direct, got " + s);
    }
  }
  if (j.contains("quad_points")) job.config.quad_points = get<int>(j, "quad_points");
  if (j.contains("quad_window")) job.config.quad_window = get<double>(j, "quad_window");
  job.config.validate();
  if (j.contains("max_boundary")) job.max_boundary = get<double>(j, "max_boundary");
  if (!(job.max_boundary > 0.0)) throw DomainError("--max-boundary must be > 0");
  if (j.contains("out")) {
    const json& o = j.at("out");
    if (o.is_string()) {
      job.outputs.push_back(o.get<std::string>());
    } else {
      job.outputs = get<std::vector<std::string>>(j, "out");
    }
  }
  return job;
}

double parse_time(const std::string& text, double tau) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '*') s += c;
  }
  static const std::regex real(R"([-+]?(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?)");
  static const std::regex frac(R"(([-+]?\d*)(/(\d+))?tau(/(\d+))?)");
  std::smatch mt;
  if (std::regex_match(s, real)) return std::stod(s);
  if (std::regex_match(s, mt, frac) && !(mt[2].matched && mt[4].matched)) {
    const std::string ps = mt[1].str();
    const long p = (ps.empty() || ps == "+") ? 1 : ps == "-" ? -1 : std::stol(ps);
    long q = 1;
    if (mt[2].matched) q = std::stol(mt[3].str());
    if (mt[4].matched) q = std::stol(mt[5].str());
    if (q < 1 || q > 64) {
      throw DomainError("--time: denominator must lie in 1..64, got '" + text + "'");
    }
    return tau * static_cast<double>(p) / static_cast<double>(q);
  }
  throw DomainError("--time: expected a real or 'p/q tau', got '" + text + "'");
}

std::string output_format(const std::string& path) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    throw DomainError("--out: no extension on " + path);
  }
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (ext != "csv" && ext != "json" && ext != "ppm" && ext != "svg") {
    throw DomainError("--out: unknown format '" + ext + "' for " + path);
  }
  return ext;
}

BoundState build_state(const JobSpec& job) {
  const MorseSystem sys =
      make_system(job.n_bound, job.hbar, job.omega, job.mass);
  Complex zeta = 0.0;
  if (job.state.zeta) zeta = *job.state.zeta;
  if (job.state.nbar) zeta = solve_zeta_for_mean(sys, *job.state.nbar, job.state.phase);
  BoundState s = [&] {
    switch (job.state.kind) {
      case RecipeKind::eigen:
        return eigenstate(sys, job.state.level);
      case RecipeKind::docs:
        return docs(sys, zeta);
      case RecipeKind::dpacs:
        break;
    }
    return dpacs(sys, zeta, job.state.level);
  }();
  if (job.time) s = evolve(s, parse_time(*job.time, revival_period(sys)));
  return s;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Wigner functions of Morse oscillator states", "morsewig"};
  app.require_subcommand(1);
  Raw raw;
  double check_tol = 1e-10;
  CLI::App* state = app.add_subcommand("state", "build a state and print P(n)");
  CLI::App* wigner = app.add_subcommand("wigner", "compute a Wigner grid");
  CLI::App* evolve_cmd = app.add_subcommand("evolve", "evolve a state to --time");
  CLI::App* check = app.add_subcommand("check", "run the acceptance suite");
  for (CLI::App* sub : {state, wigner, evolve_cmd}) add_job_options(*sub, raw);
  check->add_option("--tol", check_tol, "Bessel relative tolerance");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (check->parsed()) return cmd_check(check_tol, out);
    const JobSpec job = job_from_json(merge(raw));
    if (state->parsed()) return cmd_state(job, out);
    if (evolve_cmd->parsed()) return cmd_evolve(job, out);
    return cmd_wigner(job, out, err);
  } catch (const CoverageError& e) {
    err << "coverage: " << e.what() << "\n";
    return 3;
  } catch (const AccuracyError& e) {
    err << "accuracy: " << e.what() << "\n";
    return 2;
  } catch (const ConsistencyError& e) {
    err << "consistency: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace morsewig::cli
