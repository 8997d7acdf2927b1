#include "morsewig/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <string>

#include "morsewig/error.hpp"
#include "morsewig/morse.hpp"
#include "morsewig/specfun.hpp"
#include "morsewig/states.hpp"
#include "morsewig/wigner.hpp"

namespace morsewig {
namespace {

constexpr int kN = 10;
constexpr int kLattice = 201;

std::string fmt(const char* f, double a) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string fmt(const char* f, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

double max_abs_diff(const PhaseSpaceGrid& a, const PhaseSpaceGrid& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    m = std::max(m, std::abs(a.values[i] - b.values[i]));
  }
  return m;
}

// Eigenstate Wigner values W_{0,m}(x, p), m = 0..3, N = 10, hbar = Omega =
// mu = 1, from the dedicated eigenstate closed form summed with 50-digit
// arithmetic. In double precision that alternating sum loses up to six
// digits, so it cannot serve as a 1e-10 reference at run time.
struct EigenOracle {
  double x;
  double p;
  double w[4];
};

constexpr EigenOracle kEigenOracles[] = {
    {4.768, 0.59, {2.5656432722037845e-7, 4.7109073099990347e-5, 0.0024248539895454989, 0.038948303999788532}},
    {2.879, -0.281, {0.0017362452966944938, 0.040020291574306803, 0.15122290235086057, -0.051350189736188302}},
    {5.95, -0.213, {2.9597951516005275e-9, 1.1212533444915449e-6, 0.0001263168549690968, 0.0049818226548284542}},
    {5.62, -0.813, {4.0340180692733594e-10, 2.1267514511874473e-7, 3.311149773635461e-5, 0.0018321870908188651}},
    {1.925, 0.744, {0.012769812275830254, 0.12438424717634572, 0.065575979388909852, -0.086380162019104182}},
    {1.103, 0.579, {0.10612912881417321, 0.12681295061159111, -0.15409611167766326, 0.13603566175583648}},
    {4.507, -0.622, {7.8946618346927684e-7, 0.00011843596633611625, 0.0048738355447955262, 0.059699743319613172}},
    {-0.752, -0.583, {0.088287557574759755, 0.10676299126807522, 0.031327445553710432, -0.035972805568751631}},
    {1.125, -0.24, {0.15033139317070752, 0.018672899803229113, 0.017922700632581682, -0.092635999401331358}},
    {5.136, 0.165, {1.7544785961298126e-7, 3.4456612550456305e-5, 0.0019076171003591209, 0.033400593042912821}},
    {1.119, -0.809, {0.066478056990640668, 0.17467424585662298, -0.1445603047939772, 0.083066980286868656}},
    {0.05, -0.564, {0.22333406956830267, -0.039090938151204, -0.073473400074005424, 0.027347447246915117}},
    {1.435, 0.476, {0.0692361071337431, 0.16707688627926902, -0.16036092884106753, 0.17361356335441385}},
    {2.827, 0.3, {0.0020192029440817374, 0.044101105843968632, 0.15256729294855235, -0.063358568461511526}},
    {3.91, -0.153, {4.1003252753193938e-5, 0.0027291748565690155, 0.043673061436126445, 0.14668045723890223}},
    {4.745, -0.297, {8.4537646888823175e-7, 0.000125461437654712, 0.0050886459192157973, 0.061173297123011233}},
    {2.957, 0.574, {0.00072803827858036364, 0.022552580610467196, 0.13266149600141068, 0.022172904223094768}},
    {1.858, 0.565, {0.022990576963123027, 0.15659372548904861, -0.027603393679006633, 0.04239003595205046}},
    {0.086, -0.209, {0.29676752639253274, -0.19220093125311265, -0.013045269908698781, 0.11713244912504413}},
    {5.049, 0.308, {1.966624397901354e-7, 3.7876026599594355e-5, 0.0020517890470549643, 0.035002472906225337}},
};

double ground_reference(const MorseSystem& sys, double x, double p, double tol) {
  const int big_n = sys.n_bound();
  const double xi = morse_variable(sys, x);
  const double sigma = -2.0 * p / (sys.hbar() * sys.beta());
  const Complex k = specfun::bessel_k(Complex(0.0, sigma), xi, tol);
  return 2.0 / (std::numbers::pi * sys.hbar()) *
         std::exp(2.0 * big_n * std::log(xi) - specfun::log_gamma(2.0 * big_n)) *
         k.real();
}

class Suite {
 public:
  explicit Suite(const AcceptanceOptions& opts)
      : sys_(make_system(kN)), opts_(opts) {
    cfg_.bessel_rel_tol = opts.bessel_rel_tol;
    zeta_ = solve_zeta_for_mean(sys_, 0.25);
  }

  std::vector<CriterionResult> run() {
    std::vector<CriterionResult> out;
    const std::vector<std::pair<std::string, std::function<CriterionResult()>>> checks = {
        {"oracle equivalence", [&] { return oracle(); }},
        {"realness", [&] { return realness(); }},
        {"normalization", [&] { return normalization_check(); }},
        {"marginals", [&] { return marginals(); }},
        {"specialization chain", [&] { return specialization(); }},
        {"revival", [&] { return revival(); }},
        {"time mirror", [&] { return mirror(); }},
        {"negativity onset", [&] { return negativity_check(); }},
        {"occupation support", [&] { return occupation_support(); }},
        {"harmonic contraction", [&] { return contraction(); }},
        {"special functions", [&] { return special_functions(); }},
        {"basis integrity", [&] { return basis(); }},
    };
    // Realness scans the grids the other criteria evaluate, so it runs last.
    std::vector<int> order;
    for (int id = 1; id <= static_cast<int>(checks.size()); ++id) {
      if (id != 2) order.push_back(id);
    }
    order.push_back(2);
    for (int id : order) {
      const auto& [name, fn] = checks[static_cast<std::size_t>(id - 1)];
      CriterionResult r{id, name, false, ""};
      try {
        r = fn();
        r.id = id;
        r.name = name;
      } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("error: ") + e.what();
      }
      out.push_back(r);
    }
    std::sort(out.begin(), out.end(),
              [](const CriterionResult& a, const CriterionResult& b) { return a.id < b.id; });
    return out;
  }

 private:
  BoundState docs25() const { return docs(sys_, zeta_); }

  // Closed-form grids, cached by key and remembered for the realness scan.
  const PhaseSpaceGrid& grid(const std::string& key, const BoundState& s,
                             const GridSpec& spec) {
    auto it = grids_.find(key);
    if (it == grids_.end()) {
      it = grids_.emplace(key, wigner_grid(s, spec, cfg_)).first;
      evaluated_.emplace_back(s, spec);
    }
    return it->second;
  }

  const GridSpec& window(const std::string& key, const BoundState& s) {
    auto it = windows_.find(key);
    if (it == windows_.end()) {
      it = windows_.emplace(key, auto_window(s, kLattice, kLattice, cfg_)).first;
    }
    return it->second;
  }

  const PhaseSpaceGrid& auto_grid(const std::string& key, const BoundState& s) {
    return grid(key, s, window(key, s));
  }

  std::vector<std::pair<std::string, BoundState>> normalization_states() const {
    return {{"eigen0", eigenstate(sys_, 0)},    {"eigen3", eigenstate(sys_, 3)},
            {"docs", docs25()},                 {"dpacs1", dpacs(sys_, zeta_, 1)},
            {"dpacs2", dpacs(sys_, zeta_, 2)},  {"dpacs3", dpacs(sys_, zeta_, 3)}};
  }

  CriterionResult oracle() {
    const BoundState s = docs25();
    const GridSpec spec{-4.0, 12.0, 32, -3.0, 3.0, 32};
    const auto t0 = std::chrono::steady_clock::now();
    const PhaseSpaceGrid& closed = grid("oracle", s, spec);
    WignerConfig q = cfg_;
    q.method = WignerMethod::quadrature;
    const PhaseSpaceGrid quad = wigner_grid(s, spec, q);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double d = max_abs_diff(closed, quad);
    const bool fast = secs < 60.0;
    return {0, "", d < 1e-6 && fast,
            fmt("max |closed - quadrature| = %.3e on 32x32 (limit 1e-6)", d) +
                (fast ? ", runtime under 60 s" : ", runtime over 60 s")};
  }

  CriterionResult realness() {
    // Every closed-form evaluation already enforces the bound; this scans a
    // sub-lattice of each acceptance grid and reports the worst ratio.
    double worst = 0.0;
    std::size_t count = 0;
    for (const auto& [s, spec] : evaluated_) {
      for (int i = 0; i < spec.nx; i += std::max(1, spec.nx / 10)) {
        for (int j = 0; j < spec.np; j += std::max(1, spec.np / 10)) {
          const Complex v = wigner_closed_sum(s, spec.x_at(i), spec.p_at(j), cfg_);
          worst = std::max(worst, std::abs(v.imag()) / (1.0 + std::abs(v.real())));
          ++count;
        }
      }
    }
    return {0, "", count > 0 && worst < 1e-10,
            fmt("max |Im|/(1+|Re|) = %.3e over %g sampled points of all grids (limit 1e-10)",
                worst, static_cast<double>(count))};
  }

  CriterionResult normalization_check() {
    double worst = 0.0;
    std::string where;
    for (const auto& [key, s] : normalization_states()) {
      const double n = normalization(auto_grid(key, s));
      const double d = std::abs(n - norm_sq(s));
      if (d >= worst) {
        worst = d;
        where = key;
      }
    }
    return {0, "", worst < 1e-3,
            fmt("max |integral W - norm^2| = %.3e (limit 1e-3)", worst) +
                ", worst state " + where};
  }

  CriterionResult marginals() {
    const BoundState s = docs25();
    const PhaseSpaceGrid& g = auto_grid("docs", s);
    const std::vector<double> m = marginal_x(g);
    double worst = 0.0;
    for (int i = 1; i + 1 < g.spec.nx; ++i) {
      const double ref = std::norm(position_wavefunction(s, g.spec.x_at(i)));
      worst = std::max(worst, std::abs(m[static_cast<std::size_t>(i)] - ref));
    }
    return {0, "", worst < 1e-6,
            fmt("max |marginal - |Psi|^2| = %.3e over interior columns (limit 1e-6)", worst)};
  }

  CriterionResult specialization() {
    const double ref_tol = std::min(opts_.bessel_rel_tol, 1e-11);
    double worst = 0.0;
    double worst_ground = 0.0;
    for (const EigenOracle& o : kEigenOracles) {
      const double x = o.x;
      const double p = o.p;
      for (int m = 0; m <= 3; ++m) {
        const double w = wigner_point_closed(dpacs(sys_, 0.0, m), x, p, cfg_);
        const double ref = o.w[m];
        worst = std::max(worst, std::abs(w - ref) / std::abs(ref));
        if (m == 0) {
          const double g = ground_reference(sys_, x, p, ref_tol);
          worst_ground = std::max(worst_ground, std::abs(w - g) / std::abs(g));
        }
      }
    }
    return {0, "", worst < 1e-10 && worst_ground < 1e-10,
            fmt("max relative deviation %.3e (eigenstates m=0..3), %.3e (ground form); "
                "20 points, limit 1e-10",
                worst, worst_ground)};
  }

  CriterionResult revival() {
    const BoundState s = docs25();
    const double tau = revival_period(sys_);
    const BoundState back = evolve(s, tau);
    const double f = fidelity(s, back);
    const GridSpec& spec = window("docs", s);
    const PhaseSpaceGrid& g0 = grid("docs", s, spec);
    const PhaseSpaceGrid& g1 = grid("docs@tau", back, spec);
    const double d = max_abs_diff(g0, g1);
    return {0, "", std::abs(f - 1.0) < 1e-12 && d < 1e-8,
            fmt("|fidelity - 1| = %.3e (limit 1e-12), max grid difference %.3e (limit 1e-8)",
                std::abs(f - 1.0), d)};
  }

  CriterionResult mirror() {
    const BoundState s = docs25();
    const double tau = revival_period(sys_);
    const GridSpec& spec = window("docs", s);
    const PhaseSpaceGrid& a = grid("docs@tau/4", evolve(s, tau / 4.0), spec);
    const PhaseSpaceGrid& b = grid("docs@3tau/4", evolve(s, 3.0 * tau / 4.0), spec);
    double d = 0.0;
    for (int i = 0; i < spec.nx; ++i) {
      for (int j = 0; j < spec.np; ++j) {
        d = std::max(d, std::abs(a.at(i, j) - b.at(i, spec.np - 1 - j)));
      }
    }
    return {0, "", d < 1e-8,
            fmt("max |W(x,p,tau/4) - W(x,-p,3tau/4)| = %.3e (limit 1e-8)", d)};
  }

  CriterionResult negativity_check() {
    bool ok = true;
    std::string detail = "min W:";
    for (int m = 1; m <= 3; ++m) {
      const std::string key = "dpacs" + std::to_string(m);
      const Negativity n = negativity(auto_grid(key, dpacs(sys_, zeta_, m)));
      ok = ok && n.min_value < 0.0;
      detail += fmt(" m=%g %.3e;", m, n.min_value);
    }
    const BoundState s = docs25();
    const GridSpec& spec = window("docs", s);
    const Negativity q = negativity(
        grid("docs@tau/4", evolve(s, revival_period(sys_) / 4.0), spec));
    ok = ok && q.min_value < 0.0;
    detail += fmt(" docs tau/4 %.3e;", q.min_value);
    const Negativity g = negativity(auto_grid("eigen0", docs(sys_, 0.0)));
    ok = ok && g.min_value >= -1e-10;
    detail += fmt(" zeta=0 %.3e at (x, p) = (%.3f,", g.min_value, g.min_x) +
              fmt(" %.3f) (required >= -1e-10)", g.min_p);
    return {0, "", ok, detail};
  }

  CriterionResult occupation_support() {
    bool ok = true;
    for (int m = 1; m < kN; ++m) {
      const std::vector<double> p = occupation(dpacs(sys_, zeta_, m));
      for (int n = 0; n < m; ++n) ok = ok && p[static_cast<std::size_t>(n)] == 0.0;
    }
    return {0, "", ok, "P(n) == 0 exactly for n < m, m = 1..9"};
  }

  CriterionResult contraction() {
    const MorseSystem big = make_system(150);
    const BoundState s = docs(big, solve_zeta_for_mean(big, 4.0));
    const std::vector<double> p = occupation(s);
    const double total = norm_sq(s);
    double tv = 0.0;
    double poisson_mass = 0.0;
    for (std::size_t n = 0; n < p.size(); ++n) {
      const double q = std::exp(n * std::log(4.0) - 4.0 -
                                specfun::log_factorial(static_cast<int>(n)));
      poisson_mass += q;
      tv += std::abs(p[n] / total - q);
    }
    tv = 0.5 * (tv + std::max(0.0, 1.0 - poisson_mass));
    return {0, "", tv < 0.01,
            fmt("total variation to Poisson(4) at N=150: %.3e (limit 0.01)", tv)};
  }

  CriterionResult special_functions() {
    const double tol = opts_.bessel_rel_tol;
    double half = 0.0;
    for (int k = 0; k < 40; ++k) {
      const double x = 0.1 * std::pow(300.0, k / 39.0);
      const double k12 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x);
      const double exact[3] = {k12, k12 * (1.0 + 1.0 / x),
                               k12 * (1.0 + 3.0 / x + 3.0 / (x * x))};
      for (int o = 0; o < 3; ++o) {
        const Complex v = specfun::bessel_k(Complex(0.5 + o, 0.0), x, tol);
        half = std::max(half, std::abs(v - exact[o]) / exact[o]);
      }
    }
    double rec = 0.0;
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0}) {
      for (double sigma : {0.0, 2.5, 5.0, 10.0, 15.0, 20.0}) {
        for (int j = 0; j <= 10; ++j) {
          const Complex nu(j, sigma);
          const Complex km = specfun::bessel_k_scaled(nu - 1.0, x, tol);
          const Complex k0 = specfun::bessel_k_scaled(nu, x, tol);
          const Complex kp = specfun::bessel_k_scaled(nu + 1.0, x, tol);
          rec = std::max(rec, std::abs(kp - km - (2.0 * nu / x) * k0) / std::abs(kp));
        }
      }
    }
    double lag = 0.0;
    for (int n = 0; n <= 10; ++n) {
      for (int k = 0; k <= 40; ++k) {
        const std::vector<double> a = specfun::laguerre_coeffs(n, k);
        for (int t = 0; t <= 40; ++t) {
          const double x = -50.0 + 2.5 * t;
          double series = 0.0;
          double scale = 0.0;
          for (int m = n; m >= 0; --m) {
            series = series * x + a[static_cast<std::size_t>(m)];
            scale = scale * std::abs(x) + std::abs(a[static_cast<std::size_t>(m)]);
          }
          lag = std::max(lag, std::abs(specfun::laguerre(n, k, x) - series) / scale);
        }
      }
    }
    return {0, "", half < 1e-10 && rec < 1e-9 && lag < 1e-10,
            fmt("half-integer rel err %.3e (limit 1e-10), recurrence residual %.3e (limit 1e-9)",
                half, rec) +
                fmt(", Laguerre recurrence vs series %.3e (limit 1e-10)", lag)};
  }

  CriterionResult basis() {
    const double b = sys_.beta();
    const double lo = -8.0 / b;
    const double hi = 30.0 / b;
    const int nodes = 20000;
    const double h = (hi - lo) / (nodes - 1);
    std::vector<std::vector<double>> psi(kN, std::vector<double>(nodes));
    for (int i = 0; i < nodes; ++i) {
      const double x = lo + h * i;
      for (int n = 0; n < kN; ++n) psi[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] = wavefunction(sys_, n, x);
    }
    double worst = 0.0;
    for (int n = 0; n < kN; ++n) {
      for (int m = n; m < kN; ++m) {
        double s = 0.0;
        for (int i = 0; i < nodes; ++i) {
          const double w = (i == 0 || i == nodes - 1) ? 0.5 : 1.0;
          s += w * psi[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] *
               psi[static_cast<std::size_t>(m)][static_cast<std::size_t>(i)];
        }
        worst = std::max(worst, std::abs(s * h - (n == m ? 1.0 : 0.0)));
      }
    }
    return {0, "", worst < 1e-8,
            fmt("max |G - I| = %.3e with 20000 trapezoid nodes (limit 1e-8)", worst)};
  }

  MorseSystem sys_;
  AcceptanceOptions opts_;
  WignerConfig cfg_;
  Complex zeta_;
  std::map<std::string, PhaseSpaceGrid> grids_;
  std::map<std::string, GridSpec> windows_;
  std::vector<std::pair<BoundState, GridSpec>> evaluated_;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  Suite suite(opts);
  std::vector<CriterionResult> r = suite.run();
  return r;
}

std::string format_result(const CriterionResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "%s %2d ", r.pass ? "PASS" : "FAIL", r.id);
  return std::string(head) + r.name + ": " + r.detail;
}

}  // namespace morsewig
