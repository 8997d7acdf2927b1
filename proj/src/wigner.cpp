#include "morsewig/wigner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <sstream>
#include <thread>

#include "kernels.hpp"
#include "morsewig/error.hpp"

namespace morsewig {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool finite(double v) { return std::isfinite(v); }

// Re-raise a point failure with the lattice coordinate attached.
[[noreturn]] void rethrow_at(double x, double p) {
  std::ostringstream at;
  at << "at (x, p) = (" << num(x) << ", " << num(p) << "): ";
  try {
    throw;
  } catch (const AccuracyError& e) {
    throw AccuracyError(at.str() + e.what(), e.achieved());
  } catch (const CoverageError& e) {
    throw CoverageError(at.str() + e.what());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(at.str() + e.what());
  } catch (const DomainError& e) {
    throw DomainError(at.str() + e.what());
  }
}

class Evaluator {
 public:
  Evaluator(const BoundState& state, const WignerConfig& cfg)
      : method_(cfg.method) {
    cfg.validate();
    if (method_ == WignerMethod::closed_form) {
      closed_.emplace(state, cfg);
    } else {
      quad_.emplace(state, cfg);
    }
  }

  // W(x, p_j) for the requested momenta, in order.
  void column(double x, const std::vector<double>& ps, double* out) const {
    std::size_t j = 0;
    try {
      if (closed_) {
        auto col = closed_->column(x);
        for (; j < ps.size(); ++j) out[j] = closed_->eval(col, ps[j]);
      } else {
        auto col = quad_->column(x);
        for (; j < ps.size(); ++j) out[j] = quad_->eval(col, ps[j]);
      }
    } catch (const Error&) {
      rethrow_at(x, j < ps.size() ? ps[j] : 0.0);
    }
  }

 private:
  WignerMethod method_;
  std::optional<detail::ClosedKernel> closed_;
  std::optional<detail::QuadKernel> quad_;
};

double point(const BoundState& state, double x, double p,
             const WignerConfig& cfg) {
  if (!finite(x) || !finite(p)) {
    throw DomainError("wigner: x and p must be finite");
  }
  const Evaluator ev(state, cfg);
  double w = 0.0;
  ev.column(x, {p}, &w);
  return w;
}

// Fills values[i * np + j] for the listed columns; columns are independent,
// so the schedule cannot change any value.
void fill_columns(const Evaluator& ev, const std::vector<double>& xs,
                  const std::vector<double>& ps, std::vector<double>& values) {
  const std::size_t nx = xs.size();
  std::vector<std::exception_ptr> errors(nx);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < nx;) {
      try {
        ev.column(xs[i], ps, values.data() + i * ps.size());
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, nx);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

const char* method_name(WignerMethod m) {
  return m == WignerMethod::closed_form ? "closed_form" : "quadrature";
}

}  // namespace

void WignerConfig::validate() const {
  if (!(bessel_rel_tol > 1e-15 && bessel_rel_tol <= 1e-3)) {
    throw DomainError("WignerConfig: bessel_rel_tol must lie in (1e-15, 1e-3]");
  }
  if (quad_points < 64) {
    throw DomainError("WignerConfig: quad_points must be >= 64");
  }
  if (quad_points > (1 << 24)) {
    throw DomainError("WignerConfig: quad_points above 2^24");
  }
  if (quad_window && !(*quad_window > 0.0 && finite(*quad_window))) {
    throw DomainError("WignerConfig: quad_window must be positive");
  }
}

void GridSpec::validate() const {
  if (nx < 2 || np < 2) throw DomainError("grid: nx and np must be >= 2");
  if (!finite(x_min) || !finite(x_max) || !(x_max > x_min)) {
    throw DomainError("grid: need finite x_min < x_max");
  }
  if (!finite(p_min) || !finite(p_max) || !(p_max > p_min)) {
    throw DomainError("grid: need finite p_min < p_max");
  }
}

double GridSpec::x_at(int i) const {
  return i == nx - 1 ? x_max : x_min + (x_max - x_min) * i / (nx - 1);
}

double GridSpec::p_at(int j) const {
  return j == np - 1 ? p_max : p_min + (p_max - p_min) * j / (np - 1);
}

double wigner_point_closed(const BoundState& state, double x, double p,
                           const WignerConfig& cfg) {
  WignerConfig c = cfg;
  c.method = WignerMethod::closed_form;
  return point(state, x, p, c);
}

Complex wigner_closed_sum(const BoundState& state, double x, double p,
                          const WignerConfig& cfg) {
  if (!finite(x) || !finite(p)) {
    throw DomainError("wigner: x and p must be finite");
  }
  cfg.validate();
  const detail::ClosedKernel kernel(state, cfg);
  auto col = kernel.column(x);
  return kernel.sum(col, p);
}

double wigner_point_quadrature(const BoundState& state, double x, double p,
                               const WignerConfig& cfg) {
  WignerConfig c = cfg;
  c.method = WignerMethod::quadrature;
  return point(state, x, p, c);
}

double wigner_point(const BoundState& state, double x, double p,
                    const WignerConfig& cfg) {
  return point(state, x, p, cfg);
}

PhaseSpaceGrid wigner_grid(const BoundState& state, const GridSpec& spec,
                           const WignerConfig& cfg) {
  spec.validate();
  const Evaluator ev(state, cfg);
  std::vector<double> xs(static_cast<std::size_t>(spec.nx));
  std::vector<double> ps(static_cast<std::size_t>(spec.np));
  for (int i = 0; i < spec.nx; ++i) xs[static_cast<std::size_t>(i)] = spec.x_at(i);
  for (int j = 0; j < spec.np; ++j) ps[static_cast<std::size_t>(j)] = spec.p_at(j);

  PhaseSpaceGrid grid;
  grid.spec = spec;
  grid.values.assign(xs.size() * ps.size(), 0.0);
  fill_columns(ev, xs, ps, grid.values);

  const MorseSystem& sys = state.system();
  grid.meta["label"] = state.label();
  grid.meta["method"] = method_name(cfg.method);
  grid.meta["N"] = std::to_string(sys.n_bound());
  grid.meta["hbar"] = num(sys.hbar());
  grid.meta["omega"] = num(sys.omega());
  grid.meta["mass"] = num(sys.mass());
  grid.meta["norm_sq"] = num(norm_sq(state));
  if (cfg.method == WignerMethod::closed_form) {
    grid.meta["bessel_rel_tol"] = num(cfg.bessel_rel_tol);
    grid.meta["scaling"] =
        cfg.scaling == BesselScaling::log_scaled ? "log_scaled" : "direct";
  } else {
    grid.meta["quad_points"] = std::to_string(cfg.quad_points);
    grid.meta["quad_window"] = cfg.quad_window ? num(*cfg.quad_window) : "auto";
  }
  return grid;
}

GridSpec auto_window(const BoundState& state, int nx, int np,
                     const WignerConfig& cfg) {
  const MorseSystem& sys = state.system();
  const double two_n = 2.0 * sys.n_bound();
  const double hb = sys.hbar() * sys.beta();

  // Large-xi root of 2N ln xi - xi = ln 1e-14.
  const double target = std::log(1e-14);
  double lo = two_n;
  double hi = 2.0 * two_n + 64.0;
  while (two_n * std::log(hi) - hi > target) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (two_n * std::log(mid) - mid > target ? lo : hi) = mid;
  }
  const double xi_left = hi;

  GridSpec g;
  g.nx = nx;
  g.np = np;
  g.x_min = -std::log(xi_left / (two_n + 1.0)) / sys.beta();
  g.x_max = detail::envelope_support(state, 1e-14).second;
  double p_half = 4.0 * std::sqrt(two_n * sys.chi()) * hb + hb;
  g.validate();

  const Evaluator ev(state, cfg);
  constexpr int kSamples = 41;
  constexpr int kMaxRounds = 40;
  for (int round = 0; round < kMaxRounds; ++round) {
    g.p_min = -p_half;
    g.p_max = p_half;
    // Edge columns and rows in full, plus a sub-lattice for the peak; every
    // sample is a lattice point so the final grid's peak is at least this.
    auto pick = [](int count) {
      std::vector<int> ids;
      for (int k = 0; k < kSamples; ++k) {
        ids.push_back(static_cast<int>(std::lround(
            static_cast<double>(k) * (count - 1) / (kSamples - 1))));
      }
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      return ids;
    };
    std::vector<double> xs, all_p, sub_p;
    for (int i : pick(nx)) xs.push_back(g.x_at(i));
    for (int j = 0; j < np; ++j) all_p.push_back(g.p_at(j));
    for (int j : pick(np)) sub_p.push_back(g.p_at(j));

    std::vector<double> sub(xs.size() * sub_p.size());
    fill_columns(ev, xs, sub_p, sub);
    std::vector<double> edge_cols(2 * all_p.size());
    fill_columns(ev, {g.x_min, g.x_max}, all_p, edge_cols);
    std::vector<double> all_x;
    for (int i = 0; i < nx; ++i) all_x.push_back(g.x_at(i));
    std::vector<double> edge_rows(all_x.size() * 2);
    fill_columns(ev, all_x, {g.p_min, g.p_max}, edge_rows);

    double peak = 0.0;
    for (double v : sub) peak = std::max(peak, std::abs(v));
    for (double v : edge_cols) peak = std::max(peak, std::abs(v));
    for (double v : edge_rows) peak = std::max(peak, std::abs(v));
    if (!(peak > 0.0)) throw CoverageError("auto_window: Wigner function vanishes");
    const double limit = 1e-12 * peak;
    auto max_abs = [](const double* v, std::size_t n, std::size_t stride) {
      double m = 0.0;
      for (std::size_t k = 0; k < n; ++k) m = std::max(m, std::abs(v[k * stride]));
      return m;
    };
    const bool left = max_abs(edge_cols.data(), all_p.size(), 1) >= limit;
    const bool right =
        max_abs(edge_cols.data() + all_p.size(), all_p.size(), 1) >= limit;
    const bool mom = max_abs(edge_rows.data(), all_x.size(), 2) >= limit ||
                     max_abs(edge_rows.data() + 1, all_x.size(), 2) >= limit;
    if (!left && !right && !mom) return g;
    const double width = g.x_max - g.x_min;
    if (left) g.x_min -= 0.1 * width;
    if (right) g.x_max += 0.1 * width;
    if (mom) p_half *= 1.25;
  }
  throw CoverageError("auto_window: boundary mass did not fall below 1e-12");
}

double boundary_ratio(const PhaseSpaceGrid& grid) {
  const GridSpec& s = grid.spec;
  double peak = 0.0;
  for (double v : grid.values) peak = std::max(peak, std::abs(v));
  double edge = 0.0;
  for (int i = 0; i < s.nx; ++i) {
    edge = std::max({edge, std::abs(grid.at(i, 0)), std::abs(grid.at(i, s.np - 1))});
  }
  for (int j = 0; j < s.np; ++j) {
    edge = std::max({edge, std::abs(grid.at(0, j)), std::abs(grid.at(s.nx - 1, j))});
  }
  if (!(peak > 0.0)) return INFINITY;
  return edge / peak;
}

void check_coverage(const PhaseSpaceGrid& grid, double max_ratio) {
  const double r = boundary_ratio(grid);
  if (!(r < max_ratio)) {
    std::ostringstream msg;
    msg << "grid does not cover the state: boundary |W| is " << r
        << " of the peak (limit " << max_ratio << ")";
    throw CoverageError(msg.str());
  }
}

double normalization(const PhaseSpaceGrid& grid, double max_ratio) {
  check_coverage(grid, max_ratio);
  const GridSpec& s = grid.spec;
  double total = 0.0;
  for (int i = 0; i < s.nx; ++i) {
    const double wi = (i == 0 || i == s.nx - 1) ? 0.5 : 1.0;
    double col = 0.0;
    for (int j = 0; j < s.np; ++j) {
      const double wj = (j == 0 || j == s.np - 1) ? 0.5 : 1.0;
      col += wj * grid.at(i, j);
    }
    total += wi * col;
  }
  return total * s.dx() * s.dp();
}

std::vector<double> marginal_x(const PhaseSpaceGrid& grid, double max_ratio) {
  check_coverage(grid, max_ratio);
  const GridSpec& s = grid.spec;
  std::vector<double> out(static_cast<std::size_t>(s.nx));
  for (int i = 0; i < s.nx; ++i) {
    double col = 0.0;
    for (int j = 0; j < s.np; ++j) {
      const double wj = (j == 0 || j == s.np - 1) ? 0.5 : 1.0;
      col += wj * grid.at(i, j);
    }
    out[static_cast<std::size_t>(i)] = col * s.dp();
  }
  return out;
}

Negativity negativity(const PhaseSpaceGrid& grid) {
  const GridSpec& s = grid.spec;
  Negativity n{INFINITY, 0.0, 0.0, 0.0};
  double vol = 0.0;
  for (int i = 0; i < s.nx; ++i) {
    const double wi = (i == 0 || i == s.nx - 1) ? 0.5 : 1.0;
    for (int j = 0; j < s.np; ++j) {
      const double w = grid.at(i, j);
      if (w < n.min_value) {
        n.min_value = w;
        n.min_x = s.x_at(i);
        n.min_p = s.p_at(j);
      }
      const double wj = (j == 0 || j == s.np - 1) ? 0.5 : 1.0;
      if (w < 0.0) vol -= wi * wj * w;
    }
  }
  n.negative_volume = vol * s.dx() * s.dp();
  return n;
}

}  // namespace morsewig
