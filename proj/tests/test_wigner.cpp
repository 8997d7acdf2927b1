#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "morsewig/error.hpp"
#include "morsewig/specfun.hpp"
#include "morsewig/wigner.hpp"

using namespace morsewig;

namespace {

const MorseSystem& sys10() {
  static const MorseSystem s = make_system(10);
  return s;
}

WignerConfig quad() {
  WignerConfig c;
  c.method = WignerMethod::quadrature;
  return c;
}

double ground_form(double x, double p) {
  const auto& s = sys10();
  const double xi = morse_variable(s, x);
  const double sigma = -2.0 * p / (s.hbar() * s.beta());
  return 2.0 / (std::numbers::pi * s.hbar()) *
         std::exp(20.0 * std::log(xi) - specfun::log_gamma(20.0)) *
         specfun::bessel_k(Complex(0.0, sigma), xi, 1e-12).real();
}

BoundState docs25() {
  return docs(sys10(), solve_zeta_for_mean(sys10(), 0.25));
}

}  // namespace

TEST_CASE("config and grid validation") {
  WignerConfig c;
  c.bessel_rel_tol = 0.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c.bessel_rel_tol = 1e-2;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = WignerConfig{};
  c.quad_points = 10;
  CHECK_THROWS_AS(c.validate(), DomainError);
  c = WignerConfig{};
  c.quad_window = -1.0;
  CHECK_THROWS_AS(c.validate(), DomainError);
  CHECK_NOTHROW(WignerConfig{}.validate());

  GridSpec g{0.0, 1.0, 1, 0.0, 1.0, 5};
  CHECK_THROWS_AS(g.validate(), DomainError);
  g = GridSpec{1.0, 0.0, 5, 0.0, 1.0, 5};
  CHECK_THROWS_AS(g.validate(), DomainError);
  CHECK_THROWS_AS(wigner_point(eigenstate(sys10(), 0), NAN, 0.0), DomainError);
}

TEST_CASE("eigenstate closed form at (1, 0.5)") {
  // 50-digit values of the dedicated eigenstate formula.
  const double ref[4] = {0.13832543397349383, 0.066637443513006879,
                         -0.094798496754013412, 0.07789599154816503};
  for (int m = 0; m < 4; ++m) {
    CAPTURE(m);
    const double w = wigner_point_closed(eigenstate(sys10(), m), 1.0, 0.5);
    CHECK(std::abs(w - ref[m]) < 1e-10 * std::abs(ref[m]));
  }
  CHECK(std::abs(wigner_point_closed(eigenstate(sys10(), 0), 1.0, 0.5) - ground_form(1.0, 0.5)) <
        1e-10 * ref[0]);
}

TEST_CASE("ground state on the p = 0 axis is positive") {
  for (double x = -5.0; x <= 14.0; x += 0.5) {
    const double w = wigner_point_closed(docs(sys10(), 0.0), x, 0.0);
    CAPTURE(x);
    CHECK(w > 0.0);
    CHECK(std::abs(w - ground_form(x, 0.0)) <= 1e-10 * w);
    CHECK(std::abs(wigner_point_quadrature(eigenstate(sys10(), 0), x, 0.0) - w) <= 1e-8 * w);
  }
}

TEST_CASE("ground state dips slightly below zero off axis") {
  // Both methods agree on a small negative value near (2.04, +-2.45); the
  // 50-digit value of the ground-state formula there is -2.2362910333e-8.
  const BoundState g = eigenstate(sys10(), 0);
  for (double p : {2.45, -2.45}) {
    const double c = wigner_point_closed(g, 2.04, p);
    const double q = wigner_point_quadrature(g, 2.04, p);
    CHECK(std::abs(c + 2.2362910333135228e-8) < 1e-13);
    CHECK(std::abs(q + 2.2362910333135228e-8) < 1e-13);
  }
}

TEST_CASE("closed form matches quadrature") {
  const BoundState d = docs25();
  CHECK(std::abs(wigner_point_closed(d, 0.5, 0.3) - wigner_point_quadrature(d, 0.5, 0.3)) < 1e-6);

  // Complex zeta checks the sign of the imaginary Bessel order: the wrong
  // sign would reflect p. Reference values from a 30-digit quadrature.
  const BoundState z = docs(sys10(), Complex(0.08, 0.05));
  const double pts[3][3] = {{0.7, -0.4, 0.17442130185277609},
                            {-0.5, 0.9, 0.050707320474071327},
                            {3.0, 0.2, 0.030989774040094074}};
  for (const auto& p : pts) {
    CAPTURE(p[0]);
    CAPTURE(p[1]);
    CHECK(std::abs(wigner_point_closed(z, p[0], p[1]) - p[2]) < 1e-12);
    CHECK(std::abs(wigner_point_quadrature(z, p[0], p[1]) - p[2]) < 1e-12);
    CHECK(std::abs(wigner_point_closed(z, p[0], -p[1]) - p[2]) > 1e-4);
  }

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-2.0, 8.0), up(-3.0, 3.0);
  const BoundState mix = dpacs(sys10(), Complex(0.1, -0.07), 2);
  for (int k = 0; k < 30; ++k) {
    const double x = ux(rng), p = up(rng);
    CHECK(std::abs(wigner_point_closed(mix, x, p) - wigner_point_quadrature(mix, x, p)) < 1e-11);
  }
}

TEST_CASE("closed_sum imaginary residual is small") {
  const BoundState mix = dpacs(sys10(), Complex(0.1, -0.07), 2);
  for (double x : {-1.0, 1.0, 4.0}) {
    const Complex s = wigner_closed_sum(mix, x, 0.7);
    CHECK(std::abs(s.imag()) < 1e-13 * (1.0 + std::abs(s.real())));
  }
}

TEST_CASE("momentum reflection for real coefficients") {
  const BoundState d = dpacs(sys10(), 0.15, 1);
  for (double x : {-1.5, 0.4, 2.2, 6.0}) {
    for (double p : {0.3, 1.1, 2.7}) {
      CHECK(std::abs(wigner_point_closed(d, x, p) - wigner_point_closed(d, x, -p)) < 1e-10);
      CHECK(std::abs(wigner_point_quadrature(d, x, p) - wigner_point_quadrature(d, x, -p)) < 1e-10);
    }
  }
}

TEST_CASE("quadrature node doubling") {
  const BoundState d = docs25();
  WignerConfig a = quad(), b = quad();
  b.quad_points = 2 * a.quad_points;
  for (double x : {-1.0, 0.5, 3.0}) {
    for (double p : {0.0, 0.8, -2.0}) {
      CHECK(std::abs(wigner_point(d, x, p, a) - wigner_point(d, x, p, b)) < 1e-9);
    }
  }
}

TEST_CASE("quadrature window checks") {
  const BoundState d = docs25();
  WignerConfig c = quad();
  c.quad_window = 2.0;
  CHECK_THROWS_AS(wigner_point(d, 1.0, 0.0, c), AccuracyError);
  c.quad_window = 120.0;
  CHECK(std::abs(wigner_point(d, 1.0, 0.3, c) - wigner_point_quadrature(d, 1.0, 0.3)) < 1e-10);
  try {
    wigner_grid(d, GridSpec{0.0, 1.0, 2, -1.0, 1.0, 2}, WignerConfig{quad().method, 1e-10, 2.0});
    FAIL("expected AccuracyError");
  } catch (const AccuracyError& e) {
    CHECK(std::string(e.what()).find("x =") != std::string::npos);
  }
}

TEST_CASE("log-scaled and direct Bessel products agree") {
  const BoundState d = dpacs(sys10(), 0.2, 3);
  WignerConfig direct;
  direct.scaling = BesselScaling::direct;
  for (double x : {-1.0, 0.0, 2.0, 6.0, 12.0}) {
    const double a = wigner_point_closed(d, x, 0.6);
    const double b = wigner_point_closed(d, x, 0.6, direct);
    CHECK(std::abs(a - b) <= 1e-12 * std::max(1e-3, std::abs(a)));
  }
}

TEST_CASE("grids equal point evaluations bit for bit") {
  const BoundState d = dpacs(sys10(), Complex(0.1, 0.05), 1);
  for (const WignerConfig& cfg : {WignerConfig{}, quad()}) {
    const GridSpec g{-0.5, 2.5, 2, -1.0, 1.5, 2};
    const PhaseSpaceGrid grid = wigner_grid(d, g, cfg);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        CHECK(grid.at(i, j) == wigner_point(d, g.x_at(i), g.p_at(j), cfg));
      }
    }
  }

  // Points visited in a shuffled order reproduce the grid exactly.
  const GridSpec g{-2.0, 8.0, 9, -3.0, 3.0, 7};
  const PhaseSpaceGrid grid = wigner_grid(d, g);
  std::vector<std::pair<int, int>> order;
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j < g.np; ++j) order.emplace_back(i, j);
  }
  std::shuffle(order.begin(), order.end(), std::mt19937_64(3));
  for (const auto& [i, j] : order) {
    CHECK(wigner_point(d, g.x_at(i), g.p_at(j)) == grid.at(i, j));
  }
  CHECK(wigner_grid(d, g).values == grid.values);
}

TEST_CASE("grid metadata") {
  const PhaseSpaceGrid g = wigner_grid(docs25(), GridSpec{0.0, 1.0, 3, -1.0, 1.0, 3});
  CHECK(g.meta.at("label") == "docs");
  CHECK(g.meta.at("N") == "10");
  CHECK(g.meta.count("bessel_rel_tol") == 1);
  CHECK(g.values.size() == 9);
}

TEST_CASE("ground-state grid peaks on the p = 0 row") {
  const BoundState g = docs(sys10(), 0.0);
  const GridSpec spec = auto_window(g, 61, 61);
  const PhaseSpaceGrid grid = wigner_grid(g, spec);
  const auto it = std::max_element(grid.values.begin(), grid.values.end());
  const int j = static_cast<int>((it - grid.values.begin()) % spec.np);
  CHECK(std::abs(spec.p_at(j)) < 1e-12);
}

TEST_CASE("auto window covers the support") {
  for (const BoundState& s : {eigenstate(sys10(), 0), eigenstate(sys10(), 3), docs25(),
                              dpacs(sys10(), solve_zeta_for_mean(sys10(), 0.25), 3)}) {
    const GridSpec spec = auto_window(s, 201, 201);
    const PhaseSpaceGrid grid = wigner_grid(s, spec);
    CAPTURE(s.label());
    CHECK(boundary_ratio(grid) <= 1e-12);
    CHECK_NOTHROW(check_coverage(grid));
    CHECK(std::abs(normalization(grid) - norm_sq(s)) < 1e-3);
  }
}

TEST_CASE("normalization") {
  const BoundState g = eigenstate(sys10(), 0);
  // The fixed window p in [-4, 4] cuts the distribution at about 1e-6 of
  // its peak, so it fails the default coverage test.
  const PhaseSpaceGrid fixed = wigner_grid(g, GridSpec{-6.0, 28.0, 201, -4.0, 4.0, 201});
  CHECK(boundary_ratio(fixed) > 1e-12);
  CHECK_THROWS_AS(normalization(fixed), CoverageError);
  CHECK(std::abs(normalization(fixed, 1e-5) - 1.0) < 1e-3);

  const BoundState d = docs25();
  PhaseSpaceGrid grid = wigner_grid(d, auto_window(d, 201, 201));
  const double n = normalization(grid);
  CHECK(std::abs(n - norm_sq(d)) < 1e-3);
  for (double& v : grid.values) v *= 2.0;
  CHECK(normalization(grid) == doctest::Approx(2.0 * n).epsilon(1e-14));
}

TEST_CASE("x marginals") {
  for (const BoundState& s : {eigenstate(sys10(), 2), docs25()}) {
    const PhaseSpaceGrid grid = wigner_grid(s, auto_window(s, 121, 201));
    const auto m = marginal_x(grid);
    double total = 0.0;
    for (int i = 0; i < grid.spec.nx; ++i) {
      const double x = grid.spec.x_at(i);
      CHECK(std::abs(m[i] - std::norm(position_wavefunction(s, x))) < 1e-6);
      total += (i == 0 || i == grid.spec.nx - 1 ? 0.5 : 1.0) * m[i];
    }
    CHECK(std::abs(total * grid.spec.dx() - norm_sq(s)) < 1e-3);
  }
  const PhaseSpaceGrid narrow =
      wigner_grid(docs25(), GridSpec{-2.0, 6.0, 21, -1.0, 1.0, 21});
  CHECK_THROWS_AS(marginal_x(narrow), CoverageError);
}

TEST_CASE("negativity") {
  const Complex z = solve_zeta_for_mean(sys10(), 0.25);
  const BoundState m1 = dpacs(sys10(), z, 1);
  CHECK(negativity(wigner_grid(m1, auto_window(m1, 81, 81))).min_value < 0.0);

  const BoundState quarter = evolve(docs(sys10(), z), 0.25 * revival_period(sys10()));
  const Negativity n = negativity(wigner_grid(quarter, auto_window(quarter, 81, 81)));
  CHECK(n.min_value < 0.0);
  CHECK(n.negative_volume > 0.0);

  const BoundState g = docs(sys10(), 0.0);
  const Negativity ng = negativity(wigner_grid(g, auto_window(g, 81, 81)));
  CHECK(ng.min_value < 0.0);
  CHECK(ng.min_value > -3e-8);
  CHECK(ng.negative_volume < 1e-6);
}
