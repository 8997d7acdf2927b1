#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "morsewig/error.hpp"
#include "morsewig/specfun.hpp"

using namespace morsewig;
using namespace morsewig::specfun;

namespace {

// 40-digit values of K_nu(x).
struct KOracle {
  double re_nu, im_nu, x, re, im;
};

constexpr KOracle kBessel[] = {
    {0.0, 1.0, 1.0, 0.28942803702599213, 0.0},
    {0.5, 0.0, 1.0, 0.46106850444789456, 0.0},
    {3.0, 2.0, 2.5, -0.05338888750237634, 0.15211588807705852},
    {0.0, 5.0, 0.5, -0.00042411714808406799, 0.0},
    {9.0, 0.3, 0.2, 4716492019823.4812, 19465426179388.348},
    {2.0, 20.0, 10.0, 3.0253612664391006e-14, -9.0026306270981986e-14},
    {0.0, 25.6, 0.3, -9.2704655639884766e-20, 0.0},
    {0.25, 1.0, 30.0, 2.0998720770769266e-14, 1.7220434310321542e-16},
    {40.0, 3.0, 7.0, 6.0851786028483525e+23, 9.7779723372034276e+23},
    {1.0, 0.5, 100.0, 4.673978898696162e-45, 2.3254199131738393e-47},
};

struct GammaOracle {
  double x, value;
};

constexpr GammaOracle kLogGamma[] = {
    {0.5, 0.57236494292470009},   {0.001, 6.9071788853838537},
    {1.5, -0.12078223763524522},  {2.3, 0.15418945495963047},
    {10.5, 13.940625219403764},   {100.5, 361.43554046777762},
    {170.3, 702.97738545132824},  {1000.25, 5906.9472682711172},
};

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("log_gamma small integers") {
  CHECK(log_gamma(1.0) == 0.0);
  CHECK(log_gamma(2.0) == 0.0);
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-15));
}

TEST_CASE("log_gamma against high-precision values") {
  for (const auto& o : kLogGamma) {
    CAPTURE(o.x);
    CHECK(std::abs(log_gamma(o.x) - o.value) <= 2e-15 * std::max(1.0, std::abs(o.value)));
  }
}

TEST_CASE("log_gamma rejects non-positive arguments") {
  CHECK_THROWS_AS(log_gamma(0.0), DomainError);
  CHECK_THROWS_AS(log_gamma(-1.5), DomainError);
  CHECK_THROWS_AS(log_gamma(NAN), DomainError);
}

TEST_CASE("binomial") {
  CHECK(binomial(20, 0) == 1.0);
  CHECK(binomial(20, 1) == 20.0);
  CHECK(binomial(20, 10) == 184756.0);
  CHECK(binomial(50, 25) == 126410606437752.0);
  CHECK_THROWS_AS(binomial(3, 4), DomainError);
  CHECK_THROWS_AS(binomial(3, -1), DomainError);
}

TEST_CASE("binomial matches the Pascal triangle exactly") {
  std::vector<std::vector<unsigned long long>> row(61);
  for (int a = 0; a <= 60; ++a) {
    row[a].assign(a + 1, 1);
    for (int b = 1; b < a; ++b) row[a][b] = row[a - 1][b - 1] + row[a - 1][b];
    for (int b = 0; b <= a; ++b) {
      CAPTURE(a);
      CAPTURE(b);
      CHECK(binomial(a, b) == static_cast<double>(row[a][b]));
      CHECK(std::exp(log_binomial(a, b)) ==
            doctest::Approx(static_cast<double>(row[a][b])).epsilon(1e-13));
    }
  }
}

TEST_CASE("laguerre") {
  CHECK(laguerre(0, 3.7, 1.2) == 1.0);
  CHECK(laguerre(1, 2.0, 1.0) == 2.0);
  // Term-by-term finite series sum_m (-1)^m C(n+k, n-m) x^m / m!.
  auto series = [](int n, double k, double x) {
    double s = 0.0;
    for (int m = 0; m <= n; ++m) {
      s += std::pow(-1.0, m) * std::exp(log_gamma(n + k + 1) - log_gamma(n - m + 1) -
                                        log_gamma(k + m + 1)) *
           std::pow(x, m) / std::tgamma(m + 1.0);
    }
    return s;
  };
  CHECK(laguerre(3, 4.0, 2.5) == doctest::Approx(series(3, 4.0, 2.5)).epsilon(1e-13));
  for (int n = 0; n <= 10; ++n) {
    for (int k = 0; k <= 40; k += 7) {
      for (double x : {0.1, 1.0, 7.5, 30.0}) {
        const auto a = laguerre_coeffs(n, k);
        double scale = 0.0;
        for (int m = 0; m <= n; ++m) scale += std::abs(a[m]) * std::pow(x, m);
        CHECK(std::abs(laguerre(n, k, x) - series(n, k, x)) <= 1e-12 * scale);
      }
    }
  }
  CHECK_THROWS_AS(laguerre(-1, 0.0, 1.0), DomainError);
}

TEST_CASE("laguerre_coeffs") {
  CHECK(laguerre_coeffs(0, 5) == std::vector<double>{1.0});
  CHECK(laguerre_coeffs(1, 2) == std::vector<double>{3.0, -1.0});
  const auto c = laguerre_coeffs(2, 3);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == doctest::Approx(10.0));
  CHECK(c[1] == doctest::Approx(-5.0));
  CHECK(c[2] == doctest::Approx(0.5));
}

TEST_CASE("bessel_k against high-precision values") {
  for (const auto& o : kBessel) {
    CAPTURE(o.re_nu);
    CAPTURE(o.im_nu);
    CAPTURE(o.x);
    const Complex ref(o.re, o.im);
    const Complex v = bessel_k(Complex(o.re_nu, o.im_nu), o.x, 1e-10);
    CHECK(rel(v, ref) < 1e-10);
    const Complex s = bessel_k_scaled(Complex(o.re_nu, o.im_nu), o.x, 1e-10);
    CHECK(rel(s * std::exp(-o.x), ref) < 1e-10);
  }
}

TEST_CASE("bessel_k symmetries and half-integer form") {
  CHECK(bessel_k(0.5, 1.0, 1e-12).real() ==
        doctest::Approx(std::sqrt(std::numbers::pi / 2) * std::exp(-1.0)).epsilon(1e-12));
  const Complex nu(1.3, 0.7);
  CHECK(rel(bessel_k(-nu, 2.0, 1e-12), bessel_k(nu, 2.0, 1e-12)) < 1e-12);
  CHECK(rel(bessel_k(std::conj(nu), 2.0, 1e-12), std::conj(bessel_k(nu, 2.0, 1e-12))) < 1e-12);
}

TEST_CASE("bessel_k rejects bad arguments") {
  CHECK_THROWS_AS(bessel_k(1.0, 0.0, 1e-10), DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, -2.0, 1e-10), DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, 1.0, 1e-2), DomainError);
  CHECK_THROWS_AS(bessel_k(Complex(kMaxBesselOrder + 1.0, 0.0), 1.0, 1e-10), DomainError);
}

TEST_CASE("bessel_k_row") {
  const auto r = bessel_k_row(0.0, 1.0, 1, 1e-12);
  REQUIRE(r.size() == 2);
  CHECK(r[0].real() == doctest::Approx(0.42102443824070833).epsilon(1e-12));
  CHECK(r[1].real() == doctest::Approx(0.60190723019723457).epsilon(1e-12));
  CHECK(rel(bessel_k(-1.0, 1.0, 1e-12), r[1]) < 1e-12);

  for (double x : {0.3, 2.0, 12.0}) {
    for (double sigma : {0.0, 1.5, 9.0}) {
      const auto row = bessel_k_row(sigma, x, 6, 1e-10);
      CAPTURE(x);
      CAPTURE(sigma);
      CHECK(rel(row[3], bessel_k(Complex(3.0, sigma), x, 1e-10)) < 1e-9);
    }
  }
  const auto r5 = bessel_k_row(1.0, 5.0, 4, 1e-10);
  for (int j = 0; j <= 4; ++j) {
    CHECK(rel(std::conj(r5[j]), bessel_k(Complex(j, -1.0), 5.0, 1e-10)) < 1e-9);
  }
}

TEST_CASE("BesselOrderTable agrees with direct values on the real-order scale") {
  for (double x : {0.05, 0.7, 3.0, 21.0}) {
    const int j_max = 9;
    for (double cap : {1.0, 8.0, 32.0}) {
      const BesselOrderTable t(x, j_max, cap, 1e-10);
      std::vector<Complex> out(j_max + 1);
      for (double sigma : {0.0, -0.3 * cap, cap}) {
        t.eval(sigma, out);
        for (int j = 0; j <= j_max; ++j) {
          const double scale = bessel_k(j, x, 1e-12).real();
          const Complex ref = bessel_k(Complex(j, sigma), x, 1e-11);
          const Complex got = out[j] * std::exp(t.log_scale(j) - x);
          CAPTURE(x);
          CAPTURE(sigma);
          CAPTURE(j);
          CHECK(std::abs(got - ref) <= 1e-10 * scale);
        }
      }
    }
  }
}

TEST_CASE("BesselOrderTable argument checks") {
  CHECK_THROWS_AS(BesselOrderTable(0.0, 3, 1.0, 1e-10), DomainError);
  CHECK_THROWS_AS(BesselOrderTable(1.0, -1, 1.0, 1e-10), DomainError);
  const BesselOrderTable t(1.0, 3, 2.0, 1e-10);
  std::vector<Complex> out(4), wrong(3);
  CHECK_THROWS_AS(t.eval(2.5, out), DomainError);
  CHECK_THROWS_AS(t.eval(1.0, wrong), DomainError);
}
