#include <cmath>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "doctest.h"
#include "hsv/bessel.hpp"

namespace bessel = hsv::bessel;
using big = boost::multiprecision::cpp_bin_float_50;

namespace {

// Power series in 50-digit arithmetic; enough terms that the tail is
// negligible for x <= 25.
big series(int order, const big& x) {
  const big q = -(x * x) / 4;
  big term = 1;
  for (int i = 1; i <= order; ++i) term *= x / (2 * i);
  big sum = term;
  for (int m = 1; m < 120; ++m) {
    term *= q / (m * (m + order));
    sum += term;
  }
  return sum;
}

double oracle_j0(double x) { return static_cast<double>(series(0, big(x))); }
double oracle_j1(double x) { return static_cast<double>(series(1, big(x))); }

// Independent zero: Newton in 50-digit arithmetic.
double oracle_zero(int order, double guess) {
  big x = guess;
  for (int it = 0; it < 60; ++it) {
    const big f = series(order, x);
    // J0' = -J1, J1' = J0 - J1/x
    const big df = order == 0 ? big(-series(1, x)) : big(series(0, x) - series(1, x) / x);
    x -= f / df;
  }
  return static_cast<double>(x);
}

}  // namespace

TEST_CASE("values at the origin") {
  CHECK(bessel::j0(0.0) == 1.0);
  CHECK(bessel::j1(0.0) == 0.0);
  CHECK(bessel::j0_derivative(0.0) == 0.0);
  CHECK(bessel::j2(0.0) == 0.0);
}

TEST_CASE("values at x = 2 against the series oracle") {
  CHECK(std::abs(bessel::j0(2.0) - 0.2238907791) <= 1e-9);
  CHECK(std::abs(bessel::j1(2.0) - 0.5767248078) <= 1e-9);
  CHECK(std::abs(bessel::j0_derivative(2.0) + 0.5767248078) <= 1e-9);
  CHECK(std::abs(bessel::j0(2.0) - oracle_j0(2.0)) <= 1e-14);
}

TEST_CASE("agreement with extended-precision series on [0, 25]") {
  double worst = 0.0;
  for (int i = 0; i <= 500; ++i) {
    const double x = 25.0 * i / 500.0;
    worst = std::max(worst, std::abs(bessel::j0(x) - oracle_j0(x)));
    worst = std::max(worst, std::abs(bessel::j1(x) - oracle_j1(x)));
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("agreement with the standard library beyond the series range") {
  for (double x = 12.0; x <= 50.0; x += 0.37) {
    CHECK(std::abs(bessel::j0(x) - std::cyl_bessel_j(0.0, x)) <= 1e-12);
    CHECK(std::abs(bessel::j1(x) - std::cyl_bessel_j(1.0, x)) <= 1e-12);
  }
}

TEST_CASE("zeros and the exclusion ratio") {
  const auto& c = bessel::constants();
  CHECK(std::abs(c.j0 - 2.404825557695773) <= 1e-12);
  CHECK(std::abs(c.j1 - 3.831705970207512) <= 1e-12);
  CHECK(std::abs(c.jp11 - 1.841183781340659) <= 1e-12);
  CHECK(std::abs(c.j0 - oracle_zero(0, 2.4)) <= 1e-12);
  CHECK(std::abs(c.j1 - oracle_zero(1, 3.8)) <= 1e-12);
  CHECK(std::abs(bessel::j0(c.j0)) <= 1e-12);
  CHECK(std::abs(bessel::j1(c.j1)) <= 1e-12);
  CHECK(std::abs(bessel::j0_derivative(c.j1)) <= 1e-12);
  CHECK(std::abs(bessel::j1_derivative(c.jp11)) <= 1e-12);
  CHECK(c.j0 > 2.404);
  CHECK(c.j0 < 2.405);
  CHECK(c.j1 > 3.831);
  CHECK(c.j1 < 3.832);
  CHECK(c.c_excl > 0.796);
  CHECK(c.c_excl < 0.797);
  CHECK(c.c_excl == c.j1 / (2.0 * c.j0));
  CHECK(std::abs(c.c_excl - 0.796670) <= 1e-6);
  // 0.7967 diam as quoted for the bound
  CHECK(std::abs(c.c_excl - 0.7967) < 5e-5);
}

TEST_CASE("Bessel ODE residual") {
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = 0.1 + (20.0 - 0.1) * (i + 0.5) / 100.0;
    const double j0 = bessel::j0(x);
    const double d1 = bessel::j0_derivative(x);
    const double d2 = 0.5 * (bessel::j2(x) - j0);
    worst = std::max(worst, std::abs(x * x * d2 + x * d1 + x * x * j0));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("J0 decreases up to the first zero of J1") {
  const double j1 = bessel::constants().j1;
  for (int i = 0; i < 100; ++i) {
    const double x = 0.01 + (j1 - 0.02) * (i + 0.5) / 100.0;
    CHECK(bessel::j0_derivative(x) < 0.0);
  }
}

TEST_CASE("continuity across the evaluation seam") {
  const double below = std::nextafter(bessel::kSeriesLimit, 0.0);
  const double above = std::nextafter(bessel::kSeriesLimit, 100.0);
  CHECK(std::abs(bessel::j0(below) - bessel::j0(above)) <= 1e-11);
  CHECK(std::abs(bessel::j1(below) - bessel::j1(above)) <= 1e-11);
}

TEST_CASE("recurrence helpers") {
  for (double x = 0.5; x < 15.0; x += 0.5) {
    CHECK(std::abs(bessel::j2(x) - std::cyl_bessel_j(2.0, x)) <= 1e-12);
    const double d = 0.5 * (std::cyl_bessel_j(0.0, x) - std::cyl_bessel_j(2.0, x));
    CHECK(std::abs(bessel::j1_derivative(x) - d) <= 1e-12);
  }
}
