#include "hsv/bessel.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "hsv/error.hpp"

namespace hsv::bessel {
namespace {

constexpr int kSeriesTerms = 40;

void require_finite_nonnegative(double x) {
  if (!std::isfinite(x)) {
    throw Error(ErrorCode::NonFiniteInput, "Bessel argument is not finite");
  }
  if (x < 0.0) {
    throw Error(ErrorCode::NonFiniteInput, "Bessel argument must be >= 0, got " + std::to_string(x));
  }
}

// sum_k (-1)^k (x/2)^(2k+order) / (k! (k+order)!) for order 0 or 1. At
// x = 12 the largest term is about 4e3, so the 64-bit mantissa keeps the
// cancellation error near 1e-15.
long double series(int order, long double x) {
  const long double half = x / 2.0L;
  const long double q = -half * half;
  long double term = (order == 0) ? 1.0L : half;
  long double sum = term;
  for (int k = 1; k < kSeriesTerms; ++k) {
    term *= q / (static_cast<long double>(k) * static_cast<long double>(k + order));
    sum += term;
  }
  return sum;
}

struct Pair {
  long double j0;
  long double j1;
};

// Miller's algorithm: run J_{k-1} = (2k/x) J_k - J_{k+1} downward from an
// order well above x, then normalize with 1 = J0 + 2 sum_{k>=1} J_{2k}.
Pair backward_recurrence(long double x) {
  int start = static_cast<int>(x + 30.0L + 4.0L * std::sqrt(x));
  if (start % 2 == 1) ++start;
  long double next = 0.0L;  // J_{k+1}
  long double cur = 1e-300L;  // J_k
  long double norm = 0.0L;
  long double j1_raw = 0.0L;
  for (int k = start; k >= 1; --k) {
    const long double prev = (2.0L * k / x) * cur - next;
    next = cur;
    cur = prev;
    if (k - 1 == 1) j1_raw = cur;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0L * cur;
    if (std::fabs(cur) > 1e250L) {
      cur *= 1e-250L;
      next *= 1e-250L;
      norm *= 1e-250L;
      j1_raw *= 1e-250L;
    }
  }
  norm += cur;
  return {cur / norm, j1_raw / norm};
}

double newton(const std::function<double(double)>& f, const std::function<double(double)>& df,
              double lo, double hi, const char* name) {
  double flo = f(lo);
  // Bisection narrows the bracket so Newton starts inside its basin.
  for (int i = 0; i < 30; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    const double fx = f(x);
    const double step = fx / df(x);
    x -= step;
    if (std::fabs(f(x)) <= 1e-13 && std::fabs(step) <= 1e-15 * std::fabs(x)) return x;
  }
  throw Error(ErrorCode::ConvergenceFailure,
              std::string("Newton iteration for ") + name + " did not reach |f| <= 1e-13");
}

SpectralConstants compute_constants() {
  SpectralConstants c{};
  c.j0 = newton(j0, j0_derivative, 2.0, 3.0, "j0");
  c.j1 = newton(j1, j1_derivative, 3.0, 4.0, "j1");
  const auto j1_second = [](double x) {
    // From the order-one Bessel equation: J1'' = -J1'/x - (1 - 1/x^2) J1.
    return -j1_derivative(x) / x - (1.0 - 1.0 / (x * x)) * j1(x);
  };
  c.jp11 = newton(j1_derivative, j1_second, 1.0, 2.0, "j'11");
  c.c_excl = c.j1 / (2.0 * c.j0);
  return c;
}

}  // namespace

double j0(double x) {
  require_finite_nonnegative(x);
  if (x <= kSeriesLimit) return static_cast<double>(series(0, x));
  return static_cast<double>(backward_recurrence(x).j0);
}

double j1(double x) {
  require_finite_nonnegative(x);
  if (x <= kSeriesLimit) return static_cast<double>(series(1, x));
  return static_cast<double>(backward_recurrence(x).j1);
}

double j0_derivative(double x) { return -j1(x); }

double j2(double x) {
  require_finite_nonnegative(x);
  if (x == 0.0) return 0.0;
  return (2.0 / x) * j1(x) - j0(x);
}

double j1_derivative(double x) {
  require_finite_nonnegative(x);
  if (x == 0.0) return 0.5;
  return j0(x) - j1(x) / x;
}

const SpectralConstants& constants() {
  static const SpectralConstants cached = compute_constants();
  return cached;
}

}  // namespace hsv::bessel
