#pragma once

namespace hsv::bessel {

/// First zeros of J0, J1 and J1', together with the exclusion ratio
/// j1 / (2 j0) that scales the diameter in the critical-point bound.
struct SpectralConstants {
  double j0;      ///< first positive zero of J0
  double j1;      ///< first positive zero of J1
  double jp11;    ///< first positive zero of J1' (disk Neumann ground mode)
  double c_excl;  ///< j1 / (2 j0)
};

/// Switch point between the power series and Miller's backward recurrence.
inline constexpr double kSeriesLimit = 12.0;

/// J0(x) for finite x >= 0. Power series (40 terms, extended precision)
/// up to kSeriesLimit, backward recurrence with the Neumann-sum
/// normalization beyond. Absolute error is below 1e-12 on [0, 50].
double j0(double x);

/// J1(x) for finite x >= 0, same scheme as j0.
double j1(double x);

/// J0'(x) = -J1(x).
double j0_derivative(double x);

/// J2(x) = (2/x) J1(x) - J0(x), with J2(0) = 0.
double j2(double x);

/// J1'(x) = J0(x) - J1(x)/x, with J1'(0) = 1/2.
double j1_derivative(double x);

/// Locates the zeros once (bisection on fixed brackets, then Newton to
/// |f| <= 1e-13) and returns the cached result. Throws
/// ErrorCode::ConvergenceFailure if Newton stalls.
const SpectralConstants& constants();

}  // namespace hsv::bessel
