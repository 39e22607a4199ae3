#include "kppsym/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "kppsym/errors.hpp"

namespace kppsym::special {

namespace {

// Coefficients from W. J. Cody, "Rational Chebyshev approximations for the
// error function", Math. Comp. 23 (1969).
constexpr double kA[5] = {3.1611237438705656, 113.864154151050156, 377.485237685302021, 3209.37758913846947,
                          0.185777706184603153};
constexpr double kB[4] = {23.6012909523441209, 244.024637934444173, 1282.61652607737228, 2844.23683343917062};
constexpr double kC[9] = {0.564188496988670089, 8.88314979438837594, 66.1191906371416295,
                          298.635138197400131,  881.95222124176909,  1712.04761263407058,
                          2051.07837782607147,  1230.33935479799725, 2.15311535474403846e-8};
constexpr double kD[8] = {15.7449261107098347, 117.693950891312499, 537.181101862009858, 1621.38957456669019,
                          3290.79923573345963, 4362.61909014324716, 3439.36767414372164, 1230.33935480374942};
constexpr double kP[6] = {0.305326634961232344, 0.360344899949804439, 0.125781726111229246,
                          0.0160837851487422766, 6.58749161529837803e-4, 0.0163153871373020978};
constexpr double kQ[5] = {2.56852019228982242, 1.87295284992346047, 0.527905102951428412, 0.0605183413124413191,
                          0.00233520497626869185};

constexpr double kSmallThreshold = 0.46875;
constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kBig = 26.543;

double erf_small(double y) {
  double ysq = y > 1.11e-16 ? y * y : 0.0;
  double num = kA[4] * ysq;
  double den = ysq;
  for (int i = 0; i < 3; ++i) {
    num = (num + kA[i]) * ysq;
    den = (den + kB[i]) * ysq;
  }
  return y * (num + kA[3]) / (den + kB[3]);
}

// exp(-y^2) with the square split to limit cancellation.
double gaussian_tail(double y) {
  double ysq = std::trunc(y * 16.0) / 16.0;
  double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

}  // namespace

double erfc_positive(double y) {
  if (y <= kSmallThreshold) return 1.0 - erf_small(y);
  if (y <= 4.0) {
    double num = kC[8] * y;
    double den = y;
    for (int i = 0; i < 7; ++i) {
      num = (num + kC[i]) * y;
      den = (den + kD[i]) * y;
    }
    return gaussian_tail(y) * (num + kC[7]) / (den + kD[7]);
  }
  if (y >= kBig) return 0.0;
  double ysq = 1.0 / (y * y);
  double num = kP[5] * ysq;
  double den = ysq;
  for (int i = 0; i < 4; ++i) {
    num = (num + kP[i]) * ysq;
    den = (den + kQ[i]) * ysq;
  }
  double r = ysq * (num + kP[4]) / (den + kQ[4]);
  r = (kInvSqrtPi - r) / y;
  return gaussian_tail(y) * r;
}

double erf(double x) {
  if (std::isnan(x)) return x;
  double y = std::abs(x);
  double r = y <= kSmallThreshold ? erf_small(y) : 1.0 - erfc_positive(y);
  return std::signbit(x) ? -r : r;
}

double lambert_w(double z) {
  constexpr double kBranch = -1.0 / std::numbers::e;
  if (std::isnan(z)) return z;
  if (z < kBranch) throw DomainError("lambertW argument below -1/e");
  if (z == kBranch) return -1.0;
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;

  double w;
  double q = 2.0 * (std::numbers::e * z + 1.0);
  if (q < 0.5) {
    // Series about the branch point in p = sqrt(2 (e z + 1)).
    double p = std::sqrt(std::max(q, 0.0));
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * (769.0 / 17280.0)))));
  } else if (z < 3.0) {
    w = std::log1p(z);
    if (z > 0.0) w *= 0.8;
  } else {
    double l1 = std::log(z);
    double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley iteration on f(w) = w e^w - z.
  for (int it = 0; it < 64; ++it) {
    double ew = std::exp(w);
    double f = w * ew - z;
    double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    double next = w - step;
    if (next < -1.0) next = -1.0;
    if (std::abs(next - w) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(next))) {
      w = next;
      break;
    }
    w = next;
  }
  return w;
}

}  // namespace kppsym::special
