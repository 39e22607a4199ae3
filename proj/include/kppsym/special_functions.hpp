#pragma once

namespace kppsym::special {

/// Error function, erf(x) = 2/sqrt(pi) * integral_0^x exp(-t^2) dt.
/// Near-minimax rational approximations (Cody); odd by construction.
double erf(double x);

/// Complementary error function for x >= 0.
double erfc_positive(double x);

/// Principal branch of the Lambert W function, W(z) exp(W(z)) = z, W >= -1.
/// Throws DomainError for z < -1/e.
double lambert_w(double z);

}  // namespace kppsym::special
