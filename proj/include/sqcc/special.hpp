#pragma once

// Special functions used across the key-rate pipeline.

namespace sqcc::special {

/// Inverse complementary error function, x in (0, 2).
double erfc_inv(double x);

/// Standard normal quantile, p in (0, 1).
double normal_quantile(double p);

/// Quantile of Beta(a, b) at probability p.
double beta_quantile(double a, double b, double p);

}  // namespace sqcc::special
