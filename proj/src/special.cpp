#include "sqcc/special.hpp"

#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "sqcc/errors.hpp"

namespace sqcc::special {

double erfc_inv(double x) {
  if (!(x > 0.0 && x < 2.0)) throw DomainError("erfc_inv: argument outside (0, 2)");
  return boost::math::erfc_inv(x);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("normal_quantile: p outside (0, 1)");
  // Phi^-1(p) = -sqrt(2) erfc^-1(2p), accurate deep in the lower tail.
  return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * p);
}

double beta_quantile(double a, double b, double p) {
  if (!(a > 0.0 && b > 0.0)) throw DomainError("beta_quantile: shape parameters must be positive");
  if (!(p > 0.0 && p < 1.0)) throw DomainError("beta_quantile: p outside (0, 1)");
  return boost::math::ibeta_inv(a, b, p);
}

}  // namespace sqcc::special
