#include "sqcc/gaussian.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "sqcc/errors.hpp"

namespace sqcc {

SymplecticSpectrum symplectic_eigenvalues(const TwoModeCM& cm) {
  if (!std::isfinite(cm.a) || !std::isfinite(cm.b) || !std::isfinite(cm.c)) {
    throw NonFiniteInput("symplectic_eigenvalues: non-finite covariance entry");
  }
  if (cm.a <= 0.0 || cm.b <= 0.0) {
    throw DomainError("symplectic_eigenvalues: diagonal variances must be positive");
  }
  const double delta = cm.delta();
  const double root_det = std::abs(cm.a * cm.b - cm.c * cm.c);
  double disc = delta * delta - 4.0 * root_det * root_det;
  if (disc < 0.0) {
    if (disc < -kPhysicalTolerance * delta * delta) {
      std::ostringstream msg;
      msg << "symplectic_eigenvalues: negative discriminant " << disc << " for (a, b, c) = ("
          << cm.a << ", " << cm.b << ", " << cm.c << ")";
      throw NegativeDiscriminant(msg.str());
    }
    disc = 0.0;
  }
  const double l1_sq = 0.5 * (delta + std::sqrt(disc));
  if (l1_sq <= 0.0) {
    throw NegativeDiscriminant("symplectic_eigenvalues: non-positive Delta");
  }
  SymplecticSpectrum s;
  s.lambda1 = std::sqrt(l1_sq);
  // lambda1 * lambda2 = sqrt(det); avoids cancellation in the minus branch.
  s.lambda2 = root_det / s.lambda1;
  if (s.lambda2 > s.lambda1) std::swap(s.lambda1, s.lambda2);
  return s;
}

double bosonic_entropy(double x) {
  if (!std::isfinite(x)) throw NonFiniteInput("bosonic_entropy: non-finite argument");
  if (x < 1.0 - kPhysicalTolerance) {
    std::ostringstream msg;
    msg << "bosonic_entropy: symplectic eigenvalue " << x << " below 1";
    throw DomainError(msg.str());
  }
  if (x <= 1.0 + kPhysicalTolerance) return 0.0;
  const double up = 0.5 * (x + 1.0);
  const double down = 0.5 * (x - 1.0);
  return up * std::log2(up) - down * std::log2(down);
}

double entropy_of_cm(const TwoModeCM& cm) {
  const auto s = symplectic_eigenvalues(cm);
  return bosonic_entropy(s.lambda1) + bosonic_entropy(s.lambda2);
}

double conditional_after_heterodyne(const TwoModeCM& cm) {
  if (!std::isfinite(cm.a) || !std::isfinite(cm.b) || !std::isfinite(cm.c)) {
    throw NonFiniteInput("conditional_after_heterodyne: non-finite covariance entry");
  }
  if (cm.b <= -1.0) throw DomainError("conditional_after_heterodyne: b must exceed -1");
  const double lambda = cm.a - cm.c * cm.c / (cm.b + 1.0);
  if (lambda < 1.0 - kPhysicalTolerance) {
    std::ostringstream msg;
    msg << "conditional_after_heterodyne: conditional variance " << lambda << " below 1";
    throw DomainError(msg.str());
  }
  return lambda;
}

}  // namespace sqcc
