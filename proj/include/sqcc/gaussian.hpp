#pragma once

// Two-mode Gaussian state algebra in the reduced (a, b, c) form
//
//     | a*I   c*Z |
//     | c*Z   b*I |      Z = diag(1, -1),
//
// with all variances in shot-noise units (vacuum = 1).

namespace sqcc {

/// Tolerance separating floating-point noise from genuine non-physicality.
inline constexpr double kPhysicalTolerance = 1e-9;

struct TwoModeCM {
  double a = 1.0;  ///< variance of mode A
  double b = 1.0;  ///< variance of mode B
  double c = 0.0;  ///< correlation magnitude, enters as c*Z

  /// det(sigma_a) + det(sigma_b) + 2 det(sigma_c), with det(c*Z) = -c^2.
  double delta() const noexcept { return a * a + b * b - 2.0 * c * c; }
  /// Determinant of the full 4x4 matrix.
  double det() const noexcept {
    const double d = a * b - c * c;
    return d * d;
  }
};

struct SymplecticSpectrum {
  double lambda1 = 1.0;  ///< larger eigenvalue
  double lambda2 = 1.0;  ///< smaller eigenvalue
};

/// Symplectic eigenvalues of a two-mode CM.
///
/// Throws NonFiniteInput for NaN/inf fields, DomainError for a <= 0 or b <= 0
/// and NegativeDiscriminant when Delta^2 - 4 det is negative beyond tolerance.
SymplecticSpectrum symplectic_eigenvalues(const TwoModeCM& cm);

/// Entropy (bits) of a thermal mode with symplectic eigenvalue x.
/// Exactly 0 within kPhysicalTolerance of 1; DomainError below that.
double bosonic_entropy(double x);

/// Von Neumann entropy (bits) of the two-mode state.
double entropy_of_cm(const TwoModeCM& cm);

/// Symplectic eigenvalue of mode A after heterodyne detection of mode B:
/// a - c^2 / (b + 1). The conditional matrix is proportional to the identity,
/// so this is also its diagonal.
double conditional_after_heterodyne(const TwoModeCM& cm);

}  // namespace sqcc
