#pragma once

#include <complex>

#include <Eigen/Dense>

namespace dtcp::sf {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;

/// Faddeeva function w(z) = exp(-z^2) erfc(-iz). Accurate on the whole plane;
/// the rational approximation covers Im(z) >= 0 and the reflection
/// w(-z) = 2 exp(-z^2) - w(z) the rest.
Complex faddeeva_w(Complex z);

/// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z).
/// Does not overflow for large |z| with Re(z) >= 0.
Complex erfcx(Complex z);

/// Complementary error function continued to the complex plane.
/// Throws RangeError when exp(-z^2) overflows (extreme |Im z|).
Complex complex_erfc(Complex z);

/// Euler Gamma function (Lanczos, reflection for Re z < 1/2).
/// Throws PoleError at nonpositive integers.
Complex gamma_fn(Complex z);

/// Kummer confluent hypergeometric 1F1(a; b; z). Power series with the
/// Kummer transform for Re z < 0 and an asymptotic expansion for large |z|.
/// Throws PoleError when b is a nonpositive integer, ConvergenceError when
/// the series fails within the term cap.
Complex hyp1f1(Complex a, Complex b, Complex z);

/// Matrix exponential (scaling-and-squaring with Pade approximation).
ComplexMatrix mat_exp(const ComplexMatrix& m);

/// Principal matrix logarithm. Throws BranchError when an eigenvalue lies on
/// the closed negative real axis, DomainError when the matrix is singular.
ComplexMatrix mat_log_principal(const ComplexMatrix& m);

} // namespace dtcp::sf
