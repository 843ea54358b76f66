#pragma once

#include <complex>
#include <variant>

namespace dtcp::levy {

using Complex = std::complex<double>;

/// Martingale exponent parameter; all concrete models use theta0 = -i so
/// that i*theta0*X = X in the exponential asset dynamics.
inline constexpr Complex kTheta0{0.0, -1.0};

struct NoJumps {};

/// Compound Poisson with lognormal price jumps: J ~ N(m, delta^2), intensity lambda.
struct NormalJumps {
    double m = 0.0;
    double delta = 0.0;
    double lambda = 0.0;
};

/// Compound Poisson with asymmetric double-exponential jumps (density
/// alpha p e^{-alpha x} for x >= 0, beta q e^{beta x} for x < 0, q = 1 - p).
struct DoubleExpJumps {
    double p = 0.5;
    double alpha = 2.0; // up-rate, > 1 so the exponential moment exists
    double beta = 1.0;  // down-rate, > 0
    double lambda = 0.0;
};

/// Infinite-activity tempered-stable density
/// c- e^{-beta- |x|} |x|^{-1-alpha-} for x < 0, c+ e^{-beta+ x} x^{-1-alpha+} for x >= 0.
struct CgmyJumps {
    double c_plus, c_minus;
    double beta_plus, beta_minus;
    double alpha_plus, alpha_minus; // < 2, not 0 or 1
};

using JumpSpec = std::variant<NoJumps, NormalJumps, DoubleExpJumps, CgmyJumps>;

/// Scalar Levy triplet with truncation x 1_{|x|<=1}; mu is the drift of the
/// continuous part, sigma its diffusion coefficient.
struct LevySpec {
    double mu = 0.0;
    double sigma = 0.0;
    JumpSpec jumps = NoJumps{};
};

/// Jump mean parameter implied by the compensator: kappa = e^{m + delta^2/2} - 1.
NormalJumps normal_jumps_from_kappa(double kappa, double delta, double lambda);

void validate(const JumpSpec& spec);

/// Compensator kappa = phi_J(-i) - 1 of a compound-Poisson spec (0 for NoJumps).
double jump_kappa(const JumpSpec& spec);

/// Second moment rate of the jump part, d/dt E<X^d>_t = integral x^2 nu(dx).
double jump_variance_rate(const JumpSpec& spec);

/// Characteristic exponent of the continuous part: i mu theta - sigma^2 theta^2 / 2.
Complex psi_continuous(const LevySpec& spec, Complex theta);

/// Characteristic exponent of the jump part, E[e^{i theta X^d_t}] = e^{t psi}.
/// Compound Poisson uses the raw-sum convention lambda (phi_J(theta) - 1);
/// CGMY uses the standard triplet with truncation x 1_{|x|<=1}.
Complex psi_jump(const JumpSpec& spec, Complex theta);

/// Joint characteristic function phi_{J,J^2}(z, w) = E[exp(i z J + i w J^2)]
/// of a single compound-Poisson jump. Throws DomainError outside the
/// convergence region and for infinite-activity specs.
Complex phi_joint_jump(const JumpSpec& spec, Complex z, Complex w);

/// Exponent of the bivariate pure-jump pair (X^d, <X^d>):
/// E[exp(i z X^d_t + i w <X^d>_t)] = e^{t psi_D(z, w)}. The quadratic
/// variation is a raw jump-square sum, so only the z slot carries the
/// truncation compensation (and none at all for finite activity).
Complex psi_D(const JumpSpec& spec, Complex z, Complex w);

/// Direct numerical evaluation of the psi_D integral; verification oracle
/// for the closed forms, sharing only the integrand definition.
Complex psi_D_quadrature(const JumpSpec& spec, Complex z, Complex w, double abs_tol = 1e-9);

/// First Laplace argument of the leverage-neutral transform at theta0 = -i.
Complex zeta(Complex z, Complex w, const LevySpec& spec);

/// Second Laplace argument: i z psi_jump(-i) - psi_D(z, w). For compound
/// Poisson this is lambda (i z kappa - phi_{J,J^2}(z,w) + 1).
Complex xi(Complex z, Complex w, const LevySpec& spec);

} // namespace dtcp::levy
