#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "dtcp/levy.hpp"

namespace dtcp::models {

using Complex = std::complex<double>;
using Matrix2d = Eigen::Matrix2d;

/// Square-root activity-rate process dv = alpha (theta - v) dt + eta sqrt(v) dW.
struct CirParams {
    double alpha;
    double theta;
    double eta;
    double v0;
    double rho = 0.0; // correlation with the asset Brownian
};

/// Leverage-neutral square-root parameters (alpha and theta turn complex).
struct CirParamsC {
    Complex alpha;
    Complex theta;
    double eta;
    double v0;
};

/// Matrix activity-rate process
/// d Sigma = sqrt(Sigma) dB Q + Q^T dB^T sqrt(Sigma) + (M Sigma + Sigma M^T + c Q^T Q) dt,
/// with v = Sigma^{11} driving the diffusion clock and u = Sigma^{22} the jump clock.
struct WishartParams {
    Matrix2d q_mat;
    Matrix2d m_mat;
    double c;
    Matrix2d sigma0;
    double rho;
    levy::NormalJumps jumps; // unit base intensity, time-changed by Sigma^{22}
};

struct BlackScholes {
    double sigma;
};
struct Heston {
    CirParams cir;
};
struct Merton {
    double sigma;
    levy::NormalJumps jumps;
};
struct Kou {
    double sigma;
    levy::DoubleExpJumps jumps;
};
struct Cgmy {
    levy::CgmyJumps jumps;
};
struct Bates {
    CirParams cir;
    levy::NormalJumps jumps;
};
struct Fang {
    CirParams var_process;       // v_t, correlated with the asset
    CirParams intensity_process; // lambda_t, independent (rho = 0); v0 holds lambda_0
    levy::NormalJumps jumps;     // lambda field unused (intensity is stochastic)
};
struct WishartDtc {
    WishartParams p;
};

using ModelSpec =
    std::variant<BlackScholes, Heston, Merton, Kou, Cgmy, Bates, Fang, WishartDtc>;

std::string model_name(const ModelSpec& m);

/// Throws ValidationError naming the violated invariant (Feller condition,
/// correlation bounds, jump-rate constraints, Wishart cone conditions).
void validate(const ModelSpec& m);

/// Rectangle of imaginary parts on which the joint characteristic function
/// (in its own arguments) is analytic: z_lo < Im(z) < z_hi, w_lo < Im(w) < w_hi.
struct ComplexStrip {
    double z_lo, z_hi;
    double w_lo, w_hi;
};

/// E[exp(-lam * integral_0^tau v_s ds)] for the square-root process; closed
/// form with tau-continuous branch tracking of the complex logarithm.
/// Throws DomainError past the transform's explosion boundary.
Complex cir_integrated_laplace(const CirParamsC& p, double tau, Complex lam);

/// Same transform by adaptive Runge-Kutta integration of the scalar Riccati
/// ODE; branch-free verification oracle for the closed form.
Complex cir_laplace_via_ode(const CirParamsC& p, double tau, Complex lam, double tol = 1e-11);

/// Leverage-neutral parameters alpha^z = alpha - i rho z eta, theta^z = alpha theta / alpha^z.
CirParamsC leverage_neutral_cir(const CirParams& p, Complex z);

/// Joint leverage-neutral characteristic function
/// Phi(z, w) = E[exp(i z log(S~_t/S_t0) + i w (TV_t - TV_t0))] over horizon tau.
Complex cf(const ModelSpec& m, double tau, Complex z, Complex w);

/// E^{Q(z,w)}[exp(-lam1 dT - lam2 dU)] for the Wishart clocks via the block
/// matrix exponential; the trace-log branch is tracked continuously in tau.
Complex wishart_joint_laplace(const WishartParams& p, double tau, Complex z, Complex lam1,
                              Complex lam2);

/// Conservative analyticity rectangle for cf's own arguments at horizon tau.
/// Jump-part bounds are analytic; activity-rate explosion bounds are probed
/// numerically and shrunk by 10%.
ComplexStrip strip_of_analyticity(const ModelSpec& m, double tau);

/// The scalar a(tau) of the Wishart transform exp(-a - Tr(A Sigma0)); exposed
/// for the branch-continuity diagnostics.
Complex wishart_a_scalar(const WishartParams& p, double tau, Complex z, Complex lam1, Complex lam2);

/// Instantaneous correlation between the Brownian drivers of Sigma^{11} and
/// Sigma^{22} at state sigma_t.
double activity_rate_correlation(const WishartParams& p, const Matrix2d& sigma_t);

enum class ActivityState { V0, Lambda0, Sigma0_11, Sigma0_12, Sigma0_22 };

/// d log cf / d state for exponentially-affine state dependence; nullopt when
/// the model has no such state (the caller falls back to finite differences).
std::optional<Complex> cf_state_log_deriv(const ModelSpec& m, double tau, Complex z, Complex w,
                                          ActivityState which);

/// Laplace arguments entering every activity-rate transform.
Complex lam_continuous(Complex z, Complex w);                      // z^2/2 + iz/2 - iw
Complex lam_jump(const levy::JumpSpec& jumps, Complex z, Complex w); // iz kappa - phi_{J,J^2} + 1 (unit rate)

} // namespace dtcp::models
