#include "dtcp/models.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/MatrixFunctions>

#include "dtcp/errors.hpp"
#include "dtcp/special_functions.hpp"

namespace dtcp::models {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kInf = std::numeric_limits<double>::infinity();

using Matrix2cd = Eigen::Matrix2cd;
using Matrix4cd = Eigen::Matrix4cd;

// (1 - e^{-x}) / x, stable near 0
Complex em1c(Complex x) {
    if (std::abs(x) < 1e-6) return 1.0 - x / 2.0 + x * x / 6.0;
    return (1.0 - std::exp(-x)) / x;
}

// ---- CIR integrated transform ----------------------------------------------

struct CirEval {
    Complex a_coef; // A(tau): transform = exp(-A v0 - B)
    Complex b_coef;
};

// D(s) = (gamma+alpha) + (gamma-alpha) e^{-gamma s} = 2 gamma P(s) with
// P(s) = (1 + e^{-gamma s})/2 + (alpha s / 2) (1 - e^{-gamma s})/(gamma s),
// bounded and P(0) = 1; the log branch is tracked continuously in s.
CirEval cir_eval(const CirParamsC& p, double tau, Complex lam) {
    CirEval out{0.0, 0.0};
    if (lam == Complex(0.0, 0.0)) return out;
    const Complex alpha = p.alpha;
    const double eta2 = p.eta * p.eta;
    const Complex gamma = std::sqrt(alpha * alpha + 2.0 * eta2 * lam);

    auto P = [&](double s) -> Complex {
        const Complex gs = gamma * s;
        return (1.0 + std::exp(-gs)) / 2.0 + (alpha * s / 2.0) * em1c(gs);
    };

    const int n = std::clamp(static_cast<int>(std::abs(gamma.imag()) * tau / 1.2) + 1, 1, 200000);
    Complex log_p = 0.0;
    Complex prev = 1.0; // P(0)
    for (int k = 1; k <= n; ++k) {
        const Complex cur = P(tau * k / n);
        if (std::abs(cur) < 1e-140)
            throw DomainError("cir_integrated_laplace: transform explosion boundary (denominator ~ 0)");
        log_p += std::log(cur / prev);
        prev = cur;
    }
    const Complex p_tau = prev;
    out.a_coef = lam * tau * em1c(gamma * tau) / p_tau;
    // log(2 gamma e^{(alpha-gamma) tau / 2} / D(tau)) = (alpha - gamma) tau/2 - log P(tau)
    const Complex theta_prod = p.alpha * p.theta; // alpha^z theta^z = alpha theta stays put
    out.b_coef = -(2.0 * theta_prod / eta2) * ((alpha - gamma) * tau / 2.0 - log_p);
    return out;
}

// Cash-Karp embedded RK45 on the scalar Riccati pair
//   A' = lam - alpha A - eta^2 A^2 / 2,  B' = alpha theta A.
struct RiccatiState {
    Complex a, b;
};

CirEval cir_ode_eval(const CirParamsC& p, double tau, Complex lam, double tol) {
    const Complex theta_prod = p.alpha * p.theta;
    const double eta2 = p.eta * p.eta;
    auto f = [&](const RiccatiState& y) -> RiccatiState {
        return {lam - p.alpha * y.a - eta2 * y.a * y.a / 2.0, theta_prod * y.a};
    };
    RiccatiState y{0.0, 0.0};
    double s = 0.0;
    double h = tau / 64.0;
    int iter = 0;
    while (s < tau) {
        if (++iter > 2000000) throw ConvergenceError("cir_laplace_via_ode: step budget exceeded");
        h = std::min(h, tau - s);
        if (h < 1e-15 * tau) throw ConvergenceError("cir_laplace_via_ode: step-size underflow");
        // classic RK4 with step doubling
        auto rk4 = [&](RiccatiState y0, double hh) {
            RiccatiState k1 = f(y0);
            RiccatiState k2 = f({y0.a + hh / 2.0 * k1.a, y0.b + hh / 2.0 * k1.b});
            RiccatiState k3 = f({y0.a + hh / 2.0 * k2.a, y0.b + hh / 2.0 * k2.b});
            RiccatiState k4 = f({y0.a + hh * k3.a, y0.b + hh * k3.b});
            return RiccatiState{y0.a + hh / 6.0 * (k1.a + 2.0 * k2.a + 2.0 * k3.a + k4.a),
                                y0.b + hh / 6.0 * (k1.b + 2.0 * k2.b + 2.0 * k3.b + k4.b)};
        };
        RiccatiState big = rk4(y, h);
        RiccatiState half = rk4(rk4(y, h / 2.0), h / 2.0);
        const double err = std::abs(big.a - half.a) + std::abs(big.b - half.b);
        const double scale = 1.0 + std::abs(half.a) + std::abs(half.b);
        if (err > tol * scale) {
            h *= std::max(0.25, 0.9 * std::pow(tol * scale / err, 0.2));
            continue;
        }
        y = half;
        s += h;
        if (err < 0.05 * tol * scale) h *= 2.0;
    }
    return {y.a, y.b};
}

// ---- Wishart joint transform -------------------------------------------------

struct WishartEval {
    Matrix2cd a_mat; // A(tau)
    Complex a_scal;  // a(tau)
};

WishartEval wishart_eval(const WishartParams& p, double tau, Complex z, Complex lam1, Complex lam2) {
    Matrix2cd mz = p.m_mat.cast<Complex>();
    // drift shift M^z = M + i z Q^T R with R = diag(rho, 0)
    Matrix2d r_mat = Matrix2d::Zero();
    r_mat(0, 0) = p.rho;
    mz += kI * z * (p.q_mat.transpose() * r_mat).cast<Complex>();

    const Matrix2d qtq = p.q_mat.transpose() * p.q_mat;
    Matrix2cd d_mat = Matrix2cd::Zero();
    d_mat(0, 0) = lam1;
    d_mat(1, 1) = lam2;

    Matrix4cd big = Matrix4cd::Zero();
    big.block<2, 2>(0, 0) = mz;
    big.block<2, 2>(0, 2) = 2.0 * qtq.cast<Complex>();
    big.block<2, 2>(2, 0) = d_mat;
    big.block<2, 2>(2, 2) = -mz.transpose();

    const double spectral_proxy =
        mz.norm() + std::sqrt(2.0 * qtq.norm() * (std::abs(lam1) + std::abs(lam2))) + 1.0;

    int n = std::clamp(static_cast<int>(tau * spectral_proxy) + 8, 8, 1 << 15);
    for (int attempt = 0;; ++attempt) {
        const Matrix4cd scaled = (tau / n) * big;
        const Matrix4cd e1 = scaled.exp();
        Matrix4cd pw = Matrix4cd::Identity();
        Complex logdet = 0.0;
        Complex prev_det = 1.0;
        double max_darg = 0.0;
        bool singular = false;
        for (int k = 1; k <= n; ++k) {
            pw = pw * e1;
            const double m = pw.cwiseAbs().maxCoeff();
            double logscale = 0.0;
            if (m > 1e30 || (m > 0.0 && m < 1e-30)) {
                pw /= m;
                logscale = std::log(m);
            }
            const Complex det = pw.block<2, 2>(2, 2).determinant();
            if (!(std::abs(det) > 1e-140)) {
                singular = true;
                break;
            }
            const Complex ratio = det / prev_det;
            max_darg = std::max(max_darg, std::abs(std::arg(ratio)));
            logdet += std::log(ratio) + 2.0 * logscale;
            prev_det = det;
        }
        if (!singular && max_darg < 1.5) {
            const Matrix2cd a21 = pw.block<2, 2>(2, 0);
            const Matrix2cd a22 = pw.block<2, 2>(2, 2);
            WishartEval out;
            out.a_mat = a22.inverse() * a21;
            out.a_scal = (p.c / 2.0) * (logdet + tau * mz.trace());
            if (!out.a_mat.allFinite() || !std::isfinite(out.a_scal.real()))
                throw DomainError("wishart_joint_laplace: A^{22} inversion failure");
            return out;
        }
        if (attempt >= 6)
            throw singular
                ? static_cast<const Error&>(DomainError("wishart_joint_laplace: A^{22} singular on [0, tau]"))
                : static_cast<const Error&>(BranchError("wishart_joint_laplace: trace-log branch tracking failed"));
        n *= 2;
    }
}

// ---- per-model characteristic function pieces --------------------------------

Complex cf_impl(const ModelSpec& m, double tau, Complex z, Complex w);

// numeric probe of the analyticity boundary along one imaginary axis
double probe_bound(const ModelSpec& m, double tau, bool z_axis, double dir, double cap) {
    auto ok = [&](double b) -> bool {
        try {
            const Complex arg(0.0, dir * b);
            const Complex v = z_axis ? cf_impl(m, tau, arg, 0.0) : cf_impl(m, tau, 0.0, arg);
            return std::isfinite(v.real()) && std::isfinite(v.imag());
        } catch (const Error&) {
            return false;
        }
    };
    if (ok(cap)) return cap;
    double lo = 0.0, hi = cap;
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

Complex lam_continuous(Complex z, Complex w) { return z * z / 2.0 + kI * z / 2.0 - kI * w; }

Complex lam_jump(const levy::JumpSpec& jumps, Complex z, Complex w) {
    return kI * z * levy::jump_kappa(jumps) - levy::phi_joint_jump(jumps, z, w) + 1.0;
}

std::string model_name(const ModelSpec& m) {
    struct V {
        std::string operator()(const BlackScholes&) { return "black-scholes"; }
        std::string operator()(const Heston&) { return "heston"; }
        std::string operator()(const Merton&) { return "merton"; }
        std::string operator()(const Kou&) { return "kou"; }
        std::string operator()(const Cgmy&) { return "cgmy"; }
        std::string operator()(const Bates&) { return "bates"; }
        std::string operator()(const Fang&) { return "fang"; }
        std::string operator()(const WishartDtc&) { return "wishart"; }
    };
    return std::visit(V{}, m);
}

namespace {

void validate_cir(const CirParams& p, const std::string& who) {
    if (!(p.alpha > 0.0)) throw ValidationError(who + ": mean-reversion alpha must be > 0");
    if (!(p.theta > 0.0)) throw ValidationError(who + ": long-run level theta must be > 0");
    if (!(p.eta > 0.0)) throw ValidationError(who + ": vol-of-vol eta must be > 0");
    if (!(p.v0 > 0.0)) throw ValidationError(who + ": initial state v0 must be > 0");
    if (!(p.rho >= -1.0 && p.rho <= 1.0)) throw ValidationError(who + ": rho must lie in [-1, 1]");
    if (2.0 * p.alpha * p.theta < p.eta * p.eta)
        throw ValidationError(who + ": Feller condition violated (2 alpha theta < eta^2)");
}

} // namespace

void validate(const ModelSpec& m) {
    std::visit(
        [](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BlackScholes>) {
                if (!(spec.sigma >= 0.0)) throw ValidationError("black-scholes: sigma must be >= 0");
            } else if constexpr (std::is_same_v<T, Heston>) {
                validate_cir(spec.cir, "heston");
            } else if constexpr (std::is_same_v<T, Merton>) {
                if (!(spec.sigma >= 0.0)) throw ValidationError("merton: sigma must be >= 0");
                levy::validate(levy::JumpSpec{spec.jumps});
            } else if constexpr (std::is_same_v<T, Kou>) {
                if (!(spec.sigma >= 0.0)) throw ValidationError("kou: sigma must be >= 0");
                levy::validate(levy::JumpSpec{spec.jumps});
            } else if constexpr (std::is_same_v<T, Cgmy>) {
                levy::validate(levy::JumpSpec{spec.jumps});
                if (!(spec.jumps.beta_plus > 1.0))
                    throw ValidationError("cgmy: beta+ must exceed 1 for the price martingale");
            } else if constexpr (std::is_same_v<T, Bates>) {
                validate_cir(spec.cir, "bates");
                levy::validate(levy::JumpSpec{spec.jumps});
            } else if constexpr (std::is_same_v<T, Fang>) {
                validate_cir(spec.var_process, "fang variance process");
                validate_cir(spec.intensity_process, "fang intensity process");
                if (spec.intensity_process.rho != 0.0)
                    throw ValidationError("fang: intensity process must be uncorrelated (rho = 0)");
                levy::validate(levy::JumpSpec{spec.jumps});
            } else {
                const WishartParams& p = spec.p;
                if (std::abs(p.q_mat.determinant()) < 1e-12)
                    throw ValidationError("wishart: Q must be invertible");
                const Matrix2d sym = 0.5 * (p.m_mat + p.m_mat.transpose());
                const Eigen::SelfAdjointEigenSolver<Matrix2d> es_m(sym);
                if (es_m.eigenvalues().maxCoeff() >= 0.0)
                    throw ValidationError("wishart: M must be negative definite");
                if (!(p.c >= 1.0)) throw ValidationError("wishart: requires c >= n - 1 = 1");
                if ((p.sigma0 - p.sigma0.transpose()).norm() > 1e-12)
                    throw ValidationError("wishart: Sigma0 must be symmetric");
                const Eigen::SelfAdjointEigenSolver<Matrix2d> es_s(p.sigma0);
                if (es_s.eigenvalues().minCoeff() <= 0.0)
                    throw ValidationError("wishart: Sigma0 must be positive definite");
                if (!(p.rho >= -1.0 && p.rho <= 1.0))
                    throw ValidationError("wishart: rho must lie in [-1, 1]");
                if (p.jumps.lambda != 1.0)
                    throw ValidationError("wishart: jump base intensity must be 1 (time change carries the rate)");
                levy::validate(levy::JumpSpec{p.jumps});
            }
        },
        m);
}

Complex cir_integrated_laplace(const CirParamsC& p, double tau, Complex lam) {
    if (!(tau > 0.0)) throw DomainError("cir_integrated_laplace: tau must be > 0");
    const CirEval e = cir_eval(p, tau, lam);
    return std::exp(-e.a_coef * p.v0 - e.b_coef);
}

Complex cir_laplace_via_ode(const CirParamsC& p, double tau, Complex lam, double tol) {
    if (!(tau > 0.0)) throw DomainError("cir_laplace_via_ode: tau must be > 0");
    const CirEval e = cir_ode_eval(p, tau, lam, tol);
    return std::exp(-e.a_coef * p.v0 - e.b_coef);
}

CirParamsC leverage_neutral_cir(const CirParams& p, Complex z) {
    const Complex az = p.alpha - kI * p.rho * z * p.eta;
    if (std::abs(az) < 1e-14)
        throw DomainError("leverage_neutral_cir: alpha^z = 0 singularity");
    return CirParamsC{az, p.alpha * p.theta / az, p.eta, p.v0};
}

Complex wishart_joint_laplace(const WishartParams& p, double tau, Complex z, Complex lam1,
                              Complex lam2) {
    if (!(tau > 0.0)) throw DomainError("wishart_joint_laplace: tau must be > 0");
    const WishartEval e = wishart_eval(p, tau, z, lam1, lam2);
    const Complex tr = (e.a_mat * p.sigma0.cast<Complex>()).trace();
    return std::exp(-e.a_scal - tr);
}

Complex wishart_a_scalar(const WishartParams& p, double tau, Complex z, Complex lam1, Complex lam2) {
    if (tau == 0.0) return 0.0;
    return wishart_eval(p, tau, z, lam1, lam2).a_scal;
}

namespace {

Complex cf_impl(const ModelSpec& m, double tau, Complex z, Complex w) {
    return std::visit(
        [&](const auto& spec) -> Complex {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, BlackScholes>) {
                const levy::LevySpec ls{0.0, spec.sigma, levy::NoJumps{}};
                return std::exp(-tau * levy::zeta(z, w, ls));
            } else if constexpr (std::is_same_v<T, Heston>) {
                return cir_integrated_laplace(leverage_neutral_cir(spec.cir, z), tau,
                                              lam_continuous(z, w));
            } else if constexpr (std::is_same_v<T, Merton>) {
                const levy::LevySpec ls{0.0, spec.sigma, spec.jumps};
                return std::exp(-tau * (levy::zeta(z, w, ls) + levy::xi(z, w, ls)));
            } else if constexpr (std::is_same_v<T, Kou>) {
                const levy::LevySpec ls{0.0, spec.sigma, spec.jumps};
                return std::exp(-tau * (levy::zeta(z, w, ls) + levy::xi(z, w, ls)));
            } else if constexpr (std::is_same_v<T, Cgmy>) {
                const levy::LevySpec ls{0.0, 0.0, spec.jumps};
                return std::exp(-tau * levy::xi(z, w, ls));
            } else if constexpr (std::is_same_v<T, Bates>) {
                const Complex diff =
                    cir_integrated_laplace(leverage_neutral_cir(spec.cir, z), tau, lam_continuous(z, w));
                const Complex xij = spec.jumps.lambda * lam_jump(levy::JumpSpec{spec.jumps}, z, w);
                return diff * std::exp(-tau * xij);
            } else if constexpr (std::is_same_v<T, Fang>) {
                const Complex diff = cir_integrated_laplace(leverage_neutral_cir(spec.var_process, z),
                                                            tau, lam_continuous(z, w));
                // W^3 is independent of everything, so the jump clock keeps its
                // original-measure parameters: no leverage shift.
                const CirParamsC lam_p{spec.intensity_process.alpha, spec.intensity_process.theta,
                                       spec.intensity_process.eta, spec.intensity_process.v0};
                const Complex ju =
                    cir_integrated_laplace(lam_p, tau, lam_jump(levy::JumpSpec{spec.jumps}, z, w));
                return diff * ju;
            } else {
                const WishartParams& p = spec.p;
                return wishart_joint_laplace(p, tau, z, lam_continuous(z, w),
                                             lam_jump(levy::JumpSpec{p.jumps}, z, w));
            }
        },
        m);
}

} // namespace

Complex cf(const ModelSpec& m, double tau, Complex z, Complex w) {
    if (!(tau > 0.0)) throw DomainError("cf: tau must be > 0");
    return cf_impl(m, tau, z, w);
}

ComplexStrip strip_of_analyticity(const ModelSpec& m, double tau) {
    ComplexStrip s{-kInf, kInf, -kInf, kInf};
    // analytic jump-part bounds
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, Merton> || std::is_same_v<T, Bates> ||
                          std::is_same_v<T, Fang>) {
                const double d = spec.jumps.delta;
                if (d > 0.0) s.w_lo = -1.0 / (2.0 * d * d);
            } else if constexpr (std::is_same_v<T, WishartDtc>) {
                const double d = spec.p.jumps.delta;
                if (d > 0.0) s.w_lo = -1.0 / (2.0 * d * d);
            } else if constexpr (std::is_same_v<T, Kou>) {
                s.w_lo = 0.0;
                s.z_lo = -spec.jumps.alpha;
                s.z_hi = spec.jumps.beta;
            } else if constexpr (std::is_same_v<T, Cgmy>) {
                s.w_lo = 0.0;
                s.z_lo = -spec.jumps.beta_plus;
                s.z_hi = spec.jumps.beta_minus;
            }
        },
        m);
    // activity-rate explosion bounds, probed and shrunk by 10%
    const bool has_rate = std::holds_alternative<Heston>(m) || std::holds_alternative<Bates>(m) ||
                          std::holds_alternative<Fang>(m) || std::holds_alternative<WishartDtc>(m);
    if (has_rate) {
        constexpr double kCapZ = 64.0, kCapW = 512.0;
        const double zp = probe_bound(m, tau, true, +1.0, kCapZ);
        const double zm = probe_bound(m, tau, true, -1.0, kCapZ);
        const double wm = probe_bound(m, tau, false, -1.0, kCapW);
        s.z_hi = std::min(s.z_hi, zp >= kCapZ ? kInf : 0.9 * zp);
        s.z_lo = std::max(s.z_lo, zm >= kCapZ ? -kInf : -0.9 * zm);
        s.w_lo = std::max(s.w_lo, wm >= kCapW ? -kInf : -0.9 * wm);
        // upward w direction never explodes: Re(lam) >= 0 there
    }
    return s;
}

double activity_rate_correlation(const WishartParams& p, const Matrix2d& sigma_t) {
    const double s11 = sigma_t(0, 0), s22 = sigma_t(1, 1), s12 = sigma_t(0, 1);
    const double q1 = p.q_mat(0, 0) * p.q_mat(0, 0) + p.q_mat(1, 0) * p.q_mat(1, 0);
    const double q2 = p.q_mat(0, 1) * p.q_mat(0, 1) + p.q_mat(1, 1) * p.q_mat(1, 1);
    if (!(s11 > 0.0 && s22 > 0.0) || q1 <= 0.0 || q2 <= 0.0)
        throw DomainError("activity_rate_correlation: degenerate state");
    const double qq = p.q_mat(0, 0) * p.q_mat(0, 1) + p.q_mat(1, 0) * p.q_mat(1, 1);
    return s12 * qq / (std::sqrt(s11 * q1) * std::sqrt(s22 * q2));
}

std::optional<Complex> cf_state_log_deriv(const ModelSpec& m, double tau, Complex z, Complex w,
                                          ActivityState which) {
    return std::visit(
        [&](const auto& spec) -> std::optional<Complex> {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, Heston> || std::is_same_v<T, Bates>) {
                if (which != ActivityState::V0) return Complex(0.0);
                const CirEval e = cir_eval(leverage_neutral_cir(spec.cir, z), tau, lam_continuous(z, w));
                return -e.a_coef;
            } else if constexpr (std::is_same_v<T, Fang>) {
                if (which == ActivityState::V0) {
                    const CirEval e =
                        cir_eval(leverage_neutral_cir(spec.var_process, z), tau, lam_continuous(z, w));
                    return -e.a_coef;
                }
                if (which == ActivityState::Lambda0) {
                    const CirParamsC lam_p{spec.intensity_process.alpha, spec.intensity_process.theta,
                                           spec.intensity_process.eta, spec.intensity_process.v0};
                    const CirEval e = cir_eval(lam_p, tau, lam_jump(levy::JumpSpec{spec.jumps}, z, w));
                    return -e.a_coef;
                }
                return Complex(0.0);
            } else if constexpr (std::is_same_v<T, WishartDtc>) {
                const WishartParams& p = spec.p;
                if (which != ActivityState::Sigma0_11 && which != ActivityState::Sigma0_12 &&
                    which != ActivityState::Sigma0_22)
                    return Complex(0.0);
                const WishartEval e = wishart_eval(p, tau, z, lam_continuous(z, w),
                                                   lam_jump(levy::JumpSpec{p.jumps}, z, w));
                if (which == ActivityState::Sigma0_11) return -e.a_mat(0, 0);
                if (which == ActivityState::Sigma0_22) return -e.a_mat(1, 1);
                return -(e.a_mat(0, 1) + e.a_mat(1, 0));
            } else {
                return Complex(0.0); // no stochastic activity state
            }
        },
        m);
}

} // namespace dtcp::models
