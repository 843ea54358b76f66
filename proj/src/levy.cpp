#include "dtcp/levy.hpp"

#include <cmath>

#include "dtcp/errors.hpp"
#include "dtcp/quadrature.hpp"
#include "dtcp/special_functions.hpp"

namespace dtcp::levy {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kSqrtPi = 1.772453850905516027298167483341145183;

double real_gamma(double x) { return std::tgamma(x); }

// ---- CGMY pieces -----------------------------------------------------------

// Fully compensated 1D exponent: integral over (0, inf) of
// (e^{i theta x} - 1 - i theta x) c e^{-beta x} x^{-1-alpha} dx.
Complex cgmy_psi_full_one_side(double c, double beta, double alpha, Complex theta) {
    const Complex u = 1.0 - kI * theta / beta;
    if (u.real() <= 0.0 && std::abs(u.imag()) < 1e-14)
        throw DomainError("cgmy: theta outside the convergence strip");
    return real_gamma(-alpha) * std::pow(beta, alpha) * c *
           (std::pow(u, alpha) - 1.0 + kI * theta * alpha / beta);
}

Complex cgmy_psi_full(const CgmyJumps& j, Complex theta) {
    return cgmy_psi_full_one_side(j.c_plus, j.beta_plus, j.alpha_plus, theta) +
           cgmy_psi_full_one_side(j.c_minus, j.beta_minus, j.alpha_minus, -theta);
}

// integral over (0, inf) of x^{nu - 1} e^{-p x^2 - q x} dx, continued in nu.
Complex f_cont(Complex nu, Complex p, Complex q) {
    const Complex arg = q * q / (4.0 * p);
    const Complex t1 =
        0.5 * std::pow(p, -nu / 2.0) * sf::gamma_fn(nu / 2.0) * sf::hyp1f1(nu / 2.0, 0.5, arg);
    const Complex t2 = 0.5 * q * std::pow(p, -(nu + 1.0) / 2.0) * sf::gamma_fn((nu + 1.0) / 2.0) *
                       sf::hyp1f1((nu + 1.0) / 2.0, 1.5, arg);
    return t1 - t2;
}

// Fully compensated joint exponent, positive side: integral over (0, inf) of
// (e^{i z x + i w x^2} - 1 - i z x - i w x^2) c e^{-beta x} x^{-1-alpha} dx.
Complex cgmy_psi_fullD_one_side(double c, double beta, double alpha, Complex z, Complex w) {
    if (w.imag() < -1e-14)
        throw DomainError("cgmy psi_D: requires Im(w) >= 0");
    if (z.imag() <= -beta)
        throw DomainError("cgmy psi_D: requires Im(z) > -beta");
    if (std::abs(w) < 1e-14)
        return cgmy_psi_full_one_side(c, beta, alpha, z);
    const Complex p = -kI * w;
    const Complex q = beta - kI * z;
    Complex v = f_cont(Complex(-alpha, 0.0), p, q);
    v -= real_gamma(-alpha) * std::pow(beta, alpha);
    v -= kI * z * real_gamma(1.0 - alpha) * std::pow(beta, alpha - 1.0);
    v -= kI * w * real_gamma(2.0 - alpha) * std::pow(beta, alpha - 2.0);
    return c * v;
}

Complex cgmy_psi_fullD(const CgmyJumps& j, Complex z, Complex w) {
    return cgmy_psi_fullD_one_side(j.c_plus, j.beta_plus, j.alpha_plus, z, w) +
           cgmy_psi_fullD_one_side(j.c_minus, j.beta_minus, j.alpha_minus, -z, w);
}

// integral over (1, inf) of x nu(dx); finite for any tempering beta > 0.
double cgmy_tail_first_moment(const CgmyJumps& j) {
    auto side = [](double c, double beta, double alpha) {
        const double xmax = 1.0 + 50.0 / beta;
        auto f = [=](double x) { return Complex(c * std::exp(-beta * x) * std::pow(x, -alpha), 0.0); };
        quad::AdaptiveOptions opt;
        opt.rel_tol = 1e-13;
        return quad::integrate_adaptive(f, 1.0, xmax, opt).value.real();
    };
    return side(j.c_plus, j.beta_plus, j.alpha_plus) - side(j.c_minus, j.beta_minus, j.alpha_minus);
}

double cgmy_second_moment(const CgmyJumps& j) {
    return j.c_plus * real_gamma(2.0 - j.alpha_plus) * std::pow(j.beta_plus, j.alpha_plus - 2.0) +
           j.c_minus * real_gamma(2.0 - j.alpha_minus) * std::pow(j.beta_minus, j.alpha_minus - 2.0);
}

// ---- compound-Poisson joint jump transforms --------------------------------

Complex phi_jj_normal(const NormalJumps& j, Complex z, Complex w) {
    const double d2 = j.delta * j.delta;
    const Complex den = 1.0 - 2.0 * kI * d2 * w;
    if (den.real() <= 0.0)
        throw DomainError("phi_joint_jump: Im(w) <= -1/(2 delta^2), outside the Normal strip");
    const Complex num = kI * j.m * z - d2 * z * z / 2.0 + kI * j.m * j.m * w;
    return std::exp(num / den) / std::sqrt(den);
}

// E[e^{izJ + iwJ^2}] restricted to one exponential tail with rate a and mass m0:
// m0 a sqrt(pi) erfcx((a - iz) / (2 sqrt(-iw))) / (2 sqrt(-iw)).
Complex phi_jj_exp_tail(double m0, double a, Complex z, Complex w) {
    if (std::abs(w) < 1e-14 * (1.0 + std::norm(z))) {
        const Complex den = a - kI * z;
        if (den.real() <= 0.0)
            throw DomainError("phi_joint_jump: Im(z) outside the double-exponential strip");
        return m0 * a / den;
    }
    if (w.imag() < -1e-14)
        throw DomainError("phi_joint_jump: Im(w) < 0, outside the double-exponential strip");
    const Complex s = 2.0 * std::sqrt(-kI * w);
    const Complex y = (a - kI * z) / s;
    return m0 * a * kSqrtPi * sf::erfcx(y) / s;
}

Complex phi_jj_double_exp(const DoubleExpJumps& j, Complex z, Complex w) {
    // negative tail via x -> -x: positive-tail formula with (z, rate, mass) -> (-z, beta, q)
    return phi_jj_exp_tail(j.p, j.alpha, z, w) + phi_jj_exp_tail(1.0 - j.p, j.beta, -z, w);
}

// ---- quadrature oracle ------------------------------------------------------

// outward integration radius for envelope exp(-a x^2 + b x) < 1e-22
double envelope_radius(double a, double b) {
    constexpr double kLogCut = 50.0;
    if (a <= 0.0) {
        if (b >= 0.0) throw DomainError("psi_D_quadrature: divergent integrand");
        return kLogCut / (-b);
    }
    return (b + std::sqrt(b * b + 4.0 * a * kLogCut)) / (2.0 * a) * 1.2 + 1.0;
}

Complex quad_normal(const NormalJumps& j, Complex z, Complex w, double abs_tol) {
    if (j.lambda == 0.0) return 0.0;
    const double d2 = j.delta * j.delta;
    const double a = 1.0 / (2.0 * d2) + w.imag();
    if (a <= 0.0) throw DomainError("psi_D_quadrature: Im(w) <= -1/(2 delta^2)");
    const double b = std::abs(z.imag()) + std::abs(j.m) / d2;
    const double R = envelope_radius(a, b);
    const double norm_c = 1.0 / (j.delta * std::sqrt(2.0 * 3.141592653589793));
    auto f = [&](double x) {
        const double g = std::exp(-(x - j.m) * (x - j.m) / (2.0 * d2)) * norm_c;
        return (std::exp(kI * z * x + kI * w * x * x) - 1.0) * j.lambda * g;
    };
    quad::AdaptiveOptions opt;
    opt.abs_tol = abs_tol / 2.0;
    opt.rel_tol = 1e-12;
    opt.max_intervals = 2000;
    auto r = quad::integrate_adaptive(f, j.m - R, j.m + R, opt);
    if (!r.converged)
        throw ConvergenceError("psi_D_quadrature: adaptive integral not converged, err=" +
                               std::to_string(r.err));
    return r.value;
}

// one exponential tail of the Kou density
Complex quad_exp_tail(double lambda_m0, double rate, Complex z, Complex w, double abs_tol) {
    const double a = w.imag();
    const double b = z.imag() - rate; // envelope exp(b x - a x^2)
    const double R = envelope_radius(a, b);
    auto f = [&](double x) {
        return (std::exp(kI * z * x + kI * w * x * x) - 1.0) * lambda_m0 * rate * std::exp(-rate * x);
    };
    quad::AdaptiveOptions opt;
    opt.abs_tol = abs_tol / 2.0;
    opt.rel_tol = 1e-12;
    opt.max_intervals = 4000;
    auto r = quad::integrate_adaptive(f, 0.0, R, opt);
    if (!r.converged)
        throw ConvergenceError("psi_D_quadrature: adaptive integral not converged, err=" +
                               std::to_string(r.err));
    return r.value;
}

// CGMY one-sided integral of (e^{izx+iwx^2} - 1 - izx 1_{x<=1}) c e^{-bx} x^{-1-al}:
// analytic series head on [0, eps], adaptive on [eps, 1] and [1, R].
Complex quad_cgmy_one_side(double c, double beta, double alpha, Complex z, Complex w, double abs_tol) {
    if (w.imag() < -1e-14) throw DomainError("psi_D_quadrature: Im(w) < 0 for CGMY");
    if (z.imag() <= -beta) throw DomainError("psi_D_quadrature: Im(z) <= -beta for CGMY");
    constexpr double kEps = 0.125;
    constexpr int kTerms = 36;
    // series of e^{Ax + Bx^2} - (1 + izx) e^{-beta x} in powers of x
    const Complex A = kI * z - beta, B = kI * w;
    Complex coeff[kTerms + 1] = {};
    {
        Complex bpow[kTerms + 1];
        bpow[0] = 1.0;
        for (int n = 1; n <= kTerms; ++n) bpow[n] = bpow[n - 1] * B / static_cast<double>(n);
        Complex apow = 1.0;
        for (int m = 0; m <= kTerms; ++m) {
            for (int n = 0; 2 * n + m <= kTerms; ++n) coeff[m + 2 * n] += apow * bpow[n];
            apow *= A / static_cast<double>(m + 1);
        }
        double ebp = 1.0;
        for (int k = 0; k <= kTerms; ++k) {
            Complex s = ebp; // (-beta)^k / k!
            if (k >= 1) s += kI * z * ebp * static_cast<double>(k) / (-beta);
            coeff[k] -= s;
            ebp *= -beta / static_cast<double>(k + 1);
        }
    }
    Complex head = 0.0;
    for (int k = 0; k <= kTerms; ++k)
        head += coeff[k] * std::pow(kEps, static_cast<double>(k) - alpha) / (static_cast<double>(k) - alpha);
    head *= c;

    auto nu = [=](double x) { return c * std::exp(-beta * x) * std::pow(x, -1.0 - alpha); };
    auto f_mid = [&](double x) {
        return (std::exp(kI * z * x + kI * w * x * x) - 1.0 - kI * z * x) * nu(x);
    };
    auto f_tail = [&](double x) { return (std::exp(kI * z * x + kI * w * x * x) - 1.0) * nu(x); };
    const double a_env = w.imag();
    const double b_env = z.imag() - beta;
    const double R = std::max(envelope_radius(a_env, b_env), 2.0);
    quad::AdaptiveOptions opt;
    opt.abs_tol = abs_tol / 6.0;
    opt.rel_tol = 1e-12;
    opt.max_intervals = 4000;
    auto mid = quad::integrate_adaptive(f_mid, kEps, 1.0, opt);
    auto tail = quad::integrate_adaptive(f_tail, 1.0, R, opt);
    if (!mid.converged || !tail.converged)
        throw ConvergenceError("psi_D_quadrature: CGMY segments not converged, err=" +
                               std::to_string(mid.err + tail.err));
    return head + mid.value + tail.value;
}

} // namespace

NormalJumps normal_jumps_from_kappa(double kappa, double delta, double lambda) {
    if (1.0 + kappa <= 0.0)
        throw ValidationError("normal_jumps_from_kappa: requires kappa > -1");
    return NormalJumps{std::log(1.0 + kappa) - delta * delta / 2.0, delta, lambda};
}

void validate(const JumpSpec& spec) {
    std::visit(
        [](const auto& j) {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NormalJumps>) {
                if (j.lambda < 0.0) throw ValidationError("NormalJumps: intensity lambda must be >= 0");
                if (j.delta < 0.0) throw ValidationError("NormalJumps: delta must be >= 0");
            } else if constexpr (std::is_same_v<T, DoubleExpJumps>) {
                if (j.lambda < 0.0) throw ValidationError("DoubleExpJumps: intensity lambda must be >= 0");
                if (!(j.p > 0.0 && j.p < 1.0)) throw ValidationError("DoubleExpJumps: p must lie in (0,1)");
                if (!(j.alpha > 1.0)) throw ValidationError("DoubleExpJumps: up-rate alpha must be > 1");
                if (!(j.beta > 0.0)) throw ValidationError("DoubleExpJumps: down-rate beta must be > 0");
            } else if constexpr (std::is_same_v<T, CgmyJumps>) {
                if (!(j.c_plus > 0.0 && j.c_minus > 0.0))
                    throw ValidationError("CgmyJumps: c+ and c- must be > 0");
                if (!(j.beta_plus > 0.0 && j.beta_minus > 0.0))
                    throw ValidationError("CgmyJumps: beta+ and beta- must be > 0");
                for (double a : {j.alpha_plus, j.alpha_minus}) {
                    if (!(a < 2.0)) throw ValidationError("CgmyJumps: alpha must be < 2");
                    if (a == 0.0 || a == 1.0)
                        throw ValidationError("CgmyJumps: alpha must not equal 0 or 1");
                }
            }
        },
        spec);
}

double jump_kappa(const JumpSpec& spec) {
    return std::visit(
        [](const auto& j) -> double {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NormalJumps>) {
                return std::exp(j.m + j.delta * j.delta / 2.0) - 1.0;
            } else if constexpr (std::is_same_v<T, DoubleExpJumps>) {
                return j.p * j.alpha / (j.alpha - 1.0) + (1.0 - j.p) * j.beta / (j.beta + 1.0) - 1.0;
            } else {
                throw DomainError("jump_kappa: undefined for infinite-activity spec");
            }
        },
        spec);
}

double jump_variance_rate(const JumpSpec& spec) {
    return std::visit(
        [](const auto& j) -> double {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NormalJumps>) {
                return j.lambda * (j.m * j.m + j.delta * j.delta);
            } else if constexpr (std::is_same_v<T, DoubleExpJumps>) {
                return j.lambda * (2.0 * j.p / (j.alpha * j.alpha) + 2.0 * (1.0 - j.p) / (j.beta * j.beta));
            } else {
                return cgmy_second_moment(j);
            }
        },
        spec);
}

Complex psi_continuous(const LevySpec& spec, Complex theta) {
    return kI * spec.mu * theta - spec.sigma * spec.sigma * theta * theta / 2.0;
}

Complex psi_jump(const JumpSpec& spec, Complex theta) {
    return std::visit(
        [&](const auto& j) -> Complex {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NormalJumps>) {
                const Complex phi = std::exp(kI * j.m * theta - j.delta * j.delta * theta * theta / 2.0);
                return j.lambda * (phi - 1.0);
            } else if constexpr (std::is_same_v<T, DoubleExpJumps>) {
                if (!(theta.imag() > -j.alpha && theta.imag() < j.beta))
                    throw DomainError("psi_jump: theta outside the double-exponential strip");
                const Complex phi =
                    j.p * j.alpha / (j.alpha - kI * theta) + (1.0 - j.p) * j.beta / (j.beta + kI * theta);
                return j.lambda * (phi - 1.0);
            } else {
                if (!(theta.imag() > -j.beta_plus && theta.imag() < j.beta_minus))
                    throw DomainError("psi_jump: theta outside the CGMY strip");
                return cgmy_psi_full(j, theta) + kI * theta * cgmy_tail_first_moment(j);
            }
        },
        spec);
}

Complex phi_joint_jump(const JumpSpec& spec, Complex z, Complex w) {
    return std::visit(
        [&](const auto& j) -> Complex {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return 1.0;
            } else if constexpr (std::is_same_v<T, NormalJumps>) {
                return phi_jj_normal(j, z, w);
            } else if constexpr (std::is_same_v<T, DoubleExpJumps>) {
                return phi_jj_double_exp(j, z, w);
            } else {
                throw DomainError("phi_joint_jump: not a compound-Poisson spec");
            }
        },
        spec);
}

Complex psi_D(const JumpSpec& spec, Complex z, Complex w) {
    return std::visit(
        [&](const auto& j) -> Complex {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NormalJumps> || std::is_same_v<T, DoubleExpJumps>) {
                return j.lambda * (phi_joint_jump(spec, z, w) - 1.0);
            } else {
                return cgmy_psi_fullD(j, z, w) + kI * z * cgmy_tail_first_moment(j) +
                       kI * w * cgmy_second_moment(j);
            }
        },
        spec);
}

Complex psi_D_quadrature(const JumpSpec& spec, Complex z, Complex w, double abs_tol) {
    return std::visit(
        [&](const auto& j) -> Complex {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NormalJumps>) {
                return quad_normal(j, z, w, abs_tol);
            } else if constexpr (std::is_same_v<T, DoubleExpJumps>) {
                return quad_exp_tail(j.lambda * j.p, j.alpha, z, w, abs_tol) +
                       quad_exp_tail(j.lambda * (1.0 - j.p), j.beta, -z, w, abs_tol);
            } else {
                return quad_cgmy_one_side(j.c_plus, j.beta_plus, j.alpha_plus, z, w, abs_tol) +
                       quad_cgmy_one_side(j.c_minus, j.beta_minus, j.alpha_minus, -z, w, abs_tol);
            }
        },
        spec);
}

Complex zeta(Complex z, Complex w, const LevySpec& spec) {
    const double s2 = spec.sigma * spec.sigma;
    return kTheta0 * spec.mu * (z - kI * z) -
           kTheta0 * kTheta0 * s2 * (z * z + kI * z - 2.0 * kI * w) / 2.0;
}

Complex xi(Complex z, Complex w, const LevySpec& spec) {
    return std::visit(
        [&](const auto& j) -> Complex {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, NormalJumps> || std::is_same_v<T, DoubleExpJumps>) {
                const double kap = jump_kappa(spec.jumps);
                return j.lambda * (kI * z * kap - phi_joint_jump(spec.jumps, z, w) + 1.0);
            } else {
                // i z psi_jump(-i) - psi_D(z, w); the tail first-moment terms cancel
                // exactly, so only the fully compensated pieces and the raw
                // second-moment rate survive.
                return kI * z * cgmy_psi_full(j, kTheta0) - cgmy_psi_fullD(j, z, w) -
                       kI * w * cgmy_second_moment(j);
            }
        },
        spec.jumps);
}

} // namespace dtcp::levy
