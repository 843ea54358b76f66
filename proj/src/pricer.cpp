#include "dtcp/pricer.hpp"

#include <cmath>

#include "dtcp/errors.hpp"

namespace dtcp::pricer {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kPi = 3.141592653589793238462643383279502884;

double pick_interior(double lo, double hi, double clamp_lo, double clamp_hi) {
    const double wlo = std::max(lo, clamp_lo);
    const double whi = std::min(hi, clamp_hi);
    if (wlo < whi) return 0.5 * (wlo + whi);
    // admissible interval lies outside the clamp window
    if (std::isinf(lo) && std::isinf(hi)) return 0.5 * (clamp_lo + clamp_hi);
    if (std::isinf(hi)) return lo + 0.5 * (clamp_hi - clamp_lo);
    if (std::isinf(lo)) return hi - 0.5 * (clamp_hi - clamp_lo);
    return 0.5 * (lo + hi);
}

struct Kernel {
    std::function<Complex(Complex z, Complex w)> f; // extra factor inside the integrand
};

PricingResult invert(const models::ModelSpec& model, const MarketState& mkt,
                     const payoffs::Contract& c, const QuadConfig& cfg, const Kernel* kernel) {
    payoffs::validate(c);
    validate(mkt);
    models::validate(model);
    const double tau = c.maturity - mkt.t0;
    if (!(tau > 0.0)) throw ValidationError("price: contract maturity must exceed t0");

    const payoffs::FourierPayoff fp = payoffs::fourier_transform(c);
    const models::ComplexStrip ms = models::strip_of_analyticity(model, tau);
    auto [k1, k2] = select_contour(fp.strip, ms, fp.dim);
    if (cfg.k1) k1 = *cfg.k1;
    if (cfg.k2) k2 = *cfg.k2;

    const double disc = std::exp(-mkt.rate * tau);
    const double log_s = std::log(mkt.spot);
    long evals = 0;
    bool budget_ok = true;

    auto point = [&](Complex z, Complex w) -> Complex {
        if (++evals > cfg.max_evals) {
            budget_ok = false;
            return 0.0;
        }
        Complex v = std::exp(-kI * z * (log_s + mkt.rate * tau) - kI * w * mkt.accrued_tv) *
                    models::cf(model, tau, -z, -w) * fp.transform(z, w);
        if (kernel) v *= kernel->f(z, w);
        return v;
    };

    quad::HalflineOptions hopt;
    hopt.trunc_threshold = cfg.trunc_threshold;
    hopt.max_evals = cfg.max_evals;

    PricingResult out;
    out.k1 = k1;
    out.k2 = k2;

    if (fp.dim == payoffs::PayoffDim::ZOnly) {
        hopt.rel_tol = cfg.rel_tol_1d;
        auto g = [&](double x) { return point(Complex(x, k1), 0.0); };
        auto q = quad::integrate_halfline(g, 0.0, +1, 4.0, hopt);
        out.price = disc / kPi * q.value.real(); // 2 Re / (2 pi)
        out.err_estimate = disc / kPi * q.err;
        out.converged = q.converged;
    } else if (fp.dim == payoffs::PayoffDim::WOnly) {
        hopt.rel_tol = cfg.rel_tol_1d;
        auto g = [&](double x) { return point(0.0, Complex(x, k2)); };
        auto q = quad::integrate_halfline(g, 0.0, +1, 4.0, hopt);
        out.price = disc / kPi * q.value.real();
        out.err_estimate = disc / kPi * q.err;
        out.converged = q.converged;
    } else {
        hopt.rel_tol = cfg.rel_tol_2d;
        quad::HalflineOptions inner_opt = hopt;
        inner_opt.rel_tol = cfg.rel_tol_2d * 0.1;
        bool inner_ok = true;
        auto g = [&](double xw) {
            const Complex w(xw, k2);
            auto inner = [&](double xz) { return point(Complex(xz, k1), w); };
            auto qi = quad::integrate_line(inner, 0.0, 4.0, inner_opt);
            inner_ok = inner_ok && qi.converged;
            return qi.value;
        };
        auto q = quad::integrate_halfline(g, 0.0, +1, 4.0, hopt);
        out.price = disc / (2.0 * kPi * kPi) * q.value.real(); // 2 Re / (4 pi^2)
        out.err_estimate = disc / (2.0 * kPi * kPi) * q.err;
        out.converged = q.converged && inner_ok;
    }
    out.evals = evals;
    out.converged = out.converged && budget_ok;
    return out;
}

} // namespace

void validate(const MarketState& m) {
    if (!(m.spot > 0.0)) throw ValidationError("market: spot must be > 0");
    if (!(m.accrued_tv >= 0.0)) throw ValidationError("market: accrued total variance must be >= 0");
}

std::pair<double, double> select_contour(const models::ComplexStrip& payoff_strip,
                                         const models::ComplexStrip& model_strip,
                                         payoffs::PayoffDim dim) {
    double k1 = 0.0, k2 = 0.0;
    if (dim != payoffs::PayoffDim::WOnly) {
        const double lo = std::max(payoff_strip.z_lo, -model_strip.z_hi);
        const double hi = std::min(payoff_strip.z_hi, -model_strip.z_lo);
        if (!(lo < hi))
            throw ContourError("select_contour: empty z-strip intersection, payoff needs Im(z) in (" +
                               std::to_string(payoff_strip.z_lo) + ", " + std::to_string(payoff_strip.z_hi) +
                               ") but the model admits (" + std::to_string(-model_strip.z_hi) + ", " +
                               std::to_string(-model_strip.z_lo) + ")");
        k1 = pick_interior(lo, hi, 1.25, 2.5);
    }
    if (dim != payoffs::PayoffDim::ZOnly) {
        const double lo = std::max(payoff_strip.w_lo, -model_strip.w_hi);
        const double hi = std::min(payoff_strip.w_hi, -model_strip.w_lo);
        if (!(lo < hi))
            throw ContourError("select_contour: empty w-strip intersection, payoff needs Im(w) in (" +
                               std::to_string(payoff_strip.w_lo) + ", " + std::to_string(payoff_strip.w_hi) +
                               ") but the model admits (" + std::to_string(-model_strip.w_hi) + ", " +
                               std::to_string(-model_strip.w_lo) + ")");
        k2 = pick_interior(lo, hi, 0.25, 1.0);
    }
    return {k1, k2};
}

PricingResult price(const models::ModelSpec& model, const MarketState& mkt,
                    const payoffs::Contract& c, const QuadConfig& cfg) {
    return invert(model, mkt, c, cfg, nullptr);
}

double delta(const models::ModelSpec& model, const MarketState& mkt, const payoffs::Contract& c,
             const QuadConfig& cfg) {
    const double s = mkt.spot;
    Kernel k{[s](Complex z, Complex) { return -kI * z / s; }};
    return invert(model, mkt, c, cfg, &k).price;
}

double gamma(const models::ModelSpec& model, const MarketState& mkt, const payoffs::Contract& c,
             const QuadConfig& cfg) {
    const double s2 = mkt.spot * mkt.spot;
    Kernel k{[s2](Complex z, Complex) { return (kI * z - z * z) / s2; }};
    return invert(model, mkt, c, cfg, &k).price;
}

models::ModelSpec bump_state(const models::ModelSpec& model, models::ActivityState which, double h) {
    models::ModelSpec out = model;
    std::visit(
        [&](auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, models::Heston> || std::is_same_v<T, models::Bates>) {
                if (which == models::ActivityState::V0) spec.cir.v0 += h;
            } else if constexpr (std::is_same_v<T, models::Fang>) {
                if (which == models::ActivityState::V0) spec.var_process.v0 += h;
                if (which == models::ActivityState::Lambda0) spec.intensity_process.v0 += h;
            } else if constexpr (std::is_same_v<T, models::WishartDtc>) {
                if (which == models::ActivityState::Sigma0_11) spec.p.sigma0(0, 0) += h;
                if (which == models::ActivityState::Sigma0_22) spec.p.sigma0(1, 1) += h;
                if (which == models::ActivityState::Sigma0_12) {
                    spec.p.sigma0(0, 1) += h;
                    spec.p.sigma0(1, 0) += h;
                }
            }
        },
        out);
    return out;
}

double activity_vega(const models::ModelSpec& model, const MarketState& mkt,
                     const payoffs::Contract& c, const QuadConfig& cfg,
                     models::ActivityState which) {
    const double tau = c.maturity - mkt.t0;
    const auto probe = models::cf_state_log_deriv(model, tau, kI, 0.0, which);
    if (probe.has_value()) {
        Kernel k{[&model, tau, which](Complex z, Complex w) {
            return models::cf_state_log_deriv(model, tau, -z, -w, which).value();
        }};
        return invert(model, mkt, c, cfg, &k).price;
    }
    // central finite difference, relative step 1e-4
    const double h = 1e-4;
    const double up = price(bump_state(model, which, h), mkt, c, cfg).price;
    const double dn = price(bump_state(model, which, -h), mkt, c, cfg).price;
    return (up - dn) / (2.0 * h);
}

} // namespace dtcp::pricer
