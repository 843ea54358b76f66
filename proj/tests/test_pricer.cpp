#include <doctest.h>

#include <cmath>
#include <complex>

#include "dtcp/errors.hpp"
#include "dtcp/pricer.hpp"
#include "dtcp/quadrature.hpp"
#include "dtcp/reference_tables.hpp"

using namespace dtcp;
using C = std::complex<double>;
constexpr C kI{0.0, 1.0};
constexpr double kPi = 3.141592653589793238462643383279502884;

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

struct BsClosed {
    double price, delta, gamma;
};

BsClosed bs_closed(double s, double k, double sig, double r, double tau) {
    const double d1 = (std::log(s / k) + (r + sig * sig / 2.0) * tau) / (sig * std::sqrt(tau));
    const double d2 = d1 - sig * std::sqrt(tau);
    const double phi_d1 = std::exp(-d1 * d1 / 2.0) / std::sqrt(2.0 * kPi);
    return {s * norm_cdf(d1) - k * std::exp(-r * tau) * norm_cdf(d2), norm_cdf(d1),
            phi_d1 / (s * sig * std::sqrt(tau))};
}

const pricer::MarketState kTable2Mkt{100.0, 0.0, 0.06, 0.0};

} // namespace

TEST_CASE("select_contour rules and failure modes") {
    const models::ComplexStrip entire{-1e308, 1e308, -1e308, 1e308};
    const auto fp_van = payoffs::fourier_transform({payoffs::VanillaCall{80.0}, 1.0});
    auto [k1, k2] = pricer::select_contour(fp_van.strip, entire, fp_van.dim);
    CHECK(k1 == doctest::Approx(1.875)); // midpoint of (1, inf) clamped to [1.25, 2.5]
    CHECK(k2 == 0.0);

    const auto fp_vol = payoffs::fourier_transform({payoffs::VolatilityCall{0.05}, 1.0});
    const auto merton_strip = models::strip_of_analyticity(tables::paper_model(2), 1.0);
    auto [k1v, k2v] = pricer::select_contour(fp_vol.strip, merton_strip, fp_vol.dim);
    CHECK(k2v == doctest::Approx(0.625)); // (0, 62.56) clamped to [0.25, 1.0]

    // disjoint z-strips are a contour error
    const models::ComplexStrip below{-1e308, -0.5, -1e308, 1e308};
    CHECK_THROWS_AS(pricer::select_contour(fp_van.strip, below, fp_van.dim), ContourError);

    // volatility-type claims are unpriceable for one-sided w-strips (Kou, CGMY)
    const auto kou_strip = models::strip_of_analyticity(tables::default_kou(), 1.0);
    CHECK_THROWS_AS(pricer::select_contour(fp_vol.strip, kou_strip, fp_vol.dim), ContourError);
}

TEST_CASE("price matches the Black-Scholes closed form on every scenario set") {
    for (const auto& sc : tables::scenario_sets()) {
        const auto mkt = tables::scenario_market(sc);
        const auto r =
            pricer::price(models::BlackScholes{0.14}, mkt, tables::scenario_contract(sc, 0), {});
        const double want = bs_closed(sc.spot, sc.strike, 0.14, sc.rate, sc.maturity - sc.t0).price;
        CHECK(r.price == doctest::Approx(want).epsilon(1e-7));
        CHECK(r.converged);

        // volatility call under Black-Scholes is deterministic
        const auto rv =
            pricer::price(models::BlackScholes{0.14}, mkt, tables::scenario_contract(sc, 1), {});
        const double tau = sc.maturity - sc.t0;
        const double vol_want =
            std::max(std::sqrt(sc.accrued_tv + 0.0196 * tau) - sc.vol_strike, 0.0) * std::exp(-sc.rate * tau);
        CHECK(rv.price == doctest::Approx(vol_want).epsilon(2e-5));

        // so is the TVO: a deterministic multiple of the vanilla
        const auto rt =
            pricer::price(models::BlackScholes{0.14}, mkt, tables::scenario_contract(sc, 2), {});
        const double tvo_want =
            sc.target_vol * std::sqrt(sc.maturity / (sc.accrued_tv + 0.0196 * tau)) * want;
        CHECK(rt.price == doctest::Approx(tvo_want).epsilon(5e-5));
    }
}

TEST_CASE("deterministic small-volatility limit") {
    const auto r = pricer::price(models::BlackScholes{1e-4}, kTable2Mkt,
                                 {payoffs::VanillaCall{80.0}, 1.0}, {});
    CHECK(r.price == doctest::Approx(100.0 - 80.0 * std::exp(-0.06)).epsilon(1e-6));
}

TEST_CASE("Fang TVO reproduces the published value within its stated band") {
    const auto r = pricer::price(tables::paper_model(4), kTable2Mkt, {payoffs::TvoCall{80.0, 0.1}, 1.0}, {});
    CHECK(std::abs(r.price - 24.0494) / 24.0494 < 0.01);
}

TEST_CASE("contour invariance") {
    const payoffs::Contract van{payoffs::VanillaCall{80.0}, 1.0};
    const payoffs::Contract vol{payoffs::VolatilityCall{0.05}, 1.0};
    for (int mi : {1, 3}) { // heston, bates
        const auto m = tables::paper_model(mi);
        double base = 0.0, base_err = 0.0;
        for (double k1 : {1.4, 1.875, 2.3}) {
            pricer::QuadConfig q;
            q.k1 = k1;
            const auto r = pricer::price(m, kTable2Mkt, van, q);
            if (base == 0.0) {
                base = r.price;
                base_err = r.err_estimate;
            } else {
                CHECK(std::abs(r.price - base) <= 10.0 * (base_err + r.err_estimate) + 1e-9);
            }
        }
        base = 0.0;
        for (double k2 : {0.35, 0.625, 0.95}) {
            pricer::QuadConfig q;
            q.k2 = k2;
            const auto r = pricer::price(m, kTable2Mkt, vol, q);
            if (base == 0.0) {
                base = r.price;
                base_err = r.err_estimate;
            } else {
                CHECK(std::abs(r.price - base) <= 10.0 * (base_err + r.err_estimate) + 1e-9);
            }
        }
    }
    // TVO: both contours moved jointly (heston only; the 2D integral is the expensive one)
    const payoffs::Contract tvo{payoffs::TvoCall{80.0, 0.1}, 1.0};
    double base = 0.0, base_err = 0.0;
    for (auto [k1, k2] : {std::pair{1.5, 0.45}, {1.875, 0.625}, {2.2, 0.85}}) {
        pricer::QuadConfig q;
        q.k1 = k1;
        q.k2 = k2;
        const auto r = pricer::price(tables::paper_model(1), kTable2Mkt, tvo, q);
        if (base == 0.0) {
            base = r.price;
            base_err = r.err_estimate;
        } else {
            CHECK(std::abs(r.price - base) <= 10.0 * (base_err + r.err_estimate) + 1e-6);
        }
    }
}

TEST_CASE("vanilla bounds and volatility-call monotonicity") {
    for (const auto& sc : tables::scenario_sets()) {
        const auto mkt = tables::scenario_market(sc);
        const double tau = sc.maturity - sc.t0;
        for (int mi = 0; mi < tables::kNumPaperModels; ++mi) {
            const auto m = tables::paper_model(mi);
            const auto r = pricer::price(m, mkt, tables::scenario_contract(sc, 0), {});
            CHECK(r.price >= std::max(0.0, sc.spot - sc.strike * std::exp(-sc.rate * tau)) - 1e-6);
            CHECK(r.price <= sc.spot + 1e-6);
        }
    }
    for (int mi : {0, 2, 4}) {
        const auto m = tables::paper_model(mi);
        double prev = 1e300;
        for (double q : {0.02, 0.1, 0.2}) {
            const auto r = pricer::price(m, kTable2Mkt, {payoffs::VolatilityCall{q}, 1.0}, {});
            CHECK(r.price < prev);
            prev = r.price;
        }
    }
}

TEST_CASE("ATM TVO approximates the Black-Scholes call at the target volatility") {
    // fresh-start, zero-rate configuration with the ATM strike layout
    const pricer::MarketState mkt{100.0, 0.0, 0.0, 0.0};
    const payoffs::Contract tvo{payoffs::TvoCall{100.0, 0.1}, 0.25};
    const double bs_ref = bs_closed(100.0, 100.0, 0.1, 0.0, 0.25).price;
    for (int mi = 0; mi < tables::kNumPaperModels; ++mi) {
        const auto r = pricer::price(tables::paper_model(mi), mkt, tvo, {});
        INFO("model ", tables::paper_model_label(mi), " tvo ", r.price, " bs ", bs_ref);
        CHECK(std::abs(r.price - bs_ref) / bs_ref < 0.05);
    }
}

TEST_CASE("1D/2D consistency via a narrowing Gaussian factor in w") {
    // F2(z, w) = Fhat(z) g(w) with g a Gaussian of width 1/s in w prices
    // E[(S-K)^+ e^{-TV^2/(2 s^2)}], increasing to the vanilla as s grows.
    const auto m = tables::paper_model(1);
    const double tau = 1.0;
    const auto fp = payoffs::fourier_transform({payoffs::VanillaCall{80.0}, 1.0});
    const double van = pricer::price(m, kTable2Mkt, {payoffs::VanillaCall{80.0}, 1.0}, {}).price;

    auto price_2d = [&](double s) {
        const double log_s = std::log(kTable2Mkt.spot);
        auto inner = [&](C w) {
            auto f = [&](double xz) {
                const C z(xz, 1.875);
                return std::exp(-kI * z * (log_s + 0.06 * tau)) * models::cf(m, tau, -z, -w) *
                       fp.transform(z, 0.0) * std::sqrt(2.0 * kPi) * s * std::exp(-w * w * s * s / 2.0);
            };
            return quad::integrate_line(f, 0.0, 4.0).value;
        };
        auto g = [&](double xw) { return inner(C(xw, 0.0)); };
        quad::HalflineOptions opt;
        opt.rel_tol = 1e-7;
        const auto q = quad::integrate_halfline(g, 0.0, +1, 0.25 / s, opt);
        return std::exp(-0.06 * tau) / (2.0 * kPi * kPi) * q.value.real(); // 2 Re / (4 pi^2)
    };

    double prev = -1e300;
    for (double s : {20.0, 60.0, 180.0}) {
        const double p = price_2d(s);
        CHECK(p > prev);
        prev = p;
        CHECK(p <= van * (1.0 + 1e-6));
    }
    CHECK(std::abs(prev - van) / van < 2e-3);
}

TEST_CASE("delta and gamma match the Black-Scholes closed forms") {
    const auto want = bs_closed(100.0, 80.0, 0.14, 0.06, 1.0);
    const models::ModelSpec bs = models::BlackScholes{0.14};
    const payoffs::Contract van{payoffs::VanillaCall{80.0}, 1.0};
    CHECK(pricer::delta(bs, kTable2Mkt, van, {}) == doctest::Approx(want.delta).epsilon(1e-6));
    CHECK(pricer::gamma(bs, kTable2Mkt, van, {}) == doctest::Approx(want.gamma).epsilon(1e-6));
}

TEST_CASE("deep in-the-money delta approaches one") {
    for (int mi : {0, 1, 2}) {
        const double d =
            pricer::delta(tables::paper_model(mi), kTable2Mkt, {payoffs::VanillaCall{0.1}, 1.0}, {});
        CHECK(std::abs(d - 1.0) < 1e-3);
    }
}

TEST_CASE("activity vega against central finite differences") {
    const payoffs::Contract van{payoffs::VanillaCall{80.0}, 1.0};
    auto fd_oracle = [&](const models::ModelSpec& m, models::ActivityState which, double h) {
        const double up = pricer::price(pricer::bump_state(m, which, h), kTable2Mkt, van, {}).price;
        const double dn = pricer::price(pricer::bump_state(m, which, -h), kTable2Mkt, van, {}).price;
        return (up - dn) / (2.0 * h);
    };

    const auto heston = tables::paper_model(1);
    const double v_heston = pricer::activity_vega(heston, kTable2Mkt, van, {}, models::ActivityState::V0);
    CHECK(v_heston == doctest::Approx(fd_oracle(heston, models::ActivityState::V0, 1e-5)).epsilon(1e-5));

    const auto fang = tables::paper_model(4);
    const double v_fang =
        pricer::activity_vega(fang, kTable2Mkt, van, {}, models::ActivityState::Lambda0);
    CHECK(v_fang == doctest::Approx(fd_oracle(fang, models::ActivityState::Lambda0, 1e-5)).epsilon(1e-5));

    CHECK(pricer::activity_vega(models::BlackScholes{0.14}, kTable2Mkt, van, {},
                                models::ActivityState::V0) == doctest::Approx(0.0));
}

TEST_CASE("volatility claims on one-sided jump models are rejected with a contour error") {
    CHECK_THROWS_AS(
        pricer::price(tables::default_cgmy(), kTable2Mkt, {payoffs::VolatilityCall{0.05}, 1.0}, {}),
        ContourError);
    // the vanilla on the same model prices fine
    const auto r = pricer::price(tables::default_cgmy(), kTable2Mkt, {payoffs::VanillaCall{80.0}, 1.0}, {});
    CHECK(r.price > 20.0);
    CHECK(r.price < 100.0);
    CHECK(r.converged);
}
