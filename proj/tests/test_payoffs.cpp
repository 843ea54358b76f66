#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>

#include "dtcp/errors.hpp"
#include "dtcp/payoffs.hpp"
#include "dtcp/quadrature.hpp"

using namespace dtcp;
using C = std::complex<double>;
constexpr C kI{0.0, 1.0};
constexpr double kPi = 3.141592653589793238462643383279502884;

namespace {

// numeric inverse transform along a contour line; engine shares nothing with
// the closed forms being checked
C invert_1d(const std::function<C(C)>& fhat, double k, double arg) {
    auto f = [&](double x) {
        const C zz(x, k);
        return fhat(zz) * std::exp(-kI * zz * arg);
    };
    quad::HalflineOptions opt;
    opt.rel_tol = 1e-9;
    opt.max_panels = 8000;
    const auto r = quad::integrate_line(f, 0.0, 4.0, opt);
    return r.value / (2.0 * kPi);
}

} // namespace

TEST_CASE("payoff_value substitutions") {
    const payoffs::Contract van{payoffs::VanillaCall{80.0}, 1.0};
    CHECK(payoff_value(van, std::log(100.0), 0.33) == doctest::Approx(20.0));
    CHECK(payoff_value(van, std::log(50.0), 0.1) == 0.0);

    const payoffs::Contract vol{payoffs::VolatilityCall{0.05}, 1.0};
    CHECK(payoff_value(vol, 0.0, 0.0064) == doctest::Approx(0.03));

    const payoffs::Contract tvo{payoffs::TvoCall{80.0, 0.1}, 1.0};
    CHECK(payoff_value(tvo, std::log(100.0), 0.04) == doctest::Approx(10.0));
    // degenerate zero-variance conventions
    CHECK(payoff_value(tvo, std::log(50.0), 0.0) == 0.0);
    CHECK(std::isinf(payoff_value(tvo, std::log(100.0), 0.0)));
}

TEST_CASE("vanilla transform substitution and homogeneity") {
    const auto fp = payoffs::fourier_transform({payoffs::VanillaCall{1.0}, 1.0});
    CHECK(std::abs(fp.transform(C(0, 2), 0.0) - C(0.5, 0.0)) < 1e-15);
    CHECK(fp.strip.z_lo == 1.0);
    CHECK(fp.dim == payoffs::PayoffDim::ZOnly);

    const auto f80 = payoffs::fourier_transform({payoffs::VanillaCall{80.0}, 1.0});
    const auto f96 = payoffs::fourier_transform({payoffs::VanillaCall{96.0}, 1.0});
    for (const C z : {C(0.7, 1.5), C(-2.0, 2.2)}) {
        const C lhs = f96.transform(z, 0.0);
        const C rhs = std::pow(1.2, 1.0 + kI * z) * f80.transform(z, 0.0);
        CHECK(std::abs(lhs - rhs) < 1e-14 * std::abs(rhs));
    }
}

TEST_CASE("volatility transform at Q = 0 reduces to the sqrt transform") {
    const auto fp = payoffs::fourier_transform({payoffs::VolatilityCall{0.0}, 1.0});
    const C w(0.8, 0.4);
    const C want = std::sqrt(kPi) / (2.0 * std::pow(-kI * w, 1.5));
    CHECK(std::abs(fp.transform(0.0, w) - want) < 1e-14);
    CHECK(fp.dim == payoffs::PayoffDim::WOnly);
    CHECK(fp.strip.w_lo == 0.0);
}

TEST_CASE("tvo transform against the direct quadrature oracle") {
    const payoffs::Contract tvo{payoffs::TvoCall{80.0, 0.1}, 1.0};
    const auto fp = payoffs::fourier_transform(tvo);
    const C z(0.0, 1.5), w(0.0, 0.5);

    // direct F-hat(z, w) = integral of sbar sqrt(t/y) (e^x - H)^+ e^{izx + iwy}
    quad::AdaptiveOptions opt;
    opt.rel_tol = 1e-12;
    opt.max_intervals = 4000;
    const double lh = std::log(80.0);
    auto fx = [&](double x) { return (std::exp(x) - 80.0) * std::exp(kI * z * x); };
    const C ix = quad::integrate_adaptive(fx, lh, lh + 60.0, opt).value;
    auto fy = [&](double y) { return std::exp(kI * w * y) / std::sqrt(y); };
    const C iy = quad::integrate_adaptive(fy, 1e-14, 120.0, opt).value;
    const C want = 0.1 * std::sqrt(1.0) * ix * iy;

    CHECK(std::abs(fp.transform(z, w) - want) < 1e-6 * std::abs(want));
    CHECK(fp.dim == payoffs::PayoffDim::Joint);
}

TEST_CASE("inversion round-trip recovers the payoffs pointwise") {
    const auto van = payoffs::fourier_transform({payoffs::VanillaCall{80.0}, 1.0});
    for (double s : {60.0, 75.0, 90.0, 120.0, 160.0}) {
        const double x = std::log(s);
        const C got = invert_1d([&](C z) { return van.transform(z, 0.0); }, 1.6, x);
        const double want = std::max(s - 80.0, 0.0);
        CHECK(std::abs(got.real() - want) < 1e-6 * std::max(1.0, want));
        CHECK(std::abs(got.imag()) < 1e-6);
    }

    const auto vol = payoffs::fourier_transform({payoffs::VolatilityCall{0.15}, 1.0});
    for (double y : {0.005, 0.02, 0.0225, 0.09, 0.3}) {
        const C got = invert_1d([&](C w) { return vol.transform(0.0, w); }, 0.7, y);
        const double want = std::max(std::sqrt(y) - 0.15, 0.0);
        CHECK(std::abs(got.real() - want) < 1e-6);
    }

    // TVO: iterated 2D inversion at mixed points
    const payoffs::Contract tc{payoffs::TvoCall{80.0, 0.1}, 1.0};
    const auto tvo = payoffs::fourier_transform(tc);
    for (auto [s, y] : {std::pair{100.0, 0.04}, {70.0, 0.02}, {120.0, 0.1}, {85.0, 0.12}, {150.0, 0.5}}) {
        const double x = std::log(s);
        auto outer = [&](double xw) {
            const C w(xw, 0.7);
            const C inner = invert_1d([&](C z) { return tvo.transform(z, w); }, 1.6, x);
            return inner * std::exp(-kI * w * y);
        };
        quad::HalflineOptions opt;
        opt.rel_tol = 1e-8;
        opt.max_panels = 8000;
        const auto r = quad::integrate_line(outer, 0.0, 4.0, opt);
        const double got = (r.value / (2.0 * kPi)).real();
        const double want = payoff_value(tc, x, y);
        CHECK(std::abs(got - want) < 1e-4 * std::max(1.0, want));
    }
}

TEST_CASE("transforms decay along contour lines") {
    const auto van = payoffs::fourier_transform({payoffs::VanillaCall{80.0}, 1.0});
    const auto vol = payoffs::fourier_transform({payoffs::VolatilityCall{0.1}, 1.0});
    const auto tvo = payoffs::fourier_transform({payoffs::TvoCall{80.0, 0.1}, 2.0});
    double prev_v = std::numeric_limits<double>::infinity();
    double prev_w = prev_v, prev_t = prev_v;
    for (double re : {5.0, 50.0, 500.0, 5000.0}) {
        const double v = std::abs(van.transform(C(re, 1.6), 0.0));
        const double w = std::abs(vol.transform(0.0, C(re, 0.7)));
        const double t = std::abs(tvo.transform(C(-re, 1.6), C(re, 0.7)));
        CHECK(v < prev_v);
        CHECK(w < prev_w);
        CHECK(t < prev_t);
        prev_v = v;
        prev_w = w;
        prev_t = t;
    }
    CHECK(prev_v < 1e-6);
    CHECK(prev_w < 1e-4);
}

TEST_CASE("contract validation") {
    CHECK_THROWS_AS(payoffs::validate({payoffs::VanillaCall{-1.0}, 1.0}), ValidationError);
    CHECK_THROWS_AS(payoffs::validate({payoffs::TvoCall{80.0, 0.0}, 1.0}), ValidationError);
    CHECK_NOTHROW(payoffs::validate({payoffs::VolatilityCall{0.0}, 1.0}));
}
