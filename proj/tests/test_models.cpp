#include <doctest.h>

#include <cmath>
#include <complex>

#include "dtcp/checks.hpp"
#include "dtcp/errors.hpp"
#include "dtcp/models.hpp"
#include "dtcp/reference_tables.hpp"

using namespace dtcp;
using C = std::complex<double>;
constexpr C kI{0.0, 1.0};

namespace {

std::vector<models::ModelSpec> all_models() {
    std::vector<models::ModelSpec> v;
    for (int i = 0; i < tables::kNumPaperModels; ++i) v.push_back(tables::paper_model(i));
    v.push_back(tables::default_kou());
    v.push_back(tables::default_cgmy());
    v.push_back(tables::default_wishart());
    return v;
}

} // namespace

TEST_CASE("cir transform at lam = 0 and the deterministic limit") {
    const models::CirParamsC det{{1.0, 0.0}, {0.04, 0.0}, 1e-8, 0.04};
    CHECK(models::cir_integrated_laplace(det, 1.0, 0.0) == C(1.0, 0.0));
    CHECK(std::abs(models::cir_integrated_laplace(det, 1.0, 1.0) - std::exp(-0.04)) < 1e-8);
    CHECK(models::cir_laplace_via_ode(det, 1.0, 0.0) == C(1.0, 0.0));
}

TEST_CASE("cir closed form vs Riccati ODE oracle") {
    const models::CirParamsC heston{{4.57, 0.0}, {0.0306, 0.0}, 0.48, 0.0225};
    CHECK(std::abs(models::cir_integrated_laplace(heston, 1.0, 0.7) -
                   models::cir_laplace_via_ode(heston, 1.0, 0.7)) < 1e-9);

    // 10-point complex lam grid
    for (int k = 0; k < 10; ++k) {
        const C lam(-3.0 + k, 5.0 * (k - 5));
        const C a = models::cir_integrated_laplace(heston, 1.0, lam);
        const C b = models::cir_laplace_via_ode(heston, 1.0, lam);
        CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, std::abs(b)));
    }

    const C real_case = models::cir_laplace_via_ode(heston, 1.0, 0.5);
    CHECK(real_case.real() > 0.0);
    CHECK(real_case.real() < 1.0);
    CHECK(std::abs(real_case.imag()) < 1e-12);
}

TEST_CASE("cir transform across long horizons and leverage-shifted parameters") {
    const models::CirParams cir{4.57, 0.0306, 0.48, 0.0225, -0.82};
    for (double tau : {0.25, 1.0, 3.5, 5.0}) {
        for (const C z : {C(3.0, 1.875), C(-25.0, 1.1), C(60.0, 2.5)}) {
            const auto lp = models::leverage_neutral_cir(cir, z);
            const C lam = models::lam_continuous(z, C(-40.0, -0.625));
            const C a = models::cir_integrated_laplace(lp, tau, lam);
            const C b = models::cir_laplace_via_ode(lp, tau, lam);
            CHECK(std::abs(a - b) < 1e-8 * std::max(1e-12, std::abs(b)));
        }
    }
}

TEST_CASE("cir transform explosion is a domain error") {
    const models::CirParamsC heston{{4.57, 0.0}, {0.0306, 0.0}, 0.48, 0.0225};
    // large negative lam: exponential moment beyond the explosion boundary
    CHECK_THROWS_AS(models::cir_integrated_laplace(heston, 5.0, C(-200.0, 0.0)), DomainError);
}

TEST_CASE("leverage_neutral_cir substitutions") {
    const models::CirParams base{4.57, 0.0306, 0.48, 0.0225, -0.82};
    const auto unchanged = models::leverage_neutral_cir({4.57, 0.0306, 0.48, 0.0225, 0.0}, C(2, 1));
    CHECK(unchanged.alpha == C(4.57, 0.0));
    CHECK(unchanged.theta == C(0.0306, 0.0));
    const auto at_zero = models::leverage_neutral_cir(base, 0.0);
    CHECK(at_zero.alpha == C(4.57, 0.0));

    const auto shifted = models::leverage_neutral_cir(base, C(1, 0));
    CHECK(shifted.alpha.real() == doctest::Approx(4.57));
    CHECK(shifted.alpha.imag() == doctest::Approx(0.82 * 0.48)); // -i rho z eta = +0.3936 i
    CHECK(std::abs(shifted.theta - C(4.57, 0.0) * 0.0306 / shifted.alpha) < 1e-15);
}

TEST_CASE("cf normalization, martingale and Black-Scholes substitution") {
    for (const auto& m : all_models()) {
        for (double tau : {0.25, 1.0, 3.5}) {
            CHECK(std::abs(models::cf(m, tau, 0.0, 0.0) - 1.0) <= 1e-10);
            CHECK(std::abs(models::cf(m, tau, -kI, 0.0) - 1.0) <= 1e-8);
        }
    }
    const C bs = models::cf(models::BlackScholes{0.14}, 1.0, C(1, 0), 0.0);
    CHECK(std::abs(bs - std::exp(-0.0098 * C(1, 1))) < 1e-14);
}

TEST_CASE("cf Hermitian symmetry on real arguments") {
    for (const auto& m : all_models()) {
        for (double z : {0.4, 1.7}) {
            for (double w : {0.0, 0.8}) {
                const C a = models::cf(m, 1.0, C(-z, 0), C(-w, 0));
                const C b = std::conj(models::cf(m, 1.0, C(z, 0), C(w, 0)));
                CHECK(std::abs(a - b) < 1e-10);
            }
        }
    }
}

TEST_CASE("nesting limits") {
    for (const auto& r : checks::nesting_checks()) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("wishart joint transform basics") {
    const auto w = std::get<models::WishartDtc>(tables::default_wishart()).p;
    CHECK(std::abs(models::wishart_joint_laplace(w, 0.7, 0.0, 0.0, 0.0) - 1.0) < 1e-12);

    checks::CheckOptions opt;
    opt.mc_paths = 200000;
    for (const auto& r : checks::wishart_checks(w, opt)) {
        INFO(r.name, ": ", r.detail);
        CHECK(r.pass);
    }
}

TEST_CASE("wishart a(tau) anchors at zero") {
    const auto w = std::get<models::WishartDtc>(tables::default_wishart()).p;
    const C a_small = models::wishart_a_scalar(w, 1e-6, C(1, 0.5), C(3, -1), C(0.5, 0.2));
    CHECK(std::abs(a_small) < 1e-4);
}

TEST_CASE("strip_of_analyticity per model") {
    const auto bs = models::strip_of_analyticity(models::BlackScholes{0.14}, 1.0);
    CHECK(std::isinf(bs.z_lo));
    CHECK(std::isinf(bs.z_hi));
    CHECK(std::isinf(bs.w_lo));
    CHECK(std::isinf(bs.w_hi));

    const auto mer = models::strip_of_analyticity(tables::paper_model(2), 1.0);
    CHECK(mer.w_lo == doctest::Approx(-1.0 / (2.0 * 0.0894 * 0.0894)));
    CHECK(std::isinf(mer.w_hi));

    const auto cg = models::strip_of_analyticity(tables::default_cgmy(), 1.0);
    CHECK(cg.z_lo == doctest::Approx(-4.0));
    CHECK(cg.z_hi == doctest::Approx(3.0));
    CHECK(cg.w_lo == 0.0);

    // Heston: probed bounds must bracket a usable vanilla contour and the
    // characteristic function must evaluate on the reflected interior
    const auto hes = models::strip_of_analyticity(tables::paper_model(1), 1.0);
    CHECK(hes.z_lo < -2.5);
    CHECK(hes.z_hi > 1.0);
    CHECK(hes.w_lo < -1.0);
    const C probe = models::cf(tables::paper_model(1), 1.0, C(0.0, 0.95 * hes.z_lo), 0.0);
    CHECK(std::isfinite(probe.real()));
}

TEST_CASE("activity_rate_correlation") {
    const auto w = std::get<models::WishartDtc>(tables::default_wishart()).p;
    Eigen::Matrix2d diag_state;
    diag_state << 0.05, 0.0, 0.0, 0.08;
    CHECK(models::activity_rate_correlation(w, diag_state) == 0.0);

    models::WishartParams orth = w;
    orth.q_mat << 0.3, -0.2, 0.2, 0.3; // orthogonal columns
    Eigen::Matrix2d st;
    st << 0.05, 0.02, 0.02, 0.08;
    CHECK(std::abs(models::activity_rate_correlation(orth, st)) < 1e-15);

    Eigen::Matrix2d degenerate = Eigen::Matrix2d::Zero();
    CHECK_THROWS_AS(models::activity_rate_correlation(w, degenerate), DomainError);
}

TEST_CASE("cf_state_log_deriv matches finite differences of log cf") {
    const double tau = 1.0;
    const C z(0.8, 1.5), w(0.3, 0.4);

    auto fd_check = [&](const models::ModelSpec& m, models::ActivityState which, auto bump) {
        const C coef = models::cf_state_log_deriv(m, tau, z, w, which).value();
        const double h = 1e-6;
        const C up = models::cf(bump(h), tau, z, w);
        const C dn = models::cf(bump(-h), tau, z, w);
        const C fd = (std::log(up) - std::log(dn)) / (2.0 * h);
        CHECK(std::abs(coef - fd) < 1e-5 * std::max(1.0, std::abs(fd)));
    };

    {
        const auto hes = std::get<models::Heston>(tables::paper_model(1));
        fd_check(hes, models::ActivityState::V0, [&](double h) {
            auto b = hes;
            b.cir.v0 += h;
            return models::ModelSpec{b};
        });
    }
    {
        const auto fang = std::get<models::Fang>(tables::paper_model(4));
        fd_check(fang, models::ActivityState::Lambda0, [&](double h) {
            auto b = fang;
            b.intensity_process.v0 += h;
            return models::ModelSpec{b};
        });
    }
    CHECK(models::cf_state_log_deriv(models::BlackScholes{0.2}, tau, z, w, models::ActivityState::V0)
              .value() == C(0.0));
}

TEST_CASE("model validation names violated invariants") {
    CHECK_THROWS_WITH_AS(models::validate(models::Heston{{4.57, 0.01, 0.9, 0.04, -0.5}}),
                         doctest::Contains("Feller"), ValidationError);
    CHECK_THROWS_AS(models::validate(models::Heston{{4.57, 0.0306, 0.48, 0.0225, -1.5}}),
                    ValidationError);
    CHECK_THROWS_AS(models::validate(models::Cgmy{levy::CgmyJumps{1, 1, 0.9, 3, 0.5, 0.5}}),
                    ValidationError);
    auto wp = std::get<models::WishartDtc>(tables::default_wishart()).p;
    wp.m_mat << 1.0, 0.0, 0.0, -1.0; // not negative definite
    CHECK_THROWS_WITH_AS(models::validate(models::WishartDtc{wp}), doctest::Contains("negative definite"),
                         ValidationError);
    auto wp2 = std::get<models::WishartDtc>(tables::default_wishart()).p;
    wp2.c = 0.5;
    CHECK_THROWS_AS(models::validate(models::WishartDtc{wp2}), ValidationError);
}

TEST_CASE("per-model invariant battery (normalization, martingale, symmetry, moment)") {
    checks::CheckOptions opt;
    opt.mc_paths = 60000;
    opt.mc_steps = 250;
    for (const auto& m : all_models()) {
        for (const auto& r : checks::model_checks(m, opt)) {
            INFO(r.name, ": ", r.detail);
            CHECK(r.pass);
        }
    }
}
