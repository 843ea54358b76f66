#include "dtcp/checks.hpp"

#include <cmath>
#include <sstream>

#include "dtcp/errors.hpp"

namespace dtcp::checks {

namespace {

using Complex = std::complex<double>;
constexpr Complex kI{0.0, 1.0};

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

CheckResult make(const std::string& name, bool pass, double worst, double tol) {
    return {name, pass, "worst " + fmt(worst) + " vs tol " + fmt(tol)};
}

} // namespace

std::vector<CheckResult> model_checks(const models::ModelSpec& m, const CheckOptions& opt) {
    std::vector<CheckResult> out;
    const std::string name = models::model_name(m);

    { // normalization
        double worst = 0.0;
        for (double tau : {0.25, 1.0, 3.5})
            worst = std::max(worst, std::abs(models::cf(m, tau, 0.0, 0.0) - 1.0));
        out.push_back(make(name + ": cf(0,0) = 1", worst <= 1e-10, worst, 1e-10));
    }
    { // martingale
        double worst = 0.0;
        for (double tau : {0.25, 1.0, 3.5})
            worst = std::max(worst, std::abs(models::cf(m, tau, -kI, 0.0) - 1.0));
        out.push_back(make(name + ": cf(-i,0) = 1", worst <= 1e-8, worst, 1e-8));
    }
    { // Hermitian symmetry on real arguments
        double worst = 0.0;
        for (double z : {0.3, 1.2, 2.7}) {
            for (double w : {0.0, 0.4, 1.9}) {
                const Complex a = models::cf(m, 1.0, Complex(-z, 0), Complex(-w, 0));
                const Complex b = std::conj(models::cf(m, 1.0, Complex(z, 0), Complex(w, 0)));
                worst = std::max(worst, std::abs(a - b));
            }
        }
        out.push_back(make(name + ": Hermitian symmetry", worst <= 1e-10, worst, 1e-10));
    }
    { // variance moment: -i dPhi/dw at (0,0) vs simulated mean of dTV
        const double tau = 1.0;
        const double h = 1e-4;
        const Complex dphi =
            (models::cf(m, tau, 0.0, Complex(h, 0.0)) - models::cf(m, tau, 0.0, Complex(-h, 0.0))) /
            (2.0 * h);
        const double moment = (-kI * dphi).real();
        mc::McConfig mcfg;
        mcfg.n_paths = opt.mc_paths;
        mcfg.n_steps = opt.mc_steps;
        mcfg.seed = opt.seed;
        mcfg.threads = opt.threads;
        const pricer::MarketState mkt{100.0, 0.0, 0.0, 0.0};
        const auto terms = mc::simulate_terminals(m, mkt, tau, mcfg);
        std::vector<double> tvs(terms.size());
        for (size_t i = 0; i < terms.size(); ++i) tvs[i] = terms[i].dtv;
        const double n = static_cast<double>(tvs.size());
        const double mean = mc::pairwise_sum(tvs) / n;
        double var = 0.0;
        for (double t : tvs) var += (t - mean) * (t - mean);
        const double se = std::sqrt(var / (n * (n - 1.0)));
        const double err = std::abs(mean - moment);
        out.push_back({name + ": E[dTV] moment vs simulation",
                       err <= 3.0 * se + 1e-12,
                       "cf moment " + fmt(moment) + ", mc " + fmt(mean) + " +- " + fmt(se)});
    }
    return out;
}

std::vector<CheckResult> nesting_checks() {
    std::vector<CheckResult> out;
    const double tau = 1.0;
    const Complex zs[] = {{0.5, 0.0}, {1.5, 0.3}, {-0.8, 0.1}};
    const Complex ws[] = {{0.0, 0.0}, {0.7, 0.1}, {-0.4, 0.05}};

    auto grid_diff = [&](const models::ModelSpec& a, const models::ModelSpec& b) {
        double worst = 0.0;
        for (Complex z : zs)
            for (Complex w : ws)
                worst = std::max(worst, std::abs(models::cf(a, tau, z, w) - models::cf(b, tau, z, w)));
        return worst;
    };

    { // Heston with eta -> 0 and theta = v0 pins v = v0: Black-Scholes sigma^2 = v0
        const double v0 = 0.0225;
        const models::ModelSpec h = models::Heston{{4.57, v0, 1e-4, v0, -0.82}};
        const models::ModelSpec b = models::BlackScholes{std::sqrt(v0)};
        const double worst = grid_diff(h, b);
        out.push_back(make("nesting: Heston -> Black-Scholes", worst <= 1e-6, worst, 1e-6));
    }
    { // Bates with lambda = 0 is Heston
        const models::CirParams cir{8.93, 0.0167, 0.22, 0.0225, -0.58};
        const models::ModelSpec bates = models::Bates{cir, levy::normal_jumps_from_kappa(-0.11, 0.1049, 0.0)};
        const models::ModelSpec heston = models::Heston{cir};
        const double worst = grid_diff(bates, heston);
        out.push_back(make("nesting: Bates(lambda=0) -> Heston", worst <= 1e-6, worst, 1e-6));
    }
    { // Fang with eta_l -> 0, theta_l = lambda0 pins the jump clock: Bates
        const models::CirParams cir{6.5, 0.0104, 0.2, 0.0196, -0.48};
        const double lam0 = 0.41;
        const auto jumps = levy::normal_jumps_from_kappa(-0.21, 0.2168, lam0);
        const models::ModelSpec fang =
            models::Fang{cir, models::CirParams{5.0, lam0, 1e-4, lam0, 0.0}, jumps};
        const models::ModelSpec bates = models::Bates{cir, jumps};
        const double worst = grid_diff(fang, bates);
        out.push_back(make("nesting: Fang(eta_l=0) -> Bates", worst <= 1e-6, worst, 1e-6));
    }
    return out;
}

std::vector<CheckResult> oracle_checks() {
    std::vector<CheckResult> out;

    // psi_D closed form vs quadrature on 7x7 strip-interior grids
    struct Case {
        const char* name;
        levy::JumpSpec spec;
        double z_im_lo, z_im_hi, w_im_lo, w_im_hi;
    };
    const Case cases[] = {
        {"normal", levy::normal_jumps_from_kappa(-0.11, 0.1049, 0.39), -3.0, 3.0, -20.0, 20.0},
        {"double-exp", levy::DoubleExpJumps{0.6, 3.0, 2.0, 0.8}, -2.0, 1.5, 0.0, 10.0},
        {"cgmy", levy::CgmyJumps{1.0, 1.0, 4.0, 4.0, 0.5, 0.5}, -3.0, 3.0, 0.0, 8.0},
    };
    for (const Case& c : cases) {
        double worst = 0.0;
        for (int a = 0; a < 7; ++a) {
            for (int b = 0; b < 7; ++b) {
                const Complex z(-1.5 + a * 0.5, c.z_im_lo + (c.z_im_hi - c.z_im_lo) * a / 6.0);
                const Complex w(-0.9 + b * 0.3, c.w_im_lo + (c.w_im_hi - c.w_im_lo) * b / 6.0);
                const Complex closed = levy::psi_D(c.spec, z, w);
                const Complex quad = levy::psi_D_quadrature(c.spec, z, w);
                worst = std::max(worst, std::abs(closed - quad));
            }
        }
        out.push_back(make(std::string("psi_D closed vs quadrature (") + c.name + ")", worst <= 1e-6,
                           worst, 1e-6));
    }

    { // CIR transform vs Riccati ODE, complex leverage-neutral parameters
        const models::CirParams cir{4.57, 0.0306, 0.48, 0.0225, -0.82};
        double worst = 0.0;
        int k = 0;
        for (double zr : {-20.0, -3.0, 0.5, 12.0, 35.0}) {
            const Complex z(zr, 1.0 + 0.1 * k++);
            const auto lp = models::leverage_neutral_cir(cir, z);
            const Complex lam = models::lam_continuous(z, Complex(0.3 * zr, -0.4));
            const Complex a = models::cir_integrated_laplace(lp, 1.0, lam);
            const Complex b = models::cir_laplace_via_ode(lp, 1.0, lam);
            worst = std::max(worst, std::abs(a - b) / std::max(1e-30, std::abs(b)));
        }
        for (double lam : {0.1, 0.7, 3.0, 20.0, 80.0}) {
            const models::CirParamsC p{{4.57, 0.0}, {0.0306, 0.0}, 0.48, 0.0225};
            const Complex a = models::cir_integrated_laplace(p, 1.0, lam);
            const Complex b = models::cir_laplace_via_ode(p, 1.0, lam);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
        out.push_back(make("cir closed form vs riccati ode", worst <= 1e-9, worst, 1e-9));
    }
    return out;
}

std::vector<CheckResult> wishart_checks(const models::WishartParams& p, const CheckOptions& opt) {
    std::vector<CheckResult> out;

    { // diagonal degeneration: the transform factorizes into two CIR transforms
        models::WishartParams d = p;
        d.q_mat = Eigen::Matrix2d::Zero();
        d.q_mat(0, 0) = 0.2;
        d.q_mat(1, 1) = 0.3;
        d.m_mat = Eigen::Matrix2d::Zero();
        d.m_mat(0, 0) = -2.5;
        d.m_mat(1, 1) = -1.5;
        d.sigma0 = Eigen::Matrix2d::Zero();
        d.sigma0(0, 0) = 0.04;
        d.sigma0(1, 1) = 0.09;
        double worst = 0.0;
        for (const Complex lam1 : {Complex(0.4, 0.0), Complex(1.2, -0.7)}) {
            for (const Complex lam2 : {Complex(0.0, 0.0), Complex(0.8, 0.3)}) {
                const Complex joint = models::wishart_joint_laplace(d, 1.3, 0.0, lam1, lam2);
                auto cir_of = [&](int j) {
                    const double q = d.q_mat(j, j), m = d.m_mat(j, j);
                    return models::CirParamsC{{-2.0 * m, 0.0}, {-d.c * q * q / (2.0 * m), 0.0}, 2.0 * q,
                                              d.sigma0(j, j)};
                };
                const Complex split = models::cir_integrated_laplace(cir_of(0), 1.3, lam1) *
                                      models::cir_integrated_laplace(cir_of(1), 1.3, lam2);
                worst = std::max(worst, std::abs(joint - split));
            }
        }
        out.push_back(make("wishart: diagonal degeneration = CIR x CIR", worst <= 1e-8, worst, 1e-8));
    }
    { // small-tau first-order expansion via Richardson finite difference
        const Complex lam1(0.9, -0.3), lam2(0.4, 0.2);
        const double h = 0.01;
        auto L = [&](double tau) { return models::wishart_joint_laplace(p, tau, 0.0, lam1, lam2); };
        const Complex deriv = (4.0 * L(h) - L(2.0 * h) - 3.0) / (2.0 * h);
        const Complex expect = -(lam1 * p.sigma0(0, 0) + lam2 * p.sigma0(1, 1));
        const double rel = std::abs(deriv - expect) / std::abs(expect);
        out.push_back(make("wishart: small-tau expansion", rel <= 1e-2, rel, 1e-2));
    }
    { // branch continuity of a(tau) on [0, t], oscillation-prone arguments
        const Complex lam1(40.0, -35.0), lam2(3.0, 1.0);
        const Complex z(8.0, 1.5);
        double worst_jump = 0.0;
        Complex prev = 0.0;
        const int n = 96;
        const double t_end = 2.0;
        for (int k = 1; k <= n; ++k) {
            const Complex a = models::wishart_a_scalar(p, t_end * k / n, z, lam1, lam2);
            if (k > 1) worst_jump = std::max(worst_jump, std::abs(a - prev));
            prev = a;
        }
        const double scale = std::max(1.0, std::abs(prev));
        out.push_back(make("wishart: a(tau) branch continuity", worst_jump <= 0.35 * scale,
                           worst_jump / scale, 0.35));
    }
    { // activity-rate correlation vs Euler increments at a fixed state
        Eigen::Matrix2d st;
        st << 0.05, 0.015, 0.015, 0.08;
        const double expect = models::activity_rate_correlation(p, st);
        const double dt = 1e-5;
        const long n = opt.mc_paths;
        rng::Philox g(opt.seed, 0);
        const Eigen::Matrix2d root = [&] {
            Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(st);
            return Eigen::Matrix2d(es.operatorSqrt());
        }();
        const double sq = std::sqrt(dt);
        double s1 = 0, s2 = 0, s11 = 0, s22 = 0, s12 = 0;
        for (long i = 0; i < n; ++i) {
            Eigen::Matrix2d db;
            db << sq * g.normal(), sq * g.normal(), sq * g.normal(), sq * g.normal();
            const Eigen::Matrix2d incr = root * db * p.q_mat;
            const Eigen::Matrix2d ds = incr + incr.transpose();
            const double d1 = ds(0, 0), d2 = ds(1, 1);
            s1 += d1;
            s2 += d2;
            s11 += d1 * d1;
            s22 += d2 * d2;
            s12 += d1 * d2;
        }
        const double nn = static_cast<double>(n);
        const double c11 = s11 / nn - (s1 / nn) * (s1 / nn);
        const double c22 = s22 / nn - (s2 / nn) * (s2 / nn);
        const double c12 = s12 / nn - (s1 / nn) * (s2 / nn);
        const double sample = c12 / std::sqrt(c11 * c22);
        const double se = (1.0 - sample * sample) / std::sqrt(nn); // Fisher-style
        const double err = std::abs(sample - expect);
        out.push_back({"wishart: activity-rate correlation vs increments", err <= 3.0 * se + 1e-4,
                       "formula " + fmt(expect) + ", sample " + fmt(sample) + " +- " + fmt(se)});
    }
    return out;
}

} // namespace dtcp::checks
