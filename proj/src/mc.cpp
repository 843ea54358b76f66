#include "dtcp/mc.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dtcp/errors.hpp"
#include "dtcp/quadrature.hpp"

namespace dtcp::mc {

namespace {

using models::ModelSpec;

struct NormalJumpDraw {
    double m, delta, kappa;
    // returns (sum of jumps, sum of squared jumps)
    std::pair<double, double> operator()(long n, rng::Philox& g, double sgn) const {
        double sum = 0.0, sq = 0.0;
        for (long i = 0; i < n; ++i) {
            const double j = m + delta * sgn * g.normal();
            sum += j;
            sq += j * j;
        }
        return {sum, sq};
    }
};

struct KouJumpDraw {
    double p, alpha, beta, kappa;
    std::pair<double, double> operator()(long n, rng::Philox& g, double /*sgn*/) const {
        double sum = 0.0, sq = 0.0;
        for (long i = 0; i < n; ++i) {
            const double u = g.uniform();
            const double e = -std::log(g.uniform());
            const double j = u < p ? e / alpha : -e / beta;
            sum += j;
            sq += j * j;
        }
        return {sum, sq};
    }
};

// 2x2 PSD square root; sigma must be symmetric PSD.
Eigen::Matrix2d sqrt_psd_2x2(const Eigen::Matrix2d& s) {
    const double tr = s(0, 0) + s(1, 1);
    const double det = std::max(s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0), 0.0);
    const double root_det = std::sqrt(det);
    const double denom = std::sqrt(std::max(tr + 2.0 * root_det, 0.0));
    if (denom <= 0.0) return Eigen::Matrix2d::Zero();
    Eigen::Matrix2d out = s;
    out(0, 0) += root_det;
    out(1, 1) += root_det;
    return out / denom;
}

// clip negative eigenvalues to zero, return true if clipping occurred
bool project_psd_2x2(Eigen::Matrix2d& s) {
    s = 0.5 * (s + s.transpose().eval());
    const double tr = s(0, 0) + s(1, 1);
    const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    const double disc = std::sqrt(std::max(tr * tr - 4.0 * det, 0.0));
    const double mu_min = 0.5 * (tr - disc);
    if (mu_min >= 0.0) return false;
    // eigenvector for mu_min
    double vx, vy;
    if (std::abs(s(0, 1)) > 1e-300) {
        vx = s(0, 1);
        vy = mu_min - s(0, 0);
    } else if (s(0, 0) <= s(1, 1)) {
        vx = 1.0;
        vy = 0.0;
    } else {
        vx = 0.0;
        vy = 1.0;
    }
    const double nrm = std::hypot(vx, vy);
    vx /= nrm;
    vy /= nrm;
    s(0, 0) -= mu_min * vx * vx;
    s(0, 1) -= mu_min * vx * vy;
    s(1, 0) = s(0, 1);
    s(1, 1) -= mu_min * vy * vy;
    return true;
}

// Asmussen-Rosinski decomposition constants for CGMY simulation: jumps above
// eps exact (Pareto-proposal rejection), smaller jumps as matched Brownian.
struct CgmySim {
    double eps;
    double lam_plus, lam_minus; // tail intensities above eps
    double sigma_eps;           // small-jump diffusion coefficient
    double drift;               // b_eps + psi_jump(-i), both real
    double alpha_plus, beta_plus, alpha_minus, beta_minus;

    static CgmySim make(const levy::CgmyJumps& j) {
        CgmySim s{};
        s.eps = 1e-3;
        s.alpha_plus = j.alpha_plus;
        s.beta_plus = j.beta_plus;
        s.alpha_minus = j.alpha_minus;
        s.beta_minus = j.beta_minus;
        auto tail_intensity = [&](double c, double beta, double alpha) {
            auto f = [=](double x) {
                return std::complex<double>(c * std::exp(-beta * x) * std::pow(x, -1.0 - alpha), 0.0);
            };
            quad::AdaptiveOptions opt;
            opt.rel_tol = 1e-12;
            opt.max_intervals = 4000;
            const double xmax = 1.0 + 60.0 / beta;
            return quad::integrate_adaptive(f, s.eps, xmax, opt).value.real();
        };
        s.lam_plus = tail_intensity(j.c_plus, j.beta_plus, j.alpha_plus);
        s.lam_minus = tail_intensity(j.c_minus, j.beta_minus, j.alpha_minus);
        auto small_var = [&](double c, double beta, double alpha) {
            auto f = [=](double x) {
                return std::complex<double>(c * std::exp(-beta * x) * std::pow(x, 1.0 - alpha), 0.0);
            };
            quad::AdaptiveOptions opt;
            opt.rel_tol = 1e-12;
            opt.max_intervals = 4000;
            return quad::integrate_adaptive(f, 0.0, s.eps, opt).value.real();
        };
        s.sigma_eps = std::sqrt(small_var(j.c_plus, j.beta_plus, j.alpha_plus) +
                                small_var(j.c_minus, j.beta_minus, j.alpha_minus));
        auto band_mean = [&](double c, double beta, double alpha) {
            auto f = [=](double x) {
                return std::complex<double>(c * std::exp(-beta * x) * std::pow(x, -alpha), 0.0);
            };
            quad::AdaptiveOptions opt;
            opt.rel_tol = 1e-12;
            opt.max_intervals = 4000;
            return quad::integrate_adaptive(f, s.eps, 1.0, opt).value.real();
        };
        const double b_eps =
            band_mean(j.c_plus, j.beta_plus, j.alpha_plus) - band_mean(j.c_minus, j.beta_minus, j.alpha_minus);
        const double psi_mi = levy::psi_jump(levy::JumpSpec{j}, levy::kTheta0).real();
        s.drift = b_eps + psi_mi;
        return s;
    }

    double draw_tail(double alpha, double beta, rng::Philox& g) const {
        for (int it = 0; it < 10000; ++it) {
            const double x = eps * std::pow(g.uniform(), -1.0 / alpha);
            if (g.uniform() <= std::exp(-beta * (x - eps))) return x;
        }
        return eps;
    }
};

// Per-model steppers mutate (x = dlog S~, tv) and their activity states.
// sgn flips the Gaussian draws for antithetic pairs.

struct BsStepper {
    double sigma;
    double x = 0.0, tv = 0.0;
    void step(double dt, double sqdt, rng::Philox& g, double sgn) {
        const double s2 = sigma * sigma;
        x += -0.5 * s2 * dt + sigma * sqdt * sgn * g.normal();
        tv += s2 * dt;
    }
};

struct CirState {
    double alpha, theta, eta, rho, srho;
    double v;
    // advance v with full truncation, return (v+, dW1) used by the asset
    std::pair<double, double> advance(double dt, double sqdt, rng::Philox& g, double sgn) {
        const double vp = std::max(v, 0.0);
        const double sq_vp = std::sqrt(vp);
        const double z1 = sgn * g.normal();
        const double z2 = sgn * g.normal();
        const double dw1 = sqdt * z1;
        const double dw2 = rho * dw1 + srho * sqdt * z2;
        v += alpha * (theta - vp) * dt + eta * sq_vp * dw2;
        return {vp, sq_vp * dw1};
    }
};

CirState make_cir_state(const models::CirParams& p) {
    return {p.alpha, p.theta, p.eta, p.rho, std::sqrt(1.0 - p.rho * p.rho), p.v0};
}

struct HestonStepper {
    CirState cir;
    double x = 0.0, tv = 0.0;
    void step(double dt, double sqdt, rng::Philox& g, double sgn) {
        auto [vp, diff] = cir.advance(dt, sqdt, g, sgn);
        x += -0.5 * vp * dt + diff;
        tv += vp * dt;
    }
};

template <class JumpDraw>
struct JumpDiffusionStepper {
    double sigma;
    double lambda;
    JumpDraw jumps;
    double x = 0.0, tv = 0.0;
    void step(double dt, double sqdt, rng::Philox& g, double sgn) {
        const double s2 = sigma * sigma;
        x += (-0.5 * s2 - jumps.kappa * lambda) * dt + sigma * sqdt * sgn * g.normal();
        tv += s2 * dt;
        const long n = g.poisson(lambda * dt);
        if (n > 0) {
            auto [js, jsq] = jumps(n, g, sgn);
            x += js;
            tv += jsq;
        }
    }
};

template <class JumpDraw>
struct SvJumpStepper { // Bates
    CirState cir;
    double lambda;
    JumpDraw jumps;
    double x = 0.0, tv = 0.0;
    void step(double dt, double sqdt, rng::Philox& g, double sgn) {
        auto [vp, diff] = cir.advance(dt, sqdt, g, sgn);
        x += (-0.5 * vp - jumps.kappa * lambda) * dt + diff;
        tv += vp * dt;
        const long n = g.poisson(lambda * dt);
        if (n > 0) {
            auto [js, jsq] = jumps(n, g, sgn);
            x += js;
            tv += jsq;
        }
    }
};

struct FangStepper {
    CirState cir;
    CirState intensity;
    NormalJumpDraw jumps;
    double x = 0.0, tv = 0.0;
    void step(double dt, double sqdt, rng::Philox& g, double sgn) {
        auto [vp, diff] = cir.advance(dt, sqdt, g, sgn);
        const double lamp = std::max(intensity.v, 0.0);
        intensity.advance(dt, sqdt, g, sgn); // independent driver, rho = 0
        x += (-0.5 * vp - jumps.kappa * lamp) * dt + diff;
        tv += vp * dt;
        const long n = g.poisson(lamp * dt);
        if (n > 0) {
            auto [js, jsq] = jumps(n, g, sgn);
            x += js;
            tv += jsq;
        }
    }
};

struct CgmyStepper {
    CgmySim sim;
    double x = 0.0, tv = 0.0;
    void step(double dt, double sqdt, rng::Philox& g, double sgn) {
        x += -sim.drift * dt + sim.sigma_eps * sqdt * sgn * g.normal();
        tv += sim.sigma_eps * sim.sigma_eps * dt;
        const long np = g.poisson(sim.lam_plus * dt);
        for (long i = 0; i < np; ++i) {
            const double j = sim.draw_tail(sim.alpha_plus, sim.beta_plus, g);
            x += j;
            tv += j * j;
        }
        const long nm = g.poisson(sim.lam_minus * dt);
        for (long i = 0; i < nm; ++i) {
            const double j = sim.draw_tail(sim.alpha_minus, sim.beta_minus, g);
            x -= j;
            tv += j * j;
        }
    }
};

struct WishartStepper {
    Eigen::Matrix2d q, m;
    double c;
    double rho, srho;
    NormalJumpDraw jumps;
    Eigen::Matrix2d sig;
    double x = 0.0, tv = 0.0;
    long clipped = 0;

    void step(double dt, double sqdt, rng::Philox& g, double sgn) {
        const double s11 = std::max(sig(0, 0), 0.0);
        const double s22 = std::max(sig(1, 1), 0.0);
        const Eigen::Matrix2d root = sqrt_psd_2x2(sig);
        const double w1 = sqdt * sgn * g.normal();
        const double w2 = sqdt * sgn * g.normal();
        Eigen::Matrix2d db;
        db(0, 0) = rho * w1 + srho * sqdt * sgn * g.normal();
        db(0, 1) = sqdt * sgn * g.normal();
        db(1, 0) = rho * w2 + srho * sqdt * sgn * g.normal();
        db(1, 1) = sqdt * sgn * g.normal();

        const Eigen::Matrix2d incr = root * db * q;
        sig += incr + incr.transpose() + (m * sig + sig * m.transpose() + c * q.transpose() * q) * dt;
        if (project_psd_2x2(sig)) ++clipped;

        x += (-0.5 * s11 - jumps.kappa * s22) * dt + root(0, 0) * w1 + root(0, 1) * w2;
        tv += s11 * dt;
        const long n = g.poisson(s22 * dt);
        if (n > 0) {
            auto [js, jsq] = jumps(n, g, sgn);
            x += js;
            tv += jsq;
        }
    }
};

NormalJumpDraw make_normal_draw(const levy::NormalJumps& j) {
    return {j.m, j.delta, levy::jump_kappa(levy::JumpSpec{j})};
}

KouJumpDraw make_kou_draw(const levy::DoubleExpJumps& j) {
    return {j.p, j.alpha, j.beta, levy::jump_kappa(levy::JumpSpec{j})};
}

template <class Stepper>
long stepper_clips(const Stepper& s) {
    if constexpr (requires { s.clipped; })
        return s.clipped;
    else
        return 0;
}

template <class Stepper>
void run_paths(Stepper proto, double tau, const McConfig& cfg, std::uint64_t seed_base,
               std::vector<PathTerminal>& out, McDiagnostics* diag) {
    const long n = cfg.n_paths;
    const long n_steps = std::max<long>(cfg.n_steps, 1);
    const double dt = tau / static_cast<double>(n_steps);
    const double sqdt = std::sqrt(dt);
    int n_threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::clamp(n_threads, 1, 128);

    std::vector<long> clips(static_cast<size_t>(n_threads), 0);
    auto worker = [&](int slot, long lo, long hi) {
        long clipped = 0;
        for (long i = lo; i < hi; ++i) {
            const std::uint64_t stream = cfg.antithetic ? static_cast<std::uint64_t>(i / 2)
                                                        : static_cast<std::uint64_t>(i);
            const double sgn = cfg.antithetic && (i % 2 == 1) ? -1.0 : 1.0;
            rng::Philox g(seed_base, stream);
            Stepper s = proto;
            for (long k = 0; k < n_steps; ++k) s.step(dt, sqdt, g, sgn);
            out[i] = PathTerminal{s.x, s.tv};
            clipped += stepper_clips(s);
        }
        clips[slot] = clipped;
    };

    if (n_threads == 1) {
        worker(0, 0, n);
    } else {
        std::vector<std::thread> pool;
        const long chunk = (n + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const long lo = t * chunk, hi = std::min(n, lo + chunk);
            if (lo < hi) pool.emplace_back(worker, t, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    if (diag) {
        for (long c : clips) diag->clipped_steps += c;
        diag->total_steps += n * n_steps;
    }
}

} // namespace

PathState initial_state(const ModelSpec& model, const pricer::MarketState& mkt) {
    PathState s;
    s.log_s = std::log(mkt.spot);
    s.tv = mkt.accrued_tv;
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, models::Heston> || std::is_same_v<T, models::Bates>) {
                s.v = spec.cir.v0;
            } else if constexpr (std::is_same_v<T, models::Fang>) {
                s.v = spec.var_process.v0;
                s.lam = spec.intensity_process.v0;
            } else if constexpr (std::is_same_v<T, models::WishartDtc>) {
                s.sigma = spec.p.sigma0;
            }
        },
        model);
    return s;
}

PathState step(const ModelSpec& model, const PathState& s, double dt, double rate, rng::Philox& gen) {
    PathState out = s;
    const double sqdt = std::sqrt(dt);
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, models::BlackScholes>) {
                BsStepper st{spec.sigma};
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
            } else if constexpr (std::is_same_v<T, models::Heston>) {
                HestonStepper st{make_cir_state(spec.cir)};
                st.cir.v = s.v;
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
                out.v = st.cir.v;
            } else if constexpr (std::is_same_v<T, models::Merton>) {
                JumpDiffusionStepper<NormalJumpDraw> st{spec.sigma, spec.jumps.lambda,
                                                        make_normal_draw(spec.jumps)};
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
            } else if constexpr (std::is_same_v<T, models::Kou>) {
                JumpDiffusionStepper<KouJumpDraw> st{spec.sigma, spec.jumps.lambda,
                                                     make_kou_draw(spec.jumps)};
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
            } else if constexpr (std::is_same_v<T, models::Cgmy>) {
                CgmyStepper st{CgmySim::make(spec.jumps)};
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
            } else if constexpr (std::is_same_v<T, models::Bates>) {
                SvJumpStepper<NormalJumpDraw> st{make_cir_state(spec.cir), spec.jumps.lambda,
                                                 make_normal_draw(spec.jumps)};
                st.cir.v = s.v;
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
                out.v = st.cir.v;
            } else if constexpr (std::is_same_v<T, models::Fang>) {
                FangStepper st{make_cir_state(spec.var_process), make_cir_state(spec.intensity_process),
                               make_normal_draw(spec.jumps)};
                st.cir.v = s.v;
                st.intensity.v = s.lam;
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
                out.v = st.cir.v;
                out.lam = st.intensity.v;
            } else {
                const models::WishartParams& p = spec.p;
                WishartStepper st{p.q_mat,
                                  p.m_mat,
                                  p.c,
                                  p.rho,
                                  std::sqrt(1.0 - p.rho * p.rho),
                                  make_normal_draw(p.jumps),
                                  s.sigma};
                st.step(dt, sqdt, gen, 1.0);
                out.log_s += rate * dt + st.x;
                out.tv += st.tv;
                out.sigma = st.sig;
            }
        },
        model);
    return out;
}

std::vector<PathTerminal> simulate_terminals(const ModelSpec& model, const pricer::MarketState& mkt,
                                             double maturity, const McConfig& cfg, McDiagnostics* diag) {
    models::validate(model);
    const double tau = maturity - mkt.t0;
    if (!(tau > 0.0)) throw ValidationError("simulate_terminals: maturity must exceed t0");
    if (cfg.n_paths < 1 || cfg.n_steps < 1)
        throw ValidationError("simulate_terminals: n_paths and n_steps must be >= 1");

    std::vector<PathTerminal> out(static_cast<size_t>(cfg.n_paths));
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, models::BlackScholes>) {
                run_paths(BsStepper{spec.sigma}, tau, cfg, cfg.seed, out, diag);
            } else if constexpr (std::is_same_v<T, models::Heston>) {
                run_paths(HestonStepper{make_cir_state(spec.cir)}, tau, cfg, cfg.seed, out, diag);
            } else if constexpr (std::is_same_v<T, models::Merton>) {
                run_paths(JumpDiffusionStepper<NormalJumpDraw>{spec.sigma, spec.jumps.lambda,
                                                               make_normal_draw(spec.jumps)},
                          tau, cfg, cfg.seed, out, diag);
            } else if constexpr (std::is_same_v<T, models::Kou>) {
                run_paths(JumpDiffusionStepper<KouJumpDraw>{spec.sigma, spec.jumps.lambda,
                                                            make_kou_draw(spec.jumps)},
                          tau, cfg, cfg.seed, out, diag);
            } else if constexpr (std::is_same_v<T, models::Cgmy>) {
                run_paths(CgmyStepper{CgmySim::make(spec.jumps)}, tau, cfg, cfg.seed, out, diag);
            } else if constexpr (std::is_same_v<T, models::Bates>) {
                run_paths(SvJumpStepper<NormalJumpDraw>{make_cir_state(spec.cir), spec.jumps.lambda,
                                                        make_normal_draw(spec.jumps)},
                          tau, cfg, cfg.seed, out, diag);
            } else if constexpr (std::is_same_v<T, models::Fang>) {
                run_paths(FangStepper{make_cir_state(spec.var_process),
                                      make_cir_state(spec.intensity_process), make_normal_draw(spec.jumps)},
                          tau, cfg, cfg.seed, out, diag);
            } else {
                const models::WishartParams& p = spec.p;
                run_paths(WishartStepper{p.q_mat, p.m_mat, p.c, p.rho,
                                         std::sqrt(1.0 - p.rho * p.rho), make_normal_draw(p.jumps),
                                         p.sigma0},
                          tau, cfg, cfg.seed, out, diag);
            }
        },
        model);
    return out;
}

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 8) {
        double s = 0.0;
        for (double x : xs) s += x;
        return s;
    }
    const size_t half = xs.size() / 2;
    return pairwise_sum(xs.subspan(0, half)) + pairwise_sum(xs.subspan(half));
}

McResult price_from_terminals(std::span<const PathTerminal> terminals, const pricer::MarketState& mkt,
                              const payoffs::Contract& c) {
    payoffs::validate(c);
    const double tau = c.maturity - mkt.t0;
    const double disc = std::exp(-mkt.rate * tau);
    const double base = std::log(mkt.spot) + mkt.rate * tau;

    std::vector<double> vals;
    vals.reserve(terminals.size());
    McResult out;
    for (const PathTerminal& t : terminals) {
        const double tv = mkt.accrued_tv + t.dtv;
        const double v = payoff_value(c, base + t.dlog_s_disc, tv);
        if (!std::isfinite(v)) {
            ++out.n_degenerate;
            continue;
        }
        vals.push_back(disc * v);
    }
    out.n_used = static_cast<long>(vals.size());
    if (vals.empty()) {
        out.insufficient_sample = true;
        return out;
    }
    const double n = static_cast<double>(vals.size());
    out.price = pairwise_sum(vals) / n;
    if (vals.size() < 2) {
        out.insufficient_sample = true;
        return out;
    }
    std::vector<double> sq(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) {
        const double d = vals[i] - out.price;
        sq[i] = d * d;
    }
    out.std_err = std::sqrt(pairwise_sum(sq) / (n * (n - 1.0)));
    return out;
}

McResult mc_price(const ModelSpec& model, const pricer::MarketState& mkt, const payoffs::Contract& c,
                  const McConfig& cfg) {
    const auto terminals = simulate_terminals(model, mkt, c.maturity, cfg);
    return price_from_terminals(terminals, mkt, c);
}

McCfEstimate cf_from_terminals(std::span<const PathTerminal> terminals, Complex z, Complex w) {
    const size_t n = terminals.size();
    std::vector<double> re(n), im(n);
    for (size_t i = 0; i < n; ++i) {
        const Complex e =
            std::exp(Complex(0.0, 1.0) * (z * terminals[i].dlog_s_disc + w * terminals[i].dtv));
        re[i] = e.real();
        im[i] = e.imag();
    }
    const double nn = static_cast<double>(n);
    const Complex mean(pairwise_sum(re) / nn, pairwise_sum(im) / nn);
    double var = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double dr = re[i] - mean.real(), di = im[i] - mean.imag();
        var += dr * dr + di * di;
    }
    return {mean, n > 1 ? std::sqrt(var / (nn * (nn - 1.0))) : 0.0};
}

McCfEstimate mc_joint_cf(const ModelSpec& model, const pricer::MarketState& mkt, double t, Complex z,
                         Complex w, const McConfig& cfg) {
    const auto terminals = simulate_terminals(model, mkt, t, cfg);
    return cf_from_terminals(terminals, z, w);
}

} // namespace dtcp::mc
