#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "dtcp/models.hpp"
#include "dtcp/payoffs.hpp"
#include "dtcp/pricer.hpp"
#include "dtcp/rng.hpp"

namespace dtcp::mc {

using Complex = std::complex<double>;

struct McConfig {
    long n_paths = 100000;
    long n_steps = 1000; // over [t0, t]
    std::uint64_t seed = 20240901;
    bool antithetic = false; // default off: plain Euler scheme
    int threads = 0;         // 0 = hardware concurrency
};

struct McResult {
    double price = 0.0;
    double std_err = 0.0;
    long n_degenerate = 0; // excluded zero-variance TVO paths
    long n_used = 0;
    bool insufficient_sample = false; // fewer than 2 usable paths
};

/// Increments over [t0, t] of the discounted log price and the total
/// realized variance: log(S~_t / S~_t0) and TV_t - TV_t0.
struct PathTerminal {
    double dlog_s_disc;
    double dtv;
};

/// Full per-path state for the single-step API.
struct PathState {
    double log_s = 0.0; // absolute log spot
    double tv = 0.0;    // accumulated total variance
    double v = 0.0;     // CIR variance state (Heston/Bates/Fang)
    double lam = 0.0;   // CIR intensity state (Fang)
    Eigen::Matrix2d sigma = Eigen::Matrix2d::Zero();
};

PathState initial_state(const models::ModelSpec& model, const pricer::MarketState& mkt);

/// One Euler increment in log coordinates (full truncation for square-root
/// states, PSD projection for the matrix state, squared jumps accrued to tv).
PathState step(const models::ModelSpec& model, const PathState& s, double dt, double rate,
               rng::Philox& gen);

struct McDiagnostics {
    long clipped_steps = 0; // Wishart PSD projections applied
    long total_steps = 0;
};

/// Simulate all path terminals; deterministic given (seed, n_paths, n_steps)
/// and independent of the thread count (one counter-based stream per path,
/// fixed-order pairwise reduction downstream).
std::vector<PathTerminal> simulate_terminals(const models::ModelSpec& model,
                                             const pricer::MarketState& mkt, double maturity,
                                             const McConfig& cfg, McDiagnostics* diag = nullptr);

McResult mc_price(const models::ModelSpec& model, const pricer::MarketState& mkt,
                  const payoffs::Contract& c, const McConfig& cfg);

/// Price from precomputed terminals (shared across contracts on the same model).
McResult price_from_terminals(std::span<const PathTerminal> terminals,
                              const pricer::MarketState& mkt, const payoffs::Contract& c);

struct McCfEstimate {
    Complex value;
    double std_err;
};

McCfEstimate mc_joint_cf(const models::ModelSpec& model, const pricer::MarketState& mkt, double t,
                         Complex z, Complex w, const McConfig& cfg);

McCfEstimate cf_from_terminals(std::span<const PathTerminal> terminals, Complex z, Complex w);

/// Deterministic pairwise (cascade) summation.
double pairwise_sum(std::span<const double> xs);

} // namespace dtcp::mc
