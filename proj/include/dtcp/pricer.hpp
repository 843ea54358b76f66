#pragma once

#include <optional>

#include "dtcp/models.hpp"
#include "dtcp/payoffs.hpp"
#include "dtcp/quadrature.hpp"

namespace dtcp::pricer {

using Complex = std::complex<double>;

struct MarketState {
    double spot;       // S_t0 > 0
    double accrued_tv; // total realized variance up to t0, >= 0
    double rate;       // continuously compounded short rate
    double t0;         // valuation time
};

void validate(const MarketState& m);

struct QuadConfig {
    double rel_tol_1d = 1e-8;
    double rel_tol_2d = 1e-6;
    double trunc_threshold = 1e-12;
    long max_evals = 6'000'000;
    std::optional<double> k1; // contour overrides
    std::optional<double> k2;
};

struct PricingResult {
    double price = 0.0;
    double err_estimate = 0.0; // quadrature's own absolute bound
    long evals = 0;
    double k1 = 0.0, k2 = 0.0; // contour used
    bool converged = true;
};

/// Contour for the inversion integral: a multi-line interior to the payoff
/// strip intersected with the reflected model strip (the integrand evaluates
/// the characteristic function at (-z, -w)). Default is the midpoint of the
/// admissible interval intersected with the clamp windows k1 in [1.25, 2.5],
/// k2 in [0.25, 1.0]. Throws ContourError when the intersection is empty.
std::pair<double, double> select_contour(const models::ComplexStrip& payoff_strip,
                                         const models::ComplexStrip& model_strip,
                                         payoffs::PayoffDim dim);

PricingResult price(const models::ModelSpec& model, const MarketState& mkt,
                    const payoffs::Contract& c, const QuadConfig& cfg = {});

double delta(const models::ModelSpec& model, const MarketState& mkt, const payoffs::Contract& c,
             const QuadConfig& cfg = {});
double gamma(const models::ModelSpec& model, const MarketState& mkt, const payoffs::Contract& c,
             const QuadConfig& cfg = {});

/// Sensitivity to an initial activity state through the exponential-affine
/// coefficient of the characteristic function; falls back to central finite
/// differences (relative step 1e-4) when no affine coefficient is available.
double activity_vega(const models::ModelSpec& model, const MarketState& mkt,
                     const payoffs::Contract& c, const QuadConfig& cfg, models::ActivityState which);

/// The model with one initial activity state bumped by +h (used by the
/// finite-difference fallback and by test oracles).
models::ModelSpec bump_state(const models::ModelSpec& model, models::ActivityState which, double h);

} // namespace dtcp::pricer
