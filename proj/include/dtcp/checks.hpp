#pragma once

#include <string>
#include <vector>

#include "dtcp/mc.hpp"
#include "dtcp/models.hpp"

namespace dtcp::checks {

struct CheckResult {
    std::string name;
    bool pass;
    std::string detail;
};

struct CheckOptions {
    long mc_paths = 200000; // for the moment-matching checks
    long mc_steps = 400;
    std::uint64_t seed = 777;
    int threads = 0;
};

/// Normalization, martingale, Hermitian symmetry and the characteristic
/// function moment-vs-simulation check for one model.
std::vector<CheckResult> model_checks(const models::ModelSpec& m, const CheckOptions& opt = {});

/// Nesting limits: Heston -> Black-Scholes, Bates -> Heston, Fang -> Bates.
std::vector<CheckResult> nesting_checks();

/// Closed-form vs quadrature psi_D grids for the three jump families, and
/// the square-root transform against its Riccati ODE oracle.
std::vector<CheckResult> oracle_checks();

/// Wishart-specific: CIR degeneration of the diagonal transform, small-tau
/// expansion, branch continuity of a(tau), and the activity-rate correlation
/// against Euler increments.
std::vector<CheckResult> wishart_checks(const models::WishartParams& p, const CheckOptions& opt = {});

} // namespace dtcp::checks
