#pragma once

#include <array>

#include "dtcp/models.hpp"
#include "dtcp/payoffs.hpp"
#include "dtcp/pricer.hpp"

namespace dtcp::tables {

/// Market conditions and contract parameters of one benchmark scenario set.
struct ScenarioSet {
    int id;
    double spot;
    double strike;     // vanilla strike K = TVO strike H
    double vol_strike; // Q
    double t0;
    double maturity;
    double rate;
    double target_vol; // sigma_bar
    double accrued_tv; // TV_t0
};

/// The five benchmark scenario sets (ids 2..6).
const std::array<ScenarioSet, 5>& scenario_sets();
const ScenarioSet& scenario_set(int id);

inline constexpr int kNumPaperModels = 5;
/// Estimated S&P parameter sets, in benchmark order:
/// 0 black-scholes, 1 heston, 2 merton, 3 bates, 4 fang.
models::ModelSpec paper_model(int index);
const char* paper_model_label(int index);

inline constexpr int kNumPayoffs = 3; // 0 vanilla, 1 volatility, 2 tvo
payoffs::Contract scenario_contract(const ScenarioSet& s, int payoff_index);
pricer::MarketState scenario_market(const ScenarioSet& s);

/// Published reference values for each cell: analytic value and plain-Euler
/// Monte Carlo value (100k paths, 1000 steps).
struct ReferenceCell {
    double av;
    double mc;
};
ReferenceCell reference_cell(int table_id, int model_index, int payoff_index);

/// Default parameter sets for the models without a benchmark column.
models::ModelSpec default_kou();
models::ModelSpec default_cgmy();
models::ModelSpec default_wishart();

} // namespace dtcp::tables
