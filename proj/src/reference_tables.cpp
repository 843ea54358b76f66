#include "dtcp/reference_tables.hpp"

#include <stdexcept>

#include "dtcp/errors.hpp"

namespace dtcp::tables {

const std::array<ScenarioSet, 5>& scenario_sets() {
    static const std::array<ScenarioSet, 5> sets = {{
        //  id  spot strike   Q     t0    t    rate  sbar  tv0
        {2, 100.0, 80.0, 0.05, 0.0, 1.0, 0.060, 0.1, 0.000},
        {3, 100.0, 120.0, 0.10, 0.5, 4.0, 0.039, 0.1, 0.018},
        {4, 100.0, 100.0, 0.25, 1.25, 1.5, 0.072, 0.1, 0.230},
        {5, 100.0, 60.0, 0.20, 3.0, 5.0, 0.0225, 0.1, 0.190},
        {6, 100.0, 130.0, 0.015, 1.0, 2.5, 0.087, 0.1, 0.009},
    }};
    return sets;
}

const ScenarioSet& scenario_set(int id) {
    for (const ScenarioSet& s : scenario_sets())
        if (s.id == id) return s;
    throw ValidationError("scenario_set: table id must be in 2..6");
}

models::ModelSpec paper_model(int index) {
    switch (index) {
        case 0:
            return models::BlackScholes{0.14};
        case 1:
            return models::Heston{{4.57, 0.0306, 0.48, 0.15 * 0.15, -0.82}};
        case 2:
            return models::Merton{0.12, levy::normal_jumps_from_kappa(-0.075, 0.0894, 1.42)};
        case 3:
            return models::Bates{{8.93, 0.0167, 0.22, 0.15 * 0.15, -0.58},
                                 levy::normal_jumps_from_kappa(-0.11, 0.1049, 0.39)};
        case 4:
            return models::Fang{{6.5, 0.0104, 0.2, 0.14 * 0.14, -0.48},
                                {5.06, 0.13, 1.069, 0.41, 0.0},
                                levy::normal_jumps_from_kappa(-0.21, 0.2168, 0.41)};
        default:
            throw ValidationError("paper_model: index out of range");
    }
}

const char* paper_model_label(int index) {
    static const char* names[] = {"black-scholes", "heston", "merton", "bates", "fang"};
    if (index < 0 || index >= kNumPaperModels) throw ValidationError("paper_model_label: bad index");
    return names[index];
}

payoffs::Contract scenario_contract(const ScenarioSet& s, int payoff_index) {
    switch (payoff_index) {
        case 0:
            return payoffs::Contract{payoffs::VanillaCall{s.strike}, s.maturity};
        case 1:
            return payoffs::Contract{payoffs::VolatilityCall{s.vol_strike}, s.maturity};
        case 2:
            return payoffs::Contract{payoffs::TvoCall{s.strike, s.target_vol}, s.maturity};
        default:
            throw ValidationError("scenario_contract: payoff index out of range");
    }
}

pricer::MarketState scenario_market(const ScenarioSet& s) {
    return pricer::MarketState{s.spot, s.accrued_tv, s.rate, s.t0};
}

namespace {

// av, mc per cell; row order black-scholes, heston, merton, bates, fang;
// column order vanilla, volatility, tvo.
struct Row {
    double av[3];
    double mc[3];
};
using Table = std::array<Row, 5>;

const Table kTable2 = {{
    {{24.7627, 0.0847, 17.5441}, {24.7775, 0.0848, 17.6982}},
    {{25.3893, 0.1088, 17.2248}, {25.3710, 0.1084, 17.6044}},
    {{25.3243, 0.1192, 17.7529}, {25.2290, 0.1194, 17.7922}},
    {{25.1166, 0.1002, 18.5980}, {25.0889, 0.1005, 18.7480}},
    {{25.5686, 0.0907, 24.0494}, {25.6508, 0.0892, 24.0764}},
}};

const Table kTable3 = {{
    {{8.4801, 0.1672, 5.7622}, {8.4784, 0.1695, 5.6957}},
    {{10.3063, 0.2167, 6.3815}, {10.3023, 0.2172, 6.7080}},
    {{11.5845, 0.2357, 7.4564}, {11.5713, 0.2356, 7.4239}},
    {{9.8607, 0.2002, 6.8180}, {9.8371, 0.2001, 6.9085}},
    {{8.8630, 0.1827, 7.4173}, {8.8737, 0.1828, 7.5046}},
}};

const Table kTable4 = {{
    {{3.7627, 0.2300, 0.9771}, {3.7346, 0.2305, 0.9437}},
    {{4.1390, 0.2318, 1.0480}, {4.1304, 0.2320, 1.0451}},
    {{4.4169, 0.2348, 1.1254}, {4.4435, 0.2343, 1.1235}},
    {{4.1842, 0.2327, 1.0593}, {4.1687, 0.2328, 1.0544}},
    {{4.3219, 0.2362, 1.0919}, {4.3420, 0.2362, 1.0987}},
}};

const Table kTable5 = {{
    {{42.6506, 0.2670, 19.7252}, {42.6452, 0.2665, 19.9181}},
    {{42.9595, 0.2859, 19.8454}, {43.0010, 0.2858, 19.6512}},
    {{42.8984, 0.2955, 19.4192}, {42.8580, 0.2954, 19.3975}},
    {{42.7768, 0.2804, 19.8042}, {42.7928, 0.2802, 19.8318}},
    {{43.0039, 0.2793, 20.5992}, {43.0252, 0.2791, 20.5998}},
}};

const Table kTable6 = {{
    {{2.3393, 0.1590, 1.9535}, {2.3080, 0.1588, 1.8622}},
    {{2.5098, 0.1852, 2.2190}, {2.5071, 0.1862, 2.1317}},
    {{3.7078, 0.1983, 3.0330}, {3.6843, 0.1981, 3.0165}},
    {{2.7416, 0.1767, 2.3727}, {2.7380, 0.1769, 2.3798}},
    {{1.9814, 0.1664, 1.9453}, {1.9410, 0.1668, 1.9167}},
}};

const Table& table_by_id(int id) {
    switch (id) {
        case 2: return kTable2;
        case 3: return kTable3;
        case 4: return kTable4;
        case 5: return kTable5;
        case 6: return kTable6;
        default: throw ValidationError("reference_cell: table id must be in 2..6");
    }
}

} // namespace

ReferenceCell reference_cell(int table_id, int model_index, int payoff_index) {
    if (model_index < 0 || model_index >= kNumPaperModels || payoff_index < 0 || payoff_index >= 3)
        throw ValidationError("reference_cell: index out of range");
    const Row& r = table_by_id(table_id)[static_cast<size_t>(model_index)];
    return {r.av[payoff_index], r.mc[payoff_index]};
}

models::ModelSpec default_kou() {
    return models::Kou{0.12, levy::DoubleExpJumps{0.6, 9.0, 5.0, 0.8}};
}

models::ModelSpec default_cgmy() {
    return models::Cgmy{levy::CgmyJumps{1.0, 1.0, 4.0, 3.0, 0.5, 0.5}};
}

models::ModelSpec default_wishart() {
    // c above n + 1 keeps the state away from the cone boundary, so the
    // Euler scheme almost never needs an eigenvalue projection.
    models::WishartParams p;
    p.q_mat << 0.2, 0.06, 0.03, 0.4;
    p.m_mat << -3.0, 0.3, 0.3, -2.0;
    p.c = 3.2;
    p.sigma0 << 0.0225, 0.008, 0.008, 0.36;
    p.rho = -0.6;
    p.jumps = levy::normal_jumps_from_kappa(-0.08, 0.12, 1.0);
    return models::WishartDtc{p};
}

} // namespace dtcp::tables
