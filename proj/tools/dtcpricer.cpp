#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dtcp/checks.hpp"
#include "dtcp/config.hpp"
#include "dtcp/errors.hpp"
#include "dtcp/mc.hpp"
#include "dtcp/pricer.hpp"
#include "dtcp/reference_tables.hpp"

namespace {

using namespace dtcp;

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

config::RunConfig load_config(const std::string& path, const std::string& output_override,
                              long seed_override, int threads_override) {
    auto kv = config::read_key_value_file(path);
    if (!output_override.empty()) kv["output"] = output_override;
    if (seed_override >= 0) kv["seed"] = std::to_string(seed_override);
    if (threads_override >= 0) kv["threads"] = std::to_string(threads_override);
    return config::from_key_values(kv);
}

int cmd_price(const config::RunConfig& cfg) {
    const auto r = pricer::price(cfg.model, cfg.market, cfg.contract, cfg.quad);
    std::cout << config::render_pricing(cfg, r) << "\n";
    return 0;
}

int cmd_greeks(const config::RunConfig& cfg) {
    const auto p = pricer::price(cfg.model, cfg.market, cfg.contract, cfg.quad);
    const double dl = pricer::delta(cfg.model, cfg.market, cfg.contract, cfg.quad);
    const double gm = pricer::gamma(cfg.model, cfg.market, cfg.contract, cfg.quad);
    const double vega_v0 =
        pricer::activity_vega(cfg.model, cfg.market, cfg.contract, cfg.quad, models::ActivityState::V0);
    if (cfg.output == config::OutputKind::Json) {
        std::cout << "{\"price\":" << fmt(p.price) << ",\"delta\":" << fmt(dl) << ",\"gamma\":" << fmt(gm)
                  << ",\"vega_v0\":" << fmt(vega_v0) << "}\n";
    } else {
        std::cout << "price   " << fmt(p.price) << "\n"
                  << "delta   " << fmt(dl) << "\n"
                  << "gamma   " << fmt(gm) << "\n"
                  << "vega_v0 " << fmt(vega_v0) << "\n";
    }
    return 0;
}

int cmd_mc(const config::RunConfig& cfg) {
    const auto r = mc::mc_price(cfg.model, cfg.market, cfg.contract, cfg.mc);
    std::cout << config::render_mc(cfg, r) << "\n";
    return 0;
}

int cmd_reproduce(int table_id, const std::string& out_path, const mc::McConfig& mc_base) {
    const tables::ScenarioSet& sc = tables::scenario_set(table_id);
    const pricer::MarketState mkt = tables::scenario_market(sc);

    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw ValidationError("reproduce: cannot open output file " + out_path);
        os = &file;
    }
    *os << "table,model,payoff,av,mc,stderr,relerr\n";

    static const char* payoff_names[3] = {"vanilla", "volatility", "tvo"};
    int av_pass = 0, mc_pass = 0, cells = 0;
    for (int mi = 0; mi < tables::kNumPaperModels; ++mi) {
        const models::ModelSpec model = tables::paper_model(mi);
        mc::McConfig mcfg = mc_base;
        const auto terminals = mc::simulate_terminals(model, mkt, sc.maturity, mcfg);
        for (int pi = 0; pi < tables::kNumPayoffs; ++pi) {
            const payoffs::Contract c = tables::scenario_contract(sc, pi);
            ++cells;
            double av = 0.0, mcv = 0.0, se = 0.0, rel = 0.0;
            bool failed = false;
            try {
                av = pricer::price(model, mkt, c, {}).price;
                const mc::McResult r = mc::price_from_terminals(terminals, mkt, c);
                mcv = r.price;
                se = r.std_err;
                rel = std::abs(av - mcv) / std::abs(mcv);
            } catch (const Error& e) {
                failed = true;
                *os << table_id << ',' << tables::paper_model_label(mi) << ',' << payoff_names[pi]
                    << ",error,error,error,error # " << e.what() << "\n";
            }
            if (failed) continue;
            *os << table_id << ',' << tables::paper_model_label(mi) << ',' << payoff_names[pi] << ','
                << fmt(av) << ',' << fmt(mcv) << ',' << fmt(se) << ',' << fmt(rel) << "\n";
            const tables::ReferenceCell ref = tables::reference_cell(table_id, mi, pi);
            const double av_tol = pi == 2 ? 0.010 : 0.002;
            if (std::abs(av - ref.av) / std::abs(ref.av) <= av_tol) ++av_pass;
            if (std::abs(av - mcv) <= 3.0 * se) ++mc_pass;
        }
    }
    *os << "# summary table=" << table_id << " av_within_tol=" << av_pass << "/" << cells
        << " mc_within_3se=" << mc_pass << "/" << cells << "\n";
    return 0;
}

int cmd_check(const std::string& which, int threads) {
    checks::CheckOptions opt;
    opt.threads = threads;
    std::vector<checks::CheckResult> results;
    auto add = [&](std::vector<checks::CheckResult> v) {
        for (auto& r : v) results.push_back(std::move(r));
    };

    const bool all = which == "all" || which.empty();
    auto matches = [&](const std::string& name) { return all || which == name; };

    for (int mi = 0; mi < tables::kNumPaperModels; ++mi) {
        const auto m = tables::paper_model(mi);
        if (matches(models::model_name(m))) add(checks::model_checks(m, opt));
    }
    if (matches("kou")) add(checks::model_checks(tables::default_kou(), opt));
    if (matches("cgmy")) add(checks::model_checks(tables::default_cgmy(), opt));
    if (matches("wishart")) {
        const auto m = tables::default_wishart();
        add(checks::model_checks(m, opt));
        add(checks::wishart_checks(std::get<models::WishartDtc>(m).p, opt));
    }
    if (all) {
        add(checks::nesting_checks());
        add(checks::oracle_checks());
    }
    if (results.empty()) throw ValidationError("check: unknown model '" + which + "'");

    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << " (" << r.detail << ")\n";
        if (!r.pass) ++failures;
    }
    std::cout << (failures == 0 ? "all checks passed" : "FAILURES: " + std::to_string(failures)) << "\n";
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier-inversion pricer for joint price/realized-variance derivatives"};
    app.require_subcommand(1);

    std::string config_path, output_override;
    long seed_override = -1;
    int threads_override = -1;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--output", output_override, "output format: human|csv|json");
    app.add_option("--seed", seed_override, "Monte Carlo seed override");
    app.add_option("--threads", threads_override, "worker thread cap (0 = all cores)");

    auto* sub_price = app.add_subcommand("price", "analytic price via the inversion integral");
    auto* sub_greeks = app.add_subcommand("greeks", "price, delta, gamma and activity vega");
    auto* sub_mc = app.add_subcommand("mc", "Monte Carlo price with standard error");

    auto* sub_rep = app.add_subcommand("reproduce", "run one benchmark scenario set (CSV)");
    int table_id = 2;
    std::string out_path;
    sub_rep->add_option("--table", table_id, "scenario set id (2-6)")->required();
    sub_rep->add_option("--out", out_path, "output CSV path (default stdout)");
    long rep_paths = 100000, rep_steps = 1000;
    sub_rep->add_option("--paths", rep_paths, "Monte Carlo paths per model");
    sub_rep->add_option("--steps", rep_steps, "Monte Carlo steps");

    auto* sub_check = app.add_subcommand("check", "run the model invariant suite");
    std::string which = "all";
    sub_check->add_option("model", which, "model name or 'all'");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sub_price->parsed() || sub_greeks->parsed() || sub_mc->parsed()) {
            if (config_path.empty()) {
                std::cerr << "error: --config is required for this subcommand\n";
                return 2;
            }
            const auto cfg = load_config(config_path, output_override, seed_override, threads_override);
            if (sub_price->parsed()) return cmd_price(cfg);
            if (sub_greeks->parsed()) return cmd_greeks(cfg);
            return cmd_mc(cfg);
        }
        if (sub_rep->parsed()) {
            mc::McConfig mcfg;
            mcfg.n_paths = rep_paths;
            mcfg.n_steps = rep_steps;
            if (seed_override >= 0) mcfg.seed = static_cast<std::uint64_t>(seed_override);
            if (threads_override >= 0) mcfg.threads = threads_override;
            return cmd_reproduce(table_id, out_path, mcfg);
        }
        if (sub_check->parsed()) return cmd_check(which, std::max(threads_override, 0));
    } catch (const ContourError& e) {
        std::cerr << "contour error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
