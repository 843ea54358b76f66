#include "dtcp/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "dtcp/errors.hpp"

namespace dtcp::config {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class KvReader {
public:
    explicit KvReader(const KeyValues& kv) : kv_(kv) {}

    double num(const std::string& key) const {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ValidationError("config: missing required key '" + key + "'");
        used_.insert(key);
        try {
            size_t pos = 0;
            const double v = std::stod(it->second, &pos);
            if (pos != it->second.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ValidationError("config: key '" + key + "' is not a number: " + it->second);
        }
    }
    double num_or(const std::string& key, double dflt) const {
        return kv_.count(key) ? num(key) : dflt;
    }
    long integer(const std::string& key, long dflt) const {
        if (!kv_.count(key)) return dflt;
        return static_cast<long>(num(key));
    }
    std::string str(const std::string& key) const {
        const auto it = kv_.find(key);
        if (it == kv_.end()) throw ValidationError("config: missing required key '" + key + "'");
        used_.insert(key);
        return it->second;
    }
    std::string str_or(const std::string& key, const std::string& dflt) const {
        return kv_.count(key) ? str(key) : dflt;
    }
    bool flag_or(const std::string& key, bool dflt) const {
        if (!kv_.count(key)) return dflt;
        const std::string v = str(key);
        if (v == "true" || v == "1" || v == "on") return true;
        if (v == "false" || v == "0" || v == "off") return false;
        throw ValidationError("config: key '" + key + "' must be a boolean");
    }
    void check_all_used() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k)) throw ValidationError("config: unknown key '" + k + "'");
    }

private:
    const KeyValues& kv_;
    mutable std::set<std::string> used_;
};

models::ModelSpec model_from_kv(const KvReader& r) {
    const std::string name = r.str("model");
    if (name == "black-scholes" || name == "bs") {
        return models::BlackScholes{r.num("sigma_t0")};
    }
    if (name == "heston") {
        const double s0 = r.num("sigma_t0");
        return models::Heston{{r.num("alpha"), r.num("theta"), r.num("eta"), s0 * s0, r.num("rho")}};
    }
    if (name == "merton") {
        return models::Merton{r.num("sigma_t0"), levy::normal_jumps_from_kappa(r.num("kappa"), r.num("delta"),
                                                                               r.num("lambda0"))};
    }
    if (name == "kou") {
        return models::Kou{r.num("sigma_t0"), levy::DoubleExpJumps{r.num("p_up"), r.num("alpha_up"),
                                                                   r.num("beta_down"), r.num("lambda0")}};
    }
    if (name == "cgmy") {
        return models::Cgmy{levy::CgmyJumps{r.num("c_plus"), r.num("c_minus"), r.num("beta_plus"),
                                            r.num("beta_minus"), r.num("alpha_plus"), r.num("alpha_minus")}};
    }
    if (name == "bates") {
        const double s0 = r.num("sigma_t0");
        return models::Bates{{r.num("alpha"), r.num("theta"), r.num("eta"), s0 * s0, r.num("rho")},
                             levy::normal_jumps_from_kappa(r.num("kappa"), r.num("delta"), r.num("lambda0"))};
    }
    if (name == "fang") {
        const double s0 = r.num("sigma_t0");
        const double lam0 = r.num("lambda0");
        return models::Fang{
            {r.num("alpha"), r.num("theta"), r.num("eta"), s0 * s0, r.num("rho")},
            {r.num("alpha_lambda"), r.num("theta_lambda"), r.num("eta_lambda"), lam0, 0.0},
            levy::normal_jumps_from_kappa(r.num("kappa"), r.num("delta"), lam0)};
    }
    if (name == "wishart") {
        models::WishartParams p;
        p.q_mat << r.num("q11"), r.num("q12"), r.num("q21"), r.num("q22");
        p.m_mat << r.num("m11"), r.num("m12"), r.num("m21"), r.num("m22");
        p.c = r.num("c");
        p.sigma0 << r.num("sigma0_11"), r.num("sigma0_12"), r.num("sigma0_12"), r.num("sigma0_22");
        p.rho = r.num("rho");
        p.jumps = levy::normal_jumps_from_kappa(r.num("kappa"), r.num("delta"), 1.0);
        return models::WishartDtc{p};
    }
    throw ValidationError("config: unknown model '" + name + "'");
}

payoffs::Contract contract_from_kv(const KvReader& r) {
    const std::string p = r.str("payoff");
    const double t = r.num("maturity");
    if (p == "vanilla") return {payoffs::VanillaCall{r.num("strike")}, t};
    if (p == "volatility") return {payoffs::VolatilityCall{r.num("vol_strike")}, t};
    if (p == "tvo") return {payoffs::TvoCall{r.num("strike"), r.num("target_vol")}, t};
    throw ValidationError("config: unknown payoff '" + p + "' (vanilla|volatility|tvo)");
}

void model_to_kv(const models::ModelSpec& m, KeyValues& kv) {
    kv["model"] = models::model_name(m);
    std::visit(
        [&](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            auto put = [&](const char* k, double v) { kv[k] = fmt_double(v); };
            if constexpr (std::is_same_v<T, models::BlackScholes>) {
                put("sigma_t0", spec.sigma);
            } else if constexpr (std::is_same_v<T, models::Heston>) {
                put("sigma_t0", std::sqrt(spec.cir.v0));
                put("alpha", spec.cir.alpha);
                put("theta", spec.cir.theta);
                put("eta", spec.cir.eta);
                put("rho", spec.cir.rho);
            } else if constexpr (std::is_same_v<T, models::Merton>) {
                put("sigma_t0", spec.sigma);
                put("lambda0", spec.jumps.lambda);
                put("delta", spec.jumps.delta);
                put("kappa", levy::jump_kappa(levy::JumpSpec{spec.jumps}));
            } else if constexpr (std::is_same_v<T, models::Kou>) {
                put("sigma_t0", spec.sigma);
                put("lambda0", spec.jumps.lambda);
                put("p_up", spec.jumps.p);
                put("alpha_up", spec.jumps.alpha);
                put("beta_down", spec.jumps.beta);
            } else if constexpr (std::is_same_v<T, models::Cgmy>) {
                put("c_plus", spec.jumps.c_plus);
                put("c_minus", spec.jumps.c_minus);
                put("beta_plus", spec.jumps.beta_plus);
                put("beta_minus", spec.jumps.beta_minus);
                put("alpha_plus", spec.jumps.alpha_plus);
                put("alpha_minus", spec.jumps.alpha_minus);
            } else if constexpr (std::is_same_v<T, models::Bates>) {
                put("sigma_t0", std::sqrt(spec.cir.v0));
                put("alpha", spec.cir.alpha);
                put("theta", spec.cir.theta);
                put("eta", spec.cir.eta);
                put("rho", spec.cir.rho);
                put("lambda0", spec.jumps.lambda);
                put("delta", spec.jumps.delta);
                put("kappa", levy::jump_kappa(levy::JumpSpec{spec.jumps}));
            } else if constexpr (std::is_same_v<T, models::Fang>) {
                put("sigma_t0", std::sqrt(spec.var_process.v0));
                put("alpha", spec.var_process.alpha);
                put("theta", spec.var_process.theta);
                put("eta", spec.var_process.eta);
                put("rho", spec.var_process.rho);
                put("lambda0", spec.intensity_process.v0);
                put("alpha_lambda", spec.intensity_process.alpha);
                put("theta_lambda", spec.intensity_process.theta);
                put("eta_lambda", spec.intensity_process.eta);
                put("delta", spec.jumps.delta);
                put("kappa", levy::jump_kappa(levy::JumpSpec{spec.jumps}));
            } else {
                const models::WishartParams& p = spec.p;
                put("q11", p.q_mat(0, 0));
                put("q12", p.q_mat(0, 1));
                put("q21", p.q_mat(1, 0));
                put("q22", p.q_mat(1, 1));
                put("m11", p.m_mat(0, 0));
                put("m12", p.m_mat(0, 1));
                put("m21", p.m_mat(1, 0));
                put("m22", p.m_mat(1, 1));
                put("c", p.c);
                put("sigma0_11", p.sigma0(0, 0));
                put("sigma0_12", p.sigma0(0, 1));
                put("sigma0_22", p.sigma0(1, 1));
                put("rho", p.rho);
                put("delta", p.jumps.delta);
                put("kappa", levy::jump_kappa(levy::JumpSpec{p.jumps}));
            }
        },
        m);
}

void contract_to_kv(const payoffs::Contract& c, KeyValues& kv) {
    kv["payoff"] = payoffs::payoff_name(c);
    kv["maturity"] = fmt_double(c.maturity);
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, payoffs::VanillaCall>) {
                kv["strike"] = fmt_double(k.strike);
            } else if constexpr (std::is_same_v<T, payoffs::VolatilityCall>) {
                kv["vol_strike"] = fmt_double(k.vol_strike);
            } else {
                kv["strike"] = fmt_double(k.strike);
                kv["target_vol"] = fmt_double(k.target_vol);
            }
        },
        c.kind);
}

} // namespace

KeyValues read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("config: cannot open file " + path);
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string t = trim(line);
        if (t.empty()) continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config: line " + std::to_string(lineno) + " is not 'key = value'");
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }
    return kv;
}

RunConfig from_key_values(const KeyValues& kv) {
    const KvReader r(kv);
    RunConfig cfg;
    cfg.model = model_from_kv(r);
    models::validate(cfg.model);
    cfg.market = pricer::MarketState{r.num_or("spot", 100.0), r.num_or("tv0", 0.0), r.num_or("rate", 0.0),
                                     r.num_or("t0", 0.0)};
    pricer::validate(cfg.market);
    cfg.contract = contract_from_kv(r);
    payoffs::validate(cfg.contract);
    if (!(cfg.contract.maturity > cfg.market.t0))
        throw ValidationError("config: maturity must exceed t0");
    cfg.quad.rel_tol_1d = r.num_or("rel_tol_1d", cfg.quad.rel_tol_1d);
    cfg.quad.rel_tol_2d = r.num_or("rel_tol_2d", cfg.quad.rel_tol_2d);
    cfg.quad.trunc_threshold = r.num_or("trunc_threshold", cfg.quad.trunc_threshold);
    cfg.quad.max_evals = r.integer("max_evals", cfg.quad.max_evals);
    if (kv.count("k1")) cfg.quad.k1 = r.num("k1");
    if (kv.count("k2")) cfg.quad.k2 = r.num("k2");
    cfg.mc.n_paths = r.integer("n_paths", cfg.mc.n_paths);
    cfg.mc.n_steps = r.integer("n_steps", cfg.mc.n_steps);
    cfg.mc.seed = static_cast<std::uint64_t>(r.integer("seed", static_cast<long>(cfg.mc.seed)));
    cfg.mc.antithetic = r.flag_or("antithetic", cfg.mc.antithetic);
    cfg.mc.threads = static_cast<int>(r.integer("threads", cfg.mc.threads));
    const std::string out = r.str_or("output", "human");
    if (out == "human")
        cfg.output = OutputKind::Human;
    else if (out == "csv")
        cfg.output = OutputKind::Csv;
    else if (out == "json")
        cfg.output = OutputKind::Json;
    else
        throw ValidationError("config: unknown output '" + out + "' (human|csv|json)");
    r.check_all_used();
    return cfg;
}

KeyValues to_key_values(const RunConfig& cfg) {
    KeyValues kv;
    model_to_kv(cfg.model, kv);
    kv["spot"] = fmt_double(cfg.market.spot);
    kv["tv0"] = fmt_double(cfg.market.accrued_tv);
    kv["rate"] = fmt_double(cfg.market.rate);
    kv["t0"] = fmt_double(cfg.market.t0);
    contract_to_kv(cfg.contract, kv);
    kv["rel_tol_1d"] = fmt_double(cfg.quad.rel_tol_1d);
    kv["rel_tol_2d"] = fmt_double(cfg.quad.rel_tol_2d);
    kv["trunc_threshold"] = fmt_double(cfg.quad.trunc_threshold);
    kv["max_evals"] = std::to_string(cfg.quad.max_evals);
    if (cfg.quad.k1) kv["k1"] = fmt_double(*cfg.quad.k1);
    if (cfg.quad.k2) kv["k2"] = fmt_double(*cfg.quad.k2);
    kv["n_paths"] = std::to_string(cfg.mc.n_paths);
    kv["n_steps"] = std::to_string(cfg.mc.n_steps);
    kv["seed"] = std::to_string(cfg.mc.seed);
    kv["antithetic"] = cfg.mc.antithetic ? "true" : "false";
    kv["threads"] = std::to_string(cfg.mc.threads);
    kv["output"] = cfg.output == OutputKind::Human ? "human"
                   : cfg.output == OutputKind::Csv ? "csv"
                                                   : "json";
    return kv;
}

std::string pricing_record_json(const RunConfig& cfg, const pricer::PricingResult& r) {
    nlohmann::json j;
    j["config"] = to_key_values(cfg);
    j["result"] = {{"price", r.price},   {"err_estimate", r.err_estimate}, {"evals", r.evals},
                   {"k1", r.k1},         {"k2", r.k2},                     {"converged", r.converged}};
    return j.dump();
}

std::string mc_record_json(const RunConfig& cfg, const mc::McResult& r) {
    nlohmann::json j;
    j["config"] = to_key_values(cfg);
    j["result"] = {{"price", r.price},
                   {"std_err", r.std_err},
                   {"n_degenerate", r.n_degenerate},
                   {"n_used", r.n_used},
                   {"insufficient_sample", r.insufficient_sample}};
    return j.dump();
}

RunConfig config_from_json_record(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line);
    KeyValues kv;
    for (const auto& [k, v] : j.at("config").items()) kv[k] = v.get<std::string>();
    return from_key_values(kv);
}

std::string render_pricing(const RunConfig& cfg, const pricer::PricingResult& r) {
    std::ostringstream os;
    if (cfg.output == OutputKind::Json) return pricing_record_json(cfg, r);
    if (cfg.output == OutputKind::Csv) {
        os << models::model_name(cfg.model) << ',' << payoffs::payoff_name(cfg.contract) << ','
           << fmt_double(r.price) << ',' << fmt_double(r.err_estimate) << ',' << r.evals << ','
           << fmt_double(r.k1) << ',' << fmt_double(r.k2) << ',' << (r.converged ? 1 : 0);
        return os.str();
    }
    os << "model     " << models::model_name(cfg.model) << "\n"
       << "payoff    " << payoffs::payoff_name(cfg.contract) << "\n"
       << "price     " << fmt_double(r.price) << "\n"
       << "err_est   " << fmt_double(r.err_estimate) << "\n"
       << "evals     " << r.evals << "\n"
       << "contour   k1=" << fmt_double(r.k1) << " k2=" << fmt_double(r.k2) << "\n"
       << "converged " << (r.converged ? "yes" : "no");
    return os.str();
}

std::string render_mc(const RunConfig& cfg, const mc::McResult& r) {
    std::ostringstream os;
    if (cfg.output == OutputKind::Json) return mc_record_json(cfg, r);
    if (cfg.output == OutputKind::Csv) {
        os << models::model_name(cfg.model) << ',' << payoffs::payoff_name(cfg.contract) << ','
           << fmt_double(r.price) << ',' << fmt_double(r.std_err) << ',' << r.n_degenerate << ','
           << r.n_used << ',' << (r.insufficient_sample ? 1 : 0);
        return os.str();
    }
    os << "model        " << models::model_name(cfg.model) << "\n"
       << "payoff       " << payoffs::payoff_name(cfg.contract) << "\n"
       << "mc_price     " << fmt_double(r.price) << " +- " << fmt_double(r.std_err);
    if (r.insufficient_sample) os << " (insufficient sample)";
    os << "\n"
       << "n_used       " << r.n_used << "\n"
       << "n_degenerate " << r.n_degenerate;
    return os.str();
}

} // namespace dtcp::config
