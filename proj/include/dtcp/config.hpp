#pragma once

#include <map>
#include <string>

#include "dtcp/mc.hpp"
#include "dtcp/models.hpp"
#include "dtcp/payoffs.hpp"
#include "dtcp/pricer.hpp"

namespace dtcp::config {

enum class OutputKind { Human, Csv, Json };

struct RunConfig {
    models::ModelSpec model = models::BlackScholes{0.2};
    pricer::MarketState market{100.0, 0.0, 0.0, 0.0};
    payoffs::Contract contract{payoffs::VanillaCall{100.0}, 1.0};
    pricer::QuadConfig quad;
    mc::McConfig mc;
    OutputKind output = OutputKind::Human;
};

using KeyValues = std::map<std::string, std::string>;

/// Parse "key = value" lines ('#' comments, blank lines ignored).
KeyValues read_key_value_file(const std::string& path);

/// Build a validated RunConfig; throws ValidationError naming any violated
/// parameter invariant or unknown key.
RunConfig from_key_values(const KeyValues& kv);

/// The flattened key-value view of a config (identity for round-trips).
KeyValues to_key_values(const RunConfig& cfg);

/// One-line JSON records: {"config": {...}, "result": {...}}.
std::string pricing_record_json(const RunConfig& cfg, const pricer::PricingResult& r);
std::string mc_record_json(const RunConfig& cfg, const mc::McResult& r);

/// Re-parse the config object of an emitted JSON record.
RunConfig config_from_json_record(const std::string& line);

std::string render_pricing(const RunConfig& cfg, const pricer::PricingResult& r);
std::string render_mc(const RunConfig& cfg, const mc::McResult& r);

} // namespace dtcp::config
