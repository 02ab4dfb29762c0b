#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpqkd/mc_validation.hpp"
#include "mpqkd/monte_carlo.hpp"
#include "mpqkd/sweep.hpp"

namespace mpqkd {

using Json = nlohmann::ordered_json;

Json to_json(const ScenarioConfig& config);
Json to_json(const PairCountTable& table);
Json to_json(const DecoyBounds& bounds);
Json to_json(const KeyRateResult& result);
Json to_json(const ChernoffResult& result);
Json to_json(const MonteCarloRun& run);
Json to_json(const PointEvaluation& point);
Json to_json(const McValidation& validation);
Json to_json(const PSaveOptimum& optimum);

// Two columns: key,value; one row per named count.
void write_table_csv(const PairCountTable& table, std::ostream& os);

struct RunManifest {
  std::string command;
  std::string config_text;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  std::string started_utc;
  std::string finished_utc;
};

std::string utc_timestamp();
std::string tool_version();
Json to_json(const RunManifest& manifest);

}  // namespace mpqkd
