#pragma once

// JSON model and policy files.
//
// Model file keys: "time_model" ("continuous" | "discrete"), "P00" (n x n),
// "P01" (n x 2, columns [to 0, to 1]); continuous models add "tau", "c",
// "d0", "d1", "mu0", "mu1", discrete models "c", "d0", "d1". Optional:
// "name" (string), "strict_cost_signs" (bool, default true).
//
// Policy file keys: "alpha0", "alpha1".

#include "tuning/functional.hpp"
#include "tuning/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>

namespace tuning::cli {

struct ModelFile {
  std::string name;
  TuningModel model;
};

/// Parse errors throw tuning::Error(InvalidInput) naming the offending key
/// and index; model invariants surface as their own error codes.
ModelFile parse_model(const nlohmann::json& doc, ModelOptions base = {});
ModelFile load_model(const std::filesystem::path& path, ModelOptions base = {});

nlohmann::json model_to_json(const TuningModel& model, const std::string& name = {});
void save_model(const std::filesystem::path& path, const TuningModel& model,
                const std::string& name = {});

ControlPolicy parse_policy(const nlohmann::json& doc);
ControlPolicy load_policy(const std::filesystem::path& path);
nlohmann::json policy_to_json(const ControlPolicy& policy);

/// Reads and parses a JSON document; throws InvalidInput on I/O or syntax errors.
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace tuning::cli
