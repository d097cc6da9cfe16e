#pragma once

#include <string>

#include <json.hpp>

#include "hqtcn/train.hpp"

namespace hqtcn {

// One run: data source, model, training settings.
struct RunSpec {
    DataSpec data;
    ModelSpec model;
    TrainConfig train;
};

// Sectioned key = value text; see the README for the schema. Unknown
// sections or keys raise ConfigError naming the offender.
RunSpec parse_run_config(const std::string& path);

// Resolved snapshot, sufficient to replay the run.
nlohmann::json run_spec_json(const RunSpec& spec);

} // namespace hqtcn
