#pragma once

#include "ovcyst/forest.hpp"
#include "ovcyst/gbt.hpp"
#include "ovcyst/scaler.hpp"
#include "ovcyst/smote.hpp"
#include "ovcyst/synthgen.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace ovcyst {

enum class Protocol {
    // split -> fit imputer/scaler on train -> SMOTE train -> fit -> evaluate
    kLeakageSafe,
    // impute all -> SMOTE all -> split -> scale (fit on all) -> fit -> evaluate
    kPaperOrder,
};

std::string_view to_string(Protocol protocol);
Protocol protocol_from_string(std::string_view text);

struct PipelineConfig {
    // Exactly one input source.
    std::optional<std::filesystem::path> csv;
    std::optional<GeneratorSpec> generator;

    Protocol protocol = Protocol::kLeakageSafe;
    double max_row_missing_fraction = 1.0;
    int imputer_k = 5;
    ScalerKind scaler = ScalerKind::kMinMax;
    SmoteConfig smote;
    double train_fraction = 0.8;
    std::uint64_t split_seed = 0;

    int knn_k = 9;
    ForestParams forest;
    std::uint64_t forest_seed = 0;
    BoostingParams boosting;
    std::uint64_t boosting_seed = 0;

    // Worker threads for model fitting; results do not depend on it.
    int threads = 1;
    std::filesystem::path output_dir = "ovcyst-out";
};

// Parses the JSON config format documented in README.md. Unknown keys, a
// missing or doubled input source and missing seeds are rejected with
// ValidationError.
PipelineConfig parse_config(std::string_view text);
PipelineConfig load_config(const std::filesystem::path& path);

// JSON object with every setting spelled out, defaults included.
std::string config_to_json(const PipelineConfig& config, int indent = 2);

// Generator spec file: {"n_rows", "class_priors", "signal_strength",
// "missing_rate", "seed"}; seed is required.
GeneratorSpec parse_generator_spec(std::string_view text);
GeneratorSpec load_generator_spec(const std::filesystem::path& path);

}  // namespace ovcyst
