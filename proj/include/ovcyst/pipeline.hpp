#pragma once

#include "ovcyst/config.hpp"
#include "ovcyst/correlation.hpp"
#include "ovcyst/metrics.hpp"
#include "ovcyst/model.hpp"
#include "ovcyst/scaler.hpp"
#include "ovcyst/smote.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ovcyst {

struct ModelEvaluation {
    std::string name;
    ConfusionMatrix confusion;
    MetricsReport metrics;
    // Unset for classes absent from the test partition.
    std::array<std::optional<RocCurve>, kNumClasses> roc;
};

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

struct RunReport {
    // The config as run, with derived defaults filled in.
    PipelineConfig config;
    std::vector<std::string> columns;
    std::string schema_fingerprint;
    std::size_t source_rows = 0;
    std::size_t filtered_rows = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::vector<ImbalanceRow> class_counts;
    CorrelationResult correlation;
    int imputer_k = 0;
    std::size_t imputer_donors = 0;
    ScalerModel scaler;
    std::vector<ModelEvaluation> models;
    std::vector<std::string> warnings;
    // Wall time per stage. Kept out of report.json, which must not vary
    // between identical runs.
    std::vector<StageTiming> timings;
    // knn, random_forest, gbt.
    std::vector<TrainedModel> fitted;
};

// Runs the whole pipeline. Stage failures surface as StageError naming the
// stage; nothing is written to disk.
RunReport run(const PipelineConfig& config);

// Contents of report.json.
std::string report_json(const RunReport& report);

// Writes report.json, correlation.csv, class_counts.csv and
// roc_<model>_<class>.csv (9 files) into `dir`, creating it if needed.
// Numbers carry 12 significant digits. Throws IoError naming the path.
void emit_report(const RunReport& report, const std::filesystem::path& dir);

// Human-readable summary of a report.json written by emit_report.
std::string summarize_report(const std::filesystem::path& dir);

}  // namespace ovcyst
