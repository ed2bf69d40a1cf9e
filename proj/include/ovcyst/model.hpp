#pragma once

#include "ovcyst/forest.hpp"
#include "ovcyst/gbt.hpp"
#include "ovcyst/knn.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ovcyst {

using TrainedModel = std::variant<KnnClassifier, RandomForestModel, GbtModel>;

// "knn", "random_forest" or "gbt".
std::string_view model_name(const TrainedModel& model);

ClassProbabilities predict_proba(const TrainedModel& model, const Eigen::Ref<const RowVector>& x);
ProbabilityMatrix predict_proba_rows(const TrainedModel& model, const Matrix& rows);

// Row-wise argmax, ties to the lower class id.
std::vector<ClassLabel> hard_predictions(const ProbabilityMatrix& proba);

// Text form: a JSON document {"format": "ovcyst-model", "version": 1,
// "kind": ..., ...} with trees as nested {"feature", "threshold", "left",
// "right"} / {"leaf"} records. Numbers are written in shortest round-trip
// form, so a reloaded model predicts bit-identically.
inline constexpr int kModelFormatVersion = 1;

std::string serialize_model(const TrainedModel& model);
// Throws ValidationError on malformed input or an unsupported version.
TrainedModel deserialize_model(std::string_view text);

void save_model(const std::filesystem::path& path, const TrainedModel& model);
TrainedModel load_model(const std::filesystem::path& path);

}  // namespace ovcyst
