#pragma once

#include "ovcyst/dataset.hpp"

#include <string_view>
#include <variant>

namespace ovcyst {

enum class ScalerKind { kMinMax, kStandard };

std::string_view to_string(ScalerKind kind);
// "minmax" or "standard"; throws InvalidArgument otherwise.
ScalerKind scaler_kind_from_string(std::string_view text);

// v -> (v - min) / (max - min); constant columns map to 0.
struct MinMaxScalerModel {
    Schema schema;
    RowVector min;
    RowVector max;
};

// v -> (v - mean) / stddev with the population standard deviation; constant
// columns map to 0.
struct StandardScalerModel {
    Schema schema;
    RowVector mean;
    RowVector stddev;
};

using ScalerModel = std::variant<MinMaxScalerModel, StandardScalerModel>;

// Both throw InvalidArgument on an empty matrix or missing values.
MinMaxScalerModel fit_scaler(const FeatureMatrix& data);
StandardScalerModel fit_standard_scaler(const FeatureMatrix& data);
ScalerModel fit_scaler(const FeatureMatrix& data, ScalerKind kind);

// Out-of-range values follow the same affine map and may leave [0, 1].
FeatureMatrix scale(const MinMaxScalerModel& model, const FeatureMatrix& data);
FeatureMatrix scale(const StandardScalerModel& model, const FeatureMatrix& data);
FeatureMatrix scale(const ScalerModel& model, const FeatureMatrix& data);

// Inverse affine map; constant columns come back as the fitted constant.
FeatureMatrix unscale(const MinMaxScalerModel& model, const FeatureMatrix& data);

}  // namespace ovcyst
