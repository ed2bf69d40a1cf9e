#include "ovcyst/scaler.hpp"

#include "ovcyst/error.hpp"

namespace ovcyst {
namespace {

const Matrix& checked_values(const FeatureMatrix& data) {
    if (data.rows() == 0) throw InvalidArgument("cannot fit a scaler on an empty matrix");
    return data.dense();
}

void check_schema(const Schema& fitted, const FeatureMatrix& data) {
    if (fitted != data.schema()) throw InvalidArgument("scaler schema does not match the data schema");
}

// Applies (v - offset) / spread per column, with 0 where spread is 0.
Matrix affine(const Matrix& values, const RowVector& offset, const RowVector& spread) {
    Matrix out(values.rows(), values.cols());
    for (Index c = 0; c < values.cols(); ++c) {
        if (spread(c) == 0.0) {
            out.col(c).setZero();
        } else {
            out.col(c) = (values.col(c).array() - offset(c)) / spread(c);
        }
    }
    return out;
}

}  // namespace

std::string_view to_string(ScalerKind kind) {
    return kind == ScalerKind::kStandard ? "standard" : "minmax";
}

ScalerKind scaler_kind_from_string(std::string_view text) {
    if (text == "minmax") return ScalerKind::kMinMax;
    if (text == "standard") return ScalerKind::kStandard;
    throw InvalidArgument("unknown scaler kind '" + std::string(text) + "'");
}

MinMaxScalerModel fit_scaler(const FeatureMatrix& data) {
    const Matrix& values = checked_values(data);
    return MinMaxScalerModel{data.schema(), values.colwise().minCoeff(), values.colwise().maxCoeff()};
}

StandardScalerModel fit_standard_scaler(const FeatureMatrix& data) {
    const Matrix& values = checked_values(data);
    RowVector mean = values.colwise().mean();
    RowVector stddev(values.cols());
    for (Index c = 0; c < values.cols(); ++c) {
        if (values.col(c).maxCoeff() == values.col(c).minCoeff()) {
            stddev(c) = 0.0;
        } else {
            stddev(c) = std::sqrt((values.col(c).array() - mean(c)).square().mean());
        }
    }
    return StandardScalerModel{data.schema(), std::move(mean), std::move(stddev)};
}

ScalerModel fit_scaler(const FeatureMatrix& data, ScalerKind kind) {
    if (kind == ScalerKind::kStandard) return fit_standard_scaler(data);
    return fit_scaler(data);
}

FeatureMatrix scale(const MinMaxScalerModel& model, const FeatureMatrix& data) {
    check_schema(model.schema, data);
    return FeatureMatrix(data.schema(), affine(data.dense(), model.min, model.max - model.min));
}

FeatureMatrix scale(const StandardScalerModel& model, const FeatureMatrix& data) {
    check_schema(model.schema, data);
    return FeatureMatrix(data.schema(), affine(data.dense(), model.mean, model.stddev));
}

FeatureMatrix scale(const ScalerModel& model, const FeatureMatrix& data) {
    return std::visit([&data](const auto& m) { return scale(m, data); }, model);
}

FeatureMatrix unscale(const MinMaxScalerModel& model, const FeatureMatrix& data) {
    check_schema(model.schema, data);
    const Matrix& values = data.dense();
    const RowVector range = model.max - model.min;
    Matrix out(values.rows(), values.cols());
    for (Index c = 0; c < values.cols(); ++c) {
        out.col(c) = (values.col(c).array() * range(c) + model.min(c)).matrix();
    }
    return FeatureMatrix(data.schema(), std::move(out));
}

}  // namespace ovcyst
