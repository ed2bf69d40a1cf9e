#pragma once

#include "ovcyst/types.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ovcyst {

enum class ColumnKind { kContinuous, kOrdinal };

std::string_view to_string(ColumnKind kind);

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::kContinuous;
    bool allowed_missing = true;

    bool operator==(const ColumnSchema&) const = default;
};

// Ordered feature columns with unique names.
class Schema {
public:
    Schema() = default;
    explicit Schema(std::vector<ColumnSchema> columns);

    std::size_t size() const noexcept { return columns_.size(); }
    const ColumnSchema& operator[](std::size_t i) const { return columns_[i]; }
    const std::vector<ColumnSchema>& columns() const noexcept { return columns_; }
    std::optional<std::size_t> index_of(std::string_view name) const;
    std::vector<std::string> names() const;

    // FNV-1a over names and kinds, as 16 hex digits.
    std::string fingerprint() const;

    bool operator==(const Schema&) const = default;

private:
    std::vector<ColumnSchema> columns_;
};

inline constexpr std::string_view kTargetColumn = "ovar_result";

// The 18 TVUS screening features.
const Schema& canonical_schema();

// Numeric table bound to a schema. Unobserved cells hold kMissing internally;
// query them with is_missing(). Immutable after construction.
class FeatureMatrix {
public:
    FeatureMatrix() = default;
    // Throws InvalidArgument if the column count disagrees with the schema or
    // a cell is infinite.
    FeatureMatrix(Schema schema, Matrix values);

    Index rows() const noexcept { return values_.rows(); }
    Index cols() const noexcept { return values_.cols(); }
    const Schema& schema() const noexcept { return schema_; }

    bool is_missing(Index r, Index c) const { return std::isnan(values_(r, c)); }
    std::optional<double> at(Index r, Index c) const;
    std::size_t missing_count() const;
    bool complete() const { return missing_count() == 0; }

    // Values with every cell observed. Throws InvalidArgument otherwise.
    const Matrix& dense() const;

    // Raw storage, missing cells included. For missing-aware kernels.
    const Matrix& raw() const noexcept { return values_; }

    FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

private:
    Schema schema_;
    Matrix values_;
};

struct LabeledDataset {
    FeatureMatrix features;
    std::vector<ClassLabel> labels;

    LabeledDataset() = default;
    // Throws LengthMismatch when labels and rows disagree.
    LabeledDataset(FeatureMatrix features, std::vector<ClassLabel> labels);

    Index rows() const noexcept { return features.rows(); }
    LabeledDataset select_rows(std::span<const std::size_t> rows) const;
};

ClassCounts class_counts(std::span<const ClassLabel> labels);
inline ClassCounts class_counts(const LabeledDataset& data) { return class_counts(data.labels); }

// Drops rows whose fraction of missing cells exceeds max_missing_fraction.
LabeledDataset filter_rows_by_missingness(const LabeledDataset& data, double max_missing_fraction);

}  // namespace ovcyst
