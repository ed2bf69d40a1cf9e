#include "ovcyst/dataset.hpp"

#include "ovcyst/error.hpp"

#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace ovcyst {

ClassLabel class_from_id(int id) {
    if (id < 0 || id >= kNumClasses) {
        throw InvalidArgument("class id out of range: " + std::to_string(id));
    }
    return static_cast<ClassLabel>(id);
}

std::string_view display_name(ClassLabel label) {
    switch (label) {
        case ClassLabel::kNegative: return "Negative";
        case ClassLabel::kAbnormalSuspicious: return "Abnormal, suspicious";
        case ClassLabel::kAbnormalNonSuspicious: return "Abnormal, non-suspicious";
    }
    return "";
}

std::string_view slug(ClassLabel label) {
    switch (label) {
        case ClassLabel::kNegative: return "negative";
        case ClassLabel::kAbnormalSuspicious: return "abnormal_suspicious";
        case ClassLabel::kAbnormalNonSuspicious: return "abnormal_non_suspicious";
    }
    return "";
}

ClassLabel label_from_display(std::string_view text) {
    for (ClassLabel label : kAllClasses) {
        if (display_name(label) == text) return label;
    }
    throw UnknownLabel("unknown class label '" + std::string(text) + "'");
}

std::string_view to_string(ColumnKind kind) {
    return kind == ColumnKind::kOrdinal ? "ordinal" : "continuous";
}

Schema::Schema(std::vector<ColumnSchema> columns) : columns_(std::move(columns)) {
    std::unordered_set<std::string> seen;
    for (const auto& column : columns_) {
        if (column.name.empty()) throw InvalidArgument("empty column name in schema");
        if (!seen.insert(column.name).second) {
            throw InvalidArgument("duplicate column name '" + column.name + "' in schema");
        }
    }
}

std::optional<std::size_t> Schema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].name == name) return i;
    }
    return std::nullopt;
}

std::vector<std::string> Schema::names() const {
    std::vector<std::string> out;
    out.reserve(columns_.size());
    for (const auto& column : columns_) out.push_back(column.name);
    return out;
}

std::string Schema::fingerprint() const {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    auto mix = [&hash](std::string_view bytes) {
        for (unsigned char ch : bytes) {
            hash ^= ch;
            hash *= 0x100000001b3ULL;
        }
    };
    for (const auto& column : columns_) {
        mix(column.name);
        mix(":");
        mix(to_string(column.kind));
        mix(column.allowed_missing ? ":m;" : ":c;");
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

const Schema& canonical_schema() {
    static const Schema schema = [] {
        constexpr ColumnKind kCont = ColumnKind::kContinuous;
        constexpr ColumnKind kOrd = ColumnKind::kOrdinal;
        return Schema({
            {"numcystl", kOrd, true},
            {"numcyst", kOrd, true},
            {"ovary_diaml", kCont, true},
            {"ovary_diamr", kCont, true},
            {"ovary_voll", kCont, true},
            {"ovary_volr", kCont, true},
            {"ovcyst_diaml", kCont, true},
            {"ovcyst_diamr", kCont, true},
            {"ovcyst_morphl", kOrd, true},
            {"ovcyst_morphr", kOrd, true},
            {"ovcyst_outlinel", kOrd, true},
            {"ovcyst_outliner", kOrd, true},
            {"ovcyst_solidl", kOrd, true},
            {"ovcyst_solidr", kOrd, true},
            {"ovcyst_suml", kOrd, true},
            {"ovcyst_sumr", kOrd, true},
            {"ovcyst_voll", kCont, true},
            {"ovcyst_volr", kCont, true},
        });
    }();
    return schema;
}

FeatureMatrix::FeatureMatrix(Schema schema, Matrix values)
    : schema_(std::move(schema)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.cols()) != schema_.size()) {
        throw InvalidArgument("matrix has " + std::to_string(values_.cols()) +
                              " columns but schema has " + std::to_string(schema_.size()));
    }
    for (Index r = 0; r < values_.rows(); ++r) {
        for (Index c = 0; c < values_.cols(); ++c) {
            if (std::isinf(values_(r, c))) {
                throw InvalidArgument("non-finite value in column '" + schema_[c].name + "'");
            }
        }
    }
}

std::optional<double> FeatureMatrix::at(Index r, Index c) const {
    if (is_missing(r, c)) return std::nullopt;
    return values_(r, c);
}

std::size_t FeatureMatrix::missing_count() const {
    return static_cast<std::size_t>(values_.array().isNaN().count());
}

const Matrix& FeatureMatrix::dense() const {
    if (!complete()) throw InvalidArgument("feature matrix has missing values");
    return values_;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
    Matrix out(static_cast<Index>(rows.size()), values_.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Index>(i)) = values_.row(static_cast<Index>(rows[i]));
    }
    return FeatureMatrix(schema_, std::move(out));
}

LabeledDataset::LabeledDataset(FeatureMatrix f, std::vector<ClassLabel> l)
    : features(std::move(f)), labels(std::move(l)) {
    if (static_cast<Index>(labels.size()) != features.rows()) {
        throw LengthMismatch("dataset has " + std::to_string(features.rows()) + " rows but " +
                             std::to_string(labels.size()) + " labels");
    }
}

LabeledDataset LabeledDataset::select_rows(std::span<const std::size_t> rows) const {
    std::vector<ClassLabel> picked;
    picked.reserve(rows.size());
    for (std::size_t r : rows) picked.push_back(labels[r]);
    return LabeledDataset(features.select_rows(rows), std::move(picked));
}

ClassCounts class_counts(std::span<const ClassLabel> labels) {
    ClassCounts counts{};
    for (ClassLabel label : labels) ++counts[static_cast<std::size_t>(class_id(label))];
    return counts;
}

LabeledDataset filter_rows_by_missingness(const LabeledDataset& data, double max_missing_fraction) {
    if (!(max_missing_fraction >= 0.0 && max_missing_fraction <= 1.0)) {
        throw InvalidArgument("max_missing_fraction must lie in [0, 1]");
    }
    const auto& raw = data.features.raw();
    std::vector<std::size_t> keep;
    for (Index r = 0; r < raw.rows(); ++r) {
        const double fraction =
            raw.cols() == 0 ? 0.0
                            : static_cast<double>(raw.row(r).array().isNaN().count()) /
                                  static_cast<double>(raw.cols());
        if (fraction <= max_missing_fraction) keep.push_back(static_cast<std::size_t>(r));
    }
    return data.select_rows(keep);
}

}  // namespace ovcyst
