#pragma once

#include "ovcyst/dataset.hpp"

#include <random>
#include <string>
#include <vector>

namespace ovcyst::testing {

inline Schema numbered_schema(Index cols) {
    std::vector<ColumnSchema> columns;
    for (Index c = 0; c < cols; ++c) columns.push_back({"x" + std::to_string(c)});
    return Schema(columns);
}

inline FeatureMatrix features(const Matrix& values) { return FeatureMatrix(numbered_schema(values.cols()), values); }

inline LabeledDataset dataset(const Matrix& values, const std::vector<int>& labels) {
    std::vector<ClassLabel> l;
    for (int v : labels) l.push_back(class_from_id(v));
    return LabeledDataset(features(values), std::move(l));
}

// Gaussian blobs centred at class_id * spread along every axis.
inline LabeledDataset blobs(const std::vector<int>& labels, Index cols, double spread, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal;
    Matrix values(static_cast<Index>(labels.size()), cols);
    for (Index r = 0; r < values.rows(); ++r) {
        for (Index c = 0; c < cols; ++c) values(r, c) = spread * labels[static_cast<std::size_t>(r)] + normal(gen);
    }
    return dataset(values, labels);
}

inline std::vector<int> repeated_labels(std::initializer_list<int> counts) {
    std::vector<int> out;
    int label = 0;
    for (int n : counts) {
        for (int i = 0; i < n; ++i) out.push_back(label);
        ++label;
    }
    return out;
}

}  // namespace ovcyst::testing
