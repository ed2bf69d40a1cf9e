#pragma once

#include "ovcyst/dataset.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace ovcyst {

inline constexpr int kDefaultSmoteNeighbors = 5;

struct SmoteConfig {
    int k_neighbors = kDefaultSmoteNeighbors;
    std::uint64_t seed = 0;
};

// Where a synthetic row came from: row = seed + gap * (neighbor - seed).
// Row indices refer to the input dataset.
struct SyntheticOrigin {
    ClassLabel label;
    std::size_t seed_row;
    std::size_t neighbor_row;
    double gap;
};

struct SmoteResult {
    // Input rows first, unchanged and in order, then synthetic rows grouped by
    // class id.
    LabeledDataset data;
    // One entry per synthetic row, aligned with data rows [input rows, end).
    std::vector<SyntheticOrigin> origins;
    std::vector<std::string> warnings;
};

// Oversamples every non-majority class up to the majority count. Neighbours
// are the k nearest same-class rows by Euclidean distance, ties to the lower
// row index; k is clamped to class size - 1 with a warning. Classes with no
// members are left out with a warning.
//
// Throws InvalidArgument (k < 1, missing values), TooFewMembers (a class that
// needs synthesis has a single member).
SmoteResult smote_oversample(const LabeledDataset& data, const SmoteConfig& config);

// The k nearest rows to `query` among `candidates` (row indices into
// `values`), excluding `query` itself. Ranked by (squared distance, row).
std::vector<std::size_t> nearest_rows(const Matrix& values, std::size_t query,
                                      const std::vector<std::size_t>& candidates, std::size_t k);

struct ImbalanceRow {
    ClassLabel label;
    std::size_t before;
    std::size_t after;
};

// Before/after class counts. Throws ValidationError when the schemas differ
// or `after` lost a class that `before` had.
std::vector<ImbalanceRow> imbalance_report(const LabeledDataset& before, const LabeledDataset& after);

}  // namespace ovcyst
