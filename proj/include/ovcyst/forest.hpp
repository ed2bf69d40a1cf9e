#pragma once

#include "ovcyst/dataset.hpp"
#include "ovcyst/tree.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace ovcyst {

struct ForestParams {
    int n_trees = 100;
    // floor(sqrt(n_features)) when unset.
    std::optional<int> features_per_split;
    bool bootstrap = true;
    // Unlimited when unset.
    std::optional<int> max_depth;
    int min_samples_leaf = 1;
    // Training threads; results do not depend on this.
    int threads = 1;
};

struct RandomForestModel {
    std::vector<ClassificationTree> trees;
    int features_per_split = 1;
    Index n_features = 0;
    std::uint64_t seed = 0;
};

struct GiniTreeOptions {
    int features_per_split = 1;
    std::optional<int> max_depth;
    int min_samples_leaf = 1;
};

// Grows one classification tree on `rows` of `values` (repeats allowed).
// Splits maximise the Gini impurity decrease over midpoints between
// consecutive distinct values. At each node features are visited in random
// order until `features_per_split` non-constant ones have been searched;
// equal decreases resolve to the lower feature index, then the lower
// threshold. Pure nodes become leaves.
ClassificationTree grow_gini_tree(const Matrix& values, std::span<const ClassLabel> labels,
                                  std::span<const std::size_t> rows, const GiniTreeOptions& options,
                                  std::uint64_t seed);

// Each tree sees a bootstrap sample (n draws with replacement) and its own
// seed derived from `seed`, so serial and threaded training agree bit for bit.
// Throws SingleClass when fewer than two classes are present.
RandomForestModel rf_fit(const LabeledDataset& train, const ForestParams& params, std::uint64_t seed);

// Mean of the per-tree leaf distributions.
ClassProbabilities rf_predict_proba(const RandomForestModel& model, const Eigen::Ref<const RowVector>& x);

double gini_impurity(const ClassCounts& counts, std::size_t total);

}  // namespace ovcyst
