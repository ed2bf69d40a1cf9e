#pragma once

#include "ovcyst/dataset.hpp"

#include <vector>

namespace ovcyst {

inline constexpr int kDefaultKnnNeighbors = 9;

struct KnnClassifier {
    int k = kDefaultKnnNeighbors;
    Matrix train;
    std::vector<ClassLabel> labels;
};

// Stores the training rows. Throws KTooLarge when k exceeds the row count,
// InvalidArgument when k < 1 or values are missing.
KnnClassifier knn_fit(const LabeledDataset& train, int k = kDefaultKnnNeighbors);

// Indices of the k nearest training rows by Euclidean distance, nearest
// first; equal distances resolve to the lower row index.
std::vector<std::size_t> knn_neighbors(const KnnClassifier& model, const Eigen::Ref<const RowVector>& x);

// Vote fractions among the k nearest training rows.
ClassProbabilities knn_predict_proba(const KnnClassifier& model, const Eigen::Ref<const RowVector>& x);

}  // namespace ovcyst
