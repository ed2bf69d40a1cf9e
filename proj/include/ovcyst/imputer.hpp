#pragma once

#include "ovcyst/dataset.hpp"

#include <cmath>
#include <limits>

namespace ovcyst {

inline constexpr int kDefaultImputerNeighbors = 5;

// Donor pool for k-nearest-neighbour imputation with uniform weights.
struct KnnImputerModel {
    int k = kDefaultImputerNeighbors;
    FeatureMatrix donors;
};

// Euclidean distance over coordinates observed in both rows, scaled by
// (total / shared). Infinity when the rows share no observed coordinate.
template <typename DerivedA, typename DerivedB>
double nan_euclidean_distance(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    double sum = 0.0;
    Index shared = 0;
    for (Index c = 0; c < a.size(); ++c) {
        if (std::isnan(a(c)) || std::isnan(b(c))) continue;
        const double d = a(c) - b(c);
        sum += d * d;
        ++shared;
    }
    if (shared == 0) return std::numeric_limits<double>::infinity();
    return std::sqrt(sum * (static_cast<double>(a.size()) / static_cast<double>(shared)));
}

// Throws InvalidArgument when k < 1 or k > rows - 1, AllMissingColumn when a
// column has no observed value.
KnnImputerModel fit_imputer(const FeatureMatrix& data, int k = kDefaultImputerNeighbors);

// Fills each missing cell (r, c) with the mean of column c over the k nearest
// donors that observe c. Donors are ranked by (distance, donor index). When
// fewer than k donors observe c, all of them are averaged. Observed cells are
// copied unchanged.
//
// Throws InvalidArgument on schema mismatch, NoValidDonor when no donor
// observes a needed column.
FeatureMatrix impute(const KnnImputerModel& model, const FeatureMatrix& data);

}  // namespace ovcyst
