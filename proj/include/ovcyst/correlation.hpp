#pragma once

#include "ovcyst/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ovcyst {

struct CorrelationResult {
    Matrix matrix;
    // Columns whose values are all equal; their off-diagonal entries are 0.
    std::vector<std::size_t> zero_variance_columns;
};

// Sample Pearson coefficients between the columns of `values`. The diagonal
// is exactly 1, the result is symmetric and clamped into [-1, 1]. Constant
// columns get 0 off the diagonal and are listed in zero_variance_columns.
template <typename Derived>
CorrelationResult pearson_correlation(const Eigen::MatrixBase<Derived>& values) {
    using Scalar = typename Derived::Scalar;
    const Index n = values.rows();
    const Index p = values.cols();
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> centered =
        values.rowwise() - values.colwise().mean();

    CorrelationResult out;
    out.matrix = Matrix::Identity(p, p);
    std::vector<bool> constant(static_cast<std::size_t>(p), false);
    for (Index c = 0; c < p; ++c) {
        if (n == 0 || values.col(c).maxCoeff() == values.col(c).minCoeff()) {
            constant[static_cast<std::size_t>(c)] = true;
            out.zero_variance_columns.push_back(static_cast<std::size_t>(c));
        }
    }
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> norms = centered.colwise().norm().transpose();
    for (Index i = 0; i < p; ++i) {
        for (Index j = i + 1; j < p; ++j) {
            double r = 0.0;
            if (!constant[static_cast<std::size_t>(i)] && !constant[static_cast<std::size_t>(j)]) {
                r = static_cast<double>(centered.col(i).dot(centered.col(j)) / (norms(i) * norms(j)));
                r = std::clamp(r, -1.0, 1.0);
            }
            out.matrix(i, j) = r;
            out.matrix(j, i) = r;
        }
    }
    return out;
}

// Throws InvalidArgument if the matrix has missing cells.
CorrelationResult pearson_correlation_matrix(const FeatureMatrix& features);

}  // namespace ovcyst
