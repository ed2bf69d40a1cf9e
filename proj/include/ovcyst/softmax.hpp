#pragma once

#include "ovcyst/types.hpp"

#include <cmath>

namespace ovcyst {

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax(const Eigen::MatrixBase<Derived>& logits) {
    using Scalar = typename Derived::Scalar;
    const Scalar shift = logits.maxCoeff();
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> out = (logits.array() - shift).exp().matrix();
    return out / out.sum();
}

// -log softmax(logits)[label]
template <typename Derived>
typename Derived::Scalar softmax_cross_entropy(const Eigen::MatrixBase<Derived>& logits, Index label) {
    using std::exp;
    using std::log;
    const auto shift = logits.maxCoeff();
    return log((logits.array() - shift).exp().sum()) - (logits(label) - shift);
}

// d/dz of the cross-entropy: softmax(z) - onehot(label).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax_gradient(const Eigen::MatrixBase<Derived>& logits,
                                                                            Index label) {
    auto grad = softmax(logits);
    grad(label) -= 1;
    return grad;
}

// Diagonal of the cross-entropy Hessian: p * (1 - p).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> softmax_hessian_diagonal(
    const Eigen::MatrixBase<Derived>& logits) {
    const auto p = softmax(logits);
    return (p.array() * (1 - p.array())).matrix();
}

}  // namespace ovcyst
