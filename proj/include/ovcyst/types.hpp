#pragma once

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <limits>
#include <string_view>

namespace ovcyst {

using Index = Eigen::Index;

template <typename Scalar>
using RowMajorMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Matrix = RowMajorMatrix<double>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;
using Vector = Eigen::VectorXd;

inline constexpr int kNumClasses = 3;

// Per-class probabilities, indexed by class id.
using ClassProbabilities = Eigen::Matrix<double, kNumClasses, 1>;
// One row of class probabilities per sample.
using ProbabilityMatrix = Eigen::Matrix<double, Eigen::Dynamic, kNumClasses, Eigen::RowMajor>;

// In-band marker for an unobserved cell. Read it back through
// FeatureMatrix::is_missing, never by comparing values.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

enum class ClassLabel : int {
    kNegative = 0,
    kAbnormalSuspicious = 1,
    kAbnormalNonSuspicious = 2,
};

using ClassCounts = std::array<std::size_t, kNumClasses>;

constexpr int class_id(ClassLabel label) { return static_cast<int>(label); }

// Throws InvalidArgument for ids outside [0, kNumClasses).
ClassLabel class_from_id(int id);

// "Negative", "Abnormal, suspicious", "Abnormal, non-suspicious".
std::string_view display_name(ClassLabel label);

// Filesystem-safe name: negative, abnormal_suspicious, abnormal_non_suspicious.
std::string_view slug(ClassLabel label);

// Inverse of display_name. Throws UnknownLabel.
ClassLabel label_from_display(std::string_view text);

inline constexpr std::array<ClassLabel, kNumClasses> kAllClasses = {
    ClassLabel::kNegative, ClassLabel::kAbnormalSuspicious, ClassLabel::kAbnormalNonSuspicious};

// Index of the largest entry; ties resolve to the lowest index.
template <typename Derived>
Index argmax(const Eigen::DenseBase<Derived>& values) {
    Index best = 0;
    for (Index i = 1; i < values.size(); ++i) {
        if (values(i) > values(best)) best = i;
    }
    return best;
}

}  // namespace ovcyst
