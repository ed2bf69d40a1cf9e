#pragma once

#include "ovcyst/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ovcyst {

// counts(t, p): samples of true class t predicted as p.
using ConfusionMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

// Throws LengthMismatch on unequal lengths, InvalidArgument when empty or a
// label falls outside [0, n_classes).
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int n_classes);
ConfusionMatrix confusion(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred);

struct OneVsRest {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;
};

OneVsRest one_vs_rest(const ConfusionMatrix& cm, Index positive);

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MetricsReport {
    double accuracy = 0.0;
    std::vector<ClassMetrics> per_class;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    // Filled by the pipeline from macro_ovr_auc; unset entries are classes
    // absent from the evaluated labels.
    std::vector<std::optional<double>> per_class_auc;
    double macro_auc = 0.0;
    std::vector<std::string> warnings;
};

// accuracy = trace / total; per class, one-vs-rest precision TP/(TP+FP),
// recall TP/(TP+FN), f1 = 2PR/(P+R); macro = unweighted mean over all
// classes. Undefined ratios are reported as 0 with a warning.
// Throws InvalidArgument on a non-square or empty matrix.
MetricsReport eq_metrics(const ConfusionMatrix& cm);

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    // Scores >= threshold are called positive; +inf for the origin.
    double threshold = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;
};

// One-vs-rest ROC: thresholds sweep the distinct scores in descending order,
// tied scores enter together. Starts at (0, 0) and ends at (1, 1).
// Throws DegenerateLabels without both positives and negatives,
// InvalidArgument on length mismatch or non-finite scores.
RocCurve roc_curve(std::span<const int> positive, const Eigen::Ref<const Eigen::VectorXd>& scores);

// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

struct OvrAuc {
    std::array<std::optional<double>, kNumClasses> per_class;
    double macro = 0.0;
    std::vector<std::string> warnings;
};

// Per class c: AUC of column c of `proba` for c against the rest. Classes
// absent from y_true are left unset, reported as a warning and excluded from
// the macro mean. Throws DegenerateLabels when fewer than two classes are
// present.
OvrAuc macro_ovr_auc(std::span<const ClassLabel> y_true, const ProbabilityMatrix& proba);

}  // namespace ovcyst
