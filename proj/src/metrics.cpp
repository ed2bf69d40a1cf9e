#include "ovcyst/metrics.hpp"

#include "ovcyst/dataset.hpp"
#include "ovcyst/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace ovcyst {

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, int n_classes) {
    if (y_true.size() != y_pred.size()) {
        throw LengthMismatch("confusion: " + std::to_string(y_true.size()) + " true labels vs " +
                             std::to_string(y_pred.size()) + " predictions");
    }
    if (y_true.empty()) throw InvalidArgument("confusion: no samples");
    if (n_classes < 1) throw InvalidArgument("confusion: n_classes must be positive");
    ConfusionMatrix cm = ConfusionMatrix::Zero(n_classes, n_classes);
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i];
        const int p = y_pred[i];
        if (t < 0 || t >= n_classes || p < 0 || p >= n_classes) throw InvalidArgument("confusion: label out of range");
        ++cm(t, p);
    }
    return cm;
}

ConfusionMatrix confusion(std::span<const ClassLabel> y_true, std::span<const ClassLabel> y_pred) {
    std::vector<int> t(y_true.size());
    std::vector<int> p(y_pred.size());
    std::transform(y_true.begin(), y_true.end(), t.begin(), class_id);
    std::transform(y_pred.begin(), y_pred.end(), p.begin(), class_id);
    return confusion(t, p, kNumClasses);
}

OneVsRest one_vs_rest(const ConfusionMatrix& cm, Index positive) {
    OneVsRest out;
    out.tp = cm(positive, positive);
    out.fp = cm.col(positive).sum() - out.tp;
    out.fn = cm.row(positive).sum() - out.tp;
    out.tn = cm.sum() - out.tp - out.fp - out.fn;
    return out;
}

MetricsReport eq_metrics(const ConfusionMatrix& cm) {
    if (cm.rows() != cm.cols() || cm.rows() == 0) throw InvalidArgument("eq_metrics: matrix must be square and non-empty");
    const std::int64_t total = cm.sum();
    if (total <= 0) throw InvalidArgument("eq_metrics: empty confusion matrix");

    MetricsReport report;
    report.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(total);
    for (Index c = 0; c < cm.rows(); ++c) {
        const OneVsRest s = one_vs_rest(cm, c);
        ClassMetrics m;
        const std::string name = "class " + std::to_string(c);
        if (s.tp + s.fp > 0) {
            m.precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
        } else {
            report.warnings.push_back(name + ": precision undefined (no predictions), set to 0");
        }
        if (s.tp + s.fn > 0) {
            m.recall = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
        } else {
            report.warnings.push_back(name + ": recall undefined (no members), set to 0");
        }
        if (m.precision + m.recall > 0.0) {
            m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
        } else {
            report.warnings.push_back(name + ": f1 undefined (precision + recall = 0), set to 0");
        }
        report.per_class.push_back(m);
    }
    const auto n = static_cast<double>(report.per_class.size());
    for (const auto& m : report.per_class) {
        report.macro_precision += m.precision;
        report.macro_recall += m.recall;
        report.macro_f1 += m.f1;
    }
    report.macro_precision /= n;
    report.macro_recall /= n;
    report.macro_f1 /= n;
    return report;
}

RocCurve roc_curve(std::span<const int> positive, const Eigen::Ref<const Eigen::VectorXd>& scores) {
    if (static_cast<Index>(positive.size()) != scores.size()) throw InvalidArgument("roc_curve: length mismatch");
    if (!scores.allFinite()) throw InvalidArgument("roc_curve: non-finite score");
    const auto n_pos = static_cast<std::size_t>(std::count_if(positive.begin(), positive.end(), [](int v) { return v != 0; }));
    const std::size_t n_neg = positive.size() - n_pos;
    if (n_pos == 0 || n_neg == 0) throw DegenerateLabels("roc_curve: need both positive and negative samples");

    std::vector<std::size_t> order(positive.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&scores](std::size_t a, std::size_t b) {
        return scores(static_cast<Index>(a)) > scores(static_cast<Index>(b));
    });

    RocCurve curve;
    curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < order.size();) {
        const double threshold = scores(static_cast<Index>(order[i]));
        while (i < order.size() && scores(static_cast<Index>(order[i])) == threshold) {
            (positive[order[i]] != 0 ? tp : fp) += 1;
            ++i;
        }
        curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                                static_cast<double>(tp) / static_cast<double>(n_pos), threshold});
    }
    return curve;
}

double auc(const RocCurve& curve) {
    double area = 0.0;
    for (std::size_t i = 1; i < curve.points.size(); ++i) {
        const auto& a = curve.points[i - 1];
        const auto& b = curve.points[i];
        area += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
    }
    return area;
}

OvrAuc macro_ovr_auc(std::span<const ClassLabel> y_true, const ProbabilityMatrix& proba) {
    if (static_cast<Index>(y_true.size()) != proba.rows()) throw LengthMismatch("macro_ovr_auc: length mismatch");
    const ClassCounts counts = class_counts(y_true);
    OvrAuc out;
    int present = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) present += counts[c] > 0 ? 1 : 0;
    if (present < 2) throw DegenerateLabels("macro_ovr_auc: need at least two classes present");

    double sum = 0.0;
    std::vector<int> positive(y_true.size());
    for (int c = 0; c < kNumClasses; ++c) {
        if (counts[static_cast<std::size_t>(c)] == 0) {
            out.warnings.push_back("class '" + std::string(display_name(class_from_id(c))) +
                                   "' absent from labels, excluded from macro AUC");
            continue;
        }
        for (std::size_t i = 0; i < y_true.size(); ++i) positive[i] = class_id(y_true[i]) == c ? 1 : 0;
        const double value = auc(roc_curve(positive, proba.col(c)));
        out.per_class[static_cast<std::size_t>(c)] = value;
        sum += value;
    }
    out.macro = sum / present;
    return out;
}

}  // namespace ovcyst
