#include "ovcyst/gbt.hpp"

#include "detail/presort.hpp"
#include "ovcyst/error.hpp"
#include "ovcyst/softmax.hpp"

#include <cmath>

namespace ovcyst {
namespace {

class BoostingTreeBuilder {
public:
    BoostingTreeBuilder(const Matrix& values, std::span<const double> g, std::span<const double> h,
                        const BoostingParams& params)
        : values_(values), g_(g), h_(h), params_(params), goes_left_(static_cast<std::size_t>(values.rows()), 0) {}

    RegressionTree build(const detail::SortedSamples& root) {
        grow(root, 0);
        return std::move(tree_);
    }

private:
    double score(double g, double h) const {
        const double denom = h + params_.lambda;
        return denom > 0.0 ? g * g / denom : 0.0;
    }

    double weight(double g, double h) const {
        const double denom = h + params_.lambda;
        return denom > 0.0 ? -g / denom : 0.0;
    }

    int grow(const detail::SortedSamples& samples, int depth) {
        const std::size_t n = samples.size();
        double G = 0.0;
        double H = 0.0;
        for (std::uint32_t s : samples.any()) {
            G += g_[s];
            H += h_[s];
        }
        const int index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        tree_.nodes.back().leaf = weight(G, H);
        if (depth >= params_.max_depth || n < 2) return index;

        const double parent = score(G, H);
        double best_gain = 0.0;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::size_t best_left = 0;
        for (std::size_t f = 0; f < samples.by_feature.size(); ++f) {
            const auto& list = samples.by_feature[f];
            const auto col = static_cast<Index>(f);
            double GL = 0.0;
            double HL = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                GL += g_[list[i]];
                HL += h_[list[i]];
                const double lo = values_(list[i], col);
                const double hi = values_(list[i + 1], col);
                if (lo == hi) continue;
                const double gain = 0.5 * (score(GL, HL) + score(G - GL, H - HL) - parent) - params_.gamma;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = detail::midpoint(lo, hi);
                    best_left = i + 1;
                }
            }
        }
        if (best_feature < 0) return index;

        const auto& order = samples.by_feature[static_cast<std::size_t>(best_feature)];
        for (std::size_t i = 0; i < n; ++i) goes_left_[order[i]] = i < best_left ? 1 : 0;
        detail::SortedSamples left;
        detail::SortedSamples right;
        detail::partition(samples, goes_left_, best_left, left, right);

        tree_.nodes[static_cast<std::size_t>(index)].feature = best_feature;
        tree_.nodes[static_cast<std::size_t>(index)].threshold = best_threshold;
        tree_.nodes[static_cast<std::size_t>(index)].leaf = 0.0;
        const int l = grow(left, depth + 1);
        left = {};
        const int r = grow(right, depth + 1);
        tree_.nodes[static_cast<std::size_t>(index)].left = l;
        tree_.nodes[static_cast<std::size_t>(index)].right = r;
        return index;
    }

    const Matrix& values_;
    std::span<const double> g_;
    std::span<const double> h_;
    const BoostingParams& params_;
    std::vector<char> goes_left_;
    RegressionTree tree_;
};

void validate(const BoostingParams& params) {
    if (params.rounds < 0) throw InvalidArgument("boosting rounds must be non-negative");
    if (!(params.learning_rate > 0.0)) throw InvalidArgument("learning_rate must be positive");
    if (params.max_depth < 0) throw InvalidArgument("max_depth must be non-negative");
    if (params.lambda < 0.0) throw InvalidArgument("lambda must be non-negative");
    if (params.gamma < 0.0) throw InvalidArgument("gamma must be non-negative");
}

double mean_log_loss(const ProbabilityMatrix& scores, std::span<const int> labels) {
    double total = 0.0;
    for (Index i = 0; i < scores.rows(); ++i) {
        total += softmax_cross_entropy(scores.row(i).transpose(), labels[static_cast<std::size_t>(i)]);
    }
    return scores.rows() == 0 ? 0.0 : total / static_cast<double>(scores.rows());
}

}  // namespace

RegressionTree grow_boosting_tree(const Matrix& values, std::span<const double> gradients,
                                  std::span<const double> hessians, const BoostingParams& params) {
    if (values.rows() == 0) throw InvalidArgument("cannot grow a tree on zero samples");
    const detail::SortedSamples root = detail::presort(values);
    return BoostingTreeBuilder(values, gradients, hessians, params).build(root);
}

GbtModel gbt_fit(const LabeledDataset& train, const BoostingParams& params, std::uint64_t seed,
                 const RoundCallback& on_round) {
    validate(params);
    const Matrix& values = train.features.dense();
    if (values.rows() == 0) throw InvalidArgument("cannot fit boosting on zero rows");

    GbtModel model;
    model.params = params;
    model.n_features = values.cols();
    model.seed = seed;

    const auto n = static_cast<std::size_t>(values.rows());
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = class_id(train.labels[i]);

    ProbabilityMatrix scores(values.rows(), kNumClasses);
    scores.rowwise() = model.base_score.transpose();
    if (on_round) on_round(0, mean_log_loss(scores, labels));

    const detail::SortedSamples root = detail::presort(values);
    std::vector<double> g(n);
    std::vector<double> h(n);
    ProbabilityMatrix proba(values.rows(), kNumClasses);
    model.rounds.reserve(static_cast<std::size_t>(params.rounds));
    for (int round = 1; round <= params.rounds; ++round) {
        for (Index i = 0; i < values.rows(); ++i) proba.row(i) = softmax(scores.row(i).transpose()).transpose();

        auto& trees = model.rounds.emplace_back();
        for (int k = 0; k < kNumClasses; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                const double p = proba(static_cast<Index>(i), k);
                g[i] = p - (labels[i] == k ? 1.0 : 0.0);
                h[i] = p * (1.0 - p);
            }
            trees[static_cast<std::size_t>(k)] = BoostingTreeBuilder(values, g, h, params).build(root);
        }
        for (Index i = 0; i < values.rows(); ++i) {
            for (int k = 0; k < kNumClasses; ++k) {
                scores(i, k) += params.learning_rate * trees[static_cast<std::size_t>(k)].evaluate(values.row(i));
            }
        }
        if (on_round) on_round(round, mean_log_loss(scores, labels));
    }
    return model;
}

ClassProbabilities gbt_scores(const GbtModel& model, const Eigen::Ref<const RowVector>& x,
                              std::optional<std::size_t> rounds) {
    if (x.size() != model.n_features) throw InvalidArgument("boosting query has the wrong number of features");
    const std::size_t used = std::min(rounds.value_or(model.rounds.size()), model.rounds.size());
    ClassProbabilities scores = model.base_score;
    for (std::size_t r = 0; r < used; ++r) {
        for (int k = 0; k < kNumClasses; ++k) {
            scores(k) += model.params.learning_rate * model.rounds[r][static_cast<std::size_t>(k)].evaluate(x);
        }
    }
    return scores;
}

ClassProbabilities gbt_predict_proba(const GbtModel& model, const Eigen::Ref<const RowVector>& x,
                                     std::optional<std::size_t> rounds) {
    return softmax(gbt_scores(model, x, rounds));
}

GbtModel truncate(const GbtModel& model, std::size_t rounds) {
    GbtModel out = model;
    if (rounds < out.rounds.size()) out.rounds.resize(rounds);
    out.params.rounds = static_cast<int>(out.rounds.size());
    return out;
}

}  // namespace ovcyst
