#include "ovcyst/forest.hpp"

#include "detail/presort.hpp"
#include "ovcyst/error.hpp"
#include "ovcyst/random.hpp"

#include <cmath>
#include <numeric>
#include <thread>

namespace ovcyst {
namespace {

class GiniTreeBuilder {
public:
    GiniTreeBuilder(const Matrix& values, std::vector<int> labels, const GiniTreeOptions& options, std::uint64_t seed)
        : values_(values),
          labels_(std::move(labels)),
          options_(options),
          rng_(seed),
          goes_left_(static_cast<std::size_t>(values.rows()), 0) {}

    ClassificationTree build() {
        detail::SortedSamples root = detail::presort(values_);
        grow(root, 0);
        return std::move(tree_);
    }

private:
    struct Split {
        double decrease = -1.0;
        int feature = -1;
        double threshold = 0.0;
        std::size_t n_left = 0;
    };

    int grow(const detail::SortedSamples& samples, int depth) {
        const std::size_t n = samples.size();
        ClassCounts counts{};
        for (std::uint32_t s : samples.any()) ++counts[static_cast<std::size_t>(labels_[s])];

        const int index = static_cast<int>(tree_.nodes.size());
        tree_.nodes.emplace_back();
        {
            auto& leaf = tree_.nodes.back().leaf;
            for (int c = 0; c < kNumClasses; ++c) {
                leaf(c) = static_cast<double>(counts[static_cast<std::size_t>(c)]) / static_cast<double>(n);
            }
        }

        const auto msl = static_cast<std::size_t>(options_.min_samples_leaf);
        const bool pure = std::count(counts.begin(), counts.end(), 0u) >= kNumClasses - 1;
        if (pure || n < 2 * msl || (options_.max_depth && depth >= *options_.max_depth)) return index;

        const Split split = find_split(samples, counts);
        if (split.feature < 0) return index;

        const auto& order = samples.by_feature[static_cast<std::size_t>(split.feature)];
        for (std::size_t i = 0; i < n; ++i) goes_left_[order[i]] = i < split.n_left ? 1 : 0;
        detail::SortedSamples left;
        detail::SortedSamples right;
        detail::partition(samples, goes_left_, split.n_left, left, right);

        tree_.nodes[static_cast<std::size_t>(index)].feature = split.feature;
        tree_.nodes[static_cast<std::size_t>(index)].threshold = split.threshold;
        const int l = grow(left, depth + 1);
        left = {};
        const int r = grow(right, depth + 1);
        tree_.nodes[static_cast<std::size_t>(index)].left = l;
        tree_.nodes[static_cast<std::size_t>(index)].right = r;
        return index;
    }

    Split find_split(const detail::SortedSamples& samples, const ClassCounts& counts) {
        const std::size_t n = samples.size();
        const auto msl = static_cast<std::size_t>(options_.min_samples_leaf);
        const double parent = gini_impurity(counts, n);

        std::vector<int> order(static_cast<std::size_t>(values_.cols()));
        std::iota(order.begin(), order.end(), 0);
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng_.index(i)]);

        Split best;
        int searched = 0;
        for (int f : order) {
            if (searched == options_.features_per_split) break;
            const auto& list = samples.by_feature[static_cast<std::size_t>(f)];
            if (values_(list.front(), f) == values_(list.back(), f)) continue;
            ++searched;

            ClassCounts left{};
            for (std::size_t i = 0; i + 1 < n; ++i) {
                ++left[static_cast<std::size_t>(labels_[list[i]])];
                const double lo = values_(list[i], f);
                const double hi = values_(list[i + 1], f);
                const std::size_t n_left = i + 1;
                if (lo == hi || n_left < msl || n - n_left < msl) continue;

                ClassCounts right{};
                for (std::size_t c = 0; c < right.size(); ++c) right[c] = counts[c] - left[c];
                const double wl = static_cast<double>(n_left) / static_cast<double>(n);
                const double wr = static_cast<double>(n - n_left) / static_cast<double>(n);
                const double decrease =
                    parent - wl * gini_impurity(left, n_left) - wr * gini_impurity(right, n - n_left);
                if (decrease > best.decrease || (decrease == best.decrease && f < best.feature)) {
                    best = {decrease, f, detail::midpoint(lo, hi), n_left};
                }
            }
        }
        return best;
    }

    const Matrix& values_;
    std::vector<int> labels_;
    GiniTreeOptions options_;
    Rng rng_;
    std::vector<char> goes_left_;
    ClassificationTree tree_;
};

}  // namespace

double gini_impurity(const ClassCounts& counts, std::size_t total) {
    if (total == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t c : counts) {
        const double p = static_cast<double>(c) / static_cast<double>(total);
        sum += p * p;
    }
    return 1.0 - sum;
}

ClassificationTree grow_gini_tree(const Matrix& values, std::span<const ClassLabel> labels,
                                  std::span<const std::size_t> rows, const GiniTreeOptions& options,
                                  std::uint64_t seed) {
    if (rows.empty()) throw InvalidArgument("cannot grow a tree on zero samples");
    if (options.features_per_split < 1) throw InvalidArgument("features_per_split must be at least 1");
    if (options.min_samples_leaf < 1) throw InvalidArgument("min_samples_leaf must be at least 1");
    Matrix sample_values(static_cast<Index>(rows.size()), values.cols());
    std::vector<int> sample_labels(rows.size());
    for (std::size_t s = 0; s < rows.size(); ++s) {
        sample_values.row(static_cast<Index>(s)) = values.row(static_cast<Index>(rows[s]));
        sample_labels[s] = class_id(labels[rows[s]]);
    }
    return GiniTreeBuilder(sample_values, std::move(sample_labels), options, seed).build();
}

RandomForestModel rf_fit(const LabeledDataset& train, const ForestParams& params, std::uint64_t seed) {
    if (params.n_trees < 1) throw InvalidArgument("n_trees must be at least 1");
    const Matrix& values = train.features.dense();
    const ClassCounts counts = class_counts(train);
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2) {
        throw SingleClass("random forest needs at least two classes in the training data");
    }

    RandomForestModel model;
    model.n_features = values.cols();
    model.seed = seed;
    model.features_per_split = params.features_per_split.value_or(
        std::max(1, static_cast<int>(std::floor(std::sqrt(static_cast<double>(values.cols()))))));
    model.features_per_split = std::min<int>(model.features_per_split, static_cast<int>(values.cols()));
    const GiniTreeOptions options{model.features_per_split, params.max_depth, params.min_samples_leaf};

    const auto n = static_cast<std::size_t>(values.rows());
    model.trees.resize(static_cast<std::size_t>(params.n_trees));
    auto train_tree = [&](std::size_t t) {
        const std::uint64_t tree_seed = derive_seed(seed, t);
        std::vector<std::size_t> rows(n);
        if (params.bootstrap) {
            Rng rng(derive_seed(tree_seed, 0));
            for (auto& r : rows) r = rng.index(n);
        } else {
            std::iota(rows.begin(), rows.end(), 0u);
        }
        model.trees[t] = grow_gini_tree(values, train.labels, rows, options, derive_seed(tree_seed, 1));
    };

    const auto threads = static_cast<std::size_t>(std::max(1, params.threads));
    if (threads == 1) {
        for (std::size_t t = 0; t < model.trees.size(); ++t) train_tree(t);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < threads; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t t = w; t < model.trees.size(); t += threads) train_tree(t);
            });
        }
    }
    return model;
}

ClassProbabilities rf_predict_proba(const RandomForestModel& model, const Eigen::Ref<const RowVector>& x) {
    if (x.size() != model.n_features) throw InvalidArgument("forest query has the wrong number of features");
    ClassProbabilities sum = ClassProbabilities::Zero();
    for (const auto& tree : model.trees) sum += tree.evaluate(x);
    return sum / static_cast<double>(model.trees.size());
}

}  // namespace ovcyst
