#include "ovcyst/knn.hpp"

#include "ovcyst/error.hpp"

#include <algorithm>
#include <utility>

namespace ovcyst {

KnnClassifier knn_fit(const LabeledDataset& train, int k) {
    if (k < 1) throw InvalidArgument("KNN k must be at least 1");
    if (static_cast<Index>(k) > train.rows()) {
        throw KTooLarge("KNN k = " + std::to_string(k) + " exceeds " + std::to_string(train.rows()) +
                        " training rows");
    }
    return KnnClassifier{k, train.features.dense(), train.labels};
}

std::vector<std::size_t> knn_neighbors(const KnnClassifier& model, const Eigen::Ref<const RowVector>& x) {
    if (x.size() != model.train.cols()) throw InvalidArgument("KNN query has the wrong number of features");
    // Squared distances rank identically to Euclidean ones.
    std::vector<std::pair<double, std::size_t>> ranked(static_cast<std::size_t>(model.train.rows()));
    for (Index r = 0; r < model.train.rows(); ++r) {
        ranked[static_cast<std::size_t>(r)] = {(model.train.row(r) - x).squaredNorm(), static_cast<std::size_t>(r)};
    }
    const auto k = static_cast<std::ptrdiff_t>(model.k);
    std::partial_sort(ranked.begin(), ranked.begin() + k, ranked.end());
    std::vector<std::size_t> out(static_cast<std::size_t>(k));
    for (std::ptrdiff_t i = 0; i < k; ++i) out[static_cast<std::size_t>(i)] = ranked[static_cast<std::size_t>(i)].second;
    return out;
}

ClassProbabilities knn_predict_proba(const KnnClassifier& model, const Eigen::Ref<const RowVector>& x) {
    ClassProbabilities votes = ClassProbabilities::Zero();
    for (std::size_t r : knn_neighbors(model, x)) votes(class_id(model.labels[r])) += 1.0;
    return votes / static_cast<double>(model.k);
}

}  // namespace ovcyst
