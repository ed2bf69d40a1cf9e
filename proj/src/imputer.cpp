#include "ovcyst/imputer.hpp"

#include "ovcyst/error.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace ovcyst {

KnnImputerModel fit_imputer(const FeatureMatrix& data, int k) {
    if (k < 1) throw InvalidArgument("imputer k must be at least 1");
    if (static_cast<Index>(k) > data.rows() - 1) {
        throw InvalidArgument("imputer k = " + std::to_string(k) + " needs at least " +
                              std::to_string(k + 1) + " rows, got " + std::to_string(data.rows()));
    }
    const auto& raw = data.raw();
    for (Index c = 0; c < raw.cols(); ++c) {
        if (raw.col(c).array().isNaN().all()) throw AllMissingColumn(data.schema()[static_cast<std::size_t>(c)].name);
    }
    return KnnImputerModel{k, data};
}

FeatureMatrix impute(const KnnImputerModel& model, const FeatureMatrix& data) {
    if (data.schema() != model.donors.schema()) {
        throw InvalidArgument("imputer schema does not match the data schema");
    }
    const Matrix& donors = model.donors.raw();
    Matrix out = data.raw();
    std::vector<std::pair<double, Index>> ranked(static_cast<std::size_t>(donors.rows()));

    for (Index r = 0; r < out.rows(); ++r) {
        const auto query = data.raw().row(r);
        if (!query.array().isNaN().any()) continue;

        for (Index d = 0; d < donors.rows(); ++d) {
            ranked[static_cast<std::size_t>(d)] = {nan_euclidean_distance(query, donors.row(d)), d};
        }
        std::sort(ranked.begin(), ranked.end());

        for (Index c = 0; c < out.cols(); ++c) {
            if (!std::isnan(query(c))) continue;
            double sum = 0.0;
            int used = 0;
            for (const auto& [distance, d] : ranked) {
                if (used == model.k) break;
                const double value = donors(d, c);
                if (std::isnan(value)) continue;
                sum += value;
                ++used;
            }
            if (used == 0) {
                throw NoValidDonor("no donor observes column '" + data.schema()[static_cast<std::size_t>(c)].name + "'");
            }
            out(r, c) = sum / used;
        }
    }
    return FeatureMatrix(data.schema(), std::move(out));
}

}  // namespace ovcyst
