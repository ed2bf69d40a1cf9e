#include "ovcyst/smote.hpp"

#include "ovcyst/error.hpp"
#include "ovcyst/random.hpp"

#include <algorithm>
#include <utility>

namespace ovcyst {

std::vector<std::size_t> nearest_rows(const Matrix& values, std::size_t query,
                                      const std::vector<std::size_t>& candidates, std::size_t k) {
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(candidates.size());
    const auto origin = values.row(static_cast<Index>(query));
    for (std::size_t row : candidates) {
        if (row == query) continue;
        ranked.emplace_back((values.row(static_cast<Index>(row)) - origin).squaredNorm(), row);
    }
    k = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(k), ranked.end());
    std::vector<std::size_t> out(k);
    for (std::size_t i = 0; i < k; ++i) out[i] = ranked[i].second;
    return out;
}

SmoteResult smote_oversample(const LabeledDataset& data, const SmoteConfig& config) {
    if (config.k_neighbors < 1) throw InvalidArgument("SMOTE k_neighbors must be at least 1");
    const Matrix& values = data.features.dense();

    std::array<std::vector<std::size_t>, kNumClasses> members;
    for (std::size_t r = 0; r < data.labels.size(); ++r) {
        members[static_cast<std::size_t>(class_id(data.labels[r]))].push_back(r);
    }
    std::size_t majority = 0;
    for (const auto& m : members) majority = std::max(majority, m.size());

    SmoteResult result;
    std::size_t total_new = 0;
    for (int c = 0; c < kNumClasses; ++c) {
        const auto& rows = members[static_cast<std::size_t>(c)];
        const std::string name(display_name(class_from_id(c)));
        if (rows.empty()) {
            if (majority > 0) result.warnings.push_back("SMOTE: class '" + name + "' absent, not oversampled");
            continue;
        }
        if (rows.size() == majority) continue;
        if (rows.size() < 2) {
            throw TooFewMembers("SMOTE: class '" + name + "' has a single member");
        }
        total_new += majority - rows.size();
    }

    Matrix out(values.rows() + static_cast<Index>(total_new), values.cols());
    out.topRows(values.rows()) = values;
    std::vector<ClassLabel> labels = data.labels;
    labels.reserve(labels.size() + total_new);
    result.origins.reserve(total_new);

    Index next = values.rows();
    for (int c = 0; c < kNumClasses; ++c) {
        const auto& rows = members[static_cast<std::size_t>(c)];
        if (rows.empty() || rows.size() == majority) continue;
        const ClassLabel label = class_from_id(c);

        auto k = static_cast<std::size_t>(config.k_neighbors);
        if (rows.size() - 1 < k) {
            k = rows.size() - 1;
            result.warnings.push_back("SMOTE: k clamped to " + std::to_string(k) + " for class '" +
                                      std::string(display_name(label)) + "' with " +
                                      std::to_string(rows.size()) + " members");
        }
        std::vector<std::vector<std::size_t>> neighbors(rows.size());
        for (std::size_t i = 0; i < rows.size(); ++i) neighbors[i] = nearest_rows(values, rows[i], rows, k);

        Rng rng(derive_seed(config.seed, static_cast<std::uint64_t>(c)));
        for (std::size_t n = rows.size(); n < majority; ++n) {
            const std::size_t pick = rng.index(rows.size());
            const std::size_t seed_row = rows[pick];
            const std::size_t neighbor_row = neighbors[pick][rng.index(k)];
            const double gap = rng.uniform();
            const auto base = values.row(static_cast<Index>(seed_row));
            out.row(next++) = base + gap * (values.row(static_cast<Index>(neighbor_row)) - base);
            labels.push_back(label);
            result.origins.push_back({label, seed_row, neighbor_row, gap});
        }
    }
    result.data = LabeledDataset(FeatureMatrix(data.features.schema(), std::move(out)), std::move(labels));
    return result;
}

std::vector<ImbalanceRow> imbalance_report(const LabeledDataset& before, const LabeledDataset& after) {
    if (before.features.schema() != after.features.schema()) {
        throw ValidationError("imbalance report: schemas differ");
    }
    const ClassCounts b = class_counts(before);
    const ClassCounts a = class_counts(after);
    std::vector<ImbalanceRow> table;
    for (ClassLabel label : kAllClasses) {
        const auto i = static_cast<std::size_t>(class_id(label));
        if (b[i] > 0 && a[i] == 0) {
            throw ValidationError("imbalance report: class '" + std::string(display_name(label)) +
                                  "' disappeared after resampling");
        }
        table.push_back({label, b[i], a[i]});
    }
    return table;
}

}  // namespace ovcyst
