#include "ovcyst/split.hpp"

#include "ovcyst/error.hpp"
#include "ovcyst/random.hpp"

#include <algorithm>
#include <cmath>

namespace ovcyst {

std::size_t stratified_train_count(std::size_t n, double train_fraction) {
    const auto rounded = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(n) + 0.5));
    return std::clamp<std::size_t>(rounded, 1, n - 1);
}

SplitPair stratified_split(const LabeledDataset& data, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw InvalidArgument("train_fraction must lie strictly between 0 and 1");
    }
    std::array<std::vector<std::size_t>, kNumClasses> members;
    for (std::size_t r = 0; r < data.labels.size(); ++r) {
        members[static_cast<std::size_t>(class_id(data.labels[r]))].push_back(r);
    }

    SplitPair out;
    out.seed = seed;
    out.train_fraction = train_fraction;
    for (int c = 0; c < kNumClasses; ++c) {
        auto& rows = members[static_cast<std::size_t>(c)];
        if (rows.empty()) continue;
        if (rows.size() < 2) {
            throw DegenerateClass("class '" + std::string(display_name(class_from_id(c))) +
                                  "' has fewer than 2 members");
        }
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(c)));
        for (std::size_t i = rows.size() - 1; i > 0; --i) {
            std::swap(rows[i], rows[rng.index(i + 1)]);
        }
        const std::size_t n_train = stratified_train_count(rows.size(), train_fraction);
        out.train_rows.insert(out.train_rows.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.test_rows.insert(out.test_rows.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_train), rows.end());
    }
    std::sort(out.train_rows.begin(), out.train_rows.end());
    std::sort(out.test_rows.begin(), out.test_rows.end());
    out.train = data.select_rows(out.train_rows);
    out.test = data.select_rows(out.test_rows);
    return out;
}

}  // namespace ovcyst
