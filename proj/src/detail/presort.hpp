#pragma once

// Exact greedy split search over presorted samples, shared by the forest and
// boosting tree builders.

#include "ovcyst/types.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

namespace ovcyst::detail {

// Sample ids of one node, sorted per feature by (value, sample id).
struct SortedSamples {
    std::vector<std::vector<std::uint32_t>> by_feature;

    std::size_t size() const { return by_feature.empty() ? 0 : by_feature.front().size(); }
    const std::vector<std::uint32_t>& any() const { return by_feature.front(); }
};

// `values` is sample-major: row s holds sample s.
inline SortedSamples presort(const Matrix& values) {
    SortedSamples out;
    out.by_feature.resize(static_cast<std::size_t>(values.cols()));
    for (Index f = 0; f < values.cols(); ++f) {
        auto& list = out.by_feature[static_cast<std::size_t>(f)];
        list.resize(static_cast<std::size_t>(values.rows()));
        std::iota(list.begin(), list.end(), 0u);
        std::sort(list.begin(), list.end(), [&values, f](std::uint32_t a, std::uint32_t b) {
            const double va = values(a, f);
            const double vb = values(b, f);
            return va < vb || (va == vb && a < b);
        });
    }
    return out;
}

// Stable partition of every feature list by the go-left flags.
inline void partition(const SortedSamples& node, const std::vector<char>& goes_left, std::size_t n_left,
                      SortedSamples& left, SortedSamples& right) {
    const std::size_t n = node.size();
    left.by_feature.resize(node.by_feature.size());
    right.by_feature.resize(node.by_feature.size());
    for (std::size_t f = 0; f < node.by_feature.size(); ++f) {
        auto& l = left.by_feature[f];
        auto& r = right.by_feature[f];
        l.clear();
        r.clear();
        l.reserve(n_left);
        r.reserve(n - n_left);
        for (std::uint32_t s : node.by_feature[f]) (goes_left[s] ? l : r).push_back(s);
    }
}

// Split point between two consecutive distinct sorted values.
inline double midpoint(double lo, double hi) {
    const double mid = lo + (hi - lo) / 2.0;
    return mid < hi ? mid : lo;
}

}  // namespace ovcyst::detail
