#pragma once

#include "ovcyst/dataset.hpp"

#include <cstdint>
#include <vector>

namespace ovcyst {

struct SplitPair {
    LabeledDataset train;
    LabeledDataset test;
    // Source row indices of each partition, ascending.
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    std::uint64_t seed = 0;
    double train_fraction = 0.0;
};

// Number of members of a class of size n that go to the training partition:
// round-half-up of fraction * n, clamped to [1, n - 1].
std::size_t stratified_train_count(std::size_t n, double train_fraction);

// Per-class stratified split. Classes with no members are ignored; a class
// with exactly one member throws DegenerateClass.
SplitPair stratified_split(const LabeledDataset& data, double train_fraction, std::uint64_t seed);

}  // namespace ovcyst
