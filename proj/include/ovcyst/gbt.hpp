#pragma once

#include "ovcyst/dataset.hpp"
#include "ovcyst/tree.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

namespace ovcyst {

struct BoostingParams {
    int rounds = 100;
    double learning_rate = 0.3;
    int max_depth = 6;
    double lambda = 1.0;
    double gamma = 0.0;
};

// Softmax gradient boosting: one regression tree per class per round.
struct GbtModel {
    BoostingParams params;
    ClassProbabilities base_score = ClassProbabilities::Zero();
    std::vector<std::array<RegressionTree, kNumClasses>> rounds;
    Index n_features = 0;
    std::uint64_t seed = 0;
};

// Called with (round, mean training log-loss); round 0 is the loss of the
// base score, round r the loss after r rounds.
using RoundCallback = std::function<void(int, double)>;

// Per round and class, fits a depth-limited regression tree to
// g = p - y, h = p (1 - p) by exact greedy search with
// gain = 1/2 [GL^2/(HL+lambda) + GR^2/(HR+lambda) - G^2/(H+lambda)] - gamma
// (split only when gain > 0) and leaf weight -G/(H+lambda). All classes of a
// round use the probabilities from the start of that round.
//
// No randomness is involved; `seed` is recorded for provenance only.
GbtModel gbt_fit(const LabeledDataset& train, const BoostingParams& params, std::uint64_t seed,
                 const RoundCallback& on_round = {});

// Grows one regression tree on gradient statistics over the rows of `values`.
RegressionTree grow_boosting_tree(const Matrix& values, std::span<const double> gradients,
                                  std::span<const double> hessians, const BoostingParams& params);

// base_score + sum of learning_rate * tree outputs over the first `rounds`
// rounds (all when unset).
ClassProbabilities gbt_scores(const GbtModel& model, const Eigen::Ref<const RowVector>& x,
                              std::optional<std::size_t> rounds = std::nullopt);

ClassProbabilities gbt_predict_proba(const GbtModel& model, const Eigen::Ref<const RowVector>& x,
                                     std::optional<std::size_t> rounds = std::nullopt);

GbtModel truncate(const GbtModel& model, std::size_t rounds);

}  // namespace ovcyst
