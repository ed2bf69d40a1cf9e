#pragma once

#include "ovcyst/dataset.hpp"

#include <array>
#include <cstdint>

namespace ovcyst {

// Synthetic stand-in for the screening data: same 18 columns and 3-class
// target, with tunable class balance, class signal and missingness.
struct GeneratorSpec {
    std::size_t n_rows = 1000;
    // Indexed by class id; must sum to 1.
    std::array<double, kNumClasses> class_priors = {0.7, 0.15, 0.15};
    // 0 makes every class draw features from the same distribution.
    double signal_strength = 1.0;
    double missing_rate = 0.0;
    std::uint64_t seed = 0;
};

// Throws InvalidArgument for priors that are negative or do not sum to 1
// (within 1e-9), or a missing_rate outside [0, 1).
void validate(const GeneratorSpec& spec);

// Draws a dataset over canonical_schema(). Labels follow the priors. Per
// ovary side, cyst counts are Poisson with a class-dependent mean; present
// cysts get class-dependent diameters and ordinal morphology, outline and
// solid scores in {0..3}; the *_sum columns add those three; cyst volumes
// follow diameter cubed with noise and feed the ovary volume. A shared
// per-patient factor correlates left and right sides. When missing_rate > 0
// cells are then masked by inject_missing with a seed derived from spec.seed.
LabeledDataset generate(const GeneratorSpec& spec);

// Masks each feature cell independently with probability `rate`. A column
// that would end up fully masked has its mask redrawn, so every column keeps
// an observed value. Labels are untouched. Throws InvalidArgument for rate
// outside [0, 1).
LabeledDataset inject_missing(const LabeledDataset& data, double rate, std::uint64_t seed);

}  // namespace ovcyst
