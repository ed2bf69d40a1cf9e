#include "ovcyst/synthgen.hpp"

#include "ovcyst/error.hpp"
#include "ovcyst/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ovcyst {
namespace {

// Class-dependent shifts, indexed by class id (negative, suspicious,
// non-suspicious). Each is multiplied by the signal strength.
struct ClassProfile {
    double log_cyst_rate;      // added to log of the per-side Poisson mean
    double log_cyst_diameter;  // added to log of the median cyst diameter
    double morphology;
    double outline;
    double solid;
};

constexpr std::array<ClassProfile, kNumClasses> kProfiles = {{
    {0.0, 0.0, 0.0, 0.0, 0.0},
    {1.2, 0.35, 1.3, 1.1, 1.4},
    {1.0, 0.9, -0.1, 0.2, -0.2},
}};

constexpr double kBaseCystRate = 0.35;
constexpr double kBaseCystDiameter = 14.0;  // mm, median
constexpr double kCystDiameterSpread = 0.45;  // log-scale standard deviation
constexpr double kBaseOrdinal = 0.6;

int ordinal_score(double mean, Rng& rng) {
    return std::clamp(static_cast<int>(std::lround(mean + 0.6 * rng.normal())), 0, 3);
}

double sphere_volume_ml(double diameter_mm) {
    const double radius_cm = diameter_mm / 20.0;
    return 4.0 / 3.0 * std::numbers::pi * radius_cm * radius_cm * radius_cm;
}

struct Side {
    int cysts = 0;
    double ovary_diameter = 0.0;
    double ovary_volume = 0.0;
    double cyst_diameter = 0.0;
    int morphology = 0;
    int outline = 0;
    int solid = 0;
    double cyst_volume = 0.0;
};

Side draw_side(const ClassProfile& profile, double strength, double patient, Rng& rng) {
    Side s;
    s.cysts = rng.poisson(kBaseCystRate * std::exp(strength * profile.log_cyst_rate));
    if (s.cysts > 0) {
        s.cyst_diameter = kBaseCystDiameter *
                          std::exp(strength * profile.log_cyst_diameter + kCystDiameterSpread * rng.normal());
        s.morphology = ordinal_score(kBaseOrdinal + strength * profile.morphology, rng);
        s.outline = ordinal_score(kBaseOrdinal + strength * profile.outline, rng);
        s.solid = ordinal_score(kBaseOrdinal + strength * profile.solid, rng);
        s.cyst_volume = sphere_volume_ml(s.cyst_diameter) * std::exp(0.15 * rng.normal());
    }
    const double own = rng.normal();
    const double base_diameter = std::max(8.0, 30.0 + 9.0 * (0.7 * patient + 0.7 * own));
    s.ovary_diameter = base_diameter + 0.3 * s.cyst_diameter;
    s.ovary_volume = sphere_volume_ml(base_diameter) * std::exp(0.35 * rng.normal()) + s.cyst_volume;
    return s;
}

}  // namespace

void validate(const GeneratorSpec& spec) {
    double sum = 0.0;
    for (double p : spec.class_priors) {
        if (!(p >= 0.0)) throw InvalidArgument("class priors must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InvalidArgument("class priors must sum to 1");
    if (!(spec.missing_rate >= 0.0 && spec.missing_rate < 1.0)) throw InvalidArgument("missing_rate must lie in [0, 1)");
    if (!(spec.signal_strength >= 0.0) || !std::isfinite(spec.signal_strength)) {
        throw InvalidArgument("signal_strength must be a finite non-negative number");
    }
}

LabeledDataset generate(const GeneratorSpec& spec) {
    validate(spec);
    const Schema& schema = canonical_schema();
    Rng rng(derive_seed(spec.seed, 0));
    const auto n = static_cast<Index>(spec.n_rows);
    Matrix values(n, static_cast<Index>(schema.size()));
    std::vector<ClassLabel> labels(spec.n_rows);

    for (Index r = 0; r < n; ++r) {
        const double u = rng.uniform();
        int c = 0;
        double cumulative = spec.class_priors[0];
        while (c + 1 < kNumClasses && (u >= cumulative || spec.class_priors[static_cast<std::size_t>(c)] == 0.0)) {
            ++c;
            cumulative += spec.class_priors[static_cast<std::size_t>(c)];
        }
        labels[static_cast<std::size_t>(r)] = class_from_id(c);
        const ClassProfile& profile = kProfiles[static_cast<std::size_t>(c)];

        const double patient = rng.normal();
        const Side left = draw_side(profile, spec.signal_strength, patient, rng);
        const Side right = draw_side(profile, spec.signal_strength, patient, rng);

        auto row = values.row(r);
        row << left.cysts, left.cysts + right.cysts,
            left.ovary_diameter, right.ovary_diameter,
            left.ovary_volume, right.ovary_volume,
            left.cyst_diameter, right.cyst_diameter,
            left.morphology, right.morphology,
            left.outline, right.outline,
            left.solid, right.solid,
            left.morphology + left.outline + left.solid, right.morphology + right.outline + right.solid,
            left.cyst_volume, right.cyst_volume;
    }
    LabeledDataset data(FeatureMatrix(schema, std::move(values)), std::move(labels));
    if (spec.missing_rate > 0.0) return inject_missing(data, spec.missing_rate, derive_seed(spec.seed, 1));
    return data;
}

LabeledDataset inject_missing(const LabeledDataset& data, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate < 1.0)) throw InvalidArgument("missing rate must lie in [0, 1)");
    if (rate == 0.0) return data;
    Matrix values = data.features.raw();
    Rng rng(seed);
    for (Index c = 0; c < values.cols(); ++c) {
        if (values.rows() == 0) break;
        // Cells that were already missing stay missing.
        const bool had_observed = !values.col(c).array().isNaN().all();
        Eigen::VectorXd column = values.col(c);
        while (true) {
            for (Index r = 0; r < values.rows(); ++r) {
                if (rng.uniform() < rate) column(r) = kMissing;
            }
            if (!had_observed || !column.array().isNaN().all()) break;
            column = values.col(c);
        }
        values.col(c) = column;
    }
    return LabeledDataset(FeatureMatrix(data.features.schema(), std::move(values)), data.labels);
}

}  // namespace ovcyst
