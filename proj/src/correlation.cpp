#include "ovcyst/correlation.hpp"

namespace ovcyst {

CorrelationResult pearson_correlation_matrix(const FeatureMatrix& features) {
    return pearson_correlation(features.dense());
}

}  // namespace ovcyst
