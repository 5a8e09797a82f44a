#pragma once

#include "observkit/lti.hpp"
#include "observkit/observability.hpp"

namespace observkit::cardio {

/**
 * @brief Electrocardiography table: M ÿ + β ẏ + γ y = u(t).
 *
 * mass is the combined person and table mass (kg), damping β (N·s/m),
 * stiffness γ (N/m). The heart's pumping force enters as the input u.
 */
struct CardioParams {
    double mass = 1.0;
    double damping = 0.0;
    double stiffness = 1.0;
};

/**
 * State x = [y, ẏ]; the velocity ẏ is the measured output.
 *
 *   A = [[0, 1], [−γ/M, −β/M]],  B = [0, 1]ᵀ,  C = [0 1]
 *
 * The input enters unscaled (B carries no 1/M factor).
 */
StateSpaceModel build_cardio_model(const CardioParams& p);

/// Observability certificate; the Kalman matrix [Cᵀ AᵀCᵀ] has determinant γ/M.
ObservabilityReport certify_cardio(const CardioParams& p, double horizon, const AnalysisOptions& options = {});

}  // namespace observkit::cardio
