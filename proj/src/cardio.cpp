#include "observkit/cardio.hpp"

#include <cmath>

namespace observkit::cardio {

StateSpaceModel build_cardio_model(const CardioParams& p) {
    if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw InvalidArgument("cardio: mass must be positive");
    if (!std::isfinite(p.damping) || p.damping < 0.0) throw InvalidArgument("cardio: damping must be non-negative");
    if (!std::isfinite(p.stiffness)) throw InvalidArgument("cardio: stiffness must be finite");

    Matrix a{{0.0, 1.0}, {-p.stiffness / p.mass, -p.damping / p.mass}};
    Matrix b{{0.0}, {1.0}};
    Matrix c{{0.0, 1.0}};
    return make_model(std::move(a), std::move(b), std::move(c));
}

ObservabilityReport certify_cardio(const CardioParams& p, double horizon, const AnalysisOptions& options) {
    return analyze(build_cardio_model(p), horizon, options);
}

}  // namespace observkit::cardio
