#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>

#include "observkit/linalg.hpp"
#include "observkit/lti.hpp"

namespace observkit {

enum class GramianMethod { Quadrature, LyapunovOde };

std::string_view to_string(GramianMethod method) noexcept;

/// Observability Gramian ∫₀ᵀ e^{Aᵀs} CᵀC e^{As} ds with its definiteness verdict.
struct GramianResult {
    Matrix gramian;
    double horizon = 0.0;
    GramianMethod method = GramianMethod::Quadrature;
    bool positive_definite = false;
    double min_pivot_or_eig = 0.0;
};

struct AnalysisOptions {
    /// Relative rank tolerance for the Kalman test; zero selects ε × max dimension.
    double rank_tol = 0.0;
    double pd_tol = kDefaultPdTol;
    std::size_t intervals = 200;
    std::size_t ode_steps = 1000;
    double route_tol = 1e-6;
};

struct ObservabilityReport {
    std::size_t kalman_rank = 0;
    std::size_t rank_required = 0;
    bool kalman_observable = false;
    bool gramian_observable = false;
    /// Kalman, quadrature-Gramian and ODE-Gramian verdicts all agree.
    bool consistent = false;
    Matrix observability_matrix;
    GramianResult gramian;
    GramianResult gramian_ode;
    /// ‖W_ode − W_quad‖_F / ‖W_quad‖_F (zero when both vanish).
    double route_discrepancy = 0.0;
    bool routes_agree = false;
    /// σ_max / σ_min of the quadrature Gramian.
    double gramian_condition = 0.0;
};

/// [Cᵀ | AᵀCᵀ | (Aᵀ)²Cᵀ | … | (Aᵀ)^{n−1}Cᵀ], an n×(n·q) matrix.
Matrix observability_matrix(const StateSpaceModel& m);

struct RankTest {
    std::size_t rank = 0;
    bool observable = false;
};

RankTest rank_test(const StateSpaceModel& m, double rel_tol);
RankTest rank_test(const StateSpaceModel& m);

/// Composite Simpson weights for `intervals` equal steps of width h.
/// Odd interval counts close with a 3/8 panel; a single interval is trapezoidal.
Vector quadrature_weights(std::size_t intervals, double h);

GramianResult gramian_quadrature(const StateSpaceModel& m, double horizon, std::size_t intervals = 200,
                                 double pd_tol = kDefaultPdTol);

/// RK4 on Ẇ = AᵀW + WA + CᵀC, W(0) = 0.
GramianResult gramian_ode(const StateSpaceModel& m, double horizon, std::size_t steps = 1000,
                          double pd_tol = kDefaultPdTol);

/// Whether the Gramian admits an LU solve with pivots above rel_tol × max|entry|.
bool gramian_invertible(const Matrix& gramian, double rel_tol = kDefaultPdTol);

struct Reconstruction {
    Vector x0;
    double horizon = 0.0;
    double gramian_condition = 0.0;
    GramianResult gramian;
};

/**
 * @brief Recover x(t0) from an output trace (and the input that drove it).
 *
 * The zero-state forced response is subtracted when an input is given; the
 * residual free output is projected through
 *     x₀ = M⁻¹ ∫₀ᵀ e^{Aᵀτ} Cᵀ y(τ) dτ,
 * with M evaluated by the same quadrature rule on the trace's own sample grid.
 * Without a horizon the whole trace is used.
 *
 * Throws SingularMatrixError when M is not positive definite (unobservable
 * at this horizon).
 */
Reconstruction reconstruct_initial_state(const StateSpaceModel& m, const Trace& y, const Trace* u,
                                         std::optional<double> horizon = std::nullopt,
                                         double pd_tol = kDefaultPdTol);

ObservabilityReport analyze(const StateSpaceModel& m, double horizon, const AnalysisOptions& options = {});

}  // namespace observkit
