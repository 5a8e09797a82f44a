#include "observkit/observability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace observkit {

namespace {

void require_horizon(double horizon, const char* op) {
    if (!(horizon > 0.0) || !std::isfinite(horizon)) {
        throw InvalidArgument(std::string(op) + ": horizon must be positive and finite, got " + std::to_string(horizon));
    }
}

GramianResult finish(Matrix w, double horizon, GramianMethod method, double pd_tol) {
    GramianResult r;
    r.gramian = symmetrize(w);
    r.horizon = horizon;
    r.method = method;
    const DefinitenessResult pd = check_positive_definite(r.gramian, pd_tol);
    r.positive_definite = pd.positive_definite;
    r.min_pivot_or_eig = pd.min_pivot;
    return r;
}

// Eᵀ CᵀC E
Matrix gramian_integrand(const Matrix& ctc, const Matrix& e) { return transpose(e) * ctc * e; }

}  // namespace

std::string_view to_string(GramianMethod method) noexcept {
    switch (method) {
        case GramianMethod::Quadrature:
            return "quadrature";
        case GramianMethod::LyapunovOde:
            return "lyapunov-ode";
    }
    return "unknown";
}

Matrix observability_matrix(const StateSpaceModel& m) {
    const Matrix at = transpose(m.a());
    Matrix block = transpose(m.c());
    Matrix result = block;
    for (std::size_t k = 1; k < m.states(); ++k) {
        block = at * block;
        result = hstack(result, block);
    }
    return result;
}

RankTest rank_test(const StateSpaceModel& m, double rel_tol) {
    if (!(rel_tol > 0.0)) throw InvalidArgument("rank_test: rel_tol must be positive");
    const std::size_t r = rank(observability_matrix(m), rel_tol);
    return {r, r == m.states()};
}

RankTest rank_test(const StateSpaceModel& m) {
    const Matrix obs = observability_matrix(m);
    const std::size_t r = rank(obs);
    return {r, r == m.states()};
}

Vector quadrature_weights(std::size_t intervals, double h) {
    if (intervals == 0) throw InvalidArgument("quadrature_weights: need at least one interval");
    Vector w(intervals + 1, 0.0);
    if (intervals == 1) {
        w[0] = w[1] = 0.5 * h;
        return w;
    }
    const std::size_t simpson_end = intervals % 2 == 0 ? intervals : intervals - 3;
    for (std::size_t k = 0; k + 2 <= simpson_end; k += 2) {
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
    }
    if (simpson_end != intervals) {
        const std::size_t k = simpson_end;
        w[k] += 3.0 * h / 8.0;
        w[k + 1] += 9.0 * h / 8.0;
        w[k + 2] += 9.0 * h / 8.0;
        w[k + 3] += 3.0 * h / 8.0;
    }
    return w;
}

GramianResult gramian_quadrature(const StateSpaceModel& m, double horizon, std::size_t intervals, double pd_tol) {
    require_horizon(horizon, "gramian_quadrature");
    if (intervals < 2 || intervals % 2 != 0) {
        throw InvalidArgument("gramian_quadrature: interval count must be even and >= 2, got " +
                              std::to_string(intervals));
    }
    const double h = horizon / static_cast<double>(intervals);
    const Vector w = quadrature_weights(intervals, h);
    const Matrix ctc = transpose(m.c()) * m.c();

    Matrix sum(m.states(), m.states());
    for (std::size_t k = 0; k <= intervals; ++k) {
        const Matrix e = expm(m.a(), static_cast<double>(k) * h);
        sum += w[k] * gramian_integrand(ctc, e);
    }
    return finish(std::move(sum), horizon, GramianMethod::Quadrature, pd_tol);
}

GramianResult gramian_ode(const StateSpaceModel& m, double horizon, std::size_t steps, double pd_tol) {
    require_horizon(horizon, "gramian_ode");
    if (steps == 0) throw InvalidArgument("gramian_ode: steps must be >= 1");
    const Matrix& a = m.a();
    const Matrix at = transpose(a);
    const Matrix ctc = transpose(m.c()) * m.c();
    const auto rhs = [&](const Matrix& w) { return at * w + w * a + ctc; };

    const double h = horizon / static_cast<double>(steps);
    Matrix w(m.states(), m.states());
    for (std::size_t k = 0; k < steps; ++k) {
        const Matrix k1 = rhs(w);
        const Matrix k2 = rhs(w + (0.5 * h) * k1);
        const Matrix k3 = rhs(w + (0.5 * h) * k2);
        const Matrix k4 = rhs(w + h * k3);
        w += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return finish(std::move(w), horizon, GramianMethod::LyapunovOde, pd_tol);
}

bool gramian_invertible(const Matrix& gramian, double rel_tol) {
    try {
        (void)solve(gramian, Matrix::identity(gramian.rows()), rel_tol);
        return true;
    } catch (const SingularMatrixError&) {
        return false;
    }
}

Reconstruction reconstruct_initial_state(const StateSpaceModel& m, const Trace& y, const Trace* u,
                                         std::optional<double> horizon, double pd_tol) {
    if (y.width() != m.outputs()) {
        throw DimensionError("reconstruct: output trace width " + std::to_string(y.width()) +
                             " does not match q = " + std::to_string(m.outputs()));
    }
    if (y.size() < 2) throw InvalidArgument("reconstruct: output trace needs at least two samples");

    const double dt = y.dt();
    std::size_t intervals = y.size() - 1;
    if (horizon) {
        require_horizon(*horizon, "reconstruct");
        const double ratio = *horizon / dt;
        const double rounded = std::round(ratio);
        if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio) || rounded < 1.0 ||
            rounded > static_cast<double>(intervals)) {
            throw InvalidArgument("reconstruct: horizon " + std::to_string(*horizon) +
                                  " is not a whole number of trace steps within the trace (dt = " +
                                  std::to_string(dt) + ", duration = " + std::to_string(y.duration()) + ")");
        }
        intervals = static_cast<std::size_t>(rounded);
    }

    // Residual free output.
    Vector free_y(y.values().begin(), y.values().begin() + static_cast<std::ptrdiff_t>((intervals + 1) * y.width()));
    if (u != nullptr) {
        if (u->width() != m.inputs()) {
            throw DimensionError("reconstruct: input trace width " + std::to_string(u->width()) +
                                 " does not match p = " + std::to_string(m.inputs()));
        }
        if (std::abs(u->dt() - dt) > 1e-9 * dt || std::abs(u->t0() - y.t0()) > 1e-9 * std::max(1.0, std::abs(dt))) {
            throw InvalidArgument("reconstruct: input and output traces are sampled on different grids");
        }
        if (u->size() < intervals + 1) {
            throw InvalidArgument("reconstruct: input trace is shorter than the reconstruction horizon");
        }
        const Vector zero(m.states(), 0.0);
        const Simulation forced = simulate_forced(m, zero, *u);
        for (std::size_t k = 0; k < free_y.size(); ++k) free_y[k] -= forced.y.values()[k];
    }

    const std::size_t n = m.states();
    const std::size_t q = m.outputs();
    const Vector w = quadrature_weights(intervals, dt);
    const Matrix ct = transpose(m.c());
    const Matrix ctc = ct * m.c();

    Matrix gram(n, n);
    Vector projection(n, 0.0);
    for (std::size_t k = 0; k <= intervals; ++k) {
        const Matrix e = expm(m.a(), static_cast<double>(k) * dt);
        const Matrix et = transpose(e);
        gram += w[k] * (et * ctc * e);
        const Vector cty = matvec(ct, std::span<const double>(free_y).subspan(k * q, q));
        const Vector contrib = matvec(et, cty);
        for (std::size_t i = 0; i < n; ++i) projection[i] += w[k] * contrib[i];
    }

    Reconstruction r;
    r.horizon = static_cast<double>(intervals) * dt;
    r.gramian = finish(std::move(gram), r.horizon, GramianMethod::Quadrature, pd_tol);
    r.gramian_condition = condition_number(r.gramian.gramian);
    if (!r.gramian.positive_definite) {
        throw SingularMatrixError("system unobservable at this horizon: Gramian is not positive definite",
                                  r.gramian.min_pivot_or_eig, pd_tol);
    }
    r.x0 = solve(r.gramian.gramian, projection);
    return r;
}

ObservabilityReport analyze(const StateSpaceModel& m, double horizon, const AnalysisOptions& options) {
    require_horizon(horizon, "analyze");
    ObservabilityReport rep;
    rep.observability_matrix = observability_matrix(m);
    const double rank_tol = options.rank_tol > 0.0 ? options.rank_tol : default_rank_tol(rep.observability_matrix);
    rep.kalman_rank = rank(rep.observability_matrix, rank_tol);
    rep.rank_required = m.states();
    rep.kalman_observable = rep.kalman_rank == rep.rank_required;

    rep.gramian = gramian_quadrature(m, horizon, options.intervals, options.pd_tol);
    rep.gramian_ode = gramian_ode(m, horizon, options.ode_steps, options.pd_tol);
    rep.gramian_observable = rep.gramian.positive_definite;
    rep.consistent = rep.kalman_observable == rep.gramian_observable &&
                     rep.gramian_observable == rep.gramian_ode.positive_definite;

    const double scale = norm_frobenius(rep.gramian.gramian);
    const double diff = norm_frobenius(rep.gramian_ode.gramian - rep.gramian.gramian);
    rep.route_discrepancy = scale > 0.0 ? diff / scale : diff;
    rep.routes_agree = rep.route_discrepancy <= options.route_tol;
    rep.gramian_condition = condition_number(rep.gramian.gramian);
    return rep;
}

}  // namespace observkit
