#include "observkit/lti.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace observkit {

namespace {

void require_width(std::span<const double> v, std::size_t expected, const char* what) {
    if (v.size() != expected) {
        throw DimensionError(std::string(what) + ": expected width " + std::to_string(expected) + ", got " +
                             std::to_string(v.size()));
    }
}

}  // namespace

StateSpaceModel make_model(Matrix a, Matrix b, Matrix c) {
    if (!a.is_square()) throw DimensionError("make_model: A must be square, got " + a.shape());
    const std::size_t n = a.rows();
    if (n == 0) throw DimensionError("make_model: A must have at least one state");
    if (b.rows() != n || b.cols() == 0) {
        throw DimensionError("make_model: B must be " + std::to_string(n) + "xp with p >= 1, got " + b.shape());
    }
    if (c.cols() != n || c.rows() == 0) {
        throw DimensionError("make_model: C must be qx" + std::to_string(n) + " with q >= 1, got " + c.shape());
    }
    return StateSpaceModel(std::move(a), std::move(b), std::move(c));
}

Trace::Trace(double t0, double dt, std::size_t width) : t0_(t0), dt_(dt), width_(width) {
    if (!std::isfinite(t0)) throw InvalidArgument("Trace: t0 must be finite");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("Trace: dt must be positive and finite");
    if (width == 0) throw InvalidArgument("Trace: width must be at least 1");
}

Trace::Trace(double t0, double dt, std::size_t width, std::vector<double> values) : Trace(t0, dt, width) {
    if (values.size() % width != 0) {
        throw DimensionError("Trace: " + std::to_string(values.size()) + " values do not split into samples of width " +
                             std::to_string(width));
    }
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
        throw InvalidArgument("Trace: non-finite sample value");
    }
    values_ = std::move(values);
}

double Trace::duration() const noexcept {
    const std::size_t n = size();
    return n == 0 ? 0.0 : static_cast<double>(n - 1) * dt_;
}

void Trace::push_back(std::span<const double> sample) {
    require_width(sample, width_, "Trace::push_back");
    values_.insert(values_.end(), sample.begin(), sample.end());
}

SystemClass classify(const StateSpaceModel& /*m*/, const Trace* input) {
    SystemClass cls;
    cls.stationary = true;
    cls.free = input == nullptr ||
               std::all_of(input->values().begin(), input->values().end(), [](double v) { return v == 0.0; });
    cls.autonomous = cls.free && cls.stationary;
    return cls;
}

Matrix transition_matrix(const StateSpaceModel& m, double t) { return expm(m.a(), t); }

Discretization discretize_zoh(const StateSpaceModel& m, double dt) {
    const std::size_t n = m.states();
    const std::size_t p = m.inputs();
    // expm([[A, B], [0, 0]] dt) = [[Φ, Γ], [0, I]]
    Matrix aug(n + p, n + p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = m.a()(i, j);
        for (std::size_t j = 0; j < p; ++j) aug(i, n + j) = m.b()(i, j);
    }
    const Matrix e = expm(aug, dt);
    Discretization d{Matrix(n, n), Matrix(n, p)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) d.phi(i, j) = e(i, j);
        for (std::size_t j = 0; j < p; ++j) d.gamma(i, j) = e(i, n + j);
    }
    return d;
}

Simulation simulate_free(const StateSpaceModel& m, std::span<const double> x0, double t0, double dt,
                         std::size_t steps) {
    require_width(x0, m.states(), "simulate_free: x0");
    Simulation sim{Trace(t0, dt, m.states()), Trace(t0, dt, m.outputs())};
    const Matrix phi = transition_matrix(m, dt);
    Vector x(x0.begin(), x0.end());
    for (std::size_t k = 0; k <= steps; ++k) {
        if (k > 0) x = matvec(phi, x);
        sim.x.push_back(x);
        sim.y.push_back(matvec(m.c(), x));
    }
    return sim;
}

Simulation simulate_forced(const StateSpaceModel& m, std::span<const double> x0, const Trace& u) {
    require_width(x0, m.states(), "simulate_forced: x0");
    if (u.width() != m.inputs()) {
        throw DimensionError("simulate_forced: input width " + std::to_string(u.width()) + " does not match p = " +
                             std::to_string(m.inputs()));
    }
    Simulation sim{Trace(u.t0(), u.dt(), m.states()), Trace(u.t0(), u.dt(), m.outputs())};
    if (u.size() == 0) return sim;

    const Discretization d = discretize_zoh(m, u.dt());
    Vector x(x0.begin(), x0.end());
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (k > 0) {
            Vector next = matvec(d.phi, x);
            const Vector drive = matvec(d.gamma, u.sample(k - 1));
            for (std::size_t i = 0; i < next.size(); ++i) next[i] += drive[i];
            x = std::move(next);
        }
        sim.x.push_back(x);
        sim.y.push_back(matvec(m.c(), x));
    }
    return sim;
}

}  // namespace observkit
