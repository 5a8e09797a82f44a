#pragma once

#include <cstddef>
#include <span>
#include <utility>

#include "observkit/linalg.hpp"

namespace observkit {

/**
 * @brief Continuous-time LTI model  ẋ = A x + B u,  y = C x.
 *
 * A is n×n, B is n×p, C is q×n with p, q ≥ 1. Construct through make_model
 * so shapes are always validated.
 */
class StateSpaceModel {
public:
    [[nodiscard]] const Matrix& a() const noexcept { return a_; }
    [[nodiscard]] const Matrix& b() const noexcept { return b_; }
    [[nodiscard]] const Matrix& c() const noexcept { return c_; }

    [[nodiscard]] std::size_t states() const noexcept { return a_.rows(); }
    [[nodiscard]] std::size_t inputs() const noexcept { return b_.cols(); }
    [[nodiscard]] std::size_t outputs() const noexcept { return c_.rows(); }

private:
    friend StateSpaceModel make_model(Matrix a, Matrix b, Matrix c);
    StateSpaceModel(Matrix a, Matrix b, Matrix c) : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

    Matrix a_;
    Matrix b_;
    Matrix c_;
};

StateSpaceModel make_model(Matrix a, Matrix b, Matrix c);

/// Uniformly sampled vector signal; sample k is the value at t0 + k·dt.
class Trace {
public:
    Trace(double t0, double dt, std::size_t width);
    Trace(double t0, double dt, std::size_t width, std::vector<double> values);

    [[nodiscard]] double t0() const noexcept { return t0_; }
    [[nodiscard]] double dt() const noexcept { return dt_; }
    [[nodiscard]] std::size_t width() const noexcept { return width_; }
    [[nodiscard]] std::size_t size() const noexcept { return width_ == 0 ? 0 : values_.size() / width_; }
    [[nodiscard]] double time(std::size_t k) const noexcept { return t0_ + static_cast<double>(k) * dt_; }
    /// Time span covered by the samples, (size - 1)·dt.
    [[nodiscard]] double duration() const noexcept;

    [[nodiscard]] std::span<const double> sample(std::size_t k) const {
        return std::span<const double>(values_).subspan(k * width_, width_);
    }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

    void push_back(std::span<const double> sample);

private:
    double t0_;
    double dt_;
    std::size_t width_;
    std::vector<double> values_;
};

struct SystemClass {
    bool free = false;
    bool stationary = true;
    bool autonomous = false;
};

/// Constant-coefficient models are always stationary; free when no input acts.
SystemClass classify(const StateSpaceModel& m, const Trace* input);

/// Φ(t) = e^{A t}
Matrix transition_matrix(const StateSpaceModel& m, double t);

/// Exact zero-order-hold discretization over one step of length dt.
struct Discretization {
    Matrix phi;    ///< e^{A dt}
    Matrix gamma;  ///< ∫₀^dt e^{A s} ds · B
};

Discretization discretize_zoh(const StateSpaceModel& m, double dt);

struct Simulation {
    Trace x;
    Trace y;
};

/// Free response: steps + 1 samples starting at t0.
Simulation simulate_free(const StateSpaceModel& m, std::span<const double> x0, double t0, double dt,
                         std::size_t steps);

/**
 * Forced response under zero-order hold of u. The result has one sample per
 * input sample; the final input sample is held but never integrated.
 */
Simulation simulate_forced(const StateSpaceModel& m, std::span<const double> x0, const Trace& u);

}  // namespace observkit
