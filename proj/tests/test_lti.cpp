#include <cmath>
#include <random>

#include "doctest.h"
#include "observkit/cardio.hpp"
#include "observkit/lti.hpp"
#include "oracles.hpp"

using namespace observkit;

TEST_CASE("make_model validates shapes") {
    const auto m = make_model(Matrix(2, 2), Matrix(2, 1), Matrix(1, 2));
    CHECK(m.states() == 2);
    CHECK(m.inputs() == 1);
    CHECK(m.outputs() == 1);

    CHECK_THROWS_AS(make_model(Matrix(2, 2), Matrix(3, 1), Matrix(1, 2)), DimensionError);
    CHECK_THROWS_AS(make_model(Matrix(2, 3), Matrix(2, 1), Matrix(1, 3)), DimensionError);
    CHECK_THROWS_AS(make_model(Matrix(2, 2), Matrix(2, 1), Matrix(1, 3)), DimensionError);
    CHECK_THROWS_AS(make_model(Matrix(2, 2), Matrix(2, 0), Matrix(1, 2)), DimensionError);
    CHECK_THROWS_AS(make_model(Matrix(2, 2), Matrix(2, 1), Matrix(0, 2)), DimensionError);

    try {
        (void)make_model(Matrix(2, 2), Matrix(3, 1), Matrix(1, 2));
    } catch (const DimensionError& e) {
        CHECK(std::string(e.what()).find("B") != std::string::npos);
    }
}

TEST_CASE("Trace invariants") {
    CHECK_THROWS_AS(Trace(0.0, 0.0, 1), InvalidArgument);
    CHECK_THROWS_AS(Trace(0.0, -1.0, 1), InvalidArgument);
    CHECK_THROWS_AS(Trace(0.0, 0.1, 2, {1.0, 2.0, 3.0}), DimensionError);
    Trace t(1.0, 0.5, 2, {1, 2, 3, 4, 5, 6});
    CHECK(t.size() == 3);
    CHECK(t.time(2) == doctest::Approx(2.0));
    CHECK(t.duration() == doctest::Approx(1.0));
    CHECK(t.sample(1)[1] == 4.0);
    CHECK_THROWS_AS(t.push_back(Vector{1.0}), DimensionError);
}

TEST_CASE("classify") {
    const auto m = make_model(Matrix(1, 1), Matrix{{1.0}}, Matrix{{1.0}});
    const auto free = classify(m, nullptr);
    CHECK(free.free);
    CHECK(free.stationary);
    CHECK(free.autonomous);

    const Trace zero(0.0, 0.1, 1, {0.0, 0.0});
    CHECK(classify(m, &zero).autonomous);
    const Trace driven(0.0, 0.1, 1, {0.0, 1.0});
    const auto forced = classify(m, &driven);
    CHECK_FALSE(forced.free);
    CHECK_FALSE(forced.autonomous);
}

TEST_CASE("transition_matrix") {
    const auto cardio = cardio::build_cardio_model({1.0, 0.0, 1.0});
    CHECK(transition_matrix(cardio, 0.0) == Matrix::identity(2));
    for (double t : {0.5, 2.0, 4.5}) {
        const Matrix want{{std::cos(t), std::sin(t)}, {-std::sin(t), std::cos(t)}};
        CHECK(max_abs_diff(transition_matrix(cardio, t), want) <= 1e-13);
    }
    const auto scalar = make_model(Matrix{{-1.0}}, Matrix{{1.0}}, Matrix{{1.0}});
    CHECK(transition_matrix(scalar, 1.0)(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

    SUBCASE("semigroup through the model API") {
        std::mt19937_64 rng(5);
        const auto m = make_model(testing::random_matrix(rng, 3, 3), Matrix(3, 1), Matrix(1, 3));
        const Matrix lhs = transition_matrix(m, 0.7 + 0.4);
        const Matrix rhs = transition_matrix(m, 0.7) * transition_matrix(m, 0.4);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
    }
}

TEST_CASE("simulate_free") {
    SUBCASE("zero initial state") {
        const auto cardio = cardio::build_cardio_model({2.0, 1.0, 4.0});
        const auto sim = simulate_free(cardio, Vector{0.0, 0.0}, 0.0, 0.1, 20);
        for (double v : sim.x.values()) CHECK(v == 0.0);
        for (double v : sim.y.values()) CHECK(v == 0.0);
    }
    SUBCASE("A = 0 holds the state") {
        const auto m = make_model(Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{1.0}});
        const auto sim = simulate_free(m, Vector{3.0}, 0.0, 0.25, 8);
        CHECK(sim.x.size() == 9);
        for (double v : sim.x.values()) CHECK(v == 3.0);
    }
    SUBCASE("cardio rotation") {
        const auto cardio = cardio::build_cardio_model({1.0, 0.0, 1.0});
        const auto sim = simulate_free(cardio, Vector{1.0, 0.0}, 0.0, 0.01, 1000);
        REQUIRE(sim.x.size() == 1001);
        for (std::size_t k = 0; k < sim.x.size(); k += 50) {
            const double t = sim.x.time(k);
            CHECK(sim.x.sample(k)[0] == doctest::Approx(std::cos(t)).epsilon(1e-11));
            CHECK(std::abs(sim.x.sample(k)[1] + std::sin(t)) <= 1e-11);
            CHECK(std::abs(sim.y.sample(k)[0] + std::sin(t)) <= 1e-11);
        }
    }
    SUBCASE("steps = 0 yields the initial condition only") {
        const auto cardio = cardio::build_cardio_model({1.0, 0.0, 1.0});
        const auto sim = simulate_free(cardio, Vector{1.0, 2.0}, 3.0, 0.1, 0);
        CHECK(sim.x.size() == 1);
        CHECK(sim.x.t0() == 3.0);
        CHECK(sim.y.sample(0)[0] == 2.0);
    }
    SUBCASE("width mismatch") {
        const auto cardio = cardio::build_cardio_model({1.0, 0.0, 1.0});
        CHECK_THROWS_AS(simulate_free(cardio, Vector{1.0}, 0.0, 0.1, 3), DimensionError);
        CHECK_THROWS_AS(simulate_free(cardio, Vector{1.0, 0.0}, 0.0, 0.0, 3), InvalidArgument);
    }
}

TEST_CASE("simulate_forced") {
    SUBCASE("zero input reduces to the free response") {
        const auto cardio = cardio::build_cardio_model({2.0, 1.0, 4.0});
        const Trace u(0.0, 0.05, 1, Vector(41, 0.0));
        const auto forced = simulate_forced(cardio, Vector{1.0, -0.5}, u);
        const auto free = simulate_free(cardio, Vector{1.0, -0.5}, 0.0, 0.05, 40);
        REQUIRE(forced.x.size() == free.x.size());
        for (std::size_t i = 0; i < forced.x.values().size(); ++i) {
            CHECK(std::abs(forced.x.values()[i] - free.x.values()[i]) <= 1e-13);
        }
    }
    SUBCASE("pure integrator") {
        const auto m = make_model(Matrix{{0.0}}, Matrix{{1.0}}, Matrix{{1.0}});
        const Trace u(0.0, 0.1, 1, Vector(31, 1.0));
        const auto sim = simulate_forced(m, Vector{0.0}, u);
        for (std::size_t k = 0; k < sim.x.size(); ++k) CHECK(sim.x.sample(k)[0] == doctest::Approx(sim.x.time(k)));
    }
    SUBCASE("first-order lag") {
        const auto m = make_model(Matrix{{-1.0}}, Matrix{{1.0}}, Matrix{{1.0}});
        const Trace u(0.0, 0.1, 1, Vector(51, 1.0));
        const auto sim = simulate_forced(m, Vector{0.0}, u);
        for (std::size_t k = 0; k < sim.x.size(); ++k) {
            CHECK(std::abs(sim.x.sample(k)[0] - (1.0 - std::exp(-sim.x.time(k)))) <= 1e-14);
        }
    }
    SUBCASE("input width mismatch") {
        const auto m = make_model(Matrix{{-1.0}}, Matrix{{1.0}}, Matrix{{1.0}});
        const Trace u(0.0, 0.1, 2, Vector(10, 1.0));
        CHECK_THROWS_AS(simulate_forced(m, Vector{0.0}, u), DimensionError);
    }
}

TEST_CASE("simulation properties on random stable systems") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> udist(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix a = testing::make_stable(testing::random_matrix(rng, 3, 3, -1.0, 1.0));
        const auto m = make_model(a, testing::random_matrix(rng, 3, 2), testing::random_matrix(rng, 2, 3));
        Vector uvals(2 * 101);
        for (double& v : uvals) v = udist(rng);
        const Trace u(0.0, 0.02, 2, uvals);
        const Vector x0 = testing::random_unit_vector(rng, 3);

        const auto forced = simulate_forced(m, x0, u);

        {  // superposition
            const auto free = simulate_free(m, x0, 0.0, 0.02, 100);
            const auto zero_state = simulate_forced(m, Vector(3, 0.0), u);
            for (std::size_t i = 0; i < forced.x.values().size(); ++i) {
                CHECK(std::abs(forced.x.values()[i] - free.x.values()[i] - zero_state.x.values()[i]) <= 1e-10);
            }
        }
        {  // independent RK4 integration
            const auto reference = testing::rk4_zoh(m.a(), m.b(), x0, u, 40);
            for (std::size_t k = 0; k < forced.x.size(); ++k) {
                const auto got = forced.x.sample(k);
                const double scale = std::max(1.0, testing::norm2(reference[k]));
                Vector diff(3);
                for (std::size_t i = 0; i < 3; ++i) diff[i] = got[i] - reference[k][i];
                CHECK(testing::norm2(diff) / scale <= 1e-6);
            }
        }
        {  // y = C x exactly
            for (std::size_t k = 0; k < forced.x.size(); ++k) {
                const Vector y = matvec(m.c(), forced.x.sample(k));
                CHECK(y[0] == forced.y.sample(k)[0]);
                CHECK(y[1] == forced.y.sample(k)[1]);
            }
        }
    }
}
