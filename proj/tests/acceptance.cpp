// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "observkit/cardio.hpp"
#include "observkit/observability.hpp"
#include "oracles.hpp"

using namespace observkit;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string title;
    double time_limit_s;
    std::function<Outcome()> run;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// 1. Cardio certificate over the parameter grid, T = 1.
Outcome cardio_grid() {
    int checked = 0;
    for (double mass : {0.5, 1.0, 10.0}) {
        for (double damping : {0.0, 0.5, 5.0}) {
            for (double stiffness : {0.1, 1.0, 100.0}) {
                const auto rep = cardio::certify_cardio({mass, damping, stiffness}, 1.0);
                ++checked;
                if (rep.kalman_rank != 2 || !rep.gramian.positive_definite) {
                    return {false, "M=" + fmt(mass) + " beta=" + fmt(damping) + " gamma=" + fmt(stiffness) +
                                       ": rank " + std::to_string(rep.kalman_rank) +
                                       (rep.gramian.positive_definite ? ", PD" : ", not PD")};
                }
            }
        }
    }
    return {true, std::to_string(checked) + "/27 grid points: rank 2, Gramian PD"};
}

// 2. gamma = 0 gives rank 1 and a singular Gramian.
Outcome degenerate_stiffness() {
    for (double mass : {0.5, 1.0, 10.0}) {
        for (double damping : {0.0, 0.5, 5.0}) {
            const auto rep = cardio::certify_cardio({mass, damping, 0.0}, 1.0);
            const bool invertible = gramian_invertible(rep.gramian.gramian);
            if (rep.kalman_rank != 1 || rep.gramian.positive_definite || invertible) {
                return {false, "M=" + fmt(mass) + " beta=" + fmt(damping) + ": rank " +
                                   std::to_string(rep.kalman_rank)};
            }
        }
    }
    return {true, "9/9 parameter pairs: rank 1, Gramian singular"};
}

// 3. Kalman rank ⟺ Gramian PD ⟺ Gramian invertible on 100 seeded models.
Outcome three_way_equivalence() {
    std::mt19937_64 rng(3202);
    std::uniform_int_distribution<std::size_t> n_obs(1, 5);
    std::uniform_int_distribution<std::size_t> n_unobs(2, 5);
    int agree = 0;
    int truth = 0;
    for (int i = 0; i < 100; ++i) {
        const bool observable = i < 50;
        const auto model = observable ? testing::random_observable_model(rng, n_obs(rng), i % 2 == 0)
                                      : testing::random_unobservable_model(rng, n_unobs(rng));
        const bool by_rank = rank_test(model).observable;
        const GramianResult g = gramian_quadrature(model, 1.0);
        const bool by_pd = g.positive_definite;
        const bool by_inverse = gramian_invertible(g.gramian);
        if (by_rank == by_pd && by_pd == by_inverse) ++agree;
        if (by_rank == observable) ++truth;
    }
    return {agree == 100 && truth == 100,
            std::to_string(agree) + "/100 verdicts agree, " + std::to_string(truth) + "/100 match construction"};
}

struct RoundTrip {
    double worst = 0.0;
    int cases = 0;
};

RoundTrip reconstruction_round_trips(bool forced, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> n_dist(1, 4);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    const double dt = 1e-3;
    const std::size_t steps = 1000;
    RoundTrip out;
    for (int i = 0; i < 20; ++i) {
        const auto model = testing::random_observable_model(rng, n_dist(rng), i % 2 == 0);
        const Vector x0 = testing::random_unit_vector(rng, model.states());
        Reconstruction rec;
        if (forced) {
            const double a1 = amp(rng), a2 = amp(rng), w = 2.0 + 4.0 * std::abs(amp(rng));
            Vector u(steps + 1);
            for (std::size_t k = 0; k <= steps; ++k) {
                const double t = static_cast<double>(k) * dt;
                u[k] = a1 + a2 * std::sin(w * t) + (k / 100 % 2 == 0 ? 0.5 : -0.5);
            }
            const Trace input(0.0, dt, 1, u);
            const auto sim = simulate_forced(model, x0, input);
            rec = reconstruct_initial_state(model, sim.y, &input);
        } else {
            const auto sim = simulate_free(model, x0, 0.0, dt, steps);
            rec = reconstruct_initial_state(model, sim.y, nullptr);
        }
        out.worst = std::max(out.worst, testing::relative_error(rec.x0, x0));
        ++out.cases;
    }
    return out;
}

// 4. Free-response reconstruction.
Outcome reconstruction_free() {
    const RoundTrip r = reconstruction_round_trips(false, 404);
    return {r.cases == 20 && r.worst <= 1e-6, std::to_string(r.cases) + " models, worst relative error " + fmt(r.worst)};
}

// 5. Forced-response reconstruction.
Outcome reconstruction_forced() {
    const RoundTrip r = reconstruction_round_trips(true, 505);
    return {r.cases == 20 && r.worst <= 1e-5, std::to_string(r.cases) + " models, worst relative error " + fmt(r.worst)};
}

// 6. expm against closed forms, |t| ≤ 5.
Outcome expm_closed_forms() {
    double worst = 0.0;
    const Matrix nil3{{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}};
    const Matrix rot{{0.0, 1.0}, {-1.0, 0.0}};
    const std::vector<double> diag{-0.5, -0.25, 0.3, 0.5};
    for (int k = -20; k <= 20; ++k) {
        const double t = 0.25 * k;
        worst = std::max(worst, max_abs_diff(expm(Matrix::zeros(4, 4), t), Matrix::identity(4)));
        worst = std::max(worst, max_abs_diff(expm(nil3, t), Matrix{{1.0, t, t * t / 2.0}, {0.0, 1.0, t}, {0.0, 0.0, 1.0}}));
        worst = std::max(worst, max_abs_diff(expm(rot, t), Matrix{{std::cos(t), std::sin(t)}, {-std::sin(t), std::cos(t)}}));
        std::vector<double> e;
        for (double d : diag) e.push_back(std::exp(d * t));
        worst = std::max(worst, max_abs_diff(expm(Matrix::diagonal(diag), t), Matrix::diagonal(e)));
    }
    return {worst <= 1e-12, "max entry error " + fmt(worst) + " over 41 times x 4 closed forms"};
}

// 7. Quadrature and Lyapunov-ODE Gramians agree; both hit the scalar closed form.
Outcome gramian_routes() {
    std::mt19937_64 rng(707);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto model = make_model(testing::random_matrix(rng, 4, 4), testing::random_matrix(rng, 4, 1),
                                      testing::random_matrix(rng, 2, 4));
        const Matrix wq = gramian_quadrature(model, 1.0, 200).gramian;
        const Matrix wo = gramian_ode(model, 1.0, 1000).gramian;
        worst = std::max(worst, norm_frobenius(wq - wo) / norm_frobenius(wq));
    }
    const auto scalar = make_model(Matrix{{-1.0}}, Matrix{{1.0}}, Matrix{{1.0}});
    const double exact = (1.0 - std::exp(-2.0)) / 2.0;
    const double eq = std::abs(gramian_quadrature(scalar, 1.0, 200).gramian(0, 0) - exact);
    const double eo = std::abs(gramian_ode(scalar, 1.0, 1000).gramian(0, 0) - exact);
    return {worst <= 1e-6 && eq <= 1e-9 && eo <= 1e-9,
            "worst route discrepancy " + fmt(worst) + ", scalar errors " + fmt(eq) + " / " + fmt(eo)};
}

// 8. Distinguishability of free output traces.
Outcome distinguishability() {
    const auto cardio = cardio::build_cardio_model({1.0, 0.5, 2.0});
    const auto y0 = simulate_free(cardio, Vector{1.0, 0.0}, 0.0, 1e-3, 1000).y;
    const auto y1 = simulate_free(cardio, Vector{0.0, 1.0}, 0.0, 1e-3, 1000).y;
    double separation = 0.0;
    for (std::size_t i = 0; i < y0.values().size(); ++i) {
        separation = std::max(separation, std::abs(y0.values()[i] - y1.values()[i]));
    }

    const auto hidden = make_model(Matrix::diagonal(std::vector<double>{1.0, 2.0}), Matrix{{1.0}, {1.0}},
                                   Matrix{{1.0, 0.0}});
    const Vector x0{0.7, -0.3};
    const Vector x1{0.7, 0.7};  // x0 + [0, 1]
    const auto h0 = simulate_free(hidden, x0, 0.0, 1e-3, 1000).y;
    const auto h1 = simulate_free(hidden, x1, 0.0, 1e-3, 1000).y;
    double gap = 0.0;
    for (std::size_t i = 0; i < h0.values().size(); ++i) gap = std::max(gap, std::abs(h0.values()[i] - h1.values()[i]));

    return {separation > 1e-8 && gap <= 1e-8,
            "cardio output separation " + fmt(separation) + ", unobservable pair gap " + fmt(gap)};
}

// 9. CLI pipeline cardio -> simulate -> reconstruct and the exit-code contract.
Outcome cli_pipeline() {
    const fs::path dir = fs::temp_directory_path() / ("observkit-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const std::string cli = OBSERVKIT_CLI_PATH;
    const auto run = [&](const std::string& args, std::string* captured = nullptr) {
        const std::string out_file = (dir / "stdout.txt").string();
        const int status =
            std::system(("OBSERVKIT_NO_COLOR=1 " + cli + " " + args + " > " + out_file + " 2>/dev/null").c_str());
        if (captured != nullptr) {
            std::ifstream f(out_file);
            std::ostringstream ss;
            ss << f.rdbuf();
            *captured = ss.str();
        }
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };
    const auto path = [&](const char* name) { return (dir / name).string(); };

    std::string failures;
    const auto expect = [&](const std::string& what, int got, int want) {
        if (got != want) failures += what + " exit " + std::to_string(got) + " (want " + std::to_string(want) + "); ";
    };

    expect("cardio", run("cardio --mass 1 --damping 0.5 --stiffness 2 --horizon 1 --out " + path("m.json")), 0);
    expect("simulate",
           run("simulate --model " + path("m.json") + " --x0=1,-0.5 --dt 0.001 --steps 1000 --out " + path("run")), 0);
    std::string doc;
    expect("reconstruct", run("reconstruct --model " + path("m.json") + " --trace " + path("run_y.csv"), &doc), 0);
    double err = INFINITY;
    try {
        const auto j = nlohmann::json::parse(doc);
        const Vector got{j["x0"][0].get<double>(), j["x0"][1].get<double>()};
        err = testing::relative_error(got, Vector{1.0, -0.5});
    } catch (const std::exception& e) {
        failures += std::string("reconstruct output unreadable: ") + e.what() + "; ";
    }
    if (!(err <= 1e-6)) failures += "x0 error " + fmt(err) + "; ";

    expect("cardio gamma=0", run("cardio --mass 1 --damping 0.5 --stiffness 0"), 2);
    expect("cardio mass=0", run("cardio --mass 0"), 1);
    {
        std::ofstream(path("diag.json")) << R"({"a": [[1, 0], [0, 2]], "b": [[1], [1]], "c": [[1, 0]]})";
        std::ofstream(path("bad.json")) << "{ nope";
    }
    expect("analyze unobservable", run("analyze --model " + path("diag.json")), 2);
    expect("analyze observable", run("analyze --model " + path("m.json") + " --horizon 5"), 0);
    expect("analyze malformed", run("analyze --model " + path("bad.json")), 1);
    expect("reconstruct unobservable", run("reconstruct --model " + path("diag.json") + " --trace " + path("run_y.csv")),
           2);
    expect("simulate bad x0", run("simulate --model " + path("m.json") + " --x0 1 --dt 0.1 --steps 2 --out " +
                                  path("bad")),
           1);
    expect("unknown subcommand", run("frobnicate"), 1);

    fs::remove_all(dir);
    return {failures.empty(), failures.empty() ? "pipeline x0 error " + fmt(err) + ", 8 exit codes as contracted"
                                               : failures};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"AC1", "cardio certificate over the (M, beta, gamma) grid", 1.0, cardio_grid},
        {"AC2", "degenerate stiffness gamma = 0", 1.0, degenerate_stiffness},
        {"AC3", "rank / PD / invertibility equivalence, 100 models", 30.0, three_way_equivalence},
        {"AC4", "free-response reconstruction round trip", 30.0, reconstruction_free},
        {"AC5", "forced-response reconstruction round trip", 30.0, reconstruction_forced},
        {"AC6", "matrix exponential closed forms", 1.0, expm_closed_forms},
        {"AC7", "Gramian quadrature vs Lyapunov ODE", 10.0, gramian_routes},
        {"AC8", "distinguishability of outputs", 1.0, distinguishability},
        {"AC9", "CLI cardio -> simulate -> reconstruct", 5.0, cli_pipeline},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < c.time_limit_s;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::cout << (pass ? "[PASS] " : "[FAIL] ") << c.id << " " << c.title << ": " << o.detail << " ("
                  << fmt(secs) << " s, limit " << fmt(c.time_limit_s) << " s" << (in_time ? "" : ", TOO SLOW")
                  << ")\n";
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
