#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

using namespace observkit::cli;

namespace {

void add_tolerances(CLI::App* cmd, Tolerances& tol) {
    cmd->add_option("--rank-tol", tol.rank_tol, "Relative rank tolerance (<= 0: machine epsilon x max dimension)");
    cmd->add_option("--pd-tol", tol.pd_tol, "Positive-definiteness pivot tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--intervals", tol.intervals, "Simpson intervals for the Gramian (even)");
    cmd->add_option("--ode-steps", tol.ode_steps, "RK4 steps for the Lyapunov-ODE Gramian");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"observkit: observability analysis for linear time-invariant models"};
    app.require_subcommand(1);

    AnalyzeArgs analyze;
    auto* analyze_cmd = app.add_subcommand("analyze", "Kalman rank and Gramian observability certificate");
    analyze_cmd->add_option("--model", analyze.model_path, "Model file (JSON)")->required();
    analyze_cmd->add_option("--horizon", analyze.horizon, "Observation window T")->check(CLI::PositiveNumber);
    analyze_cmd->add_option("--out", analyze.out_path, "Write the report here instead of stdout");
    add_tolerances(analyze_cmd, analyze.tol);

    SimulateArgs simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "Simulate state and output traces");
    simulate_cmd->add_option("--model", simulate.model_path, "Model file (JSON)")->required();
    simulate_cmd->add_option("--x0", simulate.x0, "Initial state, comma separated")->required();
    simulate_cmd->add_option("--input", simulate.input_path, "Input trace (CSV), zero-order hold");
    simulate_cmd->add_option("--t0", simulate.t0, "Start time");
    simulate_cmd->add_option("--dt", simulate.dt, "Time step")->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--steps", simulate.steps, "Number of steps");
    simulate_cmd->add_option("--out", simulate.out_prefix, "Output prefix: writes <out>_x.csv and <out>_y.csv");

    ReconstructArgs reconstruct;
    auto* reconstruct_cmd = app.add_subcommand("reconstruct", "Recover the initial state from an output trace");
    reconstruct_cmd->add_option("--model", reconstruct.model_path, "Model file (JSON)")->required();
    reconstruct_cmd->add_option("--trace", reconstruct.trace_path, "Output trace (CSV)")->required();
    reconstruct_cmd->add_option("--input", reconstruct.input_path, "Input trace (CSV) that drove the system");
    reconstruct_cmd->add_option("--horizon", reconstruct.horizon, "Use only [t0, t0 + horizon] of the trace")
        ->check(CLI::PositiveNumber);
    reconstruct_cmd->add_option("--pd-tol", reconstruct.pd_tol, "Positive-definiteness pivot tolerance")
        ->check(CLI::PositiveNumber);
    reconstruct_cmd->add_option("--out", reconstruct.out_path, "Write the result here instead of stdout");

    CardioArgs cardio;
    auto* cardio_cmd = app.add_subcommand("cardio", "Build and certify the electrocardiography table model");
    cardio_cmd->add_option("--mass", cardio.mass, "Combined person and table mass M (kg)");
    cardio_cmd->add_option("--damping", cardio.damping, "Damping coefficient (N s/m)");
    cardio_cmd->add_option("--stiffness", cardio.stiffness, "Spring stiffness (N/m)");
    cardio_cmd->add_option("--horizon", cardio.horizon, "Observation window T")->check(CLI::PositiveNumber);
    cardio_cmd->add_option("--out", cardio.out_path, "Write the model file here");
    add_tolerances(cardio_cmd, cardio.tol);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitError;
    }

    const Console io{std::cout, std::cerr, color_enabled()};
    if (*analyze_cmd) return cmd_analyze(analyze, io);
    if (*simulate_cmd) return cmd_simulate(simulate, io);
    if (*reconstruct_cmd) return cmd_reconstruct(reconstruct, io);
    return cmd_cardio(cardio, io);
}
