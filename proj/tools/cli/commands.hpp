#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

namespace observkit::cli {

// Exit-code contract shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNegative = 2;

struct Tolerances {
    double rank_tol = 0.0;  // <= 0: machine epsilon x max dimension
    double pd_tol = 1e-10;
    std::size_t intervals = 200;
    std::size_t ode_steps = 1000;
};

struct AnalyzeArgs {
    std::string model_path;
    double horizon = 1.0;
    Tolerances tol;
    std::string out_path;  // empty: stdout
};

struct SimulateArgs {
    std::string model_path;
    std::string x0;  // comma list
    std::string input_path;
    double t0 = 0.0;
    std::optional<double> dt;
    std::optional<std::size_t> steps;
    std::string out_prefix = "trace";
};

struct ReconstructArgs {
    std::string model_path;
    std::string trace_path;
    std::string input_path;
    std::optional<double> horizon;
    double pd_tol = 1e-10;
    std::string out_path;
};

struct CardioArgs {
    double mass = 1.0;
    double damping = 0.0;
    double stiffness = 1.0;
    double horizon = 1.0;
    Tolerances tol;
    std::string out_path;  // model file; empty: embed only in the printed document
};

/// Output streams plus the styling decision for the warning channel.
struct Console {
    std::ostream& out;
    std::ostream& err;
    bool color = false;
};

/// Colour is on for a terminal unless OBSERVKIT_NO_COLOR is set.
bool color_enabled();

int cmd_analyze(const AnalyzeArgs& args, const Console& io);
int cmd_simulate(const SimulateArgs& args, const Console& io);
int cmd_reconstruct(const ReconstructArgs& args, const Console& io);
int cmd_cardio(const CardioArgs& args, const Console& io);

}  // namespace observkit::cli
