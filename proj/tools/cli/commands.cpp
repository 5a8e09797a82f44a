#include "cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "cli/files.hpp"
#include "cli/handles.hpp"

namespace observkit::cli {

namespace {

using nlohmann::json;

json matrix_json(const std::vector<double>& data, std::size_t rows, std::size_t cols) {
    json out = json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < cols; ++j) row.push_back(data[i * cols + j]);
        out.push_back(std::move(row));
    }
    return out;
}

void warn(const Console& io, const std::string& message) {
    if (io.color) {
        io.err << "\x1b[33mwarning:\x1b[0m " << message << '\n';
    } else {
        io.err << "warning: " << message << '\n';
    }
}

void error(const Console& io, const std::string& message) {
    if (io.color) {
        io.err << "\x1b[31merror:\x1b[0m " << message << '\n';
    } else {
        io.err << "error: " << message << '\n';
    }
}

void emit(const Console& io, const json& doc, const std::string& path) {
    if (path.empty()) {
        io.out << doc.dump(2) << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParseError(path + ": cannot open for writing");
    f << doc.dump(2) << '\n';
}

okit_options to_options(const Tolerances& t) {
    okit_options o = okit_default_options();
    o.rank_tol = t.rank_tol;
    o.pd_tol = t.pd_tol;
    o.intervals = t.intervals;
    o.ode_steps = t.ode_steps;
    return o;
}

struct AnalysisOutcome {
    json report;
    bool observable = false;
};

AnalysisOutcome run_analysis(const okit_model* model, std::size_t n, double horizon, const Tolerances& tol,
                             const Console& io) {
    const okit_options opts = to_options(tol);
    okit_report* raw = nullptr;
    check(okit_analyze(model, horizon, &opts, &raw), "analyze");
    const ReportHandle report(raw);

    okit_report_summary s{};
    check(okit_report_get_summary(report.get(), &s), "report summary");

    std::size_t rows = 0;
    std::size_t cols = 0;
    check(okit_report_observability_matrix(report.get(), nullptr, 0, &rows, &cols), "observability matrix shape");
    std::vector<double> obs(rows * cols);
    check(okit_report_observability_matrix(report.get(), obs.data(), obs.size(), &rows, &cols),
          "observability matrix");
    std::vector<double> quad(n * n);
    std::vector<double> ode(n * n);
    check(okit_report_gramian(report.get(), 0, quad.data(), quad.size()), "gramian");
    check(okit_report_gramian(report.get(), 1, ode.data(), ode.size()), "gramian (ode)");

    AnalysisOutcome outcome;
    outcome.observable = s.kalman_observable && s.gramian_observable && s.gramian_ode_observable;
    json& r = outcome.report;
    r["horizon"] = s.horizon;
    r["observable"] = outcome.observable;
    r["kalman_rank"] = s.kalman_rank;
    r["rank_required"] = s.rank_required;
    r["kalman_observable"] = s.kalman_observable != 0;
    r["gramian_observable"] = s.gramian_observable != 0;
    r["consistent"] = s.consistent != 0;
    r["observability_matrix"] = matrix_json(obs, rows, cols);
    r["gramian"] = {{"method", "quadrature"},
                    {"matrix", matrix_json(quad, n, n)},
                    {"positive_definite", s.gramian_observable != 0},
                    {"min_pivot", s.gramian_min_pivot},
                    {"condition", s.gramian_condition}};
    r["gramian_ode"] = {{"method", "lyapunov-ode"},
                        {"matrix", matrix_json(ode, n, n)},
                        {"positive_definite", s.gramian_ode_observable != 0},
                        {"min_pivot", s.gramian_ode_min_pivot}};
    r["route_discrepancy"] = s.route_discrepancy;
    r["routes_agree"] = s.routes_agree != 0;
    r["tolerances"] = {{"rank_tol", tol.rank_tol},
                       {"pd_tol", opts.pd_tol},
                       {"intervals", opts.intervals},
                       {"ode_steps", opts.ode_steps},
                       {"route_tol", opts.route_tol}};

    if (!s.consistent) {
        warn(io, "inconsistent observability verdicts (kalman=" + std::to_string(s.kalman_observable) +
                     ", gramian=" + std::to_string(s.gramian_observable) +
                     ", gramian_ode=" + std::to_string(s.gramian_ode_observable) + "); check --rank-tol/--pd-tol");
    }
    if (!s.routes_agree) {
        warn(io, "Gramian routes disagree: relative discrepancy " + format_number(s.route_discrepancy));
    }
    return outcome;
}

std::vector<double> parse_vector(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string field;
    while (std::getline(ss, field, ',')) {
        const auto first = field.find_first_not_of(" \t");
        const auto last = field.find_last_not_of(" \t");
        if (first == std::string::npos) throw ParseError("--x0: empty entry in '" + text + "'");
        field = field.substr(first, last - first + 1);
        char* end = nullptr;
        const double x = std::strtod(field.c_str(), &end);
        if (end != field.c_str() + field.size() || !std::isfinite(x)) {
            throw ParseError("--x0: '" + field + "' is not a finite number");
        }
        v.push_back(x);
    }
    if (v.empty()) throw ParseError("--x0: no values given");
    return v;
}

template <typename Fn>
int run_guarded(const Console& io, Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        error(io, e.what());
        return kExitError;
    } catch (const ApiError& e) {
        error(io, e.what());
        return kExitError;
    } catch (const std::exception& e) {
        error(io, e.what());
        return kExitError;
    }
}

}  // namespace

bool color_enabled() {
    if (std::getenv("OBSERVKIT_NO_COLOR") != nullptr) return false;
    return isatty(STDERR_FILENO) != 0;
}

int cmd_analyze(const AnalyzeArgs& args, const Console& io) {
    return run_guarded(io, [&] {
        const ModelFile file = read_model(args.model_path);
        const ModelHandle model = to_handle(file);
        AnalysisOutcome result = run_analysis(model.get(), file.n, args.horizon, args.tol, io);
        if (!file.name.empty()) result.report["model"] = file.name;
        emit(io, result.report, args.out_path);
        return result.observable ? kExitOk : kExitNegative;
    });
}

int cmd_simulate(const SimulateArgs& args, const Console& io) {
    return run_guarded(io, [&] {
        const ModelFile file = read_model(args.model_path);
        const ModelHandle model = to_handle(file);
        const std::vector<double> x0 = parse_vector(args.x0);
        if (x0.size() != file.n) {
            throw ParseError("--x0 has " + std::to_string(x0.size()) + " entries, model has n = " +
                             std::to_string(file.n));
        }

        TraceHandle input;
        double dt = 0.0;
        std::size_t steps = 0;
        if (!args.input_path.empty()) {
            if (args.dt || args.steps) throw ParseError("--dt/--steps cannot be combined with --input");
            const TraceFile u = read_trace(args.input_path);
            if (u.width != file.p) {
                throw ParseError(args.input_path + ": input has " + std::to_string(u.width) +
                                 " value columns, model has p = " + std::to_string(file.p));
            }
            input = to_handle(u);
        } else {
            if (!args.dt || !args.steps) throw ParseError("--dt and --steps are required without --input");
            dt = *args.dt;
            steps = *args.steps;
        }

        okit_trace* x_raw = nullptr;
        okit_trace* y_raw = nullptr;
        check(okit_simulate(model.get(), x0.data(), x0.size(), input.get(), args.t0, dt, steps, &x_raw, &y_raw),
              "simulate");
        const TraceHandle x(x_raw);
        const TraceHandle y(y_raw);

        const std::string x_path = args.out_prefix + "_x.csv";
        const std::string y_path = args.out_prefix + "_y.csv";
        const TraceFile xs = trace_from_handle(x.get(), "x");
        write_trace(x_path, xs);
        write_trace(y_path, trace_from_handle(y.get(), "y"));

        json doc{{"x_trace", x_path}, {"y_trace", y_path}, {"samples", xs.size()}, {"forced", input != nullptr}};
        io.out << doc.dump(2) << '\n';
        return kExitOk;
    });
}

int cmd_reconstruct(const ReconstructArgs& args, const Console& io) {
    return run_guarded(io, [&] {
        const ModelFile file = read_model(args.model_path);
        const ModelHandle model = to_handle(file);
        const TraceFile y = read_trace(args.trace_path);
        const TraceHandle y_handle = to_handle(y);
        TraceHandle u_handle;
        if (!args.input_path.empty()) u_handle = to_handle(read_trace(args.input_path));

        std::vector<double> x0(file.n);
        double condition = 0.0;
        double horizon = 0.0;
        const okit_status status =
            okit_reconstruct(model.get(), y_handle.get(), u_handle.get(), args.horizon.value_or(0.0), args.pd_tol,
                             x0.data(), x0.size(), &condition, &horizon);
        if (status == OKIT_ERR_SINGULAR) {
            error(io, std::string("system unobservable at this horizon (") + okit_last_error() + ")");
            return kExitNegative;
        }
        check(status, "reconstruct");

        json doc{{"x0", x0},
                 {"horizon", horizon},
                 {"gramian_condition", condition},
                 {"forced", u_handle != nullptr}};
        emit(io, doc, args.out_path);
        return kExitOk;
    });
}

int cmd_cardio(const CardioArgs& args, const Console& io) {
    return run_guarded(io, [&] {
        okit_model* raw = nullptr;
        check(okit_cardio_model(args.mass, args.damping, args.stiffness, &raw), "parameters");
        const ModelHandle model(raw);
        const ModelFile file = model_from_handle(model.get(), "cardio");
        if (!args.out_path.empty()) {
            std::ofstream f(args.out_path, std::ios::binary);
            if (!f) throw ParseError(args.out_path + ": cannot open for writing");
            f << model_to_json(file) << '\n';
        }

        AnalysisOutcome result = run_analysis(model.get(), file.n, args.horizon, args.tol, io);
        json doc;
        doc["parameters"] = {{"mass", args.mass}, {"damping", args.damping}, {"stiffness", args.stiffness}};
        doc["model"] = json::parse(model_to_json(file));
        if (!args.out_path.empty()) doc["model_file"] = args.out_path;
        doc["certificate"] = std::move(result.report);
        io.out << doc.dump(2) << '\n';
        return result.observable ? kExitOk : kExitNegative;
    });
}

}  // namespace observkit::cli
