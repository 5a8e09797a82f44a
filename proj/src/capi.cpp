#include "observkit/observkit.h"

#include <algorithm>
#include <exception>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "observkit/cardio.hpp"
#include "observkit/lti.hpp"
#include "observkit/observability.hpp"

struct okit_model {
    observkit::StateSpaceModel model;
};

struct okit_trace {
    observkit::Trace trace;
};

struct okit_report {
    observkit::ObservabilityReport report;
    double horizon;
};

namespace {

thread_local std::string g_last_error;

okit_status fail(okit_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
okit_status guarded(Fn&& fn) noexcept {
    g_last_error.clear();
    try {
        return fn();
    } catch (const observkit::SingularMatrixError& e) {
        return fail(OKIT_ERR_SINGULAR, e.what());
    } catch (const observkit::DimensionError& e) {
        return fail(OKIT_ERR_DIMENSION, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(OKIT_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(OKIT_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(OKIT_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(OKIT_ERR_INTERNAL, "unknown error");
    }
}

okit_status copy_out(std::span<const double> src, double* out, size_t capacity, const char* what) {
    if (out == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, std::string(what) + ": output buffer is NULL");
    if (capacity < src.size()) {
        return fail(OKIT_ERR_BUFFER_TOO_SMALL, std::string(what) + ": need " + std::to_string(src.size()) +
                                                   " doubles, capacity is " + std::to_string(capacity));
    }
    std::copy(src.begin(), src.end(), out);
    return OKIT_OK;
}

observkit::Matrix matrix_from(const double* data, size_t rows, size_t cols, const char* name) {
    if (data == nullptr && rows * cols > 0) throw observkit::InvalidArgument(std::string(name) + " is NULL");
    return observkit::Matrix(rows, cols, std::vector<double>(data, data + rows * cols));
}

observkit::AnalysisOptions options_from(const okit_options* o) {
    observkit::AnalysisOptions opts;
    if (o != nullptr) {
        opts.rank_tol = o->rank_tol > 0.0 ? o->rank_tol : 0.0;
        opts.pd_tol = o->pd_tol;
        opts.intervals = o->intervals;
        opts.ode_steps = o->ode_steps;
        opts.route_tol = o->route_tol;
    }
    if (!(opts.pd_tol > 0.0)) throw observkit::InvalidArgument("pd_tol must be positive");
    return opts;
}

}  // namespace

extern "C" {

const char* okit_last_error(void) { return g_last_error.c_str(); }

const char* okit_status_string(okit_status status) {
    switch (status) {
        case OKIT_OK:
            return "ok";
        case OKIT_ERR_INVALID_ARGUMENT:
            return "invalid argument";
        case OKIT_ERR_DIMENSION:
            return "dimension mismatch";
        case OKIT_ERR_SINGULAR:
            return "singular matrix";
        case OKIT_ERR_BUFFER_TOO_SMALL:
            return "buffer too small";
        case OKIT_ERR_INTERNAL:
            return "internal error";
    }
    return "unknown status";
}

okit_options okit_default_options(void) {
    const observkit::AnalysisOptions d;
    return okit_options{d.rank_tol, d.pd_tol, d.intervals, d.ode_steps, d.route_tol};
}

okit_status okit_model_create(const double* a, size_t n, const double* b, size_t p, const double* c, size_t q,
                              okit_model** out) {
    return guarded([&] {
        if (out == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_model_create: out is NULL");
        auto model = observkit::make_model(matrix_from(a, n, n, "A"), matrix_from(b, n, p, "B"),
                                           matrix_from(c, q, n, "C"));
        *out = new okit_model{std::move(model)};
        return OKIT_OK;
    });
}

okit_status okit_cardio_model(double mass, double damping, double stiffness, okit_model** out) {
    return guarded([&] {
        if (out == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_cardio_model: out is NULL");
        *out = new okit_model{observkit::cardio::build_cardio_model({mass, damping, stiffness})};
        return OKIT_OK;
    });
}

void okit_model_free(okit_model* model) { delete model; }

okit_status okit_model_dims(const okit_model* model, size_t* n, size_t* p, size_t* q) {
    return guarded([&] {
        if (model == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_model_dims: model is NULL");
        if (n != nullptr) *n = model->model.states();
        if (p != nullptr) *p = model->model.inputs();
        if (q != nullptr) *q = model->model.outputs();
        return OKIT_OK;
    });
}

okit_status okit_model_a(const okit_model* model, double* out, size_t capacity) {
    return guarded([&] {
        if (model == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_model_a: model is NULL");
        return copy_out(model->model.a().entries(), out, capacity, "okit_model_a");
    });
}

okit_status okit_model_b(const okit_model* model, double* out, size_t capacity) {
    return guarded([&] {
        if (model == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_model_b: model is NULL");
        return copy_out(model->model.b().entries(), out, capacity, "okit_model_b");
    });
}

okit_status okit_model_c(const okit_model* model, double* out, size_t capacity) {
    return guarded([&] {
        if (model == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_model_c: model is NULL");
        return copy_out(model->model.c().entries(), out, capacity, "okit_model_c");
    });
}

okit_status okit_transition_matrix(const okit_model* model, double t, double* out, size_t capacity) {
    return guarded([&] {
        if (model == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_transition_matrix: model is NULL");
        const auto phi = observkit::transition_matrix(model->model, t);
        return copy_out(phi.entries(), out, capacity, "okit_transition_matrix");
    });
}

okit_status okit_trace_create(double t0, double dt, size_t width, const double* samples, size_t count,
                              okit_trace** out) {
    return guarded([&] {
        if (out == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_trace_create: out is NULL");
        if (samples == nullptr && count * width > 0) {
            return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_trace_create: samples is NULL");
        }
        std::vector<double> values(samples, samples + count * width);
        *out = new okit_trace{observkit::Trace(t0, dt, width, std::move(values))};
        return OKIT_OK;
    });
}

void okit_trace_free(okit_trace* trace) { delete trace; }

okit_status okit_trace_info(const okit_trace* trace, double* t0, double* dt, size_t* width, size_t* count) {
    return guarded([&] {
        if (trace == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_trace_info: trace is NULL");
        if (t0 != nullptr) *t0 = trace->trace.t0();
        if (dt != nullptr) *dt = trace->trace.dt();
        if (width != nullptr) *width = trace->trace.width();
        if (count != nullptr) *count = trace->trace.size();
        return OKIT_OK;
    });
}

okit_status okit_trace_samples(const okit_trace* trace, double* out, size_t capacity) {
    return guarded([&] {
        if (trace == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_trace_samples: trace is NULL");
        return copy_out(trace->trace.values(), out, capacity, "okit_trace_samples");
    });
}

okit_status okit_simulate(const okit_model* model, const double* x0, size_t n, const okit_trace* input, double t0,
                          double dt, size_t steps, okit_trace** x_out, okit_trace** y_out) {
    return guarded([&] {
        if (model == nullptr || x_out == nullptr || y_out == nullptr) {
            return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_simulate: NULL model or output handle");
        }
        if (x0 == nullptr && n > 0) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_simulate: x0 is NULL");
        const std::span<const double> init(x0, n);
        auto sim = input == nullptr ? observkit::simulate_free(model->model, init, t0, dt, steps)
                                    : observkit::simulate_forced(model->model, init, input->trace);
        auto x = std::make_unique<okit_trace>(okit_trace{std::move(sim.x)});
        auto y = std::make_unique<okit_trace>(okit_trace{std::move(sim.y)});
        *x_out = x.release();
        *y_out = y.release();
        return OKIT_OK;
    });
}

okit_status okit_analyze(const okit_model* model, double horizon, const okit_options* options, okit_report** out) {
    return guarded([&] {
        if (model == nullptr || out == nullptr) {
            return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_analyze: NULL model or output handle");
        }
        auto report = observkit::analyze(model->model, horizon, options_from(options));
        *out = new okit_report{std::move(report), horizon};
        return OKIT_OK;
    });
}

void okit_report_free(okit_report* report) { delete report; }

okit_status okit_report_get_summary(const okit_report* report, okit_report_summary* out) {
    return guarded([&] {
        if (report == nullptr || out == nullptr) {
            return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_report_get_summary: NULL argument");
        }
        const auto& r = report->report;
        out->kalman_rank = r.kalman_rank;
        out->rank_required = r.rank_required;
        out->kalman_observable = r.kalman_observable ? 1 : 0;
        out->gramian_observable = r.gramian_observable ? 1 : 0;
        out->gramian_ode_observable = r.gramian_ode.positive_definite ? 1 : 0;
        out->consistent = r.consistent ? 1 : 0;
        out->routes_agree = r.routes_agree ? 1 : 0;
        out->horizon = report->horizon;
        out->route_discrepancy = r.route_discrepancy;
        out->gramian_condition = r.gramian_condition;
        out->gramian_min_pivot = r.gramian.min_pivot_or_eig;
        out->gramian_ode_min_pivot = r.gramian_ode.min_pivot_or_eig;
        return OKIT_OK;
    });
}

okit_status okit_report_observability_matrix(const okit_report* report, double* out, size_t capacity, size_t* rows,
                                             size_t* cols) {
    return guarded([&] {
        if (report == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_report_observability_matrix: NULL report");
        const auto& m = report->report.observability_matrix;
        if (rows != nullptr) *rows = m.rows();
        if (cols != nullptr) *cols = m.cols();
        if (out == nullptr && capacity == 0) return OKIT_OK;  // shape query
        return copy_out(m.entries(), out, capacity, "okit_report_observability_matrix");
    });
}

okit_status okit_report_gramian(const okit_report* report, int which, double* out, size_t capacity) {
    return guarded([&] {
        if (report == nullptr) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_report_gramian: NULL report");
        if (which != 0 && which != 1) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_report_gramian: which must be 0 or 1");
        const auto& g = which == 0 ? report->report.gramian : report->report.gramian_ode;
        return copy_out(g.gramian.entries(), out, capacity, "okit_report_gramian");
    });
}

okit_status okit_reconstruct(const okit_model* model, const okit_trace* output, const okit_trace* input,
                             double horizon, double pd_tol, double* x0_out, size_t n, double* condition_out,
                             double* horizon_out) {
    return guarded([&] {
        if (model == nullptr || output == nullptr) {
            return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_reconstruct: NULL model or output trace");
        }
        if (!(pd_tol > 0.0)) return fail(OKIT_ERR_INVALID_ARGUMENT, "okit_reconstruct: pd_tol must be positive");
        const std::optional<double> h = horizon > 0.0 ? std::optional<double>(horizon) : std::nullopt;
        const auto r = observkit::reconstruct_initial_state(model->model, output->trace,
                                                            input != nullptr ? &input->trace : nullptr, h, pd_tol);
        if (condition_out != nullptr) *condition_out = r.gramian_condition;
        if (horizon_out != nullptr) *horizon_out = r.horizon;
        return copy_out(r.x0, x0_out, n, "okit_reconstruct");
    });
}

}  // extern "C"
