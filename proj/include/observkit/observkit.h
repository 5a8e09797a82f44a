/*
 * observkit C API.
 *
 * Every function returns an okit_status. On failure a human-readable message
 * is available from okit_last_error() on the calling thread until the next
 * API call on that thread. Objects are opaque handles released with their
 * matching *_free function; passing NULL to a *_free function is a no-op.
 *
 * Matrices cross the boundary as row-major double arrays.
 */
#ifndef OBSERVKIT_OBSERVKIT_H
#define OBSERVKIT_OBSERVKIT_H

#include <stddef.h>

#if defined(_WIN32)
#  if defined(OBSERVKIT_BUILDING)
#    define OKIT_API __declspec(dllexport)
#  else
#    define OKIT_API __declspec(dllimport)
#  endif
#else
#  define OKIT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum okit_status {
    OKIT_OK = 0,
    OKIT_ERR_INVALID_ARGUMENT = 1,
    OKIT_ERR_DIMENSION = 2,
    OKIT_ERR_SINGULAR = 3,     /* also: system unobservable at the horizon */
    OKIT_ERR_BUFFER_TOO_SMALL = 4,
    OKIT_ERR_INTERNAL = 5
} okit_status;

typedef struct okit_model okit_model;
typedef struct okit_trace okit_trace;
typedef struct okit_report okit_report;

typedef struct okit_options {
    double rank_tol;        /* <= 0 selects machine epsilon x max dimension */
    double pd_tol;          /* definiteness pivot tolerance, relative to max diagonal */
    size_t intervals;       /* Simpson intervals for the Gramian (even, >= 2) */
    size_t ode_steps;       /* RK4 steps for the Lyapunov-ODE Gramian */
    double route_tol;       /* relative Frobenius agreement between the two Gramians */
} okit_options;

OKIT_API const char* okit_last_error(void);
OKIT_API const char* okit_status_string(okit_status status);
OKIT_API okit_options okit_default_options(void);

/* ---- models ------------------------------------------------------------- */

/* a: n*n, b: n*p, c: q*n, all row-major. */
OKIT_API okit_status okit_model_create(const double* a, size_t n, const double* b, size_t p, const double* c,
                                       size_t q, okit_model** out);
OKIT_API okit_status okit_cardio_model(double mass, double damping, double stiffness, okit_model** out);
OKIT_API void okit_model_free(okit_model* model);
OKIT_API okit_status okit_model_dims(const okit_model* model, size_t* n, size_t* p, size_t* q);
/* Copy A, B or C into out (capacity in doubles). */
OKIT_API okit_status okit_model_a(const okit_model* model, double* out, size_t capacity);
OKIT_API okit_status okit_model_b(const okit_model* model, double* out, size_t capacity);
OKIT_API okit_status okit_model_c(const okit_model* model, double* out, size_t capacity);

/* Phi(t) = e^{At}, n*n row-major. */
OKIT_API okit_status okit_transition_matrix(const okit_model* model, double t, double* out, size_t capacity);

/* ---- traces ------------------------------------------------------------- */

/* samples: count rows of width values each. */
OKIT_API okit_status okit_trace_create(double t0, double dt, size_t width, const double* samples, size_t count,
                                       okit_trace** out);
OKIT_API void okit_trace_free(okit_trace* trace);
OKIT_API okit_status okit_trace_info(const okit_trace* trace, double* t0, double* dt, size_t* width, size_t* count);
OKIT_API okit_status okit_trace_samples(const okit_trace* trace, double* out, size_t capacity);

/* ---- simulation ----------------------------------------------------------- */

/* Free response when input is NULL (t0, dt, steps define the grid); otherwise
 * the zero-order-hold forced response on the input's grid (t0, dt, steps are
 * ignored). */
OKIT_API okit_status okit_simulate(const okit_model* model, const double* x0, size_t n, const okit_trace* input,
                                   double t0, double dt, size_t steps, okit_trace** x_out, okit_trace** y_out);

/* ---- observability ------------------------------------------------------ */

OKIT_API okit_status okit_analyze(const okit_model* model, double horizon, const okit_options* options,
                                  okit_report** out);
OKIT_API void okit_report_free(okit_report* report);

typedef struct okit_report_summary {
    size_t kalman_rank;
    size_t rank_required;
    int kalman_observable;
    int gramian_observable;
    int gramian_ode_observable;
    int consistent;
    int routes_agree;
    double horizon;
    double route_discrepancy;
    double gramian_condition;
    double gramian_min_pivot;
    double gramian_ode_min_pivot;
} okit_report_summary;

OKIT_API okit_status okit_report_get_summary(const okit_report* report, okit_report_summary* out);
/* n*(n*q) Kalman observability matrix. */
OKIT_API okit_status okit_report_observability_matrix(const okit_report* report, double* out, size_t capacity,
                                                      size_t* rows, size_t* cols);
/* which: 0 = quadrature route, 1 = Lyapunov-ODE route; n*n. */
OKIT_API okit_status okit_report_gramian(const okit_report* report, int which, double* out, size_t capacity);

/* input may be NULL. horizon <= 0 uses the whole output trace. x0_out receives
 * n values; condition_out (may be NULL) receives the Gramian condition number.
 * Returns OKIT_ERR_SINGULAR when the system is unobservable at the horizon. */
OKIT_API okit_status okit_reconstruct(const okit_model* model, const okit_trace* output, const okit_trace* input,
                                      double horizon, double pd_tol, double* x0_out, size_t n,
                                      double* condition_out, double* horizon_out);

#ifdef __cplusplus
}
#endif

#endif /* OBSERVKIT_OBSERVKIT_H */
