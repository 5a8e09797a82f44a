#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "observkit/observkit.h"

namespace observkit::cli {

struct ModelDeleter {
    void operator()(okit_model* m) const noexcept { okit_model_free(m); }
};
struct TraceDeleter {
    void operator()(okit_trace* t) const noexcept { okit_trace_free(t); }
};
struct ReportDeleter {
    void operator()(okit_report* r) const noexcept { okit_report_free(r); }
};

using ModelHandle = std::unique_ptr<okit_model, ModelDeleter>;
using TraceHandle = std::unique_ptr<okit_trace, TraceDeleter>;
using ReportHandle = std::unique_ptr<okit_report, ReportDeleter>;

/// A C API call failed; carries the status so commands can map it to an exit code.
class ApiError : public std::runtime_error {
public:
    ApiError(okit_status status, const std::string& message) : std::runtime_error(message), status_(status) {}
    [[nodiscard]] okit_status status() const noexcept { return status_; }

private:
    okit_status status_;
};

inline void check(okit_status status, const char* what) {
    if (status != OKIT_OK) {
        const std::string detail = okit_last_error();
        throw ApiError(status, std::string(what) + ": " + (detail.empty() ? okit_status_string(status) : detail));
    }
}

}  // namespace observkit::cli
