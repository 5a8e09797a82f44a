#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cli/handles.hpp"

namespace observkit::cli {

/// Malformed model or trace file. The message names the file and the line or field.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Model document: {"name": ..., "a": [[...]], "b": [[...]], "c": [[...]]}
struct ModelFile {
    std::string name;
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t q = 0;
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
};

ModelFile parse_model(const std::string& text, const std::string& source = "<model>");
ModelFile read_model(const std::string& path);
std::string model_to_json(const ModelFile& model, int indent = 2);
ModelFile model_from_handle(const okit_model* handle, std::string name = {});
ModelHandle to_handle(const ModelFile& model);

/// Delimited trace: header "t,v1,...,vw" then one row per uniformly spaced sample.
struct TraceFile {
    std::vector<std::string> columns;  ///< value column names, without "t"
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t width = 0;
    std::vector<double> values;  ///< row-major samples

    [[nodiscard]] std::size_t size() const noexcept { return width == 0 ? 0 : values.size() / width; }
};

inline constexpr double kTraceSpacingTol = 1e-9;

TraceFile parse_trace(std::istream& in, const std::string& source = "<trace>");
TraceFile read_trace(const std::string& path);
void write_trace(std::ostream& out, const TraceFile& trace);
void write_trace(const std::string& path, const TraceFile& trace);
TraceFile trace_from_handle(const okit_trace* handle, const std::string& prefix);
TraceHandle to_handle(const TraceFile& trace);

/// %.17g
std::string format_number(double v);

}  // namespace observkit::cli
