#include "cli/files.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace observkit::cli {

namespace {

using nlohmann::json;

struct DenseBlock {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;
};

DenseBlock read_matrix(const json& doc, const char* key, const std::string& source) {
    const std::string where = source + ": field '" + key + "'";
    if (!doc.contains(key)) throw ParseError(where + " is missing");
    const json& rows = doc.at(key);
    if (!rows.is_array() || rows.empty()) throw ParseError(where + " must be a non-empty array of rows");

    DenseBlock m;
    m.rows = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const json& row = rows[i];
        if (!row.is_array()) throw ParseError(where + " row " + std::to_string(i + 1) + " is not an array");
        if (i == 0) {
            m.cols = row.size();
            if (m.cols == 0) throw ParseError(where + " row 1 is empty");
        } else if (row.size() != m.cols) {
            throw ParseError(where + " row " + std::to_string(i + 1) + " has " + std::to_string(row.size()) +
                             " entries, expected " + std::to_string(m.cols) + " (ragged array)");
        }
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (!row[j].is_number() || !std::isfinite(row[j].get<double>())) {
                throw ParseError(where + " row " + std::to_string(i + 1) + " column " + std::to_string(j + 1) +
                                 ": not a finite number");
            }
            m.data.push_back(row[j].get<double>());
        }
    }
    return m;
}

json matrix_json(const std::vector<double>& data, std::size_t rows, std::size_t cols) {
    json out = json::array();
    for (std::size_t i = 0; i < rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < cols; ++j) row.push_back(data[i * cols + j]);
        out.push_back(std::move(row));
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_number(const std::string& field, const std::string& where) {
    if (field.empty()) throw ParseError(where + ": missing value");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ParseError(where + ": '" + field + "' is not a finite number");
    }
    return v;
}

}  // namespace

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ModelFile parse_model(const std::string& text, const std::string& source) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(source + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(source + ": model document must be an object");

    ModelFile m;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ParseError(source + ": field 'name' must be a string");
        m.name = doc["name"].get<std::string>();
    }
    const DenseBlock a = read_matrix(doc, "a", source);
    const DenseBlock b = read_matrix(doc, "b", source);
    const DenseBlock c = read_matrix(doc, "c", source);
    if (a.rows != a.cols) {
        throw ParseError(source + ": field 'a' must be square, got " + std::to_string(a.rows) + "x" +
                         std::to_string(a.cols));
    }
    if (b.rows != a.rows) {
        throw ParseError(source + ": field 'b' must have " + std::to_string(a.rows) + " rows, got " +
                         std::to_string(b.rows));
    }
    if (c.cols != a.rows) {
        throw ParseError(source + ": field 'c' must have " + std::to_string(a.rows) + " columns, got " +
                         std::to_string(c.cols));
    }
    m.n = a.rows;
    m.p = b.cols;
    m.q = c.rows;
    m.a = a.data;
    m.b = b.data;
    m.c = c.data;
    return m;
}

ModelFile read_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open model file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), path);
}

std::string model_to_json(const ModelFile& model, int indent) {
    json doc = json::object();
    if (!model.name.empty()) doc["name"] = model.name;
    doc["a"] = matrix_json(model.a, model.n, model.n);
    doc["b"] = matrix_json(model.b, model.n, model.p);
    doc["c"] = matrix_json(model.c, model.q, model.n);
    return doc.dump(indent);
}

ModelFile model_from_handle(const okit_model* handle, std::string name) {
    ModelFile m;
    m.name = std::move(name);
    check(okit_model_dims(handle, &m.n, &m.p, &m.q), "model dimensions");
    m.a.resize(m.n * m.n);
    m.b.resize(m.n * m.p);
    m.c.resize(m.q * m.n);
    check(okit_model_a(handle, m.a.data(), m.a.size()), "model A");
    check(okit_model_b(handle, m.b.data(), m.b.size()), "model B");
    check(okit_model_c(handle, m.c.data(), m.c.size()), "model C");
    return m;
}

ModelHandle to_handle(const ModelFile& model) {
    okit_model* raw = nullptr;
    check(okit_model_create(model.a.data(), model.n, model.b.data(), model.p, model.c.data(), model.q, &raw),
          "model");
    return ModelHandle(raw);
}

TraceFile parse_trace(std::istream& in, const std::string& source) {
    TraceFile trace;
    std::vector<double> times;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    std::size_t fields_expected = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        const std::string where = source + ":" + std::to_string(line_no);
        if (!have_header) {
            if (fields.size() < 2 || fields[0] != "t") {
                throw ParseError(where + ": header must read 't,<v1>,...,<vw>'");
            }
            trace.columns.assign(fields.begin() + 1, fields.end());
            trace.width = trace.columns.size();
            fields_expected = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != fields_expected) {
            throw ParseError(where + ": expected " + std::to_string(fields_expected) + " fields, got " +
                             std::to_string(fields.size()));
        }
        times.push_back(parse_number(fields[0], where + " field 1 (t)"));
        for (std::size_t j = 1; j < fields.size(); ++j) {
            trace.values.push_back(parse_number(fields[j], where + " field " + std::to_string(j + 1)));
        }
    }
    if (!have_header) throw ParseError(source + ": empty trace file");
    if (times.size() < 2) throw ParseError(source + ": trace needs at least two samples");

    trace.t0 = times.front();
    trace.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (!(trace.dt > 0.0)) throw ParseError(source + ": t column must be strictly increasing");
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double expected = trace.t0 + static_cast<double>(k) * trace.dt;
        const double scale = std::max(trace.dt, std::abs(times[k]));
        if (std::abs(times[k] - expected) > kTraceSpacingTol * scale ||
            (k > 0 && !(times[k] > times[k - 1]))) {
            throw ParseError(source + ": sample " + std::to_string(k + 1) + " at t = " + format_number(times[k]) +
                             " breaks uniform spacing (dt = " + format_number(trace.dt) + ")");
        }
    }
    return trace;
}

TraceFile read_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open trace file");
    return parse_trace(in, path);
}

void write_trace(std::ostream& out, const TraceFile& trace) {
    out << "t";
    for (const auto& c : trace.columns) out << ',' << c;
    out << '\n';
    for (std::size_t k = 0; k < trace.size(); ++k) {
        out << format_number(trace.t0 + static_cast<double>(k) * trace.dt);
        for (std::size_t j = 0; j < trace.width; ++j) out << ',' << format_number(trace.values[k * trace.width + j]);
        out << '\n';
    }
}

void write_trace(const std::string& path, const TraceFile& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError(path + ": cannot open for writing");
    write_trace(out, trace);
    if (!out) throw ParseError(path + ": write failed");
}

TraceFile trace_from_handle(const okit_trace* handle, const std::string& prefix) {
    TraceFile t;
    std::size_t count = 0;
    check(okit_trace_info(handle, &t.t0, &t.dt, &t.width, &count), "trace info");
    t.values.resize(count * t.width);
    if (!t.values.empty()) check(okit_trace_samples(handle, t.values.data(), t.values.size()), "trace samples");
    for (std::size_t j = 0; j < t.width; ++j) t.columns.push_back(prefix + std::to_string(j + 1));
    return t;
}

TraceHandle to_handle(const TraceFile& trace) {
    okit_trace* raw = nullptr;
    check(okit_trace_create(trace.t0, trace.dt, trace.width, trace.values.data(), trace.size(), &raw), "trace");
    return TraceHandle(raw);
}

}  // namespace observkit::cli
