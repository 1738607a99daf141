#include "shiftlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "shiftlab/errors.hpp"

namespace shiftlab {

using nlohmann::json;

namespace {

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_csv_double(double x) {
    return std::isfinite(x) ? format_double(x) : "nan";
}

void dump_into(const json& v, std::string& out) {
    switch (v.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            // object_t is a std::map, so iteration is already in key order
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_into(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ',';
                dump_into(v[i], out);
            }
            out += ']';
            break;
        }
        case json::value_t::number_float:
            out += format_double(v.get<double>());
            break;
        default:
            out += v.dump();
    }
}

}  // namespace

std::string canonical_dump(const json& value) {
    std::string out;
    dump_into(value, out);
    out += '\n';
    return out;
}

json report_document(const ExperimentReport& report) {
    json steps = json::array();
    for (const auto& s : report.per_step) steps.push_back({{"epsilon", s.epsilon}, {"metrics", s.metrics}});
    return {{"schema", report_schema},
            {"experiment", report.experiment},
            {"inputs", report.inputs},
            {"per_step", steps},
            {"fitted_slope", report.fitted_slope},
            {"verdict", to_string(report.verdict)},
            {"summary", report.summary}};
}

std::string steps_csv(const ExperimentReport& report) {
    std::set<std::string> names;
    for (const auto& s : report.per_step)
        for (const auto& [k, v] : s.metrics) names.insert(k);
    std::string out = "epsilon";
    for (const auto& n : names) out += "," + n;
    out += '\n';
    for (const auto& s : report.per_step) {
        out += format_csv_double(s.epsilon);
        for (const auto& n : names) {
            const auto it = s.metrics.find(n);
            out += ',';
            out += it == s.metrics.end() ? "nan" : format_csv_double(it->second);
        }
        out += '\n';
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw Error("failed writing '" + path + "'");
}

}  // namespace shiftlab
