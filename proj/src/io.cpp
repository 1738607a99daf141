#include "shiftlab/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "shiftlab/errors.hpp"

namespace shiftlab {

using nlohmann::json;

namespace {

double parse_real(std::string_view s, const std::string& context) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x))
        throw InvalidArgument("cannot parse '" + std::string(s) + "' as a number in '" + context + "'");
    return x;
}

std::string replace_unicode_minus(std::string s) {
    const std::string minus = "\xE2\x88\x92";
    for (std::size_t pos; (pos = s.find(minus)) != std::string::npos;) s.replace(pos, minus.size(), "-");
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

WeightSequence parse_weight_text(const std::string& text) {
    std::vector<std::string> lines = split(text, '\n');
    for (auto& l : lines)
        if (!l.empty() && l.back() == '\r') l.pop_back();
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw InvalidArgument("weight file is empty");
    std::vector<double> omega;
    omega.reserve(lines.size());
    for (std::size_t n = 0; n < lines.size(); ++n)
        omega.push_back(parse_real(lines[n], "weight file line " + std::to_string(n + 1)));
    if (std::abs(omega[0] - 1.0) > 1e-9) throw InvalidArgument("weight file must start with omega(0) = 1");
    omega[0] = 1.0;
    return WeightSequence::from_omega(std::move(omega));
}

WeightSequence read_weight_file(const std::string& path) { return parse_weight_text(read_text_file(path)); }

WeightSequence resolve_weight(const std::string& spec) {
    if (spec == "unweighted" || spec == "bergman" || spec == "quasianalytic_sqrt") return WeightSequence::preset(spec);
    if (spec.rfind("poly:", 0) == 0) return WeightSequence::polynomial(parse_real(spec.substr(5), spec), 1u << 20);
    return read_weight_file(spec);
}

Complex parse_complex(const std::string& raw) {
    const std::string s = replace_unicode_minus(raw);
    if (s.empty()) throw InvalidArgument("empty complex number");
    if (s.back() != 'i') return {parse_real(s, raw), 0.0};
    const std::string body = s.substr(0, s.size() - 1);
    std::size_t split_at = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;) {
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split_at = k;
            break;
        }
    }
    const std::string re = split_at == std::string::npos ? "" : body.substr(0, split_at);
    const std::string im = split_at == std::string::npos ? body : body.substr(split_at);
    double imag;
    if (im.empty() || im == "+")
        imag = 1.0;
    else if (im == "-")
        imag = -1.0;
    else
        imag = parse_real(im, raw);
    return {re.empty() ? 0.0 : parse_real(re, raw), imag};
}

std::vector<Complex> parse_complex_list(const std::string& text) {
    std::vector<Complex> out;
    if (text.empty()) return out;
    for (const auto& item : split(text, ',')) out.push_back(parse_complex(item));
    return out;
}

std::vector<double> parse_real_list(const std::string& text) {
    std::vector<double> out;
    if (text.empty()) return out;
    for (const auto& item : split(replace_unicode_minus(text), ',')) out.push_back(parse_real(item, text));
    return out;
}

std::string matrix_to_csv(const CMatrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += '"' + format_double(m(i, j).real()) + ',' + format_double(m(i, j).imag()) + '"';
        }
        out += '\n';
    }
    return out;
}

CMatrix matrix_from_csv(const std::string& text) {
    std::vector<std::vector<Complex>> rows;
    for (auto line : split(text, '\n')) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<Complex> row;
        std::size_t pos = 0;
        while (pos < line.size()) {
            if (line[pos] != '"') throw InvalidArgument("matrix CSV cells must be quoted \"re,im\" pairs");
            const std::size_t close = line.find('"', pos + 1);
            if (close == std::string::npos) throw InvalidArgument("unterminated cell in matrix CSV");
            const auto parts = split(line.substr(pos + 1, close - pos - 1), ',');
            if (parts.size() != 2) throw InvalidArgument("matrix CSV cell must hold exactly re,im");
            row.emplace_back(parse_real(parts[0], line), parse_real(parts[1], line));
            pos = close + 1;
            if (pos < line.size()) {
                if (line[pos] != ',') throw InvalidArgument("expected ',' between matrix CSV cells");
                ++pos;
            }
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InvalidArgument("matrix CSV rows have different lengths");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) return CMatrix(0, 0);
    CMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_window_csv(const std::string& path, const CMatrix& window) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open '" + path + "' for writing");
    f << matrix_to_csv(window);
}

CMatrix read_window_csv(const std::string& path) { return matrix_from_csv(read_text_file(path)); }

void write_basis_csv(const std::string& path, const SubspaceBasis& basis) {
    write_window_csv(path, basis.vectors());
}

SubspaceBasis read_basis_csv(const std::string& path) { return SubspaceBasis(read_window_csv(path)); }

json series_to_json(const CoefficientSeries& f) {
    json out = json::array();
    for (const auto& c : f.coeffs()) out.push_back({c.real(), c.imag()});
    return out;
}

CoefficientSeries series_from_json(const json& j) {
    if (!j.is_array()) throw InvalidArgument("series must be a JSON array of [re, im] pairs");
    std::vector<Complex> c;
    for (const auto& item : j) {
        if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number())
            throw InvalidArgument("series entries must be [re, im] pairs");
        c.emplace_back(item[0].get<double>(), item[1].get<double>());
    }
    return CoefficientSeries(std::move(c));
}

}  // namespace shiftlab
