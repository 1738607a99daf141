#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "shiftlab/beurling.hpp"
#include "shiftlab/linalg.hpp"
#include "shiftlab/subspace.hpp"
#include "shiftlab/weights.hpp"

namespace shiftlab {

/// One omega(n) per line, line number = n.  The first value must be
/// 1.0 +- 1e-9; trailing empty lines are ignored.
WeightSequence read_weight_file(const std::string& path);
WeightSequence parse_weight_text(const std::string& text);

/// Preset name, "poly:p" for omega(n) = (n+1)^p (n <= 2^20), otherwise a
/// weight file path.
WeightSequence resolve_weight(const std::string& spec);

/// "a+bi", "a-bi", "bi", "-bi", "i", "a".  No spaces.
Complex parse_complex(const std::string& text);
/// Comma separated complex numbers.
std::vector<Complex> parse_complex_list(const std::string& text);
std::vector<double> parse_real_list(const std::string& text);

/// Row-major CSV whose cells are quoted "re,im" pairs.
std::string matrix_to_csv(const CMatrix& m);
CMatrix matrix_from_csv(const std::string& text);

void write_window_csv(const std::string& path, const CMatrix& window);
CMatrix read_window_csv(const std::string& path);
/// Basis vectors are the columns.
void write_basis_csv(const std::string& path, const SubspaceBasis& basis);
SubspaceBasis read_basis_csv(const std::string& path);

/// Series as an array of [re, im] pairs, lowest degree first.
nlohmann::json series_to_json(const CoefficientSeries& f);
CoefficientSeries series_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);

}  // namespace shiftlab
