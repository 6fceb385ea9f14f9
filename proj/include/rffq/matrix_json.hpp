// Copyright 2026 The rffq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Matrix interchange format:
//
//   {"rows": R, "cols": C, "data": [[re, im], ...]}   (row-major, R*C pairs)

#pragma once

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rffq/error.hpp"
#include "rffq/linalg.hpp"

namespace rffq {

using Json = nlohmann::json;

inline Json matrix_to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      data.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rows") || !j.contains("cols") ||
      !j.contains("data")) {
    throw ValidationError("matrix JSON needs \"rows\", \"cols\" and \"data\"");
  }
  if (!j.at("rows").is_number_integer() || !j.at("cols").is_number_integer()) {
    throw ValidationError("matrix JSON: rows/cols must be integers");
  }
  const long long rows = j.at("rows").get<long long>();
  const long long cols = j.at("cols").get<long long>();
  if (rows <= 0 || cols <= 0) {
    throw ValidationError("matrix JSON: rows and cols must be positive");
  }
  check_dimension(static_cast<std::size_t>(std::max(rows, cols)));
  const Json& data = j.at("data");
  if (!data.is_array() || static_cast<long long>(data.size()) != rows * cols) {
    std::ostringstream os;
    os << "matrix JSON: data must hold rows*cols = " << rows * cols
       << " [re, im] pairs";
    throw ValidationError(os.str());
  }
  CMatrix m(rows, cols);
  for (long long i = 0; i < rows * cols; ++i) {
    const Json& e = data[static_cast<std::size_t>(i)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
        !e[1].is_number()) {
      std::ostringstream os;
      os << "matrix JSON: entry " << i << " is not a [re, im] pair";
      throw ValidationError(os.str());
    }
    const double re = e[0].get<double>();
    const double im = e[1].get<double>();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw ValidationError("matrix JSON: non-finite entry");
    }
    m(i / cols, i % cols) = Complex(re, im);
  }
  return m;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

inline CMatrix read_matrix_file(const std::string& path) {
  return matrix_from_json(read_json_file(path));
}

/// Accepts either a bare array of matrices or {"elements": [...]}.
inline std::vector<CMatrix> matrices_from_json(const Json& j) {
  const Json& arr = j.is_object() && j.contains("elements") ? j.at("elements") : j;
  if (!arr.is_array()) throw ValidationError("expected an array of matrices");
  std::vector<CMatrix> out;
  out.reserve(arr.size());
  for (const Json& e : arr) out.push_back(matrix_from_json(e));
  return out;
}

}  // namespace rffq
