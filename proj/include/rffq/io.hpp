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

// JSON / CSV views of census tables, coupled bases and encoded operators.
// Labels are exact fractions: "lambda=1", "m2=-1/2".

#pragma once

#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rffq/coupling.hpp"
#include "rffq/encoder.hpp"
#include "rffq/matrix_json.hpp"

namespace rffq {

inline std::string lambda_key(int lambda) { return "lambda=" + std::to_string(lambda); }
inline std::string m2_key(int two_m2) { return "m2=" + half_integer_label(two_m2); }

/// Quotes a CSV field when it contains a separator, quote or line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string csv_number(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

struct CensusRow {
  SectorSpec sector;
  long long counted = 0;  // multiplicity seen by J^2 diagonalization
};

struct CensusTable {
  int n = 0;
  std::vector<CensusRow> rows;
  long long total_dimension = 0;
  bool agreement = false;
};

/// Formula multiplicities next to J^2-diagonalization counts. Unlike
/// sector_census this reports a disagreement instead of throwing.
inline CensusTable census_table(const SpinRegister& reg) {
  CensusTable t;
  t.n = reg.n();
  const std::map<int, long long> counted = j_squared_multiplicities(reg);
  t.agreement = true;
  for (int two_j = t.n; two_j >= 0; two_j -= 2) {
    CensusRow row{{t.n, two_j, multiplicity(t.n, two_j), two_j + 1}, 0};
    const auto it = counted.find(two_j);
    if (it != counted.end()) row.counted = it->second / row.sector.dimension;
    if (it == counted.end() || it->second != row.sector.multiplicity * row.sector.dimension) {
      t.agreement = false;
    }
    t.total_dimension += row.sector.multiplicity * row.sector.dimension;
    t.rows.push_back(row);
  }
  if (counted.size() != t.rows.size() || t.total_dimension != (1LL << t.n)) {
    t.agreement = false;
  }
  return t;
}

inline Json sector_to_json(const SectorSpec& s) {
  return Json{{"n", s.n},
              {"j", s.j_label()},
              {"multiplicity", s.multiplicity},
              {"dimension", s.dimension}};
}

inline Json census_to_json(const CensusTable& t) {
  Json rows = Json::array();
  for (const CensusRow& r : t.rows) {
    Json row = sector_to_json(r.sector);
    row["diagonalization_multiplicity"] = r.counted;
    rows.push_back(std::move(row));
  }
  return Json{{"n", t.n},
              {"sectors", rows},
              {"total_dimension", t.total_dimension},
              {"agreement", t.agreement}};
}

inline std::string census_to_csv(const CensusTable& t) {
  std::ostringstream os;
  os << "n,j,multiplicity,dimension,diagonalization_multiplicity,agreement\r\n";
  for (const CensusRow& r : t.rows) {
    os << t.n << ',' << csv_field(r.sector.j_label()) << ',' << r.sector.multiplicity
       << ',' << r.sector.dimension << ',' << r.counted << ','
       << (r.counted == r.sector.multiplicity ? "true" : "false") << "\r\n";
  }
  return os.str();
}

inline Json vector_to_json(const CVector& v) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    data.push_back(Json::array({v(i).real(), v(i).imag()}));
  }
  return data;
}

/// {"lambda=1": {"m2=1/2": [[re, im], ...], ...}, ...}
inline Json basis_to_json(const CoupledBasis& b) {
  Json kets = Json::object();
  for (int lambda = 1; lambda <= b.d(); ++lambda) {
    Json per = Json::object();
    for (int k = 0; k < b.m2_count(); ++k) {
      per[m2_key(b.two_m2_at(k))] = vector_to_json(b.ket(b.two_m2_at(k), lambda));
    }
    kets[lambda_key(lambda)] = std::move(per);
  }
  return Json{{"n", b.n()},
              {"d", b.d()},
              {"j2", half_integer_label(b.two_j2())},
              {"coupling", b.coupling().fingerprint()},
              {"orthonormality_residual", b.gram_residual()},
              {"kets", kets}};
}

/// Long format: one row per nonzero amplitude.
inline std::string basis_to_csv(const CoupledBasis& b) {
  std::ostringstream os;
  os << "lambda,m2,index,bits,re,im\r\n";
  for (int lambda = 1; lambda <= b.d(); ++lambda) {
    for (int k = 0; k < b.m2_count(); ++k) {
      const CVector v = b.ket(b.two_m2_at(k), lambda);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) == 0.0) continue;
        std::string bits;
        for (int s = b.n() - 1; s >= 0; --s) bits += ((i >> s) & 1) ? '1' : '0';
        os << lambda << ',' << csv_field(half_integer_label(b.two_m2_at(k))) << ',' << i
           << ',' << bits << ',' << csv_number(v(i).real()) << ','
           << csv_number(v(i).imag()) << "\r\n";
      }
    }
  }
  return os.str();
}

inline Json encoded_to_json(const EncodedOperator& e) {
  return Json{{"n", e.n},
              {"d", e.d()},
              {"coupling", e.coupling},
              {"kind", to_string(e.kind)},
              {"payload", matrix_to_json(e.payload)}};
}

}  // namespace rffq
