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

// Collective-noise channel: every constituent sees the same unknown
// rotation u, so the register evolves by u^{(x) n}. Encoded states should
// come through untouched; a bare qubit should not.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rffq/encoder.hpp"
#include "rffq/linalg.hpp"
#include "rffq/matrix_json.hpp"
#include "rffq/random.hpp"
#include "rffq/spinsys.hpp"

namespace rffq {

struct NoiseModel {
  enum class Kind { haar, fixed_axis_angle, z_dephasing };

  Kind kind = Kind::haar;
  Axis3 axis{0.0, 0.0, 1.0};  // fixed_axis_angle
  double angle = 0.0;         // fixed_axis_angle, radians
  double width = 0.0;         // z_dephasing: standard deviation of the angle

  static NoiseModel haar() { return {}; }
  static NoiseModel fixed(const Axis3& axis, double angle) {
    check_unit_axis(axis);
    return {Kind::fixed_axis_angle, axis, angle, 0.0};
  }
  static NoiseModel z_dephasing(double width) {
    if (!(width >= 0.0)) throw ContractError("z-dephasing width must be >= 0");
    return {Kind::z_dephasing, {0.0, 0.0, 1.0}, 0.0, width};
  }

  /// One single-qubit unitary per trial.
  CMatrix draw(Rng& rng) const {
    switch (kind) {
      case Kind::haar:
        return haar_su2(rng);
      case Kind::fixed_axis_angle:
        return single_qubit_rotation(axis, angle);
      case Kind::z_dephasing: {
        std::normal_distribution<double> normal(0.0, width);
        return single_qubit_rotation({0.0, 0.0, 1.0}, width > 0.0 ? normal(rng) : 0.0);
      }
    }
    throw ContractError("unknown noise model");
  }
};

inline const char* to_string(NoiseModel::Kind k) {
  switch (k) {
    case NoiseModel::Kind::haar:
      return "haar";
    case NoiseModel::Kind::fixed_axis_angle:
      return "fixed";
    case NoiseModel::Kind::z_dephasing:
      return "z-dephasing";
  }
  return "?";
}

struct ChannelConfig {
  int n = 3;
  int trials = 1;
  std::uint64_t seed = 0;
  NoiseModel noise;
};

struct TrialRecord {
  double fidelity = 0.0;
  double trace_distance = 0.0;
  std::optional<double> bare_fidelity;  // only for d = 2
  double leakage = 0.0;
};

struct SeriesStats {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double stderr_ = 0.0;  // standard error of the mean

  static SeriesStats of(const std::vector<double>& xs) {
    SeriesStats s;
    if (xs.empty()) return s;
    s.min = *std::min_element(xs.begin(), xs.end());
    s.max = *std::max_element(xs.begin(), xs.end());
    double sum = 0.0;
    for (double x : xs) sum += x;
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
      double ss = 0.0;
      for (double x : xs) ss += (x - s.mean) * (x - s.mean);
      const double var = ss / static_cast<double>(xs.size() - 1);
      s.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
    }
    return s;
  }
};

struct ChannelReport {
  ChannelConfig config;
  CMatrix input;  // logical rho
  std::vector<TrialRecord> trials;
  SeriesStats fidelity;
  SeriesStats trace_distance;
  std::optional<SeriesStats> bare_fidelity;
  SeriesStats leakage;
  std::string bare_note;
};

/// Runs the channel with a prebuilt operator set (n = qs.n()).
inline ChannelReport run_channel(const ChannelConfig& cfg, const QOperatorSet& qs,
                                 const QuditState& rho) {
  if (cfg.trials < 1) throw ContractError("channel: trials must be >= 1");
  if (cfg.n != qs.n()) throw ContractError("channel: config n differs from operator set");
  if (rho.d() != qs.d()) {
    std::ostringstream os;
    os << "channel: state has d = " << rho.d() << " but n = " << cfg.n
       << " carries d = " << qs.d();
    throw ContractError(os.str());
  }
  ChannelReport report;
  report.config = cfg;
  report.input = rho.rho();
  const EncodedOperator enc = encode_state(qs, rho);
  const bool bare = rho.d() == 2;
  report.bare_note = bare ? "single physical qubit carrying rho"
                          : "omitted: no single-qubit carrier for d > 2";

  std::vector<double> fid, td, bare_fid, leak;
  report.trials.reserve(static_cast<std::size_t>(cfg.trials));
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng = derived_rng(cfg.seed, static_cast<std::uint64_t>(t));
    const CMatrix u = cfg.noise.draw(rng);
    const CMatrix r = kron_power(u, cfg.n);
    const CMatrix rotated = r * enc.payload * r.adjoint();

    TrialRecord rec;
    rec.leakage = leakage(qs, rotated);
    CMatrix out = decode_operator(qs, rotated);
    out /= out.trace();
    out = 0.5 * (out + out.adjoint()).eval();
    rec.fidelity = uhlmann_fidelity(rho.rho(), out);
    rec.trace_distance = trace_distance(rho.rho(), out);
    if (bare) {
      const CMatrix moved = u * rho.rho() * u.adjoint();
      rec.bare_fidelity = uhlmann_fidelity(rho.rho(), 0.5 * (moved + moved.adjoint()));
      bare_fid.push_back(*rec.bare_fidelity);
    }
    fid.push_back(rec.fidelity);
    td.push_back(rec.trace_distance);
    leak.push_back(rec.leakage);
    report.trials.push_back(rec);
  }
  report.fidelity = SeriesStats::of(fid);
  report.trace_distance = SeriesStats::of(td);
  report.leakage = SeriesStats::of(leak);
  if (bare) report.bare_fidelity = SeriesStats::of(bare_fid);
  return report;
}

/// Builds the default Fourier operator set for cfg.n and runs the channel.
inline ChannelReport run_channel(const ChannelConfig& cfg, const QuditState& rho) {
  const QOperatorSet qs = build_q_set(build_coupled_basis(SpinRegister(cfg.n)));
  return run_channel(cfg, qs, rho);
}

inline Json stats_to_json(const SeriesStats& s) {
  return Json{{"mean", s.mean}, {"min", s.min}, {"max", s.max}, {"stderr", s.stderr_}};
}

inline Json channel_report_to_json(const ChannelReport& r) {
  Json noise{{"kind", to_string(r.config.noise.kind)}};
  if (r.config.noise.kind == NoiseModel::Kind::fixed_axis_angle) {
    noise["axis"] = r.config.noise.axis;
    noise["angle"] = r.config.noise.angle;
  } else if (r.config.noise.kind == NoiseModel::Kind::z_dephasing) {
    noise["width"] = r.config.noise.width;
  }
  Json config{{"n", r.config.n},
              {"d", r.config.n - 1},
              {"trials", r.config.trials},
              {"seed", r.config.seed},
              {"noise", noise},
              {"state", matrix_to_json(r.input)}};
  Json per_trial = Json::array();
  for (const TrialRecord& t : r.trials) {
    Json row{{"fidelity", t.fidelity},
             {"trace_distance", t.trace_distance},
             {"leakage", t.leakage}};
    if (t.bare_fidelity) row["bare_fidelity"] = *t.bare_fidelity;
    per_trial.push_back(std::move(row));
  }
  Json out{{"config", config},
           {"per_trial", per_trial},
           {"aggregate", stats_to_json(r.fidelity)},
           {"trace_distance_aggregate", stats_to_json(r.trace_distance)},
           {"leakage_aggregate", stats_to_json(r.leakage)},
           {"bare_comparison", r.bare_note}};
  out["bare_aggregate"] = r.bare_fidelity ? stats_to_json(*r.bare_fidelity) : Json(nullptr);
  return out;
}

/// RFC 4180 table, one row per trial.
inline std::string channel_report_to_csv(const ChannelReport& r) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "trial,fidelity,trace_distance,bare_fidelity,leakage\r\n";
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    const TrialRecord& t = r.trials[i];
    os << i << ',' << t.fidelity << ',' << t.trace_distance << ',';
    if (t.bare_fidelity) os << *t.bare_fidelity;
    os << ',' << t.leakage << "\r\n";
  }
  return os.str();
}

/// p[j][k] = Tr(state_j element_k).
inline std::vector<std::vector<double>> probability_table(
    const std::vector<CMatrix>& states, const std::vector<CMatrix>& elements) {
  std::vector<std::vector<double>> p(states.size(), std::vector<double>(elements.size()));
  for (std::size_t j = 0; j < states.size(); ++j) {
    for (std::size_t k = 0; k < elements.size(); ++k) {
      p[j][k] = (states[j].transpose().cwiseProduct(elements[k])).sum().real();
    }
  }
  return p;
}

struct BornRuleReport {
  int trials = 0;
  int pairs_checked = 0;
  double max_encoded_deviation = 0.0;  // |Tr(rho' Pi') - Tr(rho Pi)|
  double max_rotated_deviation = 0.0;  // same with rho' -> R rho' R^dagger
};

/// Random (rho, POVM) pairs: outcome probabilities of the encoded pair,
/// with and without a Haar collective rotation of the encoded state, against
/// the logical Born rule.
inline BornRuleReport born_rule_harness(const QOperatorSet& qs, int trials,
                                        std::uint64_t seed) {
  BornRuleReport rep;
  rep.trials = trials;
  const int d = qs.d();
  for (int t = 0; t < trials; ++t) {
    Rng rng = derived_rng(seed, static_cast<std::uint64_t>(t));
    const QuditState rho = random_density(d, rng);
    std::uniform_int_distribution<int> outcomes(2, 2 * d);
    const QuditPovm povm = random_povm(d, outcomes(rng), rng);
    const EncodedOperator enc = encode_state(qs, rho);
    const std::vector<EncodedOperator> enc_povm = encode_povm(qs, povm);
    const CMatrix r = kron_power(haar_su2(rng), qs.n());
    const CMatrix rotated = r * enc.payload * r.adjoint();
    for (std::size_t k = 0; k < povm.size(); ++k) {
      const double logical = (rho.rho() * povm[k]).trace().real();
      const double encoded =
          (enc.payload.transpose().cwiseProduct(enc_povm[k].payload)).sum().real();
      const double moved =
          (rotated.transpose().cwiseProduct(enc_povm[k].payload)).sum().real();
      rep.max_encoded_deviation = std::max(rep.max_encoded_deviation, std::abs(encoded - logical));
      rep.max_rotated_deviation = std::max(rep.max_rotated_deviation, std::abs(moved - logical));
    }
    ++rep.pairs_checked;
  }
  return rep;
}

}  // namespace rffq
