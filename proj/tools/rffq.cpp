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

// rffq command-line frontend.
//
// Exit codes: 0 success, 1 verification / claim failure, 2 usage or
// validation error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rffq/channel.hpp"
#include "rffq/coupling.hpp"
#include "rffq/encoder.hpp"
#include "rffq/io.hpp"
#include "rffq/matrix_json.hpp"
#include "rffq/reference.hpp"
#include "rffq/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Globals {
  double tol = rffq::kDefaultTolerance;
  std::optional<int> max_n_flag;
  int max_n = 12;
  std::string format = "json";
  std::string output;
  std::uint64_t seed = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const Globals& g, const std::string& text) {
  if (g.output.empty() || g.output == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw UsageError("cannot write " + g.output);
  out << text;
}

void emit_json(const Globals& g, const rffq::Json& j) { emit(g, j.dump(2) + "\n"); }

int resolve_max_n(const Globals& g) {
  if (g.max_n_flag) return *g.max_n_flag;
  if (const char* env = std::getenv("RFF_MAX_N")) {
    int v = 0;
    std::istringstream is(env);
    if (!(is >> v) || !is.eof() || v < 2 || v > 14) {
      throw UsageError(std::string("RFF_MAX_N must be an integer in 2..14, got '") + env + "'");
    }
    return v;
  }
  return 12;
}

void check_n(const Globals& g, int n, int lowest) {
  if (n < lowest || n > g.max_n) {
    std::ostringstream os;
    os << "--n " << n << " outside " << lowest << ".." << g.max_n;
    throw UsageError(os.str());
  }
}

rffq::CouplingMatrix parse_coupling(const std::string& source, int n) {
  if (source == "fourier") return rffq::CouplingMatrix::fourier(n);
  if (source == "conjugate-fourier") return rffq::CouplingMatrix::conjugate_fourier(n);
  const rffq::CMatrix u = rffq::read_matrix_file(source);
  if (u.rows() != n || u.cols() != n) {
    std::ostringstream os;
    os << "coupling file " << source << " is " << u.rows() << "x" << u.cols() << ", need " << n
       << "x" << n;
    throw rffq::ValidationError(os.str());
  }
  return rffq::CouplingMatrix::from_matrix(u);
}

std::string matrix_csv(const std::string& label, const rffq::CMatrix& m) {
  std::ostringstream os;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      os << rffq::csv_field(label) << ',' << r << ',' << c << ','
         << rffq::csv_number(m(r, c).real()) << ',' << rffq::csv_number(m(r, c).imag())
         << "\r\n";
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_census(const Globals& g, int n) {
  check_n(g, n, 2);
  const rffq::CensusTable t = rffq::census_table(rffq::SpinRegister(n));
  if (g.format == "csv") {
    emit(g, rffq::census_to_csv(t));
  } else {
    emit_json(g, rffq::census_to_json(t));
  }
  if (!t.agreement) {
    std::cerr << "census: multiplicity formula disagrees with J^2 diagonalization\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_basis(const Globals& g, int n, const std::string& coupling) {
  check_n(g, n, 3);
  const rffq::CoupledBasis b =
      rffq::build_coupled_basis(rffq::SpinRegister(n), parse_coupling(coupling, n));
  if (g.format == "csv") {
    emit(g, rffq::basis_to_csv(b));
  } else {
    emit_json(g, rffq::basis_to_json(b));
  }
  const double residual = b.gram_residual();
  if (residual > g.tol) {
    std::cerr << "basis: orthonormality residual " << residual << " > " << g.tol << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_encode(const Globals& g, int n, const std::string& coupling,
               const std::string& state_file, const std::string& povm_file) {
  check_n(g, n, 3);
  const rffq::QOperatorSet qs = rffq::build_q_set(
      rffq::build_coupled_basis(rffq::SpinRegister(n), parse_coupling(coupling, n)));
  const rffq::QuditState rho = rffq::QuditState::from_matrix(rffq::read_matrix_file(state_file));
  if (rho.d() != qs.d()) {
    std::ostringstream os;
    os << "state is " << rho.d() << "x" << rho.d() << " but n = " << n << " carries d = "
       << qs.d();
    throw rffq::ValidationError(os.str());
  }
  const rffq::EncodedOperator enc = rffq::encode_state(qs, rho);

  rffq::Json out{{"n", n},
                 {"d", qs.d()},
                 {"coupling", qs.coupling_fingerprint()},
                 {"logical_state", rffq::matrix_to_json(rho.rho())},
                 {"state", rffq::encoded_to_json(enc)}};
  std::string csv = "kind,outcome,row,col,re,im\r\n";
  for (Eigen::Index r = 0; r < enc.payload.rows(); ++r) {
    for (Eigen::Index c = 0; c < enc.payload.cols(); ++c) {
      csv += "state,," + std::to_string(r) + ',' + std::to_string(c) + ',' +
             rffq::csv_number(enc.payload(r, c).real()) + ',' +
             rffq::csv_number(enc.payload(r, c).imag()) + "\r\n";
    }
  }
  bool agree_all = true;
  if (!povm_file.empty()) {
    const rffq::QuditPovm povm =
        rffq::QuditPovm::from_elements(rffq::matrices_from_json(rffq::read_json_file(povm_file)));
    if (povm.d() != qs.d()) throw rffq::ValidationError("POVM dimension does not match d");
    const std::vector<rffq::EncodedOperator> elems = rffq::encode_povm(qs, povm);
    rffq::Json povm_json = rffq::Json::array();
    rffq::Json table = rffq::Json::array();
    csv = "outcome,logical,encoded,agree\r\n";
    for (std::size_t k = 0; k < povm.size(); ++k) {
      const double logical = (rho.rho() * povm[k]).trace().real();
      const double encoded = (enc.payload * elems[k].payload).trace().real();
      const bool agree = std::abs(encoded - logical) <= g.tol;
      agree_all = agree_all && agree;
      povm_json.push_back(rffq::encoded_to_json(elems[k]));
      table.push_back(rffq::Json{{"outcome", k + 1},
                                 {"logical", logical},
                                 {"encoded", encoded},
                                 {"agree", agree}});
      csv += std::to_string(k + 1) + ',' + rffq::csv_number(logical) + ',' +
             rffq::csv_number(encoded) + ',' + (agree ? "true" : "false") + "\r\n";
    }
    out["povm"] = povm_json;
    out["born_rule"] = table;
  }
  if (g.format == "csv") {
    emit(g, csv);
  } else {
    emit_json(g, out);
  }
  if (!agree_all) {
    std::cerr << "encode: encoded and logical probabilities differ beyond --tol\n";
    return kExitFailure;
  }
  return kExitOk;
}

int cmd_verify(const Globals& g, const std::string& range, const std::string& suite,
               const std::string& perturb) {
  static const std::regex pattern(R"((\d+)\.\.(\d+))");
  std::smatch m;
  if (!std::regex_match(range, m, pattern)) {
    throw UsageError("--n-range must look like a..b, got '" + range + "'");
  }
  rffq::VerifyOptions opts;
  opts.n_min = std::stoi(m[1].str());
  opts.n_max = std::stoi(m[2].str());
  opts.suite = suite;
  opts.tol = g.tol;
  opts.seed = g.seed;
  opts.perturb = perturb;
  const rffq::VerifyReport report = rffq::run_verify(opts, g.max_n);
  if (g.format == "csv") {
    emit(g, rffq::verify_report_to_csv(report));
  } else {
    emit_json(g, rffq::verify_report_to_json(report));
  }
  if (!report.passed()) {
    for (const rffq::CheckResult* c : report.failures()) {
      std::cerr << "FAILED " << c->id << " residual " << c->residual
                << (c->mode == rffq::CheckResult::Mode::at_most ? " > " : " <= ")
                << c->tolerance << "\n";
    }
    return kExitFailure;
  }
  return kExitOk;
}

struct ChannelArgs {
  int n = 3;
  std::string state_file;
  std::string noise = "haar";
  std::vector<double> axis{0.0, 0.0, 1.0};
  double angle = 0.0;
  double width = 0.1;
  int trials = 1000;
};

int cmd_channel(const Globals& g, const ChannelArgs& a) {
  check_n(g, a.n, 3);
  if (a.trials < 1) throw UsageError("--trials must be >= 1");
  rffq::ChannelConfig cfg;
  cfg.n = a.n;
  cfg.trials = a.trials;
  cfg.seed = g.seed;
  if (a.noise == "haar") {
    cfg.noise = rffq::NoiseModel::haar();
  } else if (a.noise == "fixed") {
    if (a.axis.size() != 3) throw UsageError("--axis needs three components");
    cfg.noise = rffq::NoiseModel::fixed({a.axis[0], a.axis[1], a.axis[2]}, a.angle);
  } else if (a.noise == "z-dephasing") {
    cfg.noise = rffq::NoiseModel::z_dephasing(a.width);
  } else {
    throw UsageError("--noise must be haar, fixed or z-dephasing");
  }
  const int d = a.n - 1;
  rffq::CMatrix rho = rffq::CMatrix::Zero(d, d);
  if (a.state_file.empty()) {
    rho(0, 0) = 1.0;  // lambda = 1
  } else {
    rho = rffq::read_matrix_file(a.state_file);
  }
  const rffq::QuditState state = rffq::QuditState::from_matrix(rho);
  if (state.d() != d) {
    std::ostringstream os;
    os << "state is " << state.d() << "x" << state.d() << " but n = " << a.n
       << " carries d = " << d;
    throw rffq::ValidationError(os.str());
  }
  const rffq::ChannelReport report = rffq::run_channel(cfg, state);
  if (g.format == "csv") {
    emit(g, rffq::channel_report_to_csv(report));
  } else {
    emit_json(g, rffq::channel_report_to_json(report));
  }
  return kExitOk;
}

int cmd_reference(const Globals& g, const std::string& id) {
  const auto& ids = rffq::reference::case_ids();
  if (std::find(ids.begin(), ids.end(), id) == ids.end()) {
    std::ostringstream os;
    os << "unknown reference case '" << id << "'; valid ids:";
    for (const std::string& v : ids) os << ' ' << v;
    throw UsageError(os.str());
  }
  const rffq::reference::ReferenceCase c = rffq::reference::reference_case(id);
  if (g.format == "csv") {
    std::string csv = "name,row,col,re,im\r\n";
    for (const auto& m : c.matrices) csv += matrix_csv(m.name, m.value);
    emit(g, csv);
    return kExitOk;
  }
  rffq::Json mats = rffq::Json::array();
  for (const auto& m : c.matrices) {
    mats.push_back(
        rffq::Json{{"name", m.name}, {"formula", m.formula}, {"matrix", rffq::matrix_to_json(m.value)}});
  }
  emit_json(g, rffq::Json{{"case", c.id}, {"matrices", mats}});
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reference-frame-free qudits on spin-1/2 registers"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Tolerance for default-tolerance checks")
      ->check(CLI::PositiveNumber);
  app.add_option_function<int>(
         "--max-n", [&](const int& v) { g.max_n_flag = v; },
         "Largest register size (2..14, default 12, env RFF_MAX_N)")
      ->check(CLI::Range(2, 14));
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--output", g.output, "Output file (default stdout)");
  app.add_option("--seed", g.seed, "Seed for random draws");

  int n = 3;
  std::string coupling = "fourier";

  CLI::App* census = app.add_subcommand("census", "Sector table with diagonalization cross-check");
  census->add_option("--n", n, "Number of constituents")->required();

  CLI::App* basis = app.add_subcommand("basis", "Dump the coupled kets of the j2 sector");
  basis->add_option("--n", n, "Number of constituents")->required();
  basis->add_option("--coupling", coupling,
                    "fourier, conjugate-fourier or a matrix JSON file");

  std::string state_file, povm_file;
  CLI::App* encode = app.add_subcommand("encode", "Encode a logical state (and POVM)");
  encode->add_option("--n", n, "Number of constituents")->required();
  encode->add_option("--state", state_file, "Logical density matrix (JSON)")->required();
  encode->add_option("--povm", povm_file, "Logical POVM elements (JSON)");
  encode->add_option("--coupling", coupling,
                     "fourier, conjugate-fourier or a matrix JSON file");

  std::string range = "3..6", suite = "all", perturb;
  CLI::App* verify = app.add_subcommand("verify", "Run invariant suites");
  verify->add_option("--n-range", range, "Register sizes a..b");
  verify->add_option("--suite", suite, "all, coupling, encoder, reference or hws")
      ->check(CLI::IsMember(rffq::suite_names()));
  verify->add_option("--perturb-reference", perturb)->group("");

  ChannelArgs ch;
  CLI::App* channel = app.add_subcommand("channel", "Collective-noise channel simulation");
  channel->add_option("--n", ch.n, "Number of constituents")->required();
  channel->add_option("--state", ch.state_file, "Logical density matrix (default |1><1|)");
  channel->add_option("--noise", ch.noise, "haar, fixed or z-dephasing")
      ->check(CLI::IsMember({"haar", "fixed", "z-dephasing"}));
  channel->add_option("--axis", ch.axis, "Rotation axis for --noise fixed")
      ->delimiter(',')
      ->expected(3);
  channel->add_option("--angle", ch.angle, "Rotation angle (radians) for --noise fixed");
  channel->add_option("--width", ch.width, "Angle standard deviation for z-dephasing");
  channel->add_option("--trials", ch.trials, "Number of trials");

  std::string case_id;
  CLI::App* ref = app.add_subcommand("reference", "Dump transcribed reference operators");
  ref->add_option("--case", case_id, "Case id")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    g.max_n = resolve_max_n(g);
    rffq::set_dimension_limit(std::size_t{1} << g.max_n);
    if (census->parsed()) return cmd_census(g, n);
    if (basis->parsed()) return cmd_basis(g, n, coupling);
    if (encode->parsed()) return cmd_encode(g, n, coupling, state_file, povm_file);
    if (verify->parsed()) return cmd_verify(g, range, suite, perturb);
    if (channel->parsed()) return cmd_channel(g, ch);
    if (ref->parsed()) return cmd_reference(g, case_id);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const rffq::ConsistencyError& e) {
    std::cerr << "check failed: " << e.what() << "\n";
    return kExitFailure;
  } catch (const rffq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const rffq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
