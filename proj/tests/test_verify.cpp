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

#include <set>

#include <gtest/gtest.h>

#include "rffq/verify.hpp"

namespace rffq {
namespace {

std::string failure_ids(const VerifyReport& r) {
  std::string out;
  for (const CheckResult* c : r.failures()) out += c->id + " ";
  return out;
}

TEST(Verify, AllSuitesPassForThreeToSix) {
  const VerifyReport r = run_verify({});
  EXPECT_TRUE(r.passed()) << failure_ids(r);
  std::set<std::string> ids;
  for (const CheckResult& c : r.checks) EXPECT_TRUE(ids.insert(c.id).second) << c.id;
  for (int n = 3; n <= 6; ++n) {
    const std::string prefix = "coupling/n=" + std::to_string(n) + "/";
    EXPECT_TRUE(ids.count(prefix + "census")) << prefix;
  }
  EXPECT_TRUE(ids.count("reference/n4-pauli/reduction-constant"));
}

TEST(Verify, SingleSuites) {
  for (const std::string& suite : suite_names()) {
    VerifyOptions o;
    o.suite = suite;
    o.n_min = 4;
    o.n_max = 4;
    const VerifyReport r = run_verify(o);
    EXPECT_FALSE(r.checks.empty()) << suite;
    EXPECT_TRUE(r.passed()) << suite << ": " << failure_ids(r);
  }
}

TEST(Verify, CouplingSuiteReachesLargerN) {
  VerifyOptions o;
  o.suite = "coupling";
  o.n_min = 9;
  o.n_max = 10;
  const VerifyReport r = run_verify(o);
  EXPECT_TRUE(r.passed()) << failure_ids(r);
}

TEST(Verify, EverySeedPasses) {
  for (std::uint64_t seed : {1u, 42u, 77u}) {
    VerifyOptions o;
    o.suite = "encoder";
    o.n_min = 3;
    o.n_max = 5;
    o.seed = seed;
    const VerifyReport r = run_verify(o);
    EXPECT_TRUE(r.passed()) << seed << ": " << failure_ids(r);
  }
}

TEST(Verify, PerturbedReferenceCaseIsCaught) {
  for (const std::string& id : reference::case_ids()) {
    VerifyOptions o;
    o.suite = "reference";
    o.perturb = id;
    const VerifyReport r = run_verify(o);
    ASSERT_FALSE(r.passed()) << id;
    // Downstream checks may also trip; at least one must name the case.
    bool named = false;
    for (const CheckResult* c : r.failures()) {
      named = named || c->id.rfind("reference/" + id + "/", 0) == 0;
    }
    EXPECT_TRUE(named) << id << ": " << failure_ids(r);
  }
}

TEST(Verify, TightToleranceStillPassesExactChecks) {
  VerifyOptions o;
  o.suite = "coupling";
  o.tol = 1e-11;
  EXPECT_TRUE(run_verify(o).passed());
}

TEST(Verify, RejectsBadOptions) {
  VerifyOptions o;
  o.n_min = 2;
  EXPECT_THROW(run_verify(o), ContractError);
  o.n_min = 5;
  o.n_max = 4;
  EXPECT_THROW(run_verify(o), ContractError);
  o = {};
  o.n_max = 13;
  EXPECT_THROW(run_verify(o, 12), ContractError);
  o = {};
  o.n_max = 9;
  EXPECT_THROW(run_verify(o), SizeLimitError);
  o = {};
  o.suite = "nope";
  EXPECT_THROW(run_verify(o), ContractError);
  o = {};
  o.perturb = "nope";
  EXPECT_THROW(run_verify(o), ContractError);
  o = {};
  o.tol = 0.0;
  EXPECT_THROW(run_verify(o), ContractError);
}

TEST(Verify, ReportSerialization) {
  VerifyOptions o;
  o.suite = "hws";
  o.n_min = 3;
  o.n_max = 3;
  const VerifyReport r = run_verify(o);
  const Json j = verify_report_to_json(r);
  EXPECT_EQ(j["suite"], "hws");
  EXPECT_EQ(j["checks"].size(), r.checks.size());
  EXPECT_EQ(j["passed"], true);
  const std::string csv = verify_report_to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'),
            static_cast<long>(r.checks.size()) + 1);
}

}  // namespace
}  // namespace rffq
