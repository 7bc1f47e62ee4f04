#include <gtest/gtest.h>

#include <algorithm>

#include "json.hpp"
#include "simcat/error.hpp"
#include "simcat/verify.hpp"
#include "support/random.hpp"

using namespace simcat;
using simcat::testing::Rng;

namespace {

const std::string kFixtures = SIMCAT_FIXTURES;
const char* kFixtureNames[] = {"refresh2", "dom2", "encoder3", "identity2", "xor2"};

GadgetAst fixture_ast(const std::string& name) { return load_gadget(kFixtures + "/" + name + ".gdl"); }
Netlist fixture(const std::string& name) { return elaborate(fixture_ast(name)); }

std::vector<int> indices(const Netlist& nl, const std::vector<std::string>& names) {
  std::vector<int> out;
  for (const auto& n : names) {
    auto it = std::find(nl.input_names.begin(), nl.input_names.end(), n);
    out.push_back(static_cast<int>(it - nl.input_names.begin()));
  }
  return out;
}

// Checks the game against the oracle for every observation of outputs and
// probes of size <= 2 and every d.
int soundness_violations(const Netlist& nl) {
  std::vector<std::string> pool;
  for (const auto& o : nl.outputs) pool.push_back(o.name);
  for (const auto& p : nl.probes) pool.push_back(p.name);
  int violations = 0;
  const int n = static_cast<int>(pool.size());
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
    if (__builtin_popcountll(s) > 2) continue;
    ObservationSpec obs;
    for (int i = 0; i < n; ++i) {
      if ((s >> i) & 1U) obs.names.push_back(pool[i]);
    }
    auto support = dependency_support(nl, obs).inputs;
    for (int d = 0; d <= nl.num_inputs(); ++d) {
      CheckOptions no_oracle;
      no_oracle.use_oracle = false;
      Verdict v = check_sim(nl, obs, d, no_oracle);
      if (v.syntactic != SyntacticResult::kProved) continue;
      for (int k : indices(nl, v.erased_inputs)) {
        if (std::find(support.begin(), support.end(), k) != support.end()) ++violations;
      }
      if (static_cast<int>(support.size()) > d) ++violations;
    }
  }
  return violations;
}

}  // namespace

TEST(Sim, RefreshEitherOutput) {
  auto nl = fixture("refresh2");
  for (const char* out : {"c0", "c1"}) {
    Verdict v = check_sim(nl, {{out}}, 0);
    EXPECT_EQ(v.syntactic, SyntacticResult::kProved) << out;
    EXPECT_EQ(v.oracle, OracleResult::kHolds) << out;
    EXPECT_EQ(v.outcome(), Outcome::kPass);
    EXPECT_TRUE(v.witness.empty());
    ASSERT_TRUE(v.trace);
    bool cut = false;
    for (const auto& s : v.trace->steps) cut |= s.rule == RuleId::kCut;
    EXPECT_TRUE(cut);
  }
}

TEST(Sim, EncoderNeedsItsSecret) {
  auto nl = fixture("encoder3");
  Verdict v = check_sim(nl, ObservationSpec::all_outputs(nl), 0);
  EXPECT_EQ(v.syntactic, SyntacticResult::kNotShown);
  EXPECT_EQ(v.oracle, OracleResult::kFails);
  EXPECT_EQ(v.witness, (std::vector<std::string>{"s"}));
  EXPECT_EQ(v.outcome(), Outcome::kFail);
  EXPECT_EQ(check_sim(nl, ObservationSpec::all_outputs(nl), 1).outcome(), Outcome::kPass);
  // Any two shares are independent of s.
  Verdict two = check_sim(nl, {{"y0", "y1"}}, 0);
  EXPECT_EQ(two.oracle, OracleResult::kHolds);
}

TEST(Sim, NothingObserved) {
  for (const char* f : kFixtureNames) {
    auto nl = fixture(f);
    Verdict v = check_sim(nl, {}, 0);
    EXPECT_EQ(v.syntactic, SyntacticResult::kProved) << f;
    EXPECT_EQ(static_cast<int>(v.erased_inputs.size()), nl.num_inputs());
  }
}

TEST(Sim, Monotone) {
  for (const char* f : kFixtureNames) {
    auto nl = fixture(f);
    bool proved = false;
    for (int d = 0; d <= nl.num_inputs(); ++d) {
      Verdict v = check_sim(nl, ObservationSpec::all_outputs(nl), d);
      if (proved) EXPECT_EQ(v.syntactic, SyntacticResult::kProved) << f << " d=" << d;
      proved = v.syntactic == SyntacticResult::kProved;
    }
    EXPECT_TRUE(proved) << f;
  }
}

TEST(Sim, CapSkipsOracle) {
  auto nl = fixture("dom2");
  CheckOptions opts;
  opts.oracle.bit_cap = 3;
  Verdict v = check_sim(nl, {{"p01"}}, 1, opts);
  EXPECT_EQ(v.oracle, OracleResult::kSkipped);
  EXPECT_EQ(v.outcome(), Outcome::kUndecided);
  EXPECT_FALSE(v.note.empty());
}

TEST(Sim, SemanticCheckOfRewrites) {
  CheckOptions opts;
  opts.check_rewrite_semantics = true;
  for (const char* f : kFixtureNames) {
    auto nl = fixture(f);
    EXPECT_NO_THROW(check_sim(nl, ObservationSpec::all_outputs(nl), 0, opts)) << f;
  }
}

TEST(Soundness, ProvedNeverCoexistsWithRefutation) {
  Verdict v;
  v.syntactic = SyntacticResult::kProved;
  v.oracle = OracleResult::kFails;
  EXPECT_THROW(require_sound(v), Error);
  v.oracle = OracleResult::kHolds;
  EXPECT_NO_THROW(require_sound(v));
}

TEST(Soundness, Fixtures) {
  for (const char* f : kFixtureNames) EXPECT_EQ(soundness_violations(fixture(f)), 0) << f;
}

TEST(Soundness, RandomGadgets) {
  Rng rng(61);
  for (int i = 0; i < 200; ++i) {
    auto ast = simcat::testing::random_gadget(rng);
    EXPECT_EQ(soundness_violations(elaborate(ast)), 0) << to_source(ast);
  }
}

TEST(Domains, Examples) {
  auto refresh = fixture("refresh2");
  EXPECT_TRUE(domains_receiving_erase(refresh, {{"c0"}}).count(1));
  EXPECT_TRUE(domains_receiving_erase(refresh, {{"c1"}}).count(0));
  EXPECT_EQ(domains_receiving_erase(refresh, {}), (std::set<int>{0, 1}));
  EXPECT_TRUE(domains_receiving_erase(fixture("dom2"), {{"p01"}}).empty());
  EXPECT_THROW(domains_receiving_erase(fixture("encoder3"), {}), MalformedError);
}

TEST(Pini, DomIsNotPini) {
  auto report = check_pini(fixture("dom2"), 2, 1);
  EXPECT_EQ(report.outcome, Outcome::kFail);
  bool found = false;
  for (const auto& c : report.cases) {
    if (c.probes == std::vector<std::string>{"p01"} && c.output_domains.empty()) {
      found = true;
      EXPECT_EQ(c.required, 1);
      EXPECT_TRUE(c.erased_domains.empty());
      EXPECT_TRUE(c.oracle_free_domains.empty());
      EXPECT_EQ(c.syntactic, SyntacticResult::kNotShown);
      EXPECT_EQ(c.oracle, OracleResult::kFails);
      EXPECT_EQ(c.outcome, Outcome::kFail);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Pini, PassingFixtures) {
  for (const char* f : {"refresh2", "identity2", "xor2"}) {
    auto report = check_pini(fixture(f), 2, 1);
    EXPECT_EQ(report.outcome, Outcome::kPass) << f << "\n" << to_text(report);
    for (const auto& c : report.cases) {
      EXPECT_LT(static_cast<int>(c.probes.size() + c.output_domains.size()), 2);
      EXPECT_EQ(c.required, 2 - static_cast<int>(c.probes.size() + c.output_domains.size()));
    }
  }
}

TEST(Pini, CaseEnumeration) {
  // identity2 at t=2: no probes with o in {0,1} gives 1 + 2 cases; one probe
  // (4 candidate signals: a0, a1 and no distinct gates) with o = 0.
  auto report = check_pini(fixture("identity2"), 2, 1);
  EXPECT_EQ(report.cases.size(), 3U + 2U);
  EXPECT_EQ(probe_candidates(fixture("identity2")).size(), 2U);
  EXPECT_EQ(probe_candidates(fixture("dom2")).size(), 4U + 1U + 8U);
}

TEST(Pini, RequiresAnnotations) {
  EXPECT_THROW(check_pini(fixture("encoder3"), 2, 1), MalformedError);
  EXPECT_THROW(check_pini(fixture("refresh2"), 1, 1), MalformedError);
  EXPECT_THROW(check_pini(fixture("refresh2"), 0, 1), MalformedError);
}

TEST(Pini, WithoutOracleUsesGameOnly) {
  CheckOptions opts;
  opts.use_oracle = false;
  auto report = check_pini(fixture("dom2"), 2, 1, opts);
  EXPECT_EQ(report.outcome, Outcome::kUndecided);
  EXPECT_EQ(check_pini(fixture("refresh2"), 2, 1, opts).outcome, Outcome::kPass);
}

TEST(GadgetCompose, RefreshAfterRefresh) {
  auto r = fixture_ast("refresh2");
  auto c = compose(r, r, {{"c0", "a0"}, {"c1", "a1"}});
  auto nl = elaborate(c);
  EXPECT_EQ(nl.count(GateOp::kXor), 4U);
  EXPECT_EQ(nl.num_inputs(), 2);
  EXPECT_EQ(nl.num_randoms(), 2);
  EXPECT_EQ(nl.outputs.size(), 2U);
  EXPECT_EQ(check_pini(nl, 2, 1).outcome, Outcome::kPass);
  EXPECT_EQ(parse_gadget(to_source(c)), c);
}

TEST(GadgetCompose, IdentityKeepsSemantics) {
  auto r = fixture_ast("refresh2");
  auto id = fixture_ast("identity2");
  EXPECT_EQ(oracle_matrix(elaborate(compose(id, r, {{"c0", "a0"}, {"c1", "a1"}}))), oracle_matrix(elaborate(r)));
  EXPECT_EQ(oracle_matrix(elaborate(compose(r, id, {{"c0", "a0"}, {"c1", "a1"}}))), oracle_matrix(elaborate(r)));
}

TEST(GadgetCompose, PartialWiringKeepsOutputs) {
  auto x = fixture_ast("xor2");
  auto r = fixture_ast("refresh2");
  auto c = compose(x, r, {{"c0", "a0"}});
  EXPECT_EQ(c.outputs.size(), 3U);
  EXPECT_EQ(c.outputs.back().wire, "g.c1");
  EXPECT_EQ(c.inputs.size(), 2U + 3U);
}

TEST(GadgetCompose, Errors) {
  auto r = fixture_ast("refresh2");
  EXPECT_THROW(compose(r, r, {{"c0", "a1"}}), MalformedError);
  EXPECT_THROW(compose(r, r, {{"c9", "a0"}}), MalformedError);
  EXPECT_THROW(compose(r, r, {{"c0", "z"}}), MalformedError);
  EXPECT_THROW(compose(r, r, {{"c0", "a0"}, {"c0", "a0"}}), MalformedError);
}

TEST(NonInterference, Examples) {
  EXPECT_EQ(check_ni(fixture("refresh2"), 1).outcome(), Outcome::kPass);
  auto id = fixture("identity2");
  EXPECT_EQ(check_ni(id, 1).outcome(), Outcome::kPass);
  Verdict sni = check_sni(id, 1);
  EXPECT_EQ(sni.oracle, OracleResult::kFails);
  EXPECT_EQ(sni.outcome(), Outcome::kFail);
  EXPECT_FALSE(sni.witness.empty());
  Verdict zero = check_ni(fixture("dom2"), 0);
  EXPECT_EQ(zero.syntactic, SyntacticResult::kProved);
  EXPECT_EQ(zero.outcome(), Outcome::kPass);
  EXPECT_EQ(check_ni(fixture("dom2"), 1).outcome(), Outcome::kPass);
  EXPECT_THROW(check_ni(fixture("encoder3"), 1), MalformedError);
}

TEST(NonInterference, CapLeavesUndecided) {
  CheckOptions opts;
  opts.oracle.bit_cap = 2;
  Verdict v = check_sni(fixture("dom2"), 1, opts);
  EXPECT_EQ(v.oracle, OracleResult::kSkipped);
  EXPECT_EQ(v.syntactic, SyntacticResult::kNotApplicable);
  EXPECT_EQ(v.outcome(), Outcome::kUndecided);
}

TEST(Reports, JsonSchema) {
  Verdict v = check_sim(fixture("refresh2"), {{"c0"}}, 0);
  auto j = nlohmann::json::parse(to_json(v, "trace.txt"));
  EXPECT_EQ(j.at("property"), "sim");
  EXPECT_EQ(j.at("case"), "observe={c0} d=0");
  EXPECT_EQ(j.at("result"), "PASS");
  EXPECT_TRUE(j.at("witness").is_array());
  EXPECT_EQ(j.at("trace_file"), "trace.txt");

  auto report = check_pini(fixture("dom2"), 2, 1);
  auto p = nlohmann::json::parse(to_json(report));
  EXPECT_EQ(p.at("property"), "pini");
  EXPECT_EQ(p.at("result"), "FAIL");
  EXPECT_EQ(p.at("cases").size(), report.cases.size());
  EXPECT_EQ(to_json(report), to_json(check_pini(fixture("dom2"), 2, 1)));
}

TEST(Reports, Text) {
  std::string text = to_text(check_sim(fixture("refresh2"), {{"c0"}}, 0));
  EXPECT_EQ(text.rfind("sim observe={c0} d=0: PASS", 0), 0U) << text;
  EXPECT_NE(to_text(check_pini(fixture("dom2"), 2, 1)).find("probes={p01}"), std::string::npos);
}
