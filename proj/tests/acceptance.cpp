// Acceptance run: one PASS/FAIL line per criterion, each under its time limit.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "simcat/error.hpp"
#include "simcat/oracle.hpp"
#include "simcat/rewrite.hpp"
#include "simcat/verify.hpp"
#include "support/random.hpp"

using namespace simcat;
using simcat::testing::Rng;

namespace {

const std::string kFixtures = SIMCAT_FIXTURES;

struct Failure {
  std::string what;
};

void require(bool ok, const std::string& what) {
  if (!ok) throw Failure{what};
}

GadgetAst fixture_ast(const std::string& name) { return load_gadget(kFixtures + "/" + name + ".gdl"); }
Netlist fixture(const std::string& name) { return elaborate(fixture_ast(name)); }

DyadicMatrix parse_matrix(int in, int out, const std::string& text) {
  DyadicMatrix m(in, out);
  std::istringstream ss(text);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::string tok;
      ss >> tok;
      m.at(r, c) = Dyadic::parse(tok);
    }
  }
  return m;
}

// The 8x8 matrix as printed for the three-share encoder.
const char* kExample1 =
    "1 0 0 0 0 0 0 0 "
    "0 1 0 0 0 0 0 0 "
    "0 0 1 0 0 0 0 0 "
    "0 0 0 1 0 0 0 0 "
    "0 0 0 0 0 0 0 1 "
    "0 0 0 0 0 0 1 0 "
    "0 0 0 0 0 1 0 0 "
    "0 0 0 0 1 0 0 0";

// ---------------------------------------------------------------------------

void criterion1() {
  const auto printed = parse_matrix(3, 3, kExample1);
  const BitMatrix f(3, {0b111, 0b010, 0b001});
  require(walsh_of_linear(f) == printed, "walsh_of_linear differs from the printed matrix");
  require(oracle_matrix(fixture("encoder3")) == printed, "oracle_matrix(encoder3) differs from the printed matrix");
  require(eval(graph_from_term(Term::parse("(1 * dup * 1) ; (xor * 1 * dup) ; (1 * swap * 1) ; (xor * 2)"))) ==
              printed,
          "diagram of the encoder differs from the printed matrix");
  for (int s = 0; s <= 1; ++s) {
    const Dyadic sign = s ? -1 : 1;
    FourierVector in(3, {1, 0, 0, 0, sign, 0, 0, 0});
    FourierVector out(3, {1, 0, 0, 0, 0, 0, 0, sign});
    require(apply(printed, in) == out, "propagation law fails for s=" + std::to_string(s));
    require(apply(oracle_matrix(fixture("encoder3")), in) == out, "oracle propagation fails");
  }
}

void criterion2() {
  struct Entry {
    Generator g;
    int in, out;
    const char* text;
  };
  const Entry table[] = {
      {Generator::kXor, 2, 1, "1 0 0 0  0 0 0 1"},
      {Generator::kAnd, 2, 1, "1 0 0 0  1/2 1/2 1/2 -1/2"},
      {Generator::kFalse, 0, 1, "1 1"},
      {Generator::kTrue, 0, 1, "1 -1"},
      {Generator::kDup, 1, 2, "1 0  0 1  0 1  1 0"},
      {Generator::kErase, 1, 0, "1 0"},
      {Generator::kRandom, 0, 1, "1 0"},
  };
  for (const auto& e : table) {
    require(generator_matrix(e.g) == parse_matrix(e.in, e.out, e.text),
            "generator " + std::string(name(e.g)) + " differs");
  }
}

void criterion3() {
  const Dyadic h(1, 1);
  auto xor_cut = eval(graph_from_term(Term::parse("random * 1 ; xor")));
  require(xor_cut == DyadicMatrix::from_rows(1, 1, {{1, 0}, {0, 0}}), "xor with random is not |0><0|");
  auto and_cut = eval(graph_from_term(Term::parse("random * 1 ; and")));
  require(and_cut == DyadicMatrix::from_rows(1, 1, {{1, 0}, {h, h}}), "and with random has the wrong matrix");
  require(and_cut != xor_cut, "and with random must not cut");
  auto dup_random = eval(graph_from_term(Term::parse("random ; dup")));
  require(dup_random == DyadicMatrix::from_rows(0, 2, {{1}, {0}, {0}, {1}}), "dup of random has the wrong vector");
  auto split = tensor(generator_matrix(Generator::kRandom), generator_matrix(Generator::kRandom));
  require(dup_random != split, "dup of random must not split");
}

void criterion4() {
  for (const auto& r : rule_set()) {
    self_check(r);
    for (const auto& eq : r.equations) {
      require(eval_term(eq.lhs) == eval_term(eq.rhs), "rule " + r.name + " is unsound");
    }
  }
  require(rule_set().size() == 8, "expected 8 rules");
  for (const auto& c : negative_checks()) {
    Graph g = graph_from_term(c.pattern);
    bool forced = false;
    for (NodeId id : g.generator_nodes()) {
      if (!c.matches(g, id)) continue;
      require(eval(c.force(g, id)) != eval(g), "forcing " + c.name + " kept the semantics");
      forced = true;
    }
    require(forced, "negative pattern " + c.name + " never matched");
  }
}

void criterion5() {
  Rng rng(2024);
  for (int i = 0; i < 500; ++i) {
    Term t = simcat::testing::random_term(rng, {6, 12, 4, true});
    Graph g = graph_from_term(t);
    auto [fix, trace] = propagate_erases(g);
    require(eval(fix) == eval(g), "fixpoint changes semantics for " + t.to_string());
  }
}

void criterion6() {
  Rng rng(2025);
  CheckOptions game_only;
  game_only.use_oracle = false;
  int proved = 0;
  for (int i = 0; i < 200; ++i) {
    auto ast = simcat::testing::random_gadget(rng);
    Netlist nl = elaborate(ast);
    check_cap(nl, {});
    std::vector<std::string> pool;
    for (const auto& o : nl.outputs) pool.push_back(o.name);
    const int n = static_cast<int>(pool.size());
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << n); ++s) {
      ObservationSpec obs;
      for (int k = 0; k < n; ++k) {
        if ((s >> k) & 1U) obs.names.push_back(pool[k]);
      }
      auto support = dependency_support(nl, obs).inputs;
      for (int d = 0; d <= nl.num_inputs(); ++d) {
        Verdict v = check_sim(nl, obs, d, game_only);
        if (v.syntactic != SyntacticResult::kProved) continue;
        ++proved;
        for (int k : support) {
          for (const auto& e : v.erased_inputs) {
            require(e != nl.input_names[k], "erased input " + e + " is in the support:\n" + to_source(ast));
          }
        }
      }
    }
  }
  require(proved > 0, "no case was proved");
}

void criterion7() {
  Netlist refresh = fixture("refresh2");
  for (const char* out : {"c0", "c1"}) {
    Verdict v = check_sim(refresh, {{out}}, 0);
    require(v.syntactic == SyntacticResult::kProved, std::string("game does not prove ") + out);
    require(v.oracle == OracleResult::kHolds, std::string("oracle does not confirm ") + out);
  }
  auto report = check_pini(fixture("dom2"), 2, 1);
  require(report.outcome == Outcome::kFail, "dom2 passes PINI");
  bool seen = false;
  for (const auto& c : report.cases) {
    if (c.probes != std::vector<std::string>{"p01"} || !c.output_domains.empty()) continue;
    seen = true;
    require(c.outcome == Outcome::kFail, "cross-domain probe case passes");
    require(c.erased_domains.empty(), "game erases a domain under the cross-domain probe");
    require(c.oracle_free_domains.empty(), "oracle support does not span both domains");
  }
  require(seen, "cross-domain probe case missing");
}

void criterion8() {
  std::vector<std::string> passing;
  for (const char* f : {"refresh2", "dom2", "identity2", "xor2"}) {
    if (check_pini(fixture(f), 2, 1).outcome == Outcome::kPass) passing.push_back(f);
  }
  require(passing.size() == 3, "expected refresh2, identity2 and xor2 to pass");
  int compositions = 0;
  for (const auto& fname : passing) {
    for (const auto& gname : passing) {
      GadgetAst f = fixture_ast(fname);
      GadgetAst g = fixture_ast(gname);
      // Every non-empty partial injection of g-outputs into same-domain f-inputs.
      std::function<void(std::size_t, Wiring, std::set<std::string>)> rec = [&](std::size_t k, Wiring w,
                                                                                std::set<std::string> used) {
        if (k == g.outputs.size()) {
          if (w.empty()) return;
          Netlist nl = elaborate(compose(f, g, w));
          auto report = check_pini(nl, 2, 1);
          std::string desc = fname + " after " + gname;
          for (const auto& [o, i] : w) desc += " " + o + "->" + i;
          require(report.outcome == Outcome::kPass, "composition fails PINI: " + desc + "\n" + to_text(report));
          ++compositions;
          return;
        }
        rec(k + 1, w, used);
        for (const auto& in : f.inputs) {
          if (in.domain != g.outputs[k].domain || used.count(in.wire)) continue;
          Wiring w2 = w;
          w2.emplace_back(g.outputs[k].wire, in.wire);
          auto used2 = used;
          used2.insert(in.wire);
          rec(k + 1, w2, used2);
        }
      };
      rec(0, {}, {});
    }
  }
  require(compositions > 0, "no compositions checked");
}

void criterion9() {
  Rng rng(2026);
  for (int i = 0; i < 100; ++i) {
    int n = 1 + static_cast<int>(rng() % 6);
    auto w = walsh_of_linear(simcat::testing::random_invertible(rng, n));
    require(static_cast<bool>(is_orthogonal(w)), "linear permutation not orthogonal");
    require(apply(w, uniform(n)) == uniform(n), "orthogonal map does not preserve uniform");
  }
  for (int n = 0; n <= 6; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<Dyadic> p(std::size_t{1} << n);
      std::int64_t left = 1 << 8;
      for (std::size_t x = 0; x + 1 < p.size(); ++x) {
        auto take = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(left + 1));
        p[x] = Dyadic(take, 8);
        left -= take;
      }
      p.back() = Dyadic(left, 8);
      auto t = from_probabilities(p);
      require(t == simcat::testing::brute_force_fourier(p), "Fourier transform differs from definition");
      require(to_probabilities(t) == p, "probability round trip fails");
    }
  }
  for (int n = 1; n <= 3; ++n) {
    const std::size_t size = std::size_t{1} << n;
    FourierVector u = uniform(n);
    for (std::size_t g = 0; g < size; ++g) require(u[g] == Dyadic(g == 0 ? 1 : 0), "uniform formula");
    for (std::size_t x = 0; x < size; ++x) {
      auto up = to_probabilities(u);
      require(up[x] == Dyadic(1, n), "uniform probabilities");
      FourierVector c = constant(x, n);
      for (std::size_t g = 0; g < size; ++g) {
        require(c[g] == Dyadic(__builtin_popcountll(g & x) % 2 ? -1 : 1), "constant formula");
      }
      auto cp = to_probabilities(c);
      for (std::size_t y = 0; y < size; ++y) require(cp[y] == Dyadic(y == x ? 1 : 0), "constant is a point mass");
    }
    for (int k = 1; k < n; ++k) {
      const int m = n - k;
      for (std::size_t a = 0; a < (std::size_t{1} << k); ++a) {
        for (std::size_t b = 0; b < (std::size_t{1} << m); ++b) {
          require(joint(constant(a, k), constant(b, m)) == constant((a << m) | b, n), "joint of constants");
          FourierVector ta = apply(walsh_from_truth_table(simcat::testing::random_table(rng, k, k)), uniform(k));
          FourierVector tb = constant(b, m);
          FourierVector tj = joint(ta, tb);
          for (std::size_t g1 = 0; g1 < (std::size_t{1} << k); ++g1) {
            for (std::size_t g2 = 0; g2 < (std::size_t{1} << m); ++g2) {
              require(tj[(g1 << m) | g2] == ta[g1] * tb[g2], "joint formula");
            }
          }
        }
      }
      require(joint(uniform(k), uniform(m)) == uniform(n), "joint of uniforms");
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    void (*run)();
  };
  const Criterion criteria[] = {
      {1, "encoder matrix and propagation", 1, criterion1},
      {2, "generator table", 1, criterion2},
      {3, "cut rule and counterexamples", 1, criterion3},
      {4, "rule soundness and negative checks", 1, criterion4},
      {5, "rewrite soundness fuzz (500 graphs)", 60, criterion5},
      {6, "game vs oracle soundness (200 gadgets)", 300, criterion6},
      {7, "refresh simulatable, DOM not PINI", 10, criterion7},
      {8, "PINI composition", 120, criterion8},
      {9, "spectral invariants", 30, criterion9},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.run();
    } catch (const Failure& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (ok && secs > c.limit_seconds) {
      ok = false;
      detail = "over the time limit";
    }
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << c.id << ": " << c.title << " (" << secs << " s, limit "
              << c.limit_seconds << " s)";
    if (!detail.empty()) std::cout << ": " << detail;
    std::cout << std::endl;
    failed += ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
