#include "simcat/rewrite.hpp"

#include <charconv>
#include <sstream>

#include "simcat/error.hpp"

namespace simcat {
namespace {

Equation eq(std::string_view lhs, std::string_view rhs) {
  return {Term::parse(lhs), Term::parse(rhs)};
}

std::vector<Rule> build_rules() {
  return {
      {RuleId::kXorUnit, "xor-unit", "xor", {eq("false * 1 ; xor", "1"), eq("1 * false ; xor", "1")}},
      {RuleId::kAndUnit, "and-unit", "and", {eq("true * 1 ; and", "1"), eq("1 * true ; and", "1")}},
      {RuleId::kCopyErase, "copy-erase", "erase", {eq("dup ; 1 * erase", "1"), eq("dup ; erase * 1", "1")}},
      {RuleId::kGateErase,
       "gate-erase",
       "erase",
       {eq("xor ; erase", "erase * erase"), eq("and ; erase", "erase * erase")}},
      {RuleId::kCut, "cut", "xor", {eq("random * 1 ; xor", "erase ; random"), eq("1 * random ; xor", "erase ; random")}},
      {RuleId::kEraseRandom, "erase-random", "erase", {eq("random ; erase", "0")}},
      {RuleId::kEraseConst, "erase-const", "erase", {eq("false ; erase", "0"), eq("true ; erase", "0")}},
      {RuleId::kDupBothErased, "dup-both-erased", "erase", {eq("dup ; erase * erase", "erase")}},
  };
}

bool is_gen(const Graph& g, NodeId id, Generator gen) {
  return g.alive(id) && g.node(id).kind == Node::Kind::kGen && g.node(id).gen == gen;
}

std::optional<PortRef> producer_of(const Graph& g, NodeId id) {
  return g.source_of({id, 0});
}

// Input port of `gate` fed by a node of kind `feeder`, if any.
std::optional<int> input_fed_by(const Graph& g, NodeId gate, Generator feeder) {
  for (int p = 0; p < 2; ++p) {
    auto src = g.source_of({gate, p});
    if (src && is_gen(g, src->node, feeder)) return p;
  }
  return std::nullopt;
}

// For an erase fed by a dup: the dup and the branch the erase sits on.
std::optional<PortRef> dup_above(const Graph& g, NodeId erase) {
  if (!is_gen(g, erase, Generator::kErase)) return std::nullopt;
  auto src = producer_of(g, erase);
  if (!src || !is_gen(g, src->node, Generator::kDup)) return std::nullopt;
  return src;
}

bool other_branch_erased(const Graph& g, PortRef dup_branch) {
  auto other = g.target_of({dup_branch.node, 1 - dup_branch.port});
  return other && is_gen(g, other->node, Generator::kErase);
}

[[noreturn]] void no_match(RuleId r, NodeId site) {
  throw NoMatchError("rule " + rule(r).name + " does not match at n" + std::to_string(site));
}

// Replaces `gate` (2 -> 1) fed by `unit_port` with a plain wire from its other
// input, dropping the constant feeding `unit_port`.
Graph splice_unit(const Graph& g, NodeId gate, int unit_port) {
  Graph r = g;
  auto konst = *r.source_of({gate, unit_port});
  auto other = *r.source_of({gate, 1 - unit_port});
  auto target = *r.target_of({gate, 0});
  r.remove_node(gate);
  r.remove_node(konst.node);
  r.connect(other, target);
  return r;
}

}  // namespace

const std::vector<Rule>& rule_set() {
  static const std::vector<Rule> kRules = [] {
    auto rules = build_rules();
    for (const auto& r : rules) self_check(r);
    return rules;
  }();
  return kRules;
}

const Rule& rule(RuleId id) { return rule_set().at(static_cast<std::size_t>(id)); }

std::optional<RuleId> rule_from_name(std::string_view text) {
  for (const auto& r : rule_set()) {
    if (r.name == text) return r.id;
  }
  return std::nullopt;
}

void self_check(const Rule& r) {
  for (const auto& e : r.equations) {
    auto fail = [&](const std::string& why) {
      throw Error("rule " + r.name + " fails its semantic self-check (" + e.lhs.to_string() +
                  " = " + e.rhs.to_string() + "): " + why);
    };
    try {
      if (e.lhs.interface() != e.rhs.interface()) fail("interfaces differ");
      if (eval_term(e.lhs) != eval_term(e.rhs)) fail("term semantics differ");
      if (eval(graph_from_term(e.lhs)) != eval(graph_from_term(e.rhs))) fail("graph semantics differ");
    } catch (const TypeError& ex) {
      fail(ex.what());
    }
  }
}

bool matches(const Graph& g, RuleId r, NodeId site) {
  if (!g.alive(site)) return false;
  switch (r) {
    case RuleId::kXorUnit:
      return is_gen(g, site, Generator::kXor) && input_fed_by(g, site, Generator::kFalse);
    case RuleId::kAndUnit:
      return is_gen(g, site, Generator::kAnd) && input_fed_by(g, site, Generator::kTrue);
    case RuleId::kCut:
      return is_gen(g, site, Generator::kXor) && input_fed_by(g, site, Generator::kRandom);
    case RuleId::kCopyErase: return dup_above(g, site).has_value();
    case RuleId::kDupBothErased: {
      auto d = dup_above(g, site);
      return d && other_branch_erased(g, *d);
    }
    case RuleId::kGateErase:
    case RuleId::kEraseRandom:
    case RuleId::kEraseConst: {
      if (!is_gen(g, site, Generator::kErase)) return false;
      auto src = producer_of(g, site);
      if (!src || g.node(src->node).kind != Node::Kind::kGen) return false;
      auto gen = g.node(src->node).gen;
      if (r == RuleId::kGateErase) return gen == Generator::kXor || gen == Generator::kAnd;
      if (r == RuleId::kEraseRandom) return gen == Generator::kRandom;
      return gen == Generator::kFalse || gen == Generator::kTrue;
    }
  }
  return false;
}

Graph apply_rule(const Graph& g, RuleId r, NodeId site) {
  if (!matches(g, r, site)) no_match(r, site);
  switch (r) {
    case RuleId::kXorUnit: return splice_unit(g, site, *input_fed_by(g, site, Generator::kFalse));
    case RuleId::kAndUnit: return splice_unit(g, site, *input_fed_by(g, site, Generator::kTrue));
    case RuleId::kCut: {
      Graph out = g;
      int rp = *input_fed_by(g, site, Generator::kRandom);
      auto random = *out.source_of({site, rp});
      auto other = *out.source_of({site, 1 - rp});
      auto target = *out.target_of({site, 0});
      out.remove_node(site);
      out.remove_node(random.node);
      NodeId erase = out.add_node(Generator::kErase);
      out.connect(other, {erase, 0});
      NodeId fresh = out.add_node(Generator::kRandom);
      out.connect({fresh, 0}, target);
      return out;
    }
    case RuleId::kCopyErase: {
      Graph out = g;
      auto branch = *dup_above(g, site);
      auto feed = *out.source_of({branch.node, 0});
      auto keep = *out.target_of({branch.node, 1 - branch.port});
      out.remove_node(branch.node);
      out.remove_node(site);
      out.connect(feed, keep);
      return out;
    }
    case RuleId::kDupBothErased: {
      Graph out = g;
      auto branch = *dup_above(g, site);
      auto feed = *out.source_of({branch.node, 0});
      auto other = *out.target_of({branch.node, 1 - branch.port});
      out.remove_node(branch.node);
      out.remove_node(site);
      out.remove_node(other.node);
      NodeId erase = out.add_node(Generator::kErase);
      out.connect(feed, {erase, 0});
      return out;
    }
    case RuleId::kGateErase: {
      Graph out = g;
      NodeId gate = producer_of(g, site)->node;
      auto a = *out.source_of({gate, 0});
      auto b = *out.source_of({gate, 1});
      out.remove_node(gate);
      out.remove_node(site);
      NodeId ea = out.add_node(Generator::kErase);
      out.connect(a, {ea, 0});
      NodeId eb = out.add_node(Generator::kErase);
      out.connect(b, {eb, 0});
      return out;
    }
    case RuleId::kEraseRandom:
    case RuleId::kEraseConst: {
      Graph out = g;
      NodeId src = producer_of(g, site)->node;
      out.remove_node(site);
      out.remove_node(src);
      return out;
    }
  }
  no_match(r, site);
}

// ---------------------------------------------------------------------------

std::string RewriteTrace::to_text() const {
  std::ostringstream os;
  for (const auto& s : steps) os << rule(s.rule).name << "@n" << s.site << '\n';
  return os.str();
}

std::vector<RewriteStep> RewriteTrace::parse_steps(std::string_view text) {
  std::vector<RewriteStep> steps;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    auto at = line.find("@n");
    if (at == std::string_view::npos) throw ParseError("expected 'rule@nID'", lineno, 1);
    auto r = rule_from_name(line.substr(0, at));
    if (!r) {
      throw ParseError("step " + std::to_string(steps.size() + 1) + ": unknown rule '" +
                           std::string(line.substr(0, at)) + "'",
                       lineno, 1);
    }
    auto digits = line.substr(at + 2);
    NodeId site = 0;
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), site);
    if (ec != std::errc{} || p != digits.data() + digits.size()) {
      throw ParseError("bad site '" + std::string(digits) + "'", lineno, static_cast<int>(at) + 3);
    }
    steps.push_back({*r, site});
  }
  return steps;
}

namespace {

std::optional<RewriteStep> next_step(const Graph& g) {
  for (NodeId id : g.generator_nodes()) {
    if (!is_gen(g, id, Generator::kErase)) continue;
    for (RuleId r : {RuleId::kDupBothErased, RuleId::kCopyErase, RuleId::kGateErase,
                     RuleId::kEraseRandom, RuleId::kEraseConst}) {
      if (matches(g, r, id)) return RewriteStep{r, id};
    }
  }
  for (NodeId id : g.generator_nodes()) {
    for (RuleId r : {RuleId::kXorUnit, RuleId::kAndUnit, RuleId::kCut}) {
      if (matches(g, r, id)) return RewriteStep{r, id};
    }
  }
  return std::nullopt;
}

}  // namespace

std::pair<Graph, RewriteTrace> propagate_erases(const Graph& g, const PropagateOptions& options) {
  require_valid(g);
  RewriteTrace trace;
  trace.initial = g;
  Graph cur = g;
  // Every rule deletes at least one non-erase generator.
  const std::size_t bound = cur.generator_nodes().size() + 1;
  while (auto step = next_step(cur)) {
    cur = apply_rule(cur, step->rule, step->site);
    trace.steps.push_back(*step);
    if (trace.steps.size() > bound) throw Error("erase propagation failed to terminate");
  }
  if (options.check_semantics && eval(cur, options.eval) != eval(g, options.eval)) {
    throw Error("erase propagation changed the diagram semantics");
  }
  trace.final = cur;
  return {cur, std::move(trace)};
}

Graph replay(const Graph& initial, const std::vector<RewriteStep>& steps, bool check_semantics,
             const EvalOptions& eval_options) {
  Graph cur = initial;
  std::optional<DyadicMatrix> reference;
  if (check_semantics) reference = eval(initial, eval_options);
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const auto& s = steps[i];
    try {
      cur = apply_rule(cur, s.rule, s.site);
    } catch (const NoMatchError& ex) {
      throw NoMatchError("step " + std::to_string(i + 1) + " (" + rule(s.rule).name + "@n" +
                         std::to_string(s.site) + "): site mismatch: " + ex.what());
    }
    if (reference && eval(cur, eval_options) != *reference) {
      throw Error("step " + std::to_string(i + 1) + " changed the diagram semantics");
    }
  }
  return cur;
}

std::set<int> erased_inputs(const Graph& g) {
  std::set<int> out;
  for (int i = 0; i < g.interface().n_in; ++i) {
    auto t = g.target_of({g.input(i), 0});
    if (t && is_gen(g, t->node, Generator::kErase)) out.insert(i);
  }
  return out;
}

// ---------------------------------------------------------------------------

const std::vector<NegativeCheck>& negative_checks() {
  static const std::vector<NegativeCheck> kChecks = {
      {
          "and-random-cut",
          Term::parse("random * 1 ; and"),
          Term::parse("erase ; random"),
          "and with a fresh random input still leaks its other input",
          [](const Graph& g, NodeId site) {
            return is_gen(g, site, Generator::kAnd) && input_fed_by(g, site, Generator::kRandom);
          },
          [](const Graph& g, NodeId site) {
            auto rp = input_fed_by(g, site, Generator::kRandom);
            if (!is_gen(g, site, Generator::kAnd) || !rp) {
              throw NoMatchError("and-random-cut does not match at n" + std::to_string(site));
            }
            Graph out = g;
            auto random = *out.source_of({site, *rp});
            auto other = *out.source_of({site, 1 - *rp});
            auto target = *out.target_of({site, 0});
            out.remove_node(site);
            out.remove_node(random.node);
            NodeId erase = out.add_node(Generator::kErase);
            out.connect(other, {erase, 0});
            NodeId fresh = out.add_node(Generator::kRandom);
            out.connect({fresh, 0}, target);
            return out;
          },
      },
      {
          "dup-random-split",
          Term::parse("random ; dup"),
          Term::parse("random * random"),
          "a duplicated random is one value, not two independent ones",
          [](const Graph& g, NodeId site) {
            if (!is_gen(g, site, Generator::kDup)) return false;
            auto src = g.source_of({site, 0});
            return src && is_gen(g, src->node, Generator::kRandom);
          },
          [](const Graph& g, NodeId site) {
            auto src = g.source_of({site, 0});
            if (!is_gen(g, site, Generator::kDup) || !src || !is_gen(g, src->node, Generator::kRandom)) {
              throw NoMatchError("dup-random-split does not match at n" + std::to_string(site));
            }
            Graph out = g;
            auto t0 = *out.target_of({site, 0});
            auto t1 = *out.target_of({site, 1});
            out.remove_node(site);
            out.remove_node(src->node);
            NodeId r0 = out.add_node(Generator::kRandom);
            out.connect({r0, 0}, t0);
            NodeId r1 = out.add_node(Generator::kRandom);
            out.connect({r1, 0}, t1);
            return out;
          },
      },
  };
  return kChecks;
}

}  // namespace simcat
