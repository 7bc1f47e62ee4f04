#pragma once

// Equational rewriting of port graphs, oriented toward the inputs so that
// erase nodes travel backward through the circuit.

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simcat/diagram.hpp"

namespace simcat {

enum class RuleId : std::uint8_t {
  kXorUnit,        // xor with a false input is the identity wire
  kAndUnit,        // and with a true input is the identity wire
  kCopyErase,      // dup with one branch erased is the identity wire
  kGateErase,      // erase after xor/and becomes an erase on each input
  kCut,            // xor with a fresh random input: erase the other, emit a random
  kEraseRandom,    // erase after random vanishes
  kEraseConst,     // erase after false/true vanishes
  kDupBothErased,  // dup with both branches erased is an erase on its input
};

struct Equation {
  Term lhs;
  Term rhs;
};

struct Rule {
  RuleId id;
  std::string name;
  // Node the rule is anchored at when applied to a graph.
  std::string anchor;
  // Every orientation/variant of the rule; all are checked semantically.
  std::vector<Equation> equations;
};

// The rule table. Each equation is checked (eval of both sides, via terms and
// via graphs) the first time the table is requested; a failing rule throws
// Error naming it.
const std::vector<Rule>& rule_set();
const Rule& rule(RuleId id);
std::optional<RuleId> rule_from_name(std::string_view name);
void self_check(const Rule& r);

bool matches(const Graph& g, RuleId rule, NodeId site);
// Single rewrite step. Throws NoMatchError if the rule does not apply at
// `site`.
Graph apply_rule(const Graph& g, RuleId rule, NodeId site);

struct RewriteStep {
  RuleId rule;
  NodeId site;
  friend bool operator==(const RewriteStep&, const RewriteStep&) = default;
};

struct RewriteTrace {
  std::vector<RewriteStep> steps;
  Graph initial;
  Graph final;

  // One `rule@nID` line per step.
  std::string to_text() const;
  static std::vector<RewriteStep> parse_steps(std::string_view text);
};

struct PropagateOptions {
  // Re-evaluate the fixpoint and compare with the start graph.
  bool check_semantics = false;
  EvalOptions eval;
};

// Runs the rules to a fixpoint. Erase nodes are visited in creation order and
// the producer feeding each one selects the rule; once no erase can move, the
// unit and cut rules are tried on gates in creation order.
std::pair<Graph, RewriteTrace> propagate_erases(const Graph& g, const PropagateOptions& options = {});

// Replays `steps` from `initial`. With `check_semantics`, every step is
// checked for eval equality. Errors name the failing step (1-based).
Graph replay(const Graph& initial, const std::vector<RewriteStep>& steps, bool check_semantics,
             const EvalOptions& eval_options = {});

// Inputs whose wire ends in an erase node.
std::set<int> erased_inputs(const Graph& g);

/// An equation that must NOT be used: applying it changes the semantics.
struct NegativeCheck {
  std::string name;
  Term pattern;
  Term forbidden;
  std::string reason;
  // Locates an instance in a graph and rewrites it the forbidden way.
  std::function<bool(const Graph&, NodeId)> matches;
  std::function<Graph(const Graph&, NodeId)> force;
};

const std::vector<NegativeCheck>& negative_checks();

}  // namespace simcat
