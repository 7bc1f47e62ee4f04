#pragma once

// Security-notion checkers. Each check runs the erase-propagation game on an
// observation diagram (the syntactic side) and, when the gadget fits under the
// oracle cap, cross-checks against exhaustive enumeration.
//
// The syntactic side either proves a case or reports NotShown; only the oracle
// can refute one.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "simcat/gadget.hpp"
#include "simcat/oracle.hpp"
#include "simcat/rewrite.hpp"

namespace simcat {

enum class SyntacticResult { kProved, kNotShown, kNotApplicable };
enum class OracleResult { kHolds, kFails, kSkipped };
enum class Outcome { kPass, kFail, kUndecided };

std::string_view to_string(SyntacticResult r);
std::string_view to_string(OracleResult r);
std::string_view to_string(Outcome o);

struct CheckOptions {
  bool use_oracle = true;
  OracleOptions oracle;
  // Compare eval before/after erase propagation (costly on wide diagrams).
  bool check_rewrite_semantics = false;
};

struct Verdict {
  std::string property;
  std::string case_label;
  SyntacticResult syntactic = SyntacticResult::kNotShown;
  OracleResult oracle = OracleResult::kSkipped;
  std::vector<std::string> erased_inputs;  // names, game fixpoint
  std::vector<std::string> witness;        // oracle support, or failing selection
  std::string note;
  std::optional<RewriteTrace> trace;

  // Pass if either side establishes the property, Fail if the oracle refutes
  // it, Undecided otherwise.
  Outcome outcome() const;
};

// Throws Error if a syntactic proof coexists with an oracle refutation.
void require_sound(const Verdict& v);

Verdict check_sim(const Netlist& nl, const ObservationSpec& obs, int d, const CheckOptions& options = {});

// Domains all of whose input shares end in an erase at the game's fixpoint.
// Throws MalformedError when an input has no domain.
std::set<int> domains_receiving_erase(const Netlist& nl, const ObservationSpec& obs);

struct PiniCase {
  std::vector<std::string> probes;
  std::vector<int> output_domains;
  int required = 0;                 // t - (p + o)
  std::set<int> erased_domains;     // game
  std::set<int> oracle_free_domains;  // domains untouched by the oracle support
  SyntacticResult syntactic = SyntacticResult::kNotShown;
  OracleResult oracle = OracleResult::kSkipped;
  Outcome outcome = Outcome::kUndecided;
};

struct PiniReport {
  int t = 0;
  int max_probes = 0;
  std::vector<PiniCase> cases;
  Outcome outcome = Outcome::kUndecided;
};

// Enumerates probe sets (size <= max_probes) over every distinct non-constant
// signal and output-domain sets with p + o < t. A case passes when at least
// t - (p + o) input domains receive an erase.
PiniReport check_pini(const Netlist& nl, int t, int max_probes, const CheckOptions& options = {});

// Oracle-only notions over the declared sharing groups. For every observation
// set P of size <= d (outputs and internal wires), NI requires at most |P|
// shares of each group in the support; SNI at most the number of internal
// wires in P.
Verdict check_ni(const Netlist& nl, int d, const CheckOptions& options = {});
Verdict check_sni(const Netlist& nl, int d, const CheckOptions& options = {});

// Signals that may be probed: every non-constant signal once, under its first
// declared name.
std::vector<std::pair<std::string, SignalId>> probe_candidates(const Netlist& nl);

// f ∘ g: `wiring` maps g-output names to f-input names. Wires are renamed with
// `g.` / `f.` prefixes; wired f-inputs become copies of the g-outputs feeding
// them; unwired g-outputs stay outputs after f's.
using Wiring = std::vector<std::pair<std::string, std::string>>;
GadgetAst compose(const GadgetAst& f, const GadgetAst& g, const Wiring& wiring);

// Text and JSON renderings of reports.
std::string to_text(const Verdict& v);
std::string to_text(const PiniReport& r);
std::string to_json(const Verdict& v, const std::string& trace_file = {});
std::string to_json(const PiniReport& r);

}  // namespace simcat
