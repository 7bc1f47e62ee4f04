#include "simcat/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "json.hpp"
#include "simcat/error.hpp"

namespace simcat {

std::string_view to_string(SyntacticResult r) {
  switch (r) {
    case SyntacticResult::kProved: return "proved";
    case SyntacticResult::kNotShown: return "not-shown";
    case SyntacticResult::kNotApplicable: return "n/a";
  }
  return "?";
}

std::string_view to_string(OracleResult r) {
  switch (r) {
    case OracleResult::kHolds: return "holds";
    case OracleResult::kFails: return "fails";
    case OracleResult::kSkipped: return "skipped";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kPass: return "PASS";
    case Outcome::kFail: return "FAIL";
    case Outcome::kUndecided: return "UNDECIDED";
  }
  return "?";
}

namespace {

Outcome combine(SyntacticResult s, OracleResult o) {
  if (s == SyntacticResult::kProved && o == OracleResult::kFails) {
    throw Error("soundness violation: the game proved a case the oracle refutes");
  }
  if (o == OracleResult::kFails) return Outcome::kFail;
  if (s == SyntacticResult::kProved || o == OracleResult::kHolds) return Outcome::kPass;
  return Outcome::kUndecided;
}

std::string join(const std::vector<std::string>& xs, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

template <typename Set>
std::string join_ints(const Set& xs) {
  std::string out;
  for (auto x : xs) {
    if (!out.empty()) out += ",";
    out += std::to_string(x);
  }
  return out;
}

std::vector<std::string> input_names(const Netlist& nl, const std::vector<int>& idx) {
  std::vector<std::string> out;
  for (int i : idx) out.push_back(nl.input_names[i]);
  return out;
}

// Visits every k-subset of {0..n-1} in lexicographic order.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(static_cast<std::size_t>(k));
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == k) {
      fn(pick);
      return;
    }
    for (int i = start; i <= n - (k - depth); ++i) {
      pick[depth] = i;
      rec(i + 1, depth + 1);
    }
  };
  if (k <= n) rec(0, 0);
}

void require_input_domains(const Netlist& nl) {
  for (int i = 0; i < nl.num_inputs(); ++i) {
    if (!nl.input_domains[i]) {
      throw MalformedError("input '" + nl.input_names[i] + "' has no domain annotation");
    }
  }
}

}  // namespace

Outcome Verdict::outcome() const { return combine(syntactic, oracle); }

void require_sound(const Verdict& v) { (void)combine(v.syntactic, v.oracle); }

std::vector<std::pair<std::string, SignalId>> probe_candidates(const Netlist& nl) {
  std::vector<std::pair<std::string, SignalId>> out;
  for (SignalId s = 0; s < nl.num_signals(); ++s) {
    if (!nl.is_constant(s)) out.emplace_back(nl.signal_names[s], s);
  }
  return out;
}

// ---------------------------------------------------------------------------

Verdict check_sim(const Netlist& nl, const ObservationSpec& obs, int d, const CheckOptions& options) {
  Verdict v;
  v.property = "sim";
  {
    std::vector<std::string> names;
    for (const auto& o : resolve(nl, obs)) names.push_back(o.name);
    v.case_label = "observe={" + join(names) + "} d=" + std::to_string(d);
  }

  PropagateOptions popts;
  popts.check_semantics = options.check_rewrite_semantics;
  auto [fix, trace] = propagate_erases(observation_diagram(nl, obs), popts);
  auto erased = erased_inputs(fix);
  for (int i : erased) v.erased_inputs.push_back(nl.input_names[i]);
  v.syntactic = nl.num_inputs() - static_cast<int>(erased.size()) <= d ? SyntacticResult::kProved
                                                                         : SyntacticResult::kNotShown;
  v.trace = std::move(trace);

  if (options.use_oracle) {
    try {
      auto w = dependency_support(nl, obs, options.oracle);
      v.witness = input_names(nl, w.inputs);
      v.oracle = static_cast<int>(w.inputs.size()) <= d ? OracleResult::kHolds : OracleResult::kFails;
      for (int i : w.inputs) {
        if (erased.count(i)) {
          throw Error("soundness violation: input '" + nl.input_names[i] +
                      "' is erased by the game but in the oracle support");
        }
      }
    } catch (const CapacityError& ex) {
      v.oracle = OracleResult::kSkipped;
      v.note = ex.what();
    }
  }
  require_sound(v);
  return v;
}

std::set<int> domains_receiving_erase(const Netlist& nl, const ObservationSpec& obs) {
  require_input_domains(nl);
  auto [fix, trace] = propagate_erases(observation_diagram(nl, obs));
  auto erased = erased_inputs(fix);
  std::map<int, bool> all_erased;
  for (int i = 0; i < nl.num_inputs(); ++i) {
    int dom = *nl.input_domains[i];
    auto [it, fresh] = all_erased.emplace(dom, true);
    it->second = it->second && erased.count(i) > 0;
  }
  std::set<int> out;
  for (auto [dom, yes] : all_erased) {
    if (yes) out.insert(dom);
  }
  return out;
}

PiniReport check_pini(const Netlist& nl, int t, int max_probes, const CheckOptions& options) {
  if (t < 1) throw MalformedError("PINI order t must be at least 1");
  if (max_probes < 0) throw MalformedError("probe count must be non-negative");
  require_input_domains(nl);
  std::set<int> input_domains;
  for (const auto& d : nl.input_domains) input_domains.insert(*d);
  std::set<int> output_domain_set;
  for (const auto& o : nl.outputs) {
    if (!o.domain) throw MalformedError("output '" + o.name + "' has no domain annotation");
    output_domain_set.insert(*o.domain);
  }
  for (int d : input_domains) {
    if (d < 0 || d >= t) throw MalformedError("input domain " + std::to_string(d) + " outside [0, t)");
  }
  const std::vector<int> out_domains(output_domain_set.begin(), output_domain_set.end());
  const auto candidates = probe_candidates(nl);

  bool oracle_enabled = options.use_oracle;
  if (oracle_enabled) {
    try {
      check_cap(nl, options.oracle);
    } catch (const CapacityError&) {
      oracle_enabled = false;
    }
  }

  PiniReport report;
  report.t = t;
  report.max_probes = max_probes;
  for (int p = 0; p <= std::min(max_probes, t - 1); ++p) {
    for_each_subset(static_cast<int>(candidates.size()), p, [&](const std::vector<int>& probe_idx) {
      for (int o = 0; p + o < t && o <= static_cast<int>(out_domains.size()); ++o) {
        for_each_subset(static_cast<int>(out_domains.size()), o, [&](const std::vector<int>& dom_idx) {
          PiniCase c;
          ObservationSpec obs;
          for (int k : probe_idx) c.probes.push_back(candidates[k].first);
          for (int k : dom_idx) c.output_domains.push_back(out_domains[k]);
          for (const auto& out : nl.outputs) {
            if (std::find(c.output_domains.begin(), c.output_domains.end(), *out.domain) !=
                c.output_domains.end()) {
              obs.names.push_back(out.name);
            }
          }
          obs.names.insert(obs.names.end(), c.probes.begin(), c.probes.end());
          c.required = t - (p + o);

          c.erased_domains = domains_receiving_erase(nl, obs);
          c.syntactic = static_cast<int>(c.erased_domains.size()) >= c.required
                            ? SyntacticResult::kProved
                            : SyntacticResult::kNotShown;
          if (oracle_enabled) {
            auto w = dependency_support(nl, obs, options.oracle);
            c.oracle_free_domains = input_domains;
            for (int i : w.inputs) c.oracle_free_domains.erase(*nl.input_domains[i]);
            c.oracle = static_cast<int>(c.oracle_free_domains.size()) >= c.required
                           ? OracleResult::kHolds
                           : OracleResult::kFails;
            for (int d : c.erased_domains) {
              if (!c.oracle_free_domains.count(d)) {
                throw Error("soundness violation: domain " + std::to_string(d) +
                            " receives an erase but the oracle support touches it");
              }
            }
          }
          c.outcome = combine(c.syntactic, c.oracle);
          report.cases.push_back(std::move(c));
        });
      }
    });
  }

  report.outcome = Outcome::kPass;
  for (const auto& c : report.cases) {
    if (c.outcome == Outcome::kFail) {
      report.outcome = Outcome::kFail;
      break;
    }
    if (c.outcome == Outcome::kUndecided) report.outcome = Outcome::kUndecided;
  }
  return report;
}

// ---------------------------------------------------------------------------

namespace {

Verdict check_noninterference(const Netlist& nl, int d, bool strong, const CheckOptions& options) {
  Verdict v;
  v.property = strong ? "sni" : "ni";
  v.case_label = "d=" + std::to_string(d);
  if (d < 0) throw MalformedError("order d must be non-negative");
  if (nl.sharings.empty()) throw MalformedError("gadget declares no sharing groups");
  if (d == 0) {
    v.syntactic = SyntacticResult::kProved;
    v.oracle = OracleResult::kHolds;
    v.note = "vacuous for d = 0";
    return v;
  }
  v.syntactic = SyntacticResult::kNotApplicable;
  if (!options.use_oracle) {
    v.note = "decided by the oracle only";
    return v;
  }
  try {
    check_cap(nl, options.oracle);
  } catch (const CapacityError& ex) {
    v.note = ex.what();
    return v;
  }

  struct Item {
    std::string name;
    bool internal;
  };
  std::vector<Item> items;
  std::set<SignalId> output_signals;
  for (const auto& o : nl.outputs) {
    items.push_back({o.name, false});
    output_signals.insert(o.signal);
  }
  for (const auto& [name, sig] : probe_candidates(nl)) {
    if (!output_signals.count(sig)) items.push_back({name, true});
  }
  std::map<int, std::string> group_of_input;
  for (const auto& [group, sigs] : nl.sharings) {
    for (SignalId s : sigs) group_of_input[s] = group;
  }

  v.oracle = OracleResult::kHolds;
  for (int size = 1; size <= d && v.oracle == OracleResult::kHolds; ++size) {
    for_each_subset(static_cast<int>(items.size()), size, [&](const std::vector<int>& pick) {
      if (v.oracle == OracleResult::kFails) return;
      ObservationSpec obs;
      int internal = 0;
      for (int k : pick) {
        obs.names.push_back(items[k].name);
        internal += items[k].internal;
      }
      const int bound = strong ? internal : size;
      auto w = dependency_support(nl, obs, options.oracle);
      std::map<std::string, int> shares;
      for (int i : w.inputs) {
        if (auto it = group_of_input.find(i); it != group_of_input.end()) ++shares[it->second];
      }
      for (const auto& [group, count] : shares) {
        if (count > bound) {
          v.oracle = OracleResult::kFails;
          v.witness = obs.names;
          v.note = "support {" + join(input_names(nl, w.inputs)) + "} uses " + std::to_string(count) +
                   " shares of '" + group + "', allowed " + std::to_string(bound);
          return;
        }
      }
    });
  }
  return v;
}

}  // namespace

Verdict check_ni(const Netlist& nl, int d, const CheckOptions& options) {
  return check_noninterference(nl, d, false, options);
}

Verdict check_sni(const Netlist& nl, int d, const CheckOptions& options) {
  return check_noninterference(nl, d, true, options);
}

// ---------------------------------------------------------------------------

GadgetAst compose(const GadgetAst& f, const GadgetAst& g, const Wiring& wiring) {
  auto find_output = [&](const std::string& name) -> const GadgetOutput& {
    for (const auto& o : g.outputs) {
      if (o.wire == name) return o;
    }
    throw MalformedError("dangling wiring: '" + g.name + "' has no output '" + name + "'");
  };
  auto find_input = [&](const std::string& name) -> const GadgetInput& {
    for (const auto& i : f.inputs) {
      if (i.wire == name) return i;
    }
    throw MalformedError("dangling wiring: '" + f.name + "' has no input '" + name + "'");
  };

  std::map<std::string, std::string> feeds;  // f-input -> g-output
  std::set<std::string> used_outputs;
  for (const auto& [out, in] : wiring) {
    const auto& go = find_output(out);
    const auto& fi = find_input(in);
    if (go.domain != fi.domain) {
      auto show = [](const std::optional<int>& d) { return d ? std::to_string(*d) : std::string("none"); };
      throw MalformedError("domain mismatch wiring " + out + " (domain " + show(go.domain) + ") to " +
                           in + " (domain " + show(fi.domain) + ")");
    }
    if (!feeds.emplace(in, out).second) throw MalformedError("input '" + in + "' wired twice");
    if (!used_outputs.insert(out).second) throw MalformedError("output '" + out + "' wired twice");
  }

  auto gp = [](const std::string& w) { return "g." + w; };
  auto fp = [](const std::string& w) { return "f." + w; };

  GadgetAst r;
  r.name = f.name + "_after_" + g.name;
  for (const auto& in : g.inputs) {
    GadgetInput x{gp(in.wire), in.domain, in.group ? std::optional(gp(*in.group)) : std::nullopt};
    if (x.group) r.sharings[*x.group].push_back(x.wire);
    r.inputs.push_back(std::move(x));
  }
  for (const auto& in : f.inputs) {
    if (feeds.count(in.wire)) continue;
    GadgetInput x{fp(in.wire), in.domain, in.group ? std::optional(fp(*in.group)) : std::nullopt};
    if (x.group) r.sharings[*x.group].push_back(x.wire);
    r.inputs.push_back(std::move(x));
  }
  for (const auto& w : g.randoms) r.randoms.push_back(gp(w));
  for (const auto& w : f.randoms) r.randoms.push_back(fp(w));
  for (const auto& a : g.assignments) {
    Assignment x{gp(a.wire), a.op, {}, 0};
    for (const auto& arg : a.args) x.args.push_back(gp(arg));
    r.assignments.push_back(std::move(x));
  }
  for (const auto& in : f.inputs) {
    if (auto it = feeds.find(in.wire); it != feeds.end()) {
      r.assignments.push_back({fp(in.wire), AssignOp::kCopy, {gp(it->second)}, 0});
    }
  }
  for (const auto& a : f.assignments) {
    Assignment x{fp(a.wire), a.op, {}, 0};
    for (const auto& arg : a.args) x.args.push_back(fp(arg));
    r.assignments.push_back(std::move(x));
  }
  for (const auto& o : f.outputs) r.outputs.push_back({fp(o.wire), o.domain});
  for (const auto& o : g.outputs) {
    if (!used_outputs.count(o.wire)) r.outputs.push_back({gp(o.wire), o.domain});
  }
  for (const auto& p : g.probes) r.probes.push_back(gp(p));
  for (const auto& p : f.probes) r.probes.push_back(fp(p));
  return r;
}

// ---------------------------------------------------------------------------
// Reports

std::string to_text(const Verdict& v) {
  std::ostringstream os;
  os << v.property << ' ' << v.case_label << ": " << to_string(v.outcome()) << " (game: "
     << to_string(v.syntactic) << ", oracle: " << to_string(v.oracle) << ")\n";
  if (v.syntactic != SyntacticResult::kNotApplicable) {
    os << "  erased inputs: {" << join(v.erased_inputs) << "}\n";
  }
  if (v.oracle != OracleResult::kSkipped || !v.witness.empty()) {
    os << "  witness: {" << join(v.witness) << "}\n";
  }
  if (!v.note.empty()) os << "  note: " << v.note << '\n';
  return os.str();
}

std::string to_text(const PiniReport& r) {
  std::ostringstream os;
  os << "pini t=" << r.t << " probes<=" << r.max_probes << ": " << to_string(r.outcome) << " ("
     << r.cases.size() << " cases)\n";
  for (const auto& c : r.cases) {
    os << "  probes={" << join(c.probes) << "} outputs={" << join_ints(c.output_domains)
       << "} need=" << c.required << " erased={" << join_ints(c.erased_domains) << "}";
    if (c.oracle != OracleResult::kSkipped) os << " oracle-free={" << join_ints(c.oracle_free_domains) << "}";
    os << " game=" << to_string(c.syntactic) << " oracle=" << to_string(c.oracle) << ' '
       << to_string(c.outcome) << '\n';
  }
  return os.str();
}

std::string to_json(const Verdict& v, const std::string& trace_file) {
  nlohmann::ordered_json j;
  j["property"] = v.property;
  j["case"] = v.case_label;
  j["result"] = std::string(to_string(v.outcome()));
  j["syntactic"] = std::string(to_string(v.syntactic));
  j["oracle"] = std::string(to_string(v.oracle));
  j["erased_inputs"] = v.erased_inputs;
  j["witness"] = v.witness;
  if (!v.note.empty()) j["note"] = v.note;
  if (v.trace) j["rewrite_steps"] = v.trace->steps.size();
  if (!trace_file.empty()) j["trace_file"] = trace_file;
  return j.dump(2) + "\n";
}

std::string to_json(const PiniReport& r) {
  nlohmann::ordered_json j;
  j["property"] = "pini";
  j["t"] = r.t;
  j["max_probes"] = r.max_probes;
  j["result"] = std::string(to_string(r.outcome));
  auto cases = nlohmann::ordered_json::array();
  for (const auto& c : r.cases) {
    nlohmann::ordered_json e;
    e["probes"] = c.probes;
    e["output_domains"] = c.output_domains;
    e["required"] = c.required;
    e["erased_domains"] = c.erased_domains;
    if (c.oracle != OracleResult::kSkipped) e["oracle_free_domains"] = c.oracle_free_domains;
    e["syntactic"] = std::string(to_string(c.syntactic));
    e["oracle"] = std::string(to_string(c.oracle));
    e["result"] = std::string(to_string(c.outcome));
    cases.push_back(std::move(e));
  }
  j["cases"] = std::move(cases);
  return j.dump(2) + "\n";
}

}  // namespace simcat
