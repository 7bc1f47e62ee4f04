#include "simcat/gadget.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "simcat/error.hpp"

namespace simcat {

bool operator==(const GadgetInput& a, const GadgetInput& b) {
  return a.wire == b.wire && a.domain == b.domain && a.group == b.group;
}
bool operator==(const GadgetOutput& a, const GadgetOutput& b) {
  return a.wire == b.wire && a.domain == b.domain;
}
// Source positions are not part of a gadget's identity.
bool operator==(const Assignment& a, const Assignment& b) {
  return a.wire == b.wire && a.op == b.op && a.args == b.args;
}
bool operator==(const GadgetAst& a, const GadgetAst& b) {
  return a.name == b.name && a.inputs == b.inputs && a.randoms == b.randoms &&
         a.assignments == b.assignments && a.outputs == b.outputs && a.probes == b.probes &&
         a.sharings == b.sharings;
}

namespace {

struct Token {
  std::string text;
  int column;
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    if (line[i] == '=') {
      out.push_back({"=", static_cast<int>(i) + 1});
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '=') ++i;
    out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']';
  });
}

const std::set<std::string> kKeywords = {"gadget", "input", "random", "output", "probe",
                                         "domain", "share", "xor", "and", "not", "copy"};

struct Definition {
  int line;
  int column;
  std::size_t assignment = SIZE_MAX;  // index into assignments, if any
};

class GadgetParser {
 public:
  GadgetAst parse(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    bool have_header = false;
    while (std::getline(in, raw)) {
      ++lineno;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
      auto toks = tokenize(raw);
      if (toks.empty()) continue;
      line_ = lineno;
      if (!have_header) {
        if (toks[0].text != "gadget") fail("expected 'gadget <name>' header", toks[0]);
        if (toks.size() != 2) fail("expected 'gadget <name>'", toks.size() > 2 ? toks[2] : toks[0]);
        ast_.name = toks[1].text;
        have_header = true;
        continue;
      }
      statement(toks);
    }
    if (!have_header) throw ParseError("missing 'gadget <name>' header", std::max(lineno, 1), 1);
    check_uses();
    return std::move(ast_);
  }

 private:
  void statement(const std::vector<Token>& t) {
    const std::string& head = t[0].text;
    if (head == "gadget") fail("duplicate 'gadget' header", t[0]);
    if (head == "input") return input(t);
    if (head == "random") {
      if (t.size() != 2) fail("expected 'random <wire>'", t.size() > 2 ? t[2] : t[0]);
      define(t[1]);
      ast_.randoms.push_back(t[1].text);
      return;
    }
    if (head == "output") return output(t);
    if (head == "probe") {
      if (t.size() != 2) fail("expected 'probe <wire>'", t.size() > 2 ? t[2] : t[0]);
      name_token(t[1]);
      if (std::find(ast_.probes.begin(), ast_.probes.end(), t[1].text) != ast_.probes.end()) {
        fail("duplicate probe '" + t[1].text + "'", t[1]);
      }
      ast_.probes.push_back(t[1].text);
      refs_.push_back(t[1]);
      ref_lines_.push_back(line_);
      return;
    }
    if (t.size() >= 2 && t[1].text == "=") return assignment(t);
    fail("unknown statement '" + head + "'", t[0]);
  }

  void input(const std::vector<Token>& t) {
    if (t.size() < 2) fail("expected 'input <wire>'", t[0]);
    define(t[1]);
    GadgetInput in{t[1].text, std::nullopt, std::nullopt};
    std::size_t i = 2;
    while (i < t.size()) {
      if (t[i].text == "domain" && !in.domain) {
        if (i + 1 >= t.size()) fail("expected domain number", t[i]);
        in.domain = number(t[i + 1]);
        i += 2;
      } else if (t[i].text == "share" && !in.group) {
        if (i + 1 >= t.size()) fail("expected sharing group name", t[i]);
        name_token(t[i + 1]);
        in.group = t[i + 1].text;
        i += 2;
      } else {
        fail("unexpected '" + t[i].text + "'", t[i]);
      }
    }
    if (in.group) ast_.sharings[*in.group].push_back(in.wire);
    ast_.inputs.push_back(std::move(in));
  }

  void output(const std::vector<Token>& t) {
    if (t.size() < 2) fail("expected 'output <wire>'", t[0]);
    name_token(t[1]);
    GadgetOutput out{t[1].text, std::nullopt};
    if (t.size() == 4 && t[2].text == "domain") {
      out.domain = number(t[3]);
    } else if (t.size() != 2) {
      fail("expected 'output <wire> [domain <int>]'", t[2]);
    }
    for (const auto& o : ast_.outputs) {
      if (o.wire == out.wire) fail("duplicate output '" + out.wire + "'", t[1]);
    }
    refs_.push_back(t[1]);
    ref_lines_.push_back(line_);
    ast_.outputs.push_back(std::move(out));
  }

  void assignment(const std::vector<Token>& t) {
    if (t.size() < 3) fail("expected an operator after '='", t[1]);
    const std::string& op = t[2].text;
    Assignment a{t[0].text, AssignOp::kXor, {}, line_};
    std::size_t want = 2;
    if (op == "xor") {
      a.op = AssignOp::kXor;
    } else if (op == "and") {
      a.op = AssignOp::kAnd;
    } else if (op == "not") {
      a.op = AssignOp::kNot;
      want = 1;
    } else if (op == "copy") {
      a.op = AssignOp::kCopy;
      want = 1;
    } else {
      fail("unknown operator '" + op + "'", t[2]);
    }
    if (t.size() - 3 != want) {
      fail("'" + op + "' takes " + std::to_string(want) + " operand" + (want == 1 ? "" : "s") +
               ", got " + std::to_string(t.size() - 3),
           t.size() > 3 + want ? t[3 + want] : t[2]);
    }
    define(t[0], ast_.assignments.size());
    for (std::size_t i = 3; i < t.size(); ++i) {
      name_token(t[i]);
      a.args.push_back(t[i].text);
      arg_tokens_[ast_.assignments.size()].push_back(t[i]);
    }
    ast_.assignments.push_back(std::move(a));
  }

  void define(const Token& tok, std::size_t assignment = SIZE_MAX) {
    name_token(tok);
    auto [it, fresh] = defs_.emplace(tok.text, Definition{line_, tok.column, assignment});
    if (!fresh) {
      fail("duplicate definition of '" + tok.text + "' (first defined on line " +
               std::to_string(it->second.line) + ")",
           tok);
    }
  }

  void name_token(const Token& tok) {
    if (!is_identifier(tok.text) || kKeywords.count(tok.text)) {
      fail("expected a wire name, got '" + tok.text + "'", tok);
    }
  }

  int number(const Token& tok) {
    if (tok.text.empty() || tok.text.size() > 9 ||
        !std::all_of(tok.text.begin(), tok.text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      fail("expected a non-negative integer, got '" + tok.text + "'", tok);
    }
    return std::stoi(tok.text);
  }

  // Does `from`'s definition (transitively) read `target`?
  bool reaches(const std::string& from, const std::string& target, std::set<std::string>& seen) {
    if (from == target) return true;
    if (!seen.insert(from).second) return false;
    auto it = defs_.find(from);
    if (it == defs_.end() || it->second.assignment == SIZE_MAX) return false;
    for (const auto& a : ast_.assignments[it->second.assignment].args) {
      if (reaches(a, target, seen)) return true;
    }
    return false;
  }

  void check_uses() {
    for (std::size_t i = 0; i < ast_.assignments.size(); ++i) {
      const auto& a = ast_.assignments[i];
      line_ = a.line;
      for (const auto& tok : arg_tokens_[i]) {
        auto it = defs_.find(tok.text);
        if (it == defs_.end()) fail("undefined wire '" + tok.text + "'", tok);
        std::set<std::string> seen;
        if (reaches(tok.text, a.wire, seen)) {
          fail("combinational cycle through '" + a.wire + "'", tok);
        }
        if (it->second.line > a.line) {
          fail("wire '" + tok.text + "' used before its definition on line " +
                   std::to_string(it->second.line),
               tok);
        }
      }
    }
    for (std::size_t i = 0; i < refs_.size(); ++i) {
      line_ = ref_lines_[i];
      if (!defs_.count(refs_[i].text)) fail("undefined wire '" + refs_[i].text + "'", refs_[i]);
    }
  }

  [[noreturn]] void fail(const std::string& message, const Token& at) {
    throw ParseError(message, line_, at.column);
  }

  GadgetAst ast_;
  int line_ = 0;
  std::map<std::string, Definition> defs_;
  std::map<std::size_t, std::vector<Token>> arg_tokens_;
  std::vector<Token> refs_;
  std::vector<int> ref_lines_;
};

}  // namespace

GadgetAst parse_gadget(std::string_view text) { return GadgetParser().parse(text); }

GadgetAst load_gadget(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_gadget(buf.str());
}

std::string to_source(const GadgetAst& ast) {
  std::ostringstream os;
  os << "gadget " << ast.name << '\n';
  for (const auto& in : ast.inputs) {
    os << "input " << in.wire;
    if (in.domain) os << " domain " << *in.domain;
    if (in.group) os << " share " << *in.group;
    os << '\n';
  }
  for (const auto& r : ast.randoms) os << "random " << r << '\n';
  for (const auto& a : ast.assignments) {
    static constexpr const char* kOps[] = {"xor", "and", "not", "copy"};
    os << a.wire << " = " << kOps[static_cast<int>(a.op)];
    for (const auto& x : a.args) os << ' ' << x;
    os << '\n';
  }
  for (const auto& o : ast.outputs) {
    os << "output " << o.wire;
    if (o.domain) os << " domain " << *o.domain;
    os << '\n';
  }
  for (const auto& p : ast.probes) os << "probe " << p << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------

bool Netlist::is_constant(SignalId s) const {
  if (s < num_inputs() + num_randoms()) return false;
  auto op = gates[static_cast<std::size_t>(s - num_inputs() - num_randoms())].op;
  return op == GateOp::kTrue || op == GateOp::kFalse;
}

std::size_t Netlist::count(GateOp op) const {
  return static_cast<std::size_t>(
      std::count_if(gates.begin(), gates.end(), [op](const Gate& g) { return g.op == op; }));
}

Netlist elaborate(const GadgetAst& ast) {
  Netlist nl;
  nl.name = ast.name;
  for (const auto& in : ast.inputs) {
    nl.wires[in.wire] = static_cast<SignalId>(nl.signal_names.size());
    nl.signal_names.push_back(in.wire);
    nl.input_names.push_back(in.wire);
    nl.input_domains.push_back(in.domain);
  }
  for (const auto& r : ast.randoms) {
    nl.wires[r] = static_cast<SignalId>(nl.signal_names.size());
    nl.signal_names.push_back(r);
    nl.random_names.push_back(r);
  }
  auto lookup = [&](const std::string& w) {
    auto it = nl.wires.find(w);
    if (it == nl.wires.end()) throw MalformedError("undefined wire '" + w + "'");
    return it->second;
  };
  auto add_gate = [&](Gate g, std::string label) {
    nl.gates.push_back(g);
    nl.signal_names.push_back(std::move(label));
    return static_cast<SignalId>(nl.signal_names.size() - 1);
  };
  for (const auto& a : ast.assignments) {
    switch (a.op) {
      case AssignOp::kXor:
        nl.wires[a.wire] = add_gate({GateOp::kXor, lookup(a.args[0]), lookup(a.args[1])}, a.wire);
        break;
      case AssignOp::kAnd:
        nl.wires[a.wire] = add_gate({GateOp::kAnd, lookup(a.args[0]), lookup(a.args[1])}, a.wire);
        break;
      case AssignOp::kNot: {
        SignalId x = lookup(a.args[0]);
        SignalId one = add_gate({GateOp::kTrue}, a.wire + ".true");
        nl.wires[a.wire] = add_gate({GateOp::kXor, x, one}, a.wire);
        break;
      }
      case AssignOp::kCopy: nl.wires[a.wire] = lookup(a.args[0]); break;
    }
  }
  for (const auto& o : ast.outputs) nl.outputs.push_back({o.wire, lookup(o.wire), o.domain});
  for (const auto& p : ast.probes) nl.probes.push_back({p, lookup(p), std::nullopt});
  for (const auto& [group, wires] : ast.sharings) {
    for (const auto& w : wires) nl.sharings[group].push_back(lookup(w));
  }
  return nl;
}

ObservationSpec ObservationSpec::all_outputs(const Netlist& nl) {
  ObservationSpec s;
  for (const auto& o : nl.outputs) s.names.push_back(o.name);
  return s;
}

std::vector<Observed> resolve(const Netlist& nl, const ObservationSpec& obs) {
  std::set<std::string> wanted;
  for (const auto& n : obs.names) {
    if (!nl.wires.count(n)) throw MalformedError("cannot observe unknown wire '" + n + "'");
    wanted.insert(n);
  }
  std::vector<Observed> out;
  std::set<std::string> taken;
  for (const auto& o : nl.outputs) {
    if (wanted.count(o.name)) {
      out.push_back({o.name, o.signal, true});
      taken.insert(o.name);
    }
  }
  for (const auto& n : obs.names) {
    if (taken.insert(n).second) out.push_back({n, nl.wires.at(n), false});
  }
  return out;
}

Graph observation_diagram(const Netlist& nl, const ObservationSpec& obs) {
  const auto observed = resolve(nl, obs);
  Graph g(nl.num_inputs(), static_cast<int>(observed.size()));

  // Producer port of every signal.
  std::vector<PortRef> producer(static_cast<std::size_t>(nl.num_signals()));
  std::vector<NodeId> gate_node(nl.gates.size());
  for (int i = 0; i < nl.num_inputs(); ++i) producer[i] = {g.input(i), 0};
  for (int r = 0; r < nl.num_randoms(); ++r) producer[nl.random_signal(r)] = {g.add_node(Generator::kRandom), 0};
  for (std::size_t k = 0; k < nl.gates.size(); ++k) {
    Generator gen = Generator::kXor;
    switch (nl.gates[k].op) {
      case GateOp::kXor: gen = Generator::kXor; break;
      case GateOp::kAnd: gen = Generator::kAnd; break;
      case GateOp::kTrue: gen = Generator::kTrue; break;
      case GateOp::kFalse: gen = Generator::kFalse; break;
    }
    gate_node[k] = g.add_node(gen);
    producer[nl.gate_signal(k)] = {gate_node[k], 0};
  }

  // Consumers of every signal, in a fixed order: gate operands, declared
  // outputs (observed or erased), extra observation taps.
  std::vector<std::vector<PortRef>> consumers(producer.size());
  for (std::size_t k = 0; k < nl.gates.size(); ++k) {
    const Gate& gate = nl.gates[k];
    if (gate.op == GateOp::kXor || gate.op == GateOp::kAnd) {
      consumers[gate.a].push_back({gate_node[k], 0});
      consumers[gate.b].push_back({gate_node[k], 1});
    }
  }
  auto boundary_of = [&](const std::string& name) {
    for (std::size_t j = 0; j < observed.size(); ++j) {
      if (observed[j].name == name) return static_cast<int>(j);
    }
    return -1;
  };
  for (const auto& o : nl.outputs) {
    int j = boundary_of(o.name);
    if (j >= 0 && observed[j].is_output) {
      consumers[o.signal].push_back({g.output(j), 0});
    } else {
      consumers[o.signal].push_back({g.add_node(Generator::kErase), 0});
    }
  }
  for (std::size_t j = 0; j < observed.size(); ++j) {
    if (!observed[j].is_output) consumers[observed[j].signal].push_back({g.output(static_cast<int>(j)), 0});
  }

  for (std::size_t s = 0; s < producer.size(); ++s) {
    auto& users = consumers[s];
    if (users.empty()) users.push_back({g.add_node(Generator::kErase), 0});
    PortRef cur = producer[s];
    for (std::size_t i = 0; i + 1 < users.size(); ++i) {
      NodeId dup = g.add_node(Generator::kDup);
      g.connect(cur, {dup, 0});
      g.connect({dup, 0}, users[i]);
      cur = {dup, 1};
    }
    g.connect(cur, users.back());
  }
  return g;
}

}  // namespace simcat
