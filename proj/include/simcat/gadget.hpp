#pragma once

// Gadget description language (.gdl) and its lowering to gate netlists and
// observation diagrams.
//
//   gadget <name>
//   input <wire> [domain <int>] [share <group>]
//   random <wire>
//   <wire> = xor <w1> <w2> | and <w1> <w2> | not <w1> | copy <w1>
//   output <wire> [domain <int>]
//   probe <wire>
//
// `#` starts a comment. Wires are defined once and before use.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simcat/diagram.hpp"

namespace simcat {

enum class AssignOp : std::uint8_t { kXor, kAnd, kNot, kCopy };

struct GadgetInput {
  std::string wire;
  std::optional<int> domain;
  std::optional<std::string> group;
};

struct GadgetOutput {
  std::string wire;
  std::optional<int> domain;
};

struct Assignment {
  std::string wire;
  AssignOp op;
  std::vector<std::string> args;
  int line = 0;
};

struct GadgetAst {
  std::string name;
  std::vector<GadgetInput> inputs;
  std::vector<std::string> randoms;
  std::vector<Assignment> assignments;
  std::vector<GadgetOutput> outputs;
  std::vector<std::string> probes;
  // group -> share wires in declaration order
  std::map<std::string, std::vector<std::string>> sharings;
};

// Throws ParseError (syntax, duplicate definition, undefined wire, cycle).
GadgetAst parse_gadget(std::string_view text);
GadgetAst load_gadget(const std::string& path);
// Prints `ast` back in .gdl syntax; parse_gadget(to_source(a)) == a.
std::string to_source(const GadgetAst& ast);

bool operator==(const GadgetInput&, const GadgetInput&);
bool operator==(const GadgetOutput&, const GadgetOutput&);
bool operator==(const Assignment&, const Assignment&);
bool operator==(const GadgetAst&, const GadgetAst&);

// ---------------------------------------------------------------------------

using SignalId = int;

enum class GateOp : std::uint8_t { kXor, kAnd, kTrue, kFalse };

struct Gate {
  GateOp op;
  SignalId a = -1;  // operands (unused for constants)
  SignalId b = -1;
};

/// Flattened gate-level circuit. Signals are numbered: inputs first
/// (declaration order), then randoms, then one signal per gate in
/// topological order.
struct Netlist {
  std::string name;
  std::vector<std::string> input_names;
  std::vector<std::optional<int>> input_domains;
  std::vector<std::string> random_names;
  std::vector<Gate> gates;
  std::vector<std::string> signal_names;  // indexed by SignalId

  struct Port {
    std::string name;
    SignalId signal;
    std::optional<int> domain;
  };
  std::vector<Port> outputs;
  std::vector<Port> probes;
  // every named wire (including copies, which alias their source)
  std::map<std::string, SignalId> wires;
  std::map<std::string, std::vector<SignalId>> sharings;

  int num_inputs() const { return static_cast<int>(input_names.size()); }
  int num_randoms() const { return static_cast<int>(random_names.size()); }
  SignalId random_signal(int r) const { return num_inputs() + r; }
  SignalId gate_signal(std::size_t gate) const {
    return num_inputs() + num_randoms() + static_cast<SignalId>(gate);
  }
  int num_signals() const { return num_inputs() + num_randoms() + static_cast<int>(gates.size()); }
  bool is_input(SignalId s) const { return s < num_inputs(); }
  bool is_random(SignalId s) const { return s >= num_inputs() && s < num_inputs() + num_randoms(); }
  bool is_constant(SignalId s) const;
  std::size_t count(GateOp op) const;
};

Netlist elaborate(const GadgetAst& ast);

/// What an adversary sees: a subset of the declared outputs and probes, and
/// extra taps on any named wire. Everything else is erased.
struct ObservationSpec {
  std::vector<std::string> names;

  static ObservationSpec all_outputs(const Netlist& nl);
};

// One observed item after resolution against a netlist.
struct Observed {
  std::string name;
  SignalId signal;
  bool is_output;
};

// Boundary order: observed declared outputs in declaration order, then the
// remaining names (probes or any other named wire) in the order given, without
// duplicates. Throws MalformedError for unknown names.
std::vector<Observed> resolve(const Netlist& nl, const ObservationSpec& obs);

// Diagram inputs are the netlist's non-random inputs in declaration order;
// boundary outputs are resolve(nl, obs) in order.
Graph observation_diagram(const Netlist& nl, const ObservationSpec& obs);

}  // namespace simcat
