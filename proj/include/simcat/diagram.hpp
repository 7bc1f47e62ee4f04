#pragma once

// PROP diagrams over the generator signature {xor, and, false, true, dup,
// erase, random}: inductive terms for IO and port graphs for rewriting, both
// interpreted as correlation matrices.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simcat/spectral.hpp"

namespace simcat {

enum class Generator : std::uint8_t { kXor, kAnd, kFalse, kTrue, kDup, kErase, kRandom };

inline constexpr Generator kAllGenerators[] = {
    Generator::kXor, Generator::kAnd,   Generator::kFalse,  Generator::kTrue,
    Generator::kDup, Generator::kErase, Generator::kRandom,
};

struct Interface {
  int n_in = 0;
  int n_out = 0;
  friend bool operator==(const Interface&, const Interface&) = default;
};

Interface arity(Generator g);
std::string_view name(Generator g);
std::optional<Generator> generator_from_name(std::string_view name);
const DyadicMatrix& generator_matrix(Generator g);
// 4x4 permutation exchanging the two index bits.
const DyadicMatrix& swap_matrix();

// ---------------------------------------------------------------------------
// Terms

class Term {
 public:
  enum class Kind : std::uint8_t { kId, kGen, kSwap, kSeq, kPar };

  static Term id(int n);
  static Term gen(Generator g);
  static Term swap();
  // `first` then `second`.
  static Term seq(Term first, Term second);
  static Term par(Term top, Term bottom);

  Kind kind() const { return kind_; }
  int id_width() const { return width_; }
  Generator generator() const { return gen_; }
  const Term& lhs() const { return *lhs_; }
  const Term& rhs() const { return *rhs_; }

  // Throws TypeError naming the offending subterm when ill-typed.
  Interface interface() const;
  std::size_t generator_count() const;

  // Textual form: `;` sequences left to right, `*` tensors (binds tighter),
  // integers are identities, `swap` and generator names are atoms.
  std::string to_string() const;
  static Term parse(std::string_view text);

  friend bool operator==(const Term& a, const Term& b);

 private:
  Kind kind_ = Kind::kId;
  int width_ = 0;
  Generator gen_ = Generator::kXor;
  std::shared_ptr<const Term> lhs_;
  std::shared_ptr<const Term> rhs_;
};

std::ostream& operator<<(std::ostream& os, const Term& t);

// Denotation by structural recursion over compose/tensor.
DyadicMatrix eval_term(const Term& t);

// ---------------------------------------------------------------------------
// Port graphs

using NodeId = std::uint32_t;

struct Node {
  enum class Kind : std::uint8_t { kInput, kOutput, kGen };
  Kind kind = Kind::kGen;
  Generator gen = Generator::kXor;  // meaningful for kGen only
  int boundary = -1;                // wire index for kInput/kOutput

  int in_ports() const;
  int out_ports() const;
  friend bool operator==(const Node&, const Node&) = default;
};

struct PortRef {
  NodeId node = 0;
  int port = 0;
  friend auto operator<=>(const PortRef&, const PortRef&) = default;
};

struct Wire {
  PortRef from;  // out-port
  PortRef to;    // in-port
  friend bool operator==(const Wire&, const Wire&) = default;
};

struct Violation {
  enum class Kind : std::uint8_t { kLinearity, kAcyclicity, kBoundary, kDangling };
  Kind kind;
  std::string message;
};

/// Port graph of a diagram. Node ids are stable and assigned in creation
/// order; removed nodes leave a hole so ids are never reused.
class Graph {
 public:
  Graph() = default;
  // Creates n_in Input nodes then n_out Output nodes (ids 0..n_in+n_out-1).
  Graph(int n_in, int n_out);

  Interface interface() const { return {n_in_, n_out_}; }
  NodeId input(int i) const { return inputs_.at(i); }
  NodeId output(int j) const { return outputs_.at(j); }

  NodeId add_node(Generator g);
  void remove_node(NodeId id);  // also drops incident wires
  void connect(PortRef from, PortRef to);
  void disconnect_into(PortRef to);

  bool alive(NodeId id) const { return id < nodes_.size() && nodes_[id].has_value(); }
  const Node& node(NodeId id) const;
  NodeId id_bound() const { return static_cast<NodeId>(nodes_.size()); }
  std::vector<NodeId> node_ids() const;  // alive ids, ascending
  std::vector<NodeId> generator_nodes() const;
  const std::vector<Wire>& wires() const { return wires_; }

  // Source of the wire entering `to`, or of the wire leaving `from`.
  // Assume a linear graph; return nullopt for unconnected ports.
  std::optional<PortRef> source_of(PortRef to) const;
  std::optional<PortRef> target_of(PortRef from) const;

  std::size_t count(Generator g) const;

  // Raw construction helpers for tests of validate().
  void add_raw_wire(Wire w) { wires_.push_back(w); }
  NodeId add_raw_node(Node n);

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int n_in_ = 0;
  int n_out_ = 0;
  std::vector<std::optional<Node>> nodes_;
  std::vector<NodeId> inputs_;
  std::vector<NodeId> outputs_;
  std::vector<Wire> wires_;
};

std::vector<Violation> validate(const Graph& g);
// Throws MalformedError listing the violations when validate() is non-empty.
void require_valid(const Graph& g);

Graph graph_from_term(const Term& t);
Term term_from_graph(const Graph& g);

enum class Slicing {
  kGreedy,      // maximal antichains in topological order
  kSequential,  // one generator per slice, in ascending node id order
  kReverse,     // one generator per slice, latest ready node first
};

struct EvalOptions {
  Slicing slicing = Slicing::kGreedy;
  int max_state_bits = 26;  // live wires + inputs of the intermediate matrix
};

DyadicMatrix eval(const Graph& g, const EvalOptions& options = {});

// Graphviz rendering: node labels are generator names, edge labels are
// `out-port -> in-port`.
std::string to_dot(const Graph& g, std::string_view title = "diagram");

}  // namespace simcat
