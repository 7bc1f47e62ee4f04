#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include "simcat/diagram.hpp"
#include "simcat/error.hpp"

namespace simcat {

int Node::in_ports() const {
  switch (kind) {
    case Kind::kInput: return 0;
    case Kind::kOutput: return 1;
    case Kind::kGen: return arity(gen).n_in;
  }
  return 0;
}

int Node::out_ports() const {
  switch (kind) {
    case Kind::kInput: return 1;
    case Kind::kOutput: return 0;
    case Kind::kGen: return arity(gen).n_out;
  }
  return 0;
}

Graph::Graph(int n_in, int n_out) : n_in_(n_in), n_out_(n_out) {
  if (n_in < 0 || n_out < 0) throw MalformedError("negative interface");
  for (int i = 0; i < n_in; ++i) inputs_.push_back(add_raw_node({Node::Kind::kInput, {}, i}));
  for (int j = 0; j < n_out; ++j) outputs_.push_back(add_raw_node({Node::Kind::kOutput, {}, j}));
}

NodeId Graph::add_raw_node(Node n) {
  nodes_.emplace_back(n);
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Graph::add_node(Generator g) { return add_raw_node({Node::Kind::kGen, g, -1}); }

const Node& Graph::node(NodeId id) const {
  if (!alive(id)) throw MalformedError("no node n" + std::to_string(id));
  return *nodes_[id];
}

void Graph::remove_node(NodeId id) {
  if (!alive(id)) throw MalformedError("no node n" + std::to_string(id));
  if (nodes_[id]->kind != Node::Kind::kGen) throw MalformedError("cannot remove a boundary node");
  std::erase_if(wires_, [id](const Wire& w) { return w.from.node == id || w.to.node == id; });
  nodes_[id].reset();
}

void Graph::connect(PortRef from, PortRef to) { wires_.push_back({from, to}); }

void Graph::disconnect_into(PortRef to) {
  std::erase_if(wires_, [&](const Wire& w) { return w.to == to; });
}

std::vector<NodeId> Graph::node_ids() const {
  std::vector<NodeId> ids;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i]) ids.push_back(i);
  }
  return ids;
}

std::vector<NodeId> Graph::generator_nodes() const {
  std::vector<NodeId> ids;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i] && nodes_[i]->kind == Node::Kind::kGen) ids.push_back(i);
  }
  return ids;
}

std::optional<PortRef> Graph::source_of(PortRef to) const {
  for (const auto& w : wires_) {
    if (w.to == to) return w.from;
  }
  return std::nullopt;
}

std::optional<PortRef> Graph::target_of(PortRef from) const {
  for (const auto& w : wires_) {
    if (w.from == from) return w.to;
  }
  return std::nullopt;
}

std::size_t Graph::count(Generator g) const {
  std::size_t c = 0;
  for (const auto& n : nodes_) c += n && n->kind == Node::Kind::kGen && n->gen == g;
  return c;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate(const Graph& g) {
  std::vector<Violation> out;
  auto port_name = [](PortRef p) {
    return "n" + std::to_string(p.node) + ":" + std::to_string(p.port);
  };

  std::map<PortRef, int> out_uses;
  std::map<PortRef, int> in_uses;
  for (const auto& w : g.wires()) {
    bool ok = true;
    if (!g.alive(w.from.node) || w.from.port < 0 || w.from.port >= g.node(w.from.node).out_ports()) {
      out.push_back({Violation::Kind::kDangling, "wire leaves nonexistent port " + port_name(w.from)});
      ok = false;
    }
    if (!g.alive(w.to.node) || w.to.port < 0 || w.to.port >= g.node(w.to.node).in_ports()) {
      out.push_back({Violation::Kind::kDangling, "wire enters nonexistent port " + port_name(w.to)});
      ok = false;
    }
    if (ok) {
      ++out_uses[w.from];
      ++in_uses[w.to];
    }
  }

  std::set<int> seen_in, seen_out;
  for (NodeId id : g.node_ids()) {
    const Node& n = g.node(id);
    for (int p = 0; p < n.out_ports(); ++p) {
      int uses = out_uses[{id, p}];
      if (uses != 1) {
        out.push_back({Violation::Kind::kLinearity, "out-port " + port_name({id, p}) + " has " +
                                                        std::to_string(uses) + " wires"});
      }
    }
    for (int p = 0; p < n.in_ports(); ++p) {
      int uses = in_uses[{id, p}];
      if (uses != 1) {
        out.push_back({Violation::Kind::kLinearity, "in-port " + port_name({id, p}) + " has " +
                                                        std::to_string(uses) + " wires"});
      }
    }
    if (n.kind == Node::Kind::kInput || n.kind == Node::Kind::kOutput) {
      bool input = n.kind == Node::Kind::kInput;
      int limit = input ? g.interface().n_in : g.interface().n_out;
      auto& seen = input ? seen_in : seen_out;
      if (n.boundary < 0 || n.boundary >= limit || !seen.insert(n.boundary).second ||
          (input ? g.input(n.boundary) : g.output(n.boundary)) != id) {
        out.push_back({Violation::Kind::kBoundary,
                       "boundary node n" + std::to_string(id) + " has bad index " +
                           std::to_string(n.boundary)});
      }
    }
  }

  // Kahn's algorithm over wires between live nodes.
  std::map<NodeId, int> indegree;
  std::map<NodeId, std::vector<NodeId>> succ;
  for (NodeId id : g.node_ids()) indegree[id] = 0;
  for (const auto& w : g.wires()) {
    if (!g.alive(w.from.node) || !g.alive(w.to.node)) continue;
    if (w.from.node == w.to.node) {
      out.push_back({Violation::Kind::kAcyclicity, "self-loop on n" + std::to_string(w.to.node)});
      continue;
    }
    ++indegree[w.to.node];
    succ[w.from.node].push_back(w.to.node);
  }
  std::deque<NodeId> ready;
  for (auto [id, d] : indegree) {
    if (d == 0) ready.push_back(id);
  }
  std::size_t visited = 0;
  while (!ready.empty()) {
    NodeId id = ready.front();
    ready.pop_front();
    ++visited;
    for (NodeId s : succ[id]) {
      if (--indegree[s] == 0) ready.push_back(s);
    }
  }
  if (visited != indegree.size()) {
    out.push_back({Violation::Kind::kAcyclicity, "graph contains a cycle"});
  }
  return out;
}

void require_valid(const Graph& g) {
  auto v = validate(g);
  if (v.empty()) return;
  std::string msg = "invalid diagram:";
  for (const auto& x : v) msg += "\n  " + x.message;
  throw MalformedError(msg);
}

// ---------------------------------------------------------------------------
// Term -> graph

namespace {

std::vector<PortRef> build(Graph& g, const Term& t, std::vector<PortRef> in) {
  switch (t.kind()) {
    case Term::Kind::kId: return in;
    case Term::Kind::kSwap: return {in[1], in[0]};
    case Term::Kind::kGen: {
      NodeId id = g.add_node(t.generator());
      auto a = arity(t.generator());
      for (int p = 0; p < a.n_in; ++p) g.connect(in[p], {id, p});
      std::vector<PortRef> out;
      for (int p = 0; p < a.n_out; ++p) out.push_back({id, p});
      return out;
    }
    case Term::Kind::kSeq: return build(g, t.rhs(), build(g, t.lhs(), std::move(in)));
    case Term::Kind::kPar: {
      auto split = static_cast<std::ptrdiff_t>(t.lhs().interface().n_in);
      std::vector<PortRef> top(in.begin(), in.begin() + split);
      std::vector<PortRef> bottom(in.begin() + split, in.end());
      auto a = build(g, t.lhs(), std::move(top));
      auto b = build(g, t.rhs(), std::move(bottom));
      a.insert(a.end(), b.begin(), b.end());
      return a;
    }
  }
  return in;
}

}  // namespace

Graph graph_from_term(const Term& t) {
  auto iface = t.interface();
  Graph g(iface.n_in, iface.n_out);
  std::vector<PortRef> in;
  for (int i = 0; i < iface.n_in; ++i) in.push_back({g.input(i), 0});
  auto out = build(g, t, std::move(in));
  for (int j = 0; j < iface.n_out; ++j) g.connect(out[j], {g.output(j), 0});
  return g;
}

// ---------------------------------------------------------------------------
// Topological slicing shared by eval and term extraction

namespace {

struct Scheduler {
  explicit Scheduler(const Graph& g) : graph(g) {
    for (NodeId id : g.generator_nodes()) {
      const Node& n = g.node(id);
      int missing = 0;
      for (int p = 0; p < n.in_ports(); ++p) {
        auto src = g.source_of({id, p});
        if (src && g.node(src->node).kind != Node::Kind::kInput) ++missing;
      }
      pending[id] = missing;
      if (missing == 0) ready.insert(id);
    }
    for (const auto& w : g.wires()) {
      if (g.node(w.to.node).kind == Node::Kind::kGen) consumers[w.from.node].push_back(w.to.node);
    }
  }

  std::vector<NodeId> next_slice(Slicing mode) {
    std::vector<NodeId> slice;
    if (ready.empty()) return slice;
    switch (mode) {
      case Slicing::kGreedy: slice.assign(ready.begin(), ready.end()); break;
      case Slicing::kSequential: slice.push_back(*ready.begin()); break;
      case Slicing::kReverse: slice.push_back(*ready.rbegin()); break;
    }
    for (NodeId id : slice) ready.erase(id);
    for (NodeId id : slice) {
      for (NodeId c : consumers[id]) {
        if (--pending[c] == 0) ready.insert(c);
      }
    }
    done += slice.size();
    return slice;
  }

  bool finished() const { return done == pending.size(); }

  const Graph& graph;
  std::map<NodeId, int> pending;
  std::map<NodeId, std::vector<NodeId>> consumers;
  std::set<NodeId> ready;
  std::size_t done = 0;
};

std::size_t index_of(const std::vector<PortRef>& live, PortRef p) {
  auto it = std::find(live.begin(), live.end(), p);
  if (it == live.end()) throw MalformedError("wire source not live during slicing");
  return static_cast<std::size_t>(it - live.begin());
}

}  // namespace

// ---------------------------------------------------------------------------
// Evaluation
//
// The state is the matrix of the already-processed prefix: rows range over the
// live wires (in `live` order), columns over the graph inputs. Applying a
// generator multiplies by (G ⊗ I) on the live wires it touches.

DyadicMatrix eval(const Graph& g, const EvalOptions& options) {
  require_valid(g);
  const int n = g.interface().n_in;
  std::vector<PortRef> live;
  for (int i = 0; i < n; ++i) live.push_back({g.input(i), 0});
  const DyadicMatrix start = DyadicMatrix::identity(n);
  std::vector<Dyadic> state(start.entries().begin(), start.entries().end());
  const std::size_t cols = std::size_t{1} << n;

  auto apply_node = [&](NodeId id) {
    const Node& node = g.node(id);
    const DyadicMatrix& gm = generator_matrix(node.gen);
    const int k = node.in_ports();
    const int l = node.out_ports();
    const int w = static_cast<int>(live.size());
    std::vector<int> pos;
    for (int p = 0; p < k; ++p) pos.push_back(static_cast<int>(index_of(live, *g.source_of({id, p}))));

    std::vector<int> rest;
    for (int i = 0; i < w; ++i) {
      if (std::find(pos.begin(), pos.end(), i) == pos.end()) rest.push_back(i);
    }
    const int new_w = w - k + l;
    if (new_w + n > options.max_state_bits) {
      throw CapacityError("diagram evaluation needs " + std::to_string(new_w) +
                          " live wires; exceeds the state cap");
    }
    std::vector<Dyadic> next((std::size_t{1} << new_w) * cols);
    const std::size_t old_rows = std::size_t{1} << w;
    for (std::size_t ro = 0; ro < old_rows; ++ro) {
      std::size_t a = 0;
      for (int p : pos) a = (a << 1) | wire_bit(ro, w, p);
      std::size_t r = 0;
      for (int i : rest) r = (r << 1) | wire_bit(ro, w, i);
      const Dyadic* src = &state[ro * cols];
      for (std::size_t b = 0; b < gm.rows(); ++b) {
        const Dyadic& coef = gm.at(b, a);
        if (coef.is_zero()) continue;
        Dyadic* dst = &next[((r << l) | b) * cols];
        for (std::size_t c = 0; c < cols; ++c) {
          if (!src[c].is_zero()) dst[c] += coef * src[c];
        }
      }
    }
    std::vector<PortRef> new_live;
    for (int i : rest) new_live.push_back(live[i]);
    for (int p = 0; p < l; ++p) new_live.push_back({id, p});
    live = std::move(new_live);
    state = std::move(next);
  };

  Scheduler sched(g);
  while (!sched.finished()) {
    auto slice = sched.next_slice(options.slicing);
    if (slice.empty()) throw MalformedError("graph contains a cycle");
    for (NodeId id : slice) apply_node(id);
  }

  const int m = g.interface().n_out;
  if (static_cast<int>(live.size()) != m) throw MalformedError("live wires do not match outputs");
  std::vector<int> perm;  // output j reads live[perm[j]]
  for (int j = 0; j < m; ++j) perm.push_back(static_cast<int>(index_of(live, *g.source_of({g.output(j), 0}))));
  DyadicMatrix result(n, m);
  for (std::size_t y = 0; y < result.rows(); ++y) {
    std::size_t ro = 0;
    for (int j = 0; j < m; ++j) {
      if (wire_bit(y, m, j)) ro |= std::size_t{1} << (m - 1 - perm[j]);
    }
    for (std::size_t c = 0; c < cols; ++c) result.at(y, c) = state[ro * cols + c];
  }
  return result;
}

// ---------------------------------------------------------------------------
// Graph -> term

namespace {

Term seq_simplify(std::optional<Term> acc, Term next) {
  if (!acc) return next;
  if (next.kind() == Term::Kind::kId) return *acc;
  if (acc->kind() == Term::Kind::kId) return next;
  return Term::seq(std::move(*acc), std::move(next));
}

Term par_simplify(std::optional<Term> acc, Term next) {
  if (!acc) return next;
  if (next.kind() == Term::Kind::kId && next.id_width() == 0) return *acc;
  if (acc->kind() == Term::Kind::kId && acc->id_width() == 0) return next;
  if (acc->kind() == Term::Kind::kId && next.kind() == Term::Kind::kId) {
    return Term::id(acc->id_width() + next.id_width());
  }
  return Term::par(std::move(*acc), std::move(next));
}

// Adjacent transpositions turning `live` into `target` (same multiset).
std::optional<Term> permutation_term(std::vector<PortRef>& live, const std::vector<PortRef>& target) {
  std::optional<Term> out;
  const int w = static_cast<int>(live.size());
  for (int i = 0; i < w; ++i) {
    int j = static_cast<int>(index_of(live, target[i]));
    while (j > i) {
      std::optional<Term> layer;
      layer = par_simplify(std::nullopt, Term::id(j - 1));
      layer = par_simplify(layer, Term::swap());
      layer = par_simplify(layer, Term::id(w - j - 1));
      out = seq_simplify(out, *layer);
      std::swap(live[j - 1], live[j]);
      --j;
    }
  }
  return out;
}

}  // namespace

Term term_from_graph(const Graph& g) {
  require_valid(g);
  const int n = g.interface().n_in;
  std::vector<PortRef> live;
  for (int i = 0; i < n; ++i) live.push_back({g.input(i), 0});
  std::optional<Term> acc;

  Scheduler sched(g);
  while (!sched.finished()) {
    auto slice = sched.next_slice(Slicing::kGreedy);
    if (slice.empty()) throw MalformedError("graph contains a cycle");
    std::vector<PortRef> target;
    for (NodeId id : slice) {
      for (int p = 0; p < g.node(id).in_ports(); ++p) target.push_back(*g.source_of({id, p}));
    }
    const std::size_t consumed = target.size();
    for (const auto& p : live) {
      if (std::find(target.begin(), target.end(), p) == target.end()) target.push_back(p);
    }
    if (auto perm = permutation_term(live, target)) acc = seq_simplify(acc, std::move(*perm));

    std::optional<Term> layer;
    std::vector<PortRef> next_live;
    for (NodeId id : slice) {
      layer = par_simplify(layer, Term::gen(g.node(id).gen));
      for (int p = 0; p < g.node(id).out_ports(); ++p) next_live.push_back({id, p});
    }
    layer = par_simplify(layer, Term::id(static_cast<int>(live.size() - consumed)));
    next_live.insert(next_live.end(), live.begin() + static_cast<std::ptrdiff_t>(consumed), live.end());
    acc = seq_simplify(acc, std::move(*layer));
    live = std::move(next_live);
  }

  std::vector<PortRef> target;
  for (int j = 0; j < g.interface().n_out; ++j) target.push_back(*g.source_of({g.output(j), 0}));
  if (auto perm = permutation_term(live, target)) acc = seq_simplify(acc, std::move(*perm));
  return acc ? *acc : Term::id(n);
}

// ---------------------------------------------------------------------------

std::string to_dot(const Graph& g, std::string_view title) {
  std::ostringstream os;
  os << "digraph \"" << title << "\" {\n  rankdir=TB;\n";
  for (NodeId id : g.node_ids()) {
    const Node& n = g.node(id);
    os << "  n" << id << " [";
    switch (n.kind) {
      case Node::Kind::kInput: os << "label=\"in" << n.boundary << "\", shape=plaintext"; break;
      case Node::Kind::kOutput: os << "label=\"out" << n.boundary << "\", shape=plaintext"; break;
      case Node::Kind::kGen:
        os << "label=\"" << name(n.gen) << "\"";
        if (n.gen == Generator::kErase || n.gen == Generator::kRandom) os << ", shape=point, xlabel=\"" << name(n.gen) << "\"";
        break;
    }
    os << "];\n";
  }
  auto wires = g.wires();
  std::sort(wires.begin(), wires.end(), [](const Wire& a, const Wire& b) {
    return std::tie(a.from, a.to) < std::tie(b.from, b.to);
  });
  for (const auto& w : wires) {
    os << "  n" << w.from.node << " -> n" << w.to.node << " [label=\"" << w.from.port << "->"
       << w.to.port << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace simcat
