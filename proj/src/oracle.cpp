#include "simcat/oracle.hpp"

#include <map>
#include <unordered_map>
#include <sstream>

#include "simcat/error.hpp"

namespace simcat {
namespace {

constexpr int kMaxObservedWidth = 20;

// Lane l of kLanePattern[b] holds bit b of l.
constexpr std::uint64_t kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

std::uint64_t broadcast(unsigned bit) { return bit ? ~std::uint64_t{0} : 0; }

// Evaluates all signals on 64 lanes at once.
void eval_lanes(const Netlist& nl, std::vector<std::uint64_t>& sig) {
  for (std::size_t k = 0; k < nl.gates.size(); ++k) {
    const Gate& g = nl.gates[k];
    std::uint64_t v = 0;
    switch (g.op) {
      case GateOp::kXor: v = sig[g.a] ^ sig[g.b]; break;
      case GateOp::kAnd: v = sig[g.a] & sig[g.b]; break;
      case GateOp::kTrue: v = ~std::uint64_t{0}; break;
      case GateOp::kFalse: v = 0; break;
    }
    sig[nl.gate_signal(k)] = v;
  }
}

// Enumerates every random assignment for a fixed input assignment and
// accumulates the histogram of the observed tuple.
class Enumerator {
 public:
  Enumerator(const Netlist& nl, const std::vector<Observed>& observed)
      : nl_(nl), observed_(observed), sig_(static_cast<std::size_t>(nl.num_signals())) {}

  void run(std::uint64_t inputs, std::vector<std::uint32_t>& counts) {
    const int ni = nl_.num_inputs();
    const int r = nl_.num_randoms();
    const int w = static_cast<int>(observed_.size());
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < ni; ++i) sig_[i] = broadcast(wire_bit(inputs, ni, i));

    const int lane_bits = std::min(r, 6);
    const int lanes = 1 << lane_bits;
    const std::uint64_t chunks = std::uint64_t{1} << (r - lane_bits);
    for (std::uint64_t chunk = 0; chunk < chunks; ++chunk) {
      for (int k = 0; k < r; ++k) {
        int pos = r - 1 - k;  // bit position of random k in the random index
        sig_[nl_.random_signal(k)] =
            pos < lane_bits ? kLanePattern[pos] : broadcast((chunk >> (pos - lane_bits)) & 1U);
      }
      eval_lanes(nl_, sig_);
      for (int lane = 0; lane < lanes; ++lane) {
        std::size_t idx = 0;
        for (int j = 0; j < w; ++j) idx = (idx << 1) | ((sig_[observed_[j].signal] >> lane) & 1U);
        ++counts[idx];
      }
    }
  }

 private:
  const Netlist& nl_;
  const std::vector<Observed>& observed_;
  std::vector<std::uint64_t> sig_;
};

void check_width(std::size_t width) {
  if (width > kMaxObservedWidth) {
    throw CapacityError("cannot tabulate a joint distribution over " + std::to_string(width) +
                        " observed bits");
  }
}

}  // namespace

void check_cap(const Netlist& nl, const OracleOptions& options) {
  int bits = nl.num_inputs() + nl.num_randoms();
  if (bits > options.bit_cap) {
    throw CapacityError("gadget " + nl.name + " has " + std::to_string(bits) +
                        " input+random bits; the oracle cap is " + std::to_string(options.bit_cap));
  }
}

BitValues eval_bits(const Netlist& nl, std::uint64_t inputs, std::uint64_t randoms) {
  const int ni = nl.num_inputs();
  const int r = nl.num_randoms();
  if (ni > 63 || r > 63 || (ni < 64 && (inputs >> ni) != 0) || (r < 64 && (randoms >> r) != 0)) {
    throw MalformedError("assignment does not match the gadget's inputs/randoms");
  }
  std::vector<std::uint64_t> sig(static_cast<std::size_t>(nl.num_signals()));
  for (int i = 0; i < ni; ++i) sig[i] = wire_bit(inputs, ni, i);
  for (int k = 0; k < r; ++k) sig[nl.random_signal(k)] = wire_bit(randoms, r, k);
  eval_lanes(nl, sig);
  BitValues out;
  for (auto s : sig) out.signals.push_back(static_cast<std::uint8_t>(s & 1U));
  for (const auto& o : nl.outputs) out.outputs.push_back(out.signals[o.signal]);
  for (const auto& p : nl.probes) out.probes.push_back(out.signals[p.signal]);
  return out;
}

std::vector<Dyadic> Distribution::probabilities() const {
  std::vector<Dyadic> p;
  p.reserve(counts.size());
  for (auto c : counts) p.emplace_back(static_cast<std::int64_t>(c), random_bits);
  return p;
}

Distribution observed_distribution(const Netlist& nl, const ObservationSpec& obs,
                                   std::uint64_t input_assignment, const OracleOptions& options) {
  check_cap(nl, options);
  const auto observed = resolve(nl, obs);
  check_width(observed.size());
  if (nl.num_inputs() < 64 && (input_assignment >> nl.num_inputs()) != 0) {
    throw MalformedError("input assignment wider than the gadget's inputs");
  }
  Distribution d;
  d.width = static_cast<int>(observed.size());
  d.random_bits = nl.num_randoms();
  d.counts.resize(std::size_t{1} << d.width);
  Enumerator(nl, observed).run(input_assignment, d.counts);
  return d;
}

Distribution DistTable::at(std::uint64_t assignment) const {
  return {width, random_bits, distinct.at(class_of.at(assignment))};
}

std::string DistTable::to_text() const {
  std::ostringstream os;
  for (std::uint64_t x = 0; x < class_of.size(); ++x) {
    for (int i = 0; i < num_inputs; ++i) os << wire_bit(x, num_inputs, i);
    if (num_inputs == 0) os << '-';
    for (auto c : distinct[class_of[x]]) os << ' ' << c;
    os << " /2^" << random_bits << '\n';
  }
  return os.str();
}

DistTable dist_table(const Netlist& nl, const ObservationSpec& obs, const OracleOptions& options) {
  check_cap(nl, options);
  const auto observed = resolve(nl, obs);
  check_width(observed.size());
  DistTable t;
  t.num_inputs = nl.num_inputs();
  t.width = static_cast<int>(observed.size());
  t.random_bits = nl.num_randoms();
  const std::uint64_t assignments = std::uint64_t{1} << t.num_inputs;
  t.class_of.resize(assignments);
  std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
  std::vector<std::uint32_t> counts(std::size_t{1} << t.width);
  Enumerator en(nl, observed);
  for (std::uint64_t x = 0; x < assignments; ++x) {
    en.run(x, counts);
    auto [it, fresh] = ids.emplace(counts, static_cast<std::uint32_t>(t.distinct.size()));
    if (fresh) t.distinct.push_back(counts);
    t.class_of[x] = it->second;
  }
  return t;
}

SupportWitness dependency_support(const DistTable& table) {
  const int n = table.num_inputs;
  const std::uint64_t size = table.class_of.size();
  auto depends_on = [&](int i) {
    const std::uint64_t bit = std::uint64_t{1} << (n - 1 - i);
    for (std::uint64_t x = 0; x < size; ++x) {
      if (!(x & bit) && table.class_of[x] != table.class_of[x | bit]) return true;
    }
    return false;
  };
  // Greedy elimination: an input leaves the support when flipping it never
  // changes the observed distribution.
  SupportWitness w;
  std::uint64_t mask = 0;
  for (int i = 0; i < n; ++i) {
    if (depends_on(i)) {
      w.inputs.push_back(i);
      mask |= std::uint64_t{1} << (n - 1 - i);
    }
  }
  // Is the distribution a function of the bits selected by `m`?
  auto determined_by = [&](std::uint64_t m) {
    std::unordered_map<std::uint64_t, std::uint32_t> by_key;
    for (std::uint64_t x = 0; x < size; ++x) {
      auto [it, fresh] = by_key.emplace(x & m, table.class_of[x]);
      if (!fresh && it->second != table.class_of[x]) return false;
    }
    return true;
  };
  if (!determined_by(mask)) throw Error("dependency support failed its exhaustive re-check");
  w.minimal = true;
  for (int i : w.inputs) {
    if (determined_by(mask & ~(std::uint64_t{1} << (n - 1 - i)))) w.minimal = false;
  }
  return w;
}

SupportWitness dependency_support(const Netlist& nl, const ObservationSpec& obs,
                                  const OracleOptions& options) {
  return dependency_support(dist_table(nl, obs, options));
}

OracleVerdict oracle_simulatable(const Netlist& nl, const ObservationSpec& obs, int d,
                                 const OracleOptions& options) {
  OracleVerdict v;
  v.witness = dependency_support(nl, obs, options);
  v.simulatable = static_cast<int>(v.witness.inputs.size()) <= d;
  return v;
}

DyadicMatrix oracle_matrix(const Netlist& nl, const OracleOptions& options) {
  check_cap(nl, options);
  TruthTable table;
  table.in_bits = nl.num_inputs() + nl.num_randoms();
  table.out_bits = static_cast<int>(nl.outputs.size());
  const int r = nl.num_randoms();
  table.outputs.resize(std::size_t{1} << table.in_bits);
  for (std::uint64_t x = 0; x < table.outputs.size(); ++x) {
    auto bits = eval_bits(nl, r < 64 ? x >> r : 0, x & ((std::uint64_t{1} << r) - 1));
    std::uint64_t y = 0;
    for (auto b : bits.outputs) y = (y << 1) | b;
    table.outputs[x] = y;
  }
  return walsh_from_truth_table(table, {WalshMethod::kFast, options.bit_cap});
}

}  // namespace simcat
