#pragma once

// Exhaustive ground truth for small gadgets: exact observed distributions per
// input assignment, minimal dependency supports and full correlation matrices.
// Nothing here samples; above the bit cap every operation refuses.

#include <cstdint>
#include <string>
#include <vector>

#include "simcat/gadget.hpp"
#include "simcat/spectral.hpp"

namespace simcat {

struct OracleOptions {
  int bit_cap = 22;  // inputs + randoms
};

// Assignments are packed MSB-first: input 0 (resp. random 0) is the most
// significant bit.
struct BitValues {
  std::vector<std::uint8_t> outputs;  // declared outputs, declaration order
  std::vector<std::uint8_t> probes;   // declared probes, declaration order
  std::vector<std::uint8_t> signals;  // every signal by SignalId
};

BitValues eval_bits(const Netlist& nl, std::uint64_t inputs, std::uint64_t randoms);

/// Distribution of the observed tuple for one input assignment, as counts
/// over all 2^random_bits random assignments.
struct Distribution {
  int width = 0;
  int random_bits = 0;
  std::vector<std::uint32_t> counts;  // length 2^width

  std::vector<Dyadic> probabilities() const;
  friend bool operator==(const Distribution&, const Distribution&) = default;
};

Distribution observed_distribution(const Netlist& nl, const ObservationSpec& obs,
                                   std::uint64_t input_assignment, const OracleOptions& options = {});

/// Observed distribution for every input assignment. Identical distributions
/// are stored once.
struct DistTable {
  int num_inputs = 0;
  int width = 0;
  int random_bits = 0;
  std::vector<std::vector<std::uint32_t>> distinct;
  std::vector<std::uint32_t> class_of;  // per input assignment

  Distribution at(std::uint64_t assignment) const;
  // One line per assignment: `<bits> <numerators...> /2^<r>`.
  std::string to_text() const;
};

DistTable dist_table(const Netlist& nl, const ObservationSpec& obs, const OracleOptions& options = {});

struct SupportWitness {
  std::vector<int> inputs;  // indices into nl.input_names, ascending
  bool minimal = false;
};

SupportWitness dependency_support(const Netlist& nl, const ObservationSpec& obs,
                                  const OracleOptions& options = {});
SupportWitness dependency_support(const DistTable& table);

struct OracleVerdict {
  bool simulatable = false;
  SupportWitness witness;
};

OracleVerdict oracle_simulatable(const Netlist& nl, const ObservationSpec& obs, int d,
                                 const OracleOptions& options = {});

// Correlation matrix of inputs ++ randoms -> declared outputs.
DyadicMatrix oracle_matrix(const Netlist& nl, const OracleOptions& options = {});

void check_cap(const Netlist& nl, const OracleOptions& options);

}  // namespace simcat
