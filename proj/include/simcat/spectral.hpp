#pragma once

// Exact Walsh/Fourier machinery over F_2.
//
// Bit convention used everywhere in simcat: wire 0 is the most significant bit
// of an index. For an n-wire index x, wire i holds (x >> (n - 1 - i)) & 1.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "simcat/dyadic.hpp"

namespace simcat {

// Bit of wire `wire` in an index of `width` wires.
inline unsigned wire_bit(std::uint64_t index, int width, int wire) {
  return static_cast<unsigned>((index >> (width - 1 - wire)) & 1U);
}

// Parity of popcount(a & b): the F_2 inner product of two index vectors.
inline unsigned parity_dot(std::uint64_t a, std::uint64_t b) {
  return static_cast<unsigned>(__builtin_parityll(a & b));
}

/// Correlation matrix of an n -> m map: 2^m rows (output parities ω) by 2^n
/// columns (input parities α), exact dyadic entries.
class DyadicMatrix {
 public:
  DyadicMatrix() = default;
  // All-zero matrix mapping `in_wires` to `out_wires`.
  DyadicMatrix(int in_wires, int out_wires);

  static DyadicMatrix identity(int wires);
  // Row-major initializer, mostly for tests and the generator table.
  static DyadicMatrix from_rows(int in_wires, int out_wires,
                                const std::vector<std::vector<Dyadic>>& rows);

  int in_wires() const { return in_; }
  int out_wires() const { return out_; }
  std::size_t rows() const { return std::size_t{1} << out_; }
  std::size_t cols() const { return std::size_t{1} << in_; }

  const Dyadic& at(std::size_t row, std::size_t col) const { return data_[row * cols() + col]; }
  Dyadic& at(std::size_t row, std::size_t col) { return data_[row * cols() + col]; }

  std::span<const Dyadic> row(std::size_t r) const {
    return std::span<const Dyadic>(data_).subspan(r * cols(), cols());
  }
  std::span<const Dyadic> entries() const { return data_; }

  friend bool operator==(const DyadicMatrix&, const DyadicMatrix&) = default;

  // One row per line, entries separated by spaces in `num/2^k` notation.
  std::string to_string() const;

 private:
  int in_ = 0;
  int out_ = 0;
  std::vector<Dyadic> data_;
};

std::ostream& operator<<(std::ostream& os, const DyadicMatrix& m);

/// A pseudo-Boolean function (normally a distribution) in the parity basis.
class FourierVector {
 public:
  FourierVector() : FourierVector(0) {}
  explicit FourierVector(int n_bits);
  FourierVector(int n_bits, std::vector<Dyadic> coefficients);

  int n_bits() const { return n_; }
  std::size_t size() const { return coef_.size(); }
  const Dyadic& operator[](std::size_t gamma) const { return coef_[gamma]; }
  Dyadic& operator[](std::size_t gamma) { return coef_[gamma]; }
  std::span<const Dyadic> coefficients() const { return coef_; }

  friend bool operator==(const FourierVector&, const FourierVector&) = default;

  std::string to_string() const;

 private:
  int n_;
  std::vector<Dyadic> coef_;
};

std::ostream& operator<<(std::ostream& os, const FourierVector& v);

/// Square matrix over F_2. Row i is a mask in which column j sits at bit
/// (n - 1 - j), matching the index convention above.
class BitMatrix {
 public:
  explicit BitMatrix(int n);
  BitMatrix(int n, std::vector<std::uint64_t> rows);
  static BitMatrix identity(int n);

  int dim() const { return n_; }
  bool get(int row, int col) const { return (rows_[row] >> (n_ - 1 - col)) & 1U; }
  void set(int row, int col, bool value);
  std::uint64_t row_mask(int row) const { return rows_[row]; }

  // M x over F_2, x in the MSB-first index layout.
  std::uint64_t apply(std::uint64_t x) const;
  std::optional<BitMatrix> inverse() const;
  bool invertible() const { return inverse().has_value(); }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

 private:
  int n_;
  std::vector<std::uint64_t> rows_;
};

/// Total map F_2^n -> F_2^m given by its output on every input index.
struct TruthTable {
  int in_bits = 0;
  int out_bits = 0;
  std::vector<std::uint64_t> outputs;  // outputs[x] for x in [0, 2^n)

  // Line format `<n-bit input> <m-bit output>`, binary, MSB first. `#`
  // starts a comment. Every input must appear exactly once.
  static TruthTable parse(const std::string& text);
};

enum class WalshMethod { kNaive, kFast };

struct WalshOptions {
  WalshMethod method = WalshMethod::kFast;
  int max_in_wires = 16;
};

DyadicMatrix walsh_from_truth_table(const TruthTable& table, const WalshOptions& options = {});

// compose(second, first) realizes "first, then second".
DyadicMatrix compose(const DyadicMatrix& second, const DyadicMatrix& first);
// Kronecker product; the wires of `a` are the more significant ones.
DyadicMatrix tensor(const DyadicMatrix& a, const DyadicMatrix& b);
DyadicMatrix walsh_of_linear(const BitMatrix& m);

struct OrthogonalityResult {
  bool orthogonal = false;
  std::string reason;  // empty when orthogonal
  explicit operator bool() const { return orthogonal; }
};
OrthogonalityResult is_orthogonal(const DyadicMatrix& w);

FourierVector apply(const DyadicMatrix& w, const FourierVector& t);
FourierVector uniform(int n);
// `bits` holds n wires in the MSB-first layout.
FourierVector constant(std::uint64_t bits, int n);
FourierVector joint(const FourierVector& a, const FourierVector& b);
Dyadic dot(const FourierVector& f, const FourierVector& g);

std::vector<Dyadic> to_probabilities(const FourierVector& t);
FourierVector from_probabilities(std::span<const Dyadic> probabilities);
// True iff the inverse transform lies in [0, 1] and sums to 1.
bool is_distribution(const FourierVector& t);

// Factors t into (first k wires) ⊗ (remaining wires) when possible. Decided
// exactly from the marginal candidates; vectors whose coefficient at 0 is not
// a signed power of two (never the case for distributions) report nullopt.
std::optional<std::pair<FourierVector, FourierVector>> factor_check(const FourierVector& t,
                                                                    int k);

// In-place Walsh-Hadamard butterfly (unnormalized) over integer values.
void fwht(std::span<std::int64_t> values);

}  // namespace simcat
