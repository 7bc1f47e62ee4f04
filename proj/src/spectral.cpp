#include "simcat/spectral.hpp"

#include <bit>
#include <map>
#include <ostream>
#include <sstream>

#include "simcat/error.hpp"

namespace simcat {
namespace {

constexpr int kMaxMatrixBits = 28;

void check_matrix_size(int in_wires, int out_wires) {
  if (in_wires < 0 || out_wires < 0) throw DimensionError("negative wire count");
  if (in_wires + out_wires > kMaxMatrixBits) {
    throw CapacityError("correlation matrix of " + std::to_string(out_wires) + "x" +
                        std::to_string(in_wires) + " wires is too large to store");
  }
}

// Fourier transform of a real vector in place: out[γ] = Σ_x v[x] (-1)^{γ·x}.
void dyadic_fwht(std::vector<Dyadic>& v) {
  for (std::size_t h = 1; h < v.size(); h *= 2) {
    for (std::size_t i = 0; i < v.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        Dyadic a = v[j];
        Dyadic b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

bool is_signed_pow2(const Dyadic& d) {
  auto n = d.numerator();
  return n == 1 || n == -1 || (n != 0 && std::has_single_bit(static_cast<std::uint64_t>(n < 0 ? -n : n)));
}

}  // namespace

// ---------------------------------------------------------------------------
// DyadicMatrix

DyadicMatrix::DyadicMatrix(int in_wires, int out_wires) : in_(in_wires), out_(out_wires) {
  check_matrix_size(in_wires, out_wires);
  data_.resize(rows() * cols());
}

DyadicMatrix DyadicMatrix::identity(int wires) {
  DyadicMatrix m(wires, wires);
  for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, i) = 1;
  return m;
}

DyadicMatrix DyadicMatrix::from_rows(int in_wires, int out_wires,
                                     const std::vector<std::vector<Dyadic>>& rows) {
  DyadicMatrix m(in_wires, out_wires);
  if (rows.size() != m.rows()) throw DimensionError("from_rows: wrong row count");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) throw DimensionError("from_rows: wrong column count");
    for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

std::string DyadicMatrix::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const DyadicMatrix& m) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if (c) os << ' ';
      os << m.at(r, c);
    }
    os << '\n';
  }
  return os;
}

// ---------------------------------------------------------------------------
// FourierVector

FourierVector::FourierVector(int n_bits) : n_(n_bits) {
  if (n_bits < 0 || n_bits > kMaxMatrixBits) throw DimensionError("bad vector width");
  coef_.resize(std::size_t{1} << n_bits);
}

FourierVector::FourierVector(int n_bits, std::vector<Dyadic> coefficients)
    : n_(n_bits), coef_(std::move(coefficients)) {
  if (n_bits < 0 || n_bits > kMaxMatrixBits || coef_.size() != (std::size_t{1} << n_bits)) {
    throw DimensionError("Fourier vector length must be 2^n_bits");
  }
}

std::string FourierVector::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const FourierVector& v) {
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  return os << ')';
}

// ---------------------------------------------------------------------------
// BitMatrix

BitMatrix::BitMatrix(int n) : n_(n), rows_(static_cast<std::size_t>(n), 0) {
  if (n < 0 || n > 63) throw DimensionError("BitMatrix dimension out of range");
}

BitMatrix::BitMatrix(int n, std::vector<std::uint64_t> rows) : n_(n), rows_(std::move(rows)) {
  if (n < 0 || n > 63 || rows_.size() != static_cast<std::size_t>(n)) {
    throw DimensionError("BitMatrix needs exactly n rows");
  }
  std::uint64_t mask = (std::uint64_t{1} << n) - 1;
  for (auto r : rows_) {
    if (r & ~mask) throw DimensionError("BitMatrix row wider than n");
  }
}

BitMatrix BitMatrix::identity(int n) {
  BitMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

void BitMatrix::set(int row, int col, bool value) {
  std::uint64_t bit = std::uint64_t{1} << (n_ - 1 - col);
  rows_[row] = value ? (rows_[row] | bit) : (rows_[row] & ~bit);
}

std::uint64_t BitMatrix::apply(std::uint64_t x) const {
  std::uint64_t y = 0;
  for (int i = 0; i < n_; ++i) y = (y << 1) | parity_dot(rows_[i], x);
  return y;
}

std::optional<BitMatrix> BitMatrix::inverse() const {
  std::vector<std::uint64_t> a = rows_;
  std::vector<std::uint64_t> inv = identity(n_).rows_;
  for (int col = 0; col < n_; ++col) {
    std::uint64_t bit = std::uint64_t{1} << (n_ - 1 - col);
    int pivot = -1;
    for (int r = col; r < n_; ++r) {
      if (a[r] & bit) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (int r = 0; r < n_; ++r) {
      if (r != col && (a[r] & bit)) {
        a[r] ^= a[col];
        inv[r] ^= inv[col];
      }
    }
  }
  return BitMatrix(n_, std::move(inv));
}

// ---------------------------------------------------------------------------
// Truth tables

TruthTable TruthTable::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::map<std::uint64_t, std::uint64_t> seen;
  TruthTable table;
  table.in_bits = -1;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string x, y, extra;
    if (!(ls >> x)) continue;
    if (!(ls >> y) || (ls >> extra)) {
      throw ParseError("expected '<input bits> <output bits>'", lineno, 1);
    }
    auto bits = [&](const std::string& s) {
      if (s.empty() || s.size() > 32 || s.find_first_not_of("01") != std::string::npos) {
        throw ParseError("not a binary word: '" + s + "'", lineno, 1);
      }
      return std::stoull(s, nullptr, 2);
    };
    int n = static_cast<int>(x.size());
    int m = static_cast<int>(y.size());
    if (table.in_bits < 0) {
      table.in_bits = n;
      table.out_bits = m;
    } else if (n != table.in_bits || m != table.out_bits) {
      throw ParseError("inconsistent word widths", lineno, 1);
    }
    if (!seen.emplace(bits(x), bits(y)).second) {
      throw MalformedError("input " + x + " listed twice (line " + std::to_string(lineno) + ")");
    }
  }
  if (table.in_bits < 0) throw MalformedError("empty truth table");
  if (seen.size() != (std::size_t{1} << table.in_bits)) {
    throw MalformedError("truth table is not total: " + std::to_string(seen.size()) + " of " +
                         std::to_string(std::size_t{1} << table.in_bits) + " inputs listed");
  }
  for (auto& [x, y] : seen) table.outputs.push_back(y);
  return table;
}

// ---------------------------------------------------------------------------
// Operations

void fwht(std::span<std::int64_t> values) {
  for (std::size_t h = 1; h < values.size(); h *= 2) {
    for (std::size_t i = 0; i < values.size(); i += 2 * h) {
      for (std::size_t j = i; j < i + h; ++j) {
        auto a = values[j];
        auto b = values[j + h];
        values[j] = a + b;
        values[j + h] = a - b;
      }
    }
  }
}

DyadicMatrix walsh_from_truth_table(const TruthTable& table, const WalshOptions& options) {
  const int n = table.in_bits;
  const int m = table.out_bits;
  if (n < 0 || m < 0 || table.outputs.size() != (std::size_t{1} << n)) {
    throw MalformedError("truth table is not total over 2^n inputs");
  }
  if (n > options.max_in_wires) {
    throw CapacityError("Walsh transform limited to " + std::to_string(options.max_in_wires) +
                        " input wires, got " + std::to_string(n));
  }
  const std::uint64_t out_mask = m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
  for (auto y : table.outputs) {
    if (y & ~out_mask) throw MalformedError("truth table output wider than declared");
  }

  DyadicMatrix w(n, m);
  const std::size_t size = w.cols();
  if (options.method == WalshMethod::kNaive) {
    for (std::size_t omega = 0; omega < w.rows(); ++omega) {
      for (std::size_t alpha = 0; alpha < size; ++alpha) {
        std::int64_t sum = 0;
        for (std::size_t x = 0; x < size; ++x) {
          sum += (parity_dot(omega, table.outputs[x]) ^ parity_dot(alpha, x)) ? -1 : 1;
        }
        w.at(omega, alpha) = Dyadic(sum, n);
      }
    }
    return w;
  }

  std::vector<std::int64_t> row(size);
  for (std::size_t omega = 0; omega < w.rows(); ++omega) {
    for (std::size_t x = 0; x < size; ++x) row[x] = parity_dot(omega, table.outputs[x]) ? -1 : 1;
    fwht(row);
    for (std::size_t alpha = 0; alpha < size; ++alpha) w.at(omega, alpha) = Dyadic(row[alpha], n);
  }
  return w;
}

DyadicMatrix compose(const DyadicMatrix& second, const DyadicMatrix& first) {
  if (first.out_wires() != second.in_wires()) {
    throw DimensionError("compose: first has " + std::to_string(first.out_wires()) +
                         " outputs but second expects " + std::to_string(second.in_wires()));
  }
  DyadicMatrix r(first.in_wires(), second.out_wires());
  for (std::size_t i = 0; i < second.rows(); ++i) {
    for (std::size_t k = 0; k < second.cols(); ++k) {
      const Dyadic& s = second.at(i, k);
      if (s.is_zero()) continue;
      for (std::size_t j = 0; j < first.cols(); ++j) {
        const Dyadic& f = first.at(k, j);
        if (!f.is_zero()) r.at(i, j) += s * f;
      }
    }
  }
  return r;
}

DyadicMatrix tensor(const DyadicMatrix& a, const DyadicMatrix& b) {
  DyadicMatrix r(a.in_wires() + b.in_wires(), a.out_wires() + b.out_wires());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Dyadic& x = a.at(i, j);
      if (x.is_zero()) continue;
      for (std::size_t k = 0; k < b.rows(); ++k) {
        for (std::size_t l = 0; l < b.cols(); ++l) {
          r.at(i * b.rows() + k, j * b.cols() + l) = x * b.at(k, l);
        }
      }
    }
  }
  return r;
}

DyadicMatrix walsh_of_linear(const BitMatrix& m) {
  auto inv = m.inverse();
  if (!inv) throw NotInvertibleError("linear map is singular over F_2");
  const int n = m.dim();
  DyadicMatrix w(n, n);
  // Column α maps to row (M^{-1})^T α: the XOR of the rows of M^{-1} selected by α.
  for (std::size_t alpha = 0; alpha < w.cols(); ++alpha) {
    std::uint64_t row = 0;
    for (int j = 0; j < n; ++j) {
      if (wire_bit(alpha, n, j)) row ^= inv->row_mask(j);
    }
    w.at(row, alpha) = 1;
  }
  return w;
}

OrthogonalityResult is_orthogonal(const DyadicMatrix& w) {
  if (w.in_wires() != w.out_wires()) {
    return {false, "matrix is not square (" + std::to_string(w.rows()) + "x" +
                       std::to_string(w.cols()) + ")"};
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = i; j < w.rows(); ++j) {
      Dyadic s;
      for (std::size_t k = 0; k < w.cols(); ++k) s += w.at(i, k) * w.at(j, k);
      if (s != Dyadic(i == j ? 1 : 0)) {
        return {false, "W W^T differs from I at (" + std::to_string(i) + "," + std::to_string(j) +
                           "): " + s.to_string()};
      }
    }
  }
  return {true, {}};
}

FourierVector apply(const DyadicMatrix& w, const FourierVector& t) {
  if (t.n_bits() != w.in_wires()) {
    throw DimensionError("apply: matrix expects " + std::to_string(w.in_wires()) +
                         " wires, vector has " + std::to_string(t.n_bits()));
  }
  FourierVector r(w.out_wires());
  for (std::size_t i = 0; i < w.rows(); ++i) {
    Dyadic s;
    for (std::size_t j = 0; j < w.cols(); ++j) {
      if (!w.at(i, j).is_zero() && !t[j].is_zero()) s += w.at(i, j) * t[j];
    }
    r[i] = s;
  }
  return r;
}

FourierVector uniform(int n) {
  FourierVector t(n);
  t[0] = 1;
  return t;
}

FourierVector constant(std::uint64_t bits, int n) {
  FourierVector t(n);
  for (std::size_t gamma = 0; gamma < t.size(); ++gamma) t[gamma] = parity_dot(gamma, bits) ? -1 : 1;
  return t;
}

FourierVector joint(const FourierVector& a, const FourierVector& b) {
  FourierVector r(a.n_bits() + b.n_bits());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) r[i * b.size() + j] = a[i] * b[j];
  }
  return r;
}

Dyadic dot(const FourierVector& f, const FourierVector& g) {
  if (f.n_bits() != g.n_bits()) throw DimensionError("dot: width mismatch");
  Dyadic s;
  for (std::size_t i = 0; i < f.size(); ++i) s += f[i] * g[i];
  return s;
}

std::vector<Dyadic> to_probabilities(const FourierVector& t) {
  std::vector<Dyadic> p(t.coefficients().begin(), t.coefficients().end());
  dyadic_fwht(p);
  for (auto& x : p) x = x.ldexp(-t.n_bits());
  return p;
}

FourierVector from_probabilities(std::span<const Dyadic> probabilities) {
  if (!std::has_single_bit(probabilities.size())) {
    throw DimensionError("probability vector length must be a power of two");
  }
  std::vector<Dyadic> v(probabilities.begin(), probabilities.end());
  dyadic_fwht(v);
  return FourierVector(std::countr_zero(probabilities.size()), std::move(v));
}

bool is_distribution(const FourierVector& t) {
  Dyadic total;
  for (const auto& p : to_probabilities(t)) {
    if (p < Dyadic(0) || p > Dyadic(1)) return false;
    total += p;
  }
  return total == Dyadic(1);
}

std::optional<std::pair<FourierVector, FourierVector>> factor_check(const FourierVector& t,
                                                                    int k) {
  const int n = t.n_bits();
  if (k <= 0 || k >= n) throw DimensionError("factor_check split must satisfy 0 < k < n");
  const std::size_t hi = std::size_t{1} << k;
  const std::size_t lo = std::size_t{1} << (n - k);
  const Dyadic pivot = t[0];
  if (!is_signed_pow2(pivot)) return std::nullopt;

  // With t = a ⊗ b and a[0] b[0] = pivot, scale so that a[0] = 1.
  int pivot_log = 0;
  {
    auto mag = static_cast<std::uint64_t>(pivot.numerator() < 0 ? -pivot.numerator()
                                                                : pivot.numerator());
    pivot_log = std::countr_zero(mag) - pivot.exponent();
  }
  Dyadic inv_pivot = Dyadic(pivot.sign()).ldexp(-pivot_log);

  FourierVector a(k);
  FourierVector b(n - k);
  for (std::size_t i = 0; i < hi; ++i) a[i] = t[i * lo] * inv_pivot;
  for (std::size_t j = 0; j < lo; ++j) b[j] = t[j];
  for (std::size_t i = 0; i < hi; ++i) {
    for (std::size_t j = 0; j < lo; ++j) {
      if (a[i] * b[j] != t[i * lo + j]) return std::nullopt;
    }
  }
  return std::make_pair(std::move(a), std::move(b));
}

}  // namespace simcat
