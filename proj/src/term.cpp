#include <cctype>
#include <ostream>
#include <sstream>

#include "simcat/diagram.hpp"
#include "simcat/error.hpp"

namespace simcat {
namespace {

DyadicMatrix rows(int in, int out, std::vector<std::vector<Dyadic>> r) {
  return DyadicMatrix::from_rows(in, out, r);
}

const Dyadic kHalf(1, 1);

}  // namespace

Interface arity(Generator g) {
  switch (g) {
    case Generator::kXor:
    case Generator::kAnd:
      return {2, 1};
    case Generator::kFalse:
    case Generator::kTrue:
    case Generator::kRandom:
      return {0, 1};
    case Generator::kDup:
      return {1, 2};
    case Generator::kErase:
      return {1, 0};
  }
  return {};
}

std::string_view name(Generator g) {
  switch (g) {
    case Generator::kXor: return "xor";
    case Generator::kAnd: return "and";
    case Generator::kFalse: return "false";
    case Generator::kTrue: return "true";
    case Generator::kDup: return "dup";
    case Generator::kErase: return "erase";
    case Generator::kRandom: return "random";
  }
  return "?";
}

std::optional<Generator> generator_from_name(std::string_view text) {
  for (auto g : kAllGenerators) {
    if (name(g) == text) return g;
  }
  return std::nullopt;
}

const DyadicMatrix& generator_matrix(Generator g) {
  static const DyadicMatrix kXor = rows(2, 1, {{1, 0, 0, 0}, {0, 0, 0, 1}});
  static const DyadicMatrix kAnd = rows(2, 1, {{1, 0, 0, 0}, {kHalf, kHalf, kHalf, -kHalf}});
  static const DyadicMatrix kFalse = rows(0, 1, {{1}, {1}});
  static const DyadicMatrix kTrue = rows(0, 1, {{1}, {-1}});
  static const DyadicMatrix kDup = rows(1, 2, {{1, 0}, {0, 1}, {0, 1}, {1, 0}});
  static const DyadicMatrix kErase = rows(1, 0, {{1, 0}});
  static const DyadicMatrix kRandom = rows(0, 1, {{1}, {0}});
  switch (g) {
    case Generator::kXor: return kXor;
    case Generator::kAnd: return kAnd;
    case Generator::kFalse: return kFalse;
    case Generator::kTrue: return kTrue;
    case Generator::kDup: return kDup;
    case Generator::kErase: return kErase;
    case Generator::kRandom: return kRandom;
  }
  throw Error("unknown generator");
}

const DyadicMatrix& swap_matrix() {
  static const DyadicMatrix kSwap =
      rows(2, 2, {{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}});
  return kSwap;
}

// ---------------------------------------------------------------------------

Term Term::id(int n) {
  if (n < 0) throw TypeError("identity of negative width");
  Term t;
  t.kind_ = Kind::kId;
  t.width_ = n;
  return t;
}

Term Term::gen(Generator g) {
  Term t;
  t.kind_ = Kind::kGen;
  t.gen_ = g;
  return t;
}

Term Term::swap() {
  Term t;
  t.kind_ = Kind::kSwap;
  return t;
}

Term Term::seq(Term first, Term second) {
  Term t;
  t.kind_ = Kind::kSeq;
  t.lhs_ = std::make_shared<const Term>(std::move(first));
  t.rhs_ = std::make_shared<const Term>(std::move(second));
  return t;
}

Term Term::par(Term top, Term bottom) {
  Term t;
  t.kind_ = Kind::kPar;
  t.lhs_ = std::make_shared<const Term>(std::move(top));
  t.rhs_ = std::make_shared<const Term>(std::move(bottom));
  return t;
}

Interface Term::interface() const {
  switch (kind_) {
    case Kind::kId: return {width_, width_};
    case Kind::kGen: return arity(gen_);
    case Kind::kSwap: return {2, 2};
    case Kind::kPar: {
      auto a = lhs_->interface();
      auto b = rhs_->interface();
      return {a.n_in + b.n_in, a.n_out + b.n_out};
    }
    case Kind::kSeq: {
      auto a = lhs_->interface();
      auto b = rhs_->interface();
      if (a.n_out != b.n_in) {
        throw TypeError("ill-typed composition: '" + lhs_->to_string() + "' has " +
                        std::to_string(a.n_out) + " outputs but '" + rhs_->to_string() +
                        "' expects " + std::to_string(b.n_in) + " inputs");
      }
      return {a.n_in, b.n_out};
    }
  }
  return {};
}

std::size_t Term::generator_count() const {
  switch (kind_) {
    case Kind::kGen: return 1;
    case Kind::kSeq:
    case Kind::kPar: return lhs_->generator_count() + rhs_->generator_count();
    default: return 0;
  }
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return false;
  switch (a.kind_) {
    case Term::Kind::kId: return a.width_ == b.width_;
    case Term::Kind::kGen: return a.gen_ == b.gen_;
    case Term::Kind::kSwap: return true;
    default: return *a.lhs_ == *b.lhs_ && *a.rhs_ == *b.rhs_;
  }
}

std::string Term::to_string() const {
  switch (kind_) {
    case Kind::kId: return std::to_string(width_);
    case Kind::kGen: return std::string(name(gen_));
    case Kind::kSwap: return "swap";
    case Kind::kPar: {
      auto wrap = [](const Term& t) {
        return t.kind_ == Kind::kSeq ? "(" + t.to_string() + ")" : t.to_string();
      };
      return wrap(*lhs_) + " * " + wrap(*rhs_);
    }
    case Kind::kSeq: return lhs_->to_string() + " ; " + rhs_->to_string();
  }
  return {};
}

std::ostream& operator<<(std::ostream& os, const Term& t) { return os << t.to_string(); }

namespace {

class TermParser {
 public:
  explicit TermParser(std::string_view text) : text_(text) {}

  Term parse() {
    Term t = sequence();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

 private:
  Term sequence() {
    Term t = parallel();
    while (accept(';')) t = Term::seq(std::move(t), parallel());
    return t;
  }

  Term parallel() {
    Term t = atom();
    while (accept('*')) t = Term::par(std::move(t), atom());
    return t;
  }

  Term atom() {
    skip_space();
    if (accept('(')) {
      Term t = sequence();
      if (!accept(')')) fail("expected ')'");
      return t;
    }
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      int n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        n = n * 10 + (text_[pos_++] - '0');
      }
      return Term::id(n);
    }
    auto start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    auto word = text_.substr(start, pos_ - start);
    if (word.empty()) fail("expected a term");
    if (word == "swap" || word == "tau") return Term::swap();
    if (auto g = generator_from_name(word)) return Term::gen(*g);
    pos_ = start;
    fail("unknown generator '" + std::string(word) + "'");
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) {
    throw ParseError(message, 1, static_cast<int>(pos_) + 1);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Term Term::parse(std::string_view text) { return TermParser(text).parse(); }

DyadicMatrix eval_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::kId: return DyadicMatrix::identity(t.id_width());
    case Term::Kind::kGen: return generator_matrix(t.generator());
    case Term::Kind::kSwap: return swap_matrix();
    case Term::Kind::kSeq:
      t.interface();  // type check with a useful message
      return compose(eval_term(t.rhs()), eval_term(t.lhs()));
    case Term::Kind::kPar: return tensor(eval_term(t.lhs()), eval_term(t.rhs()));
  }
  throw Error("unknown term kind");
}

}  // namespace simcat
