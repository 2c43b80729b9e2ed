#ifndef FORMALIS_PARSER_HPP
#define FORMALIS_PARSER_HPP

#include <cctype>
#include <string>
#include <vector>

#include "formalis/poly.hpp"

namespace formalis {

// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := coeff ('*' factor)* | factor ('*' factor)*
//   factor := ident ('^' sint)?
//   coeff  := int ('/' uint)?
// Identifiers match [a-zA-Z_][a-zA-Z0-9_]*; whitespace is insignificant.

namespace detail {

class PolyParser {
 public:
  PolyParser(const std::string& text, VarSpecPtr spec)
      : text_(text), spec_(std::move(spec)) {}

  Poly parse() {
    std::vector<Poly::Term> terms;
    skip_ws();
    bool neg = consume_sign();
    parse_term(terms, neg);
    skip_ws();
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c != '+' && c != '-') fail("expected '+' or '-'");
      ++pos_;
      skip_ws();
      parse_term(terms, c == '-');
      skip_ws();
    }
    return Poly::from_terms(spec_, std::move(terms));
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw parse_error(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume_sign() {
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      bool neg = text_[pos_] == '-';
      ++pos_;
      skip_ws();
      return neg;
    }
    return false;
  }

  bool at_digit() const {
    return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
  }
  bool at_ident() const {
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string read_digits() {
    if (!at_digit()) fail("expected digits");
    std::size_t start = pos_;
    while (at_digit()) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string read_ident() {
    std::size_t start = pos_;
    ++pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
        ++pos_;
      else
        break;
    }
    return text_.substr(start, pos_ - start);
  }

  Rat parse_coeff() {
    std::string num = read_digits();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      skip_ws();
      std::string den = read_digits();
      skip_ws();
      if (BigInt(den) == 0) fail("zero denominator");
      return Rat(BigInt(num), BigInt(den));
    }
    return Rat(BigInt(num));
  }

  void parse_factor(Monomial& m) {
    std::size_t ident_pos = pos_;
    std::string name = read_ident();
    auto idx = spec_->index_of(name);
    if (!idx) {
      pos_ = ident_pos;
      fail("unknown variable '" + name + "'");
    }
    Exp exp = 1;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      skip_ws();
      bool neg = false;
      std::size_t exp_pos = pos_;
      if (pos_ < text_.size() && text_[pos_] == '-') {
        neg = true;
        ++pos_;
      }
      std::string digits = read_digits();
      try {
        long v = std::stol(digits);
        if (v > std::numeric_limits<Exp>::max()) throw std::out_of_range("exp");
        exp = static_cast<Exp>(neg ? -v : v);
      } catch (const std::exception&) {
        pos_ = exp_pos;
        fail("exponent out of range");
      }
      if (exp < 0 && !spec_->invertible(*idx)) {
        pos_ = exp_pos;
        fail("negative exponent on non-invertible variable '" + name + "'");
      }
    }
    m.e[*idx] = checked_exp_add(m.e[*idx], exp);
  }

  void parse_term(std::vector<Poly::Term>& out, bool negate) {
    Rat coeff(1);
    Monomial m(spec_->size());
    if (at_digit()) {
      coeff = parse_coeff();
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
        if (!at_ident()) fail("expected variable after '*'");
        parse_factor(m);
        skip_ws();
      }
    } else if (at_ident()) {
      parse_factor(m);
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        skip_ws();
        if (!at_ident()) fail("expected variable after '*'");
        parse_factor(m);
        skip_ws();
      }
    } else {
      fail("expected coefficient or variable");
    }
    if (negate) coeff = -coeff;
    out.emplace_back(std::move(m), std::move(coeff));
  }

  const std::string& text_;
  VarSpecPtr spec_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses the polynomial text grammar over the given variable spec.
/// parse_poly(to_string(p), spec) == p.
inline Poly parse_poly(const std::string& text, const VarSpecPtr& spec) {
  return detail::PolyParser(text, spec).parse();
}

/// Semicolon- or comma-separated generator list.
inline std::vector<Poly> parse_poly_list(const std::string& text, const VarSpecPtr& spec) {
  std::vector<Poly> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string piece = text.substr(start, end - start);
    bool blank = piece.find_first_not_of(" \t\n\r") == std::string::npos;
    if (!blank) {
      try {
        out.push_back(parse_poly(piece, spec));
      } catch (const parse_error& e) {
        throw parse_error(e.what(), start + e.position());
      }
    }
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == ';' || text[i] == ',') {
      flush(i);
      start = i + 1;
    }
  }
  flush(text.size());
  return out;
}

}  // namespace formalis

#endif
