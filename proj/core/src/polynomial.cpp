#include "pzp/polynomial.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "pzp/errors.hpp"

namespace pzp {

namespace {

double int_pow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// int_{-1}^{1} x^e dx
double interval_moment(int e) { return (e % 2 == 0) ? 2.0 / (e + 1) : 0.0; }

struct Lexer {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
};

}  // namespace

Poly3::Poly3(double constant) {
  if (constant != 0.0) terms_.push_back({constant, 0, 0, 0});
}

void Poly3::add_term(double coef, int e1, int e2, int e3) {
  if (coef == 0.0) return;
  for (size_t k = 0; k < terms_.size(); ++k) {
    Term& t = terms_[k];
    if (t.e1 == e1 && t.e2 == e2 && t.e3 == e3) {
      t.coef += coef;
      if (t.coef == 0.0) terms_.erase(terms_.begin() + k);
      return;
    }
  }
  terms_.push_back({coef, e1, e2, e3});
}

Poly3 Poly3::parse(const std::string& expr) {
  Lexer lx{expr};
  Poly3 p;
  bool first = true;
  while (!lx.done()) {
    double sign = 1.0;
    char c = lx.peek();
    if (c == '+' || c == '-') {
      sign = (c == '-') ? -1.0 : 1.0;
      ++lx.i;
    } else if (!first) {
      throw ParseError("polynomial: expected '+' or '-' before term in '" + expr + "'");
    }
    first = false;

    // one term: product of factors
    double coef = sign;
    int e[3] = {0, 0, 0};
    bool expect_factor = true;
    while (expect_factor) {
      lx.skip_ws();
      if (lx.i >= lx.s.size()) throw ParseError("polynomial: dangling operator in '" + expr + "'");
      char f = lx.s[lx.i];
      if (f == 'x') {
        if (lx.i + 1 >= lx.s.size() || lx.s[lx.i + 1] < '1' || lx.s[lx.i + 1] > '3')
          throw ParseError("polynomial: variables are x1, x2, x3 in '" + expr + "'");
        int var = lx.s[lx.i + 1] - '1';
        lx.i += 2;
        int exp = 1;
        lx.skip_ws();
        if (lx.i < lx.s.size() && lx.s[lx.i] == '^') {
          ++lx.i;
          lx.skip_ws();
          if (lx.i >= lx.s.size() || !std::isdigit(static_cast<unsigned char>(lx.s[lx.i])))
            throw ParseError("polynomial: exponent must be a digit in '" + expr + "'");
          exp = lx.s[lx.i] - '0';
          ++lx.i;
        }
        e[var] += exp;
      } else if (std::isdigit(static_cast<unsigned char>(f)) || f == '.') {
        char* end = nullptr;
        coef *= std::strtod(lx.s.c_str() + lx.i, &end);
        if (end == lx.s.c_str() + lx.i)
          throw ParseError("polynomial: bad numeric literal in '" + expr + "'");
        lx.i = end - lx.s.c_str();
      } else {
        throw ParseError(std::string("polynomial: unexpected character '") + f + "' in '" + expr + "'");
      }
      lx.skip_ws();
      if (lx.i < lx.s.size() && lx.s[lx.i] == '*') {
        ++lx.i;
        expect_factor = true;
      } else {
        expect_factor = false;
      }
    }
    if (e[0] + e[1] + e[2] > 3)
      throw ParseError("polynomial: total degree exceeds 3 in '" + expr + "'");
    p.add_term(coef, e[0], e[1], e[2]);
  }
  return p;
}

double Poly3::eval(double x1, double x2, double x3) const {
  double r = 0.0;
  for (const auto& t : terms_)
    r += t.coef * int_pow(x1, t.e1) * int_pow(x2, t.e2) * int_pow(x3, t.e3);
  return r;
}

double Poly3::eval2(double x1, double x2) const { return eval(x1, x2, 0.0); }

int Poly3::total_degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.e1 + t.e2 + t.e3);
  return d;
}

int Poly3::degree_x3() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.e3);
  return d;
}

bool Poly3::is_zero() const { return terms_.empty(); }

Poly3 Poly3::thickness_moment(int k) const {
  Poly3 r;
  for (const auto& t : terms_) r.add_term(t.coef * interval_moment(t.e3 + k), t.e1, t.e2, 0);
  return r;
}

Poly3 Poly3::at_x3(double value) const {
  Poly3 r;
  for (const auto& t : terms_) r.add_term(t.coef * int_pow(value, t.e3), t.e1, t.e2, 0);
  return r;
}

Poly3 Poly3::operator+(const Poly3& other) const {
  Poly3 r = *this;
  for (const auto& t : other.terms_) r.add_term(t.coef, t.e1, t.e2, t.e3);
  return r;
}

Poly3 Poly3::operator*(double s) const {
  Poly3 r;
  for (const auto& t : terms_) r.add_term(t.coef * s, t.e1, t.e2, t.e3);
  return r;
}

}  // namespace pzp
