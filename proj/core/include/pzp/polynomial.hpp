#pragma once

#include <string>
#include <vector>

namespace pzp {

// Trivariate polynomial in (x1, x2, x3) of total degree <= 3. Load fields are
// restricted to this family so that thickness moments and plate right-hand
// sides are integrated exactly by the Gauss rules used in assembly.
//
// Accepted syntax: sum of terms, each term a '*'-separated product of numeric
// literals and variable factors x1, x2, x3 with an optional integer exponent,
// e.g. "1 + 2*x1*x2 - 0.5*x3^2". No parentheses.
class Poly3 {
public:
  struct Term {
    double coef;
    int e1, e2, e3;
  };

  Poly3() = default;
  explicit Poly3(double constant);

  // Throws ParseError on malformed input or degree > 3.
  static Poly3 parse(const std::string& expr);

  double eval(double x1, double x2, double x3) const;
  // In-plane evaluation; valid only when degree_x3() == 0.
  double eval2(double x1, double x2) const;

  int total_degree() const;
  int degree_x3() const;
  bool is_zero() const;

  // Integral over the thickness, p -> (x1,x2) |-> int_{-1}^{1} x3^k p dx3.
  Poly3 thickness_moment(int k) const;
  // Substitution p -> p(x1, x2, value).
  Poly3 at_x3(double value) const;

  Poly3 operator+(const Poly3& other) const;
  Poly3 operator*(double s) const;

  const std::vector<Term>& terms() const { return terms_; }

private:
  void add_term(double coef, int e1, int e2, int e3);
  std::vector<Term> terms_;
};

}  // namespace pzp
