#pragma once

#include <vector>

namespace recon::numerics {

/// Finite sum of c * t^m * exp(a * (t - shift)) on a fixed horizon [0, T].
///
/// The shift is 0 or T and is chosen so the exponential stays O(1) on the
/// horizon; products renormalise it, so squaring an e^{r t_N} mode with
/// r t_N of several hundred never overflows. Used to integrate products of
/// closed-form inventory paths exactly.
class ExpPoly {
 public:
  struct Term {
    double coef;
    int power;
    double rate;
    double shift;
  };

  explicit ExpPoly(double horizon) : horizon_(horizon) {}

  double horizon() const noexcept { return horizon_; }
  const std::vector<Term>& terms() const noexcept { return terms_; }

  /// Adds coef * t^power * exp(rate * t).
  ExpPoly& add_term(double coef, int power, double rate);
  /// Adds coef * t^power * exp(rate * (t - shift)), shift in {0, horizon}.
  ExpPoly& add_shifted(double coef, int power, double rate, double shift);

  ExpPoly operator+(const ExpPoly& rhs) const;
  ExpPoly operator-(const ExpPoly& rhs) const;
  ExpPoly operator*(const ExpPoly& rhs) const;
  ExpPoly operator*(double s) const;

  ExpPoly derivative() const;
  double operator()(double t) const;
  /// Exact integral over [0, horizon].
  double integral() const;

 private:
  double preferred_shift(double rate) const;
  void push(Term term);

  double horizon_;
  std::vector<Term> terms_;
};

/// \int_0^T u^m e^{-b u} du; power series when |b| T < 1.
double exp_moment(int m, double b, double horizon);

}  // namespace recon::numerics
