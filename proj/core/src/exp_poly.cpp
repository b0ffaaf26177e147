#include "recon/exp_poly.hpp"

#include <cmath>

#include "recon/errors.hpp"

namespace recon::numerics {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

}  // namespace

double exp_moment(int m, double b, double horizon) {
  if (m < 0) throw DomainError("exp_moment: negative power");
  const double T = horizon;
  if (std::abs(b) * T < 1.0) {
    // sum_j (-b)^j T^{m+j+1} / (j! (m+j+1))
    double term = std::pow(T, m + 1);  // (-b T)^j / j! * T^{m+1}
    double sum = 0.0;
    for (int j = 0; j < 60; ++j) {
      const double contrib = term / static_cast<double>(m + j + 1);
      sum += contrib;
      if (std::abs(contrib) <= 1e-18 * std::abs(sum)) break;
      term *= -b * T / static_cast<double>(j + 1);
    }
    return sum;
  }
  const double tail = std::exp(-b * T);
  double e = -std::expm1(-b * T) / b;
  double tm = 1.0;
  for (int j = 1; j <= m; ++j) {
    tm *= T;
    e = (static_cast<double>(j) * e - tm * tail) / b;
  }
  return e;
}

double ExpPoly::preferred_shift(double rate) const { return rate * horizon_ > 1.0 ? horizon_ : 0.0; }

void ExpPoly::push(Term term) {
  if (term.coef == 0.0) return;
  for (auto& t : terms_) {
    if (t.power == term.power && t.rate == term.rate && t.shift == term.shift) {
      t.coef += term.coef;
      return;
    }
  }
  terms_.push_back(term);
}

ExpPoly& ExpPoly::add_term(double coef, int power, double rate) {
  const double s = preferred_shift(rate);
  push({coef * (s == 0.0 ? 1.0 : std::exp(rate * s)), power, rate, s});
  return *this;
}

ExpPoly& ExpPoly::add_shifted(double coef, int power, double rate, double shift) {
  if (shift != 0.0 && shift != horizon_) throw DomainError("ExpPoly: shift must be 0 or the horizon");
  push({coef, power, rate, shift});
  return *this;
}

ExpPoly ExpPoly::operator+(const ExpPoly& rhs) const {
  ExpPoly out = *this;
  for (const auto& t : rhs.terms_) out.push(t);
  return out;
}

ExpPoly ExpPoly::operator-(const ExpPoly& rhs) const { return *this + rhs * -1.0; }

ExpPoly ExpPoly::operator*(double s) const {
  ExpPoly out(horizon_);
  for (auto t : terms_) {
    t.coef *= s;
    out.push(t);
  }
  return out;
}

ExpPoly ExpPoly::operator*(const ExpPoly& rhs) const {
  ExpPoly out(horizon_);
  for (const auto& a : terms_) {
    for (const auto& b : rhs.terms_) {
      const double rate = a.rate + b.rate;
      const double s = preferred_shift(rate);
      const double fold = std::exp(rate * s - a.rate * a.shift - b.rate * b.shift);
      out.push({a.coef * b.coef * fold, a.power + b.power, rate, s});
    }
  }
  return out;
}

ExpPoly ExpPoly::derivative() const {
  ExpPoly out(horizon_);
  for (const auto& t : terms_) {
    if (t.power > 0) out.push({t.coef * t.power, t.power - 1, t.rate, t.shift});
    if (t.rate != 0.0) out.push({t.coef * t.rate, t.power, t.rate, t.shift});
  }
  return out;
}

double ExpPoly::operator()(double t) const {
  double v = 0.0;
  for (const auto& term : terms_) {
    v += term.coef * std::pow(t, term.power) * std::exp(term.rate * (t - term.shift));
  }
  return v;
}

double ExpPoly::integral() const {
  double total = 0.0;
  for (const auto& t : terms_) {
    if (t.shift == 0.0) {
      total += t.coef * exp_moment(t.power, -t.rate, horizon_);
      continue;
    }
    // u = T - t turns the shifted exponential into e^{-rate u}
    double acc = 0.0;
    for (int j = 0; j <= t.power; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      acc += binomial(t.power, j) * std::pow(horizon_, t.power - j) * sign *
             exp_moment(j, t.rate, horizon_);
    }
    total += t.coef * acc;
  }
  return total;
}

}  // namespace recon::numerics
