#pragma once

#include <cmath>

// Minimal double-double arithmetic (~31 significant digits): enough headroom
// to evaluate the I-Bessel difference form of psi_p, whose terms cancel by a
// factor e^{2x}, to 1e-12 relative at x = 20. Error-free transforms follow
// Dekker/Knuth; fma keeps two_prod exact.

namespace ltk::detail {

struct dd {
  double hi = 0.0, lo = 0.0;
  dd() = default;
  dd(double h) : hi(h), lo(0.0) {}
  dd(double h, double l) : hi(h), lo(l) {}
  double to_double() const { return hi + lo; }
};

inline dd two_sum(double a, double b) {
  const double s = a + b;
  const double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd quick_two_sum(double a, double b) {
  const double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
  const double p = a * b;
  return {p, std::fma(a, b, -p)};
}

inline dd add(dd a, dd b) {
  dd s = two_sum(a.hi, b.hi);
  s.lo += a.lo + b.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd sub(dd a, dd b) { return add(a, dd{-b.hi, -b.lo}); }

inline dd mul(dd a, dd b) {
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd div(dd a, dd b) {
  const double q1 = a.hi / b.hi;
  dd r = sub(a, mul(dd{q1}, b));
  const double q2 = r.hi / b.hi;
  r = sub(r, mul(dd{q2}, b));
  const double q3 = r.hi / b.hi;
  return add(add(dd{q1}, dd{q2}), dd{q3});
}

inline dd operator+(dd a, dd b) { return add(a, b); }
inline dd operator-(dd a, dd b) { return sub(a, b); }
inline dd operator*(dd a, dd b) { return mul(a, b); }
inline dd operator/(dd a, dd b) { return div(a, b); }

inline const dd kPi{3.141592653589793, 1.2246467991473532e-16};
inline const dd kLn2{0.6931471805599453, 2.3190468138462996e-17};

inline dd dd_exp(dd a) {
  // e^a = 2^k e^r, |r| <= ln2/2, Taylor in dd
  const double k = std::nearbyint(a.hi / kLn2.hi);
  dd r = sub(a, mul(dd{k}, kLn2));
  dd term{1.0};
  dd sum{1.0};
  for (int n = 1; n <= 26; ++n) {
    term = mul(term, r);
    term = div(term, dd{static_cast<double>(n)});
    sum = add(sum, term);
    if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  const double scale = std::ldexp(1.0, static_cast<int>(k));
  return {sum.hi * scale, sum.lo * scale};
}

inline dd dd_log(dd a) {
  // Newton refinement of the double-precision seed: y' = y + a e^{-y} - 1
  dd y{std::log(a.hi)};
  for (int it = 0; it < 2; ++it) {
    const dd e = dd_exp(dd{-y.hi, -y.lo});
    y = add(y, sub(mul(a, e), dd{1.0}));
  }
  return y;
}

inline dd dd_pow(dd base, dd expo) { return dd_exp(mul(expo, dd_log(base))); }

inline dd dd_sin(dd x) {
  // plain Taylor; adequate for |x| < 2 (all uses are sin(pi p), p in (0,1))
  dd term = x;
  dd sum = x;
  const dd x2 = mul(x, x);
  for (int n = 1; n <= 24; ++n) {
    term = mul(term, x2);
    term = div(term, dd{static_cast<double>((2 * n) * (2 * n + 1))});
    term.hi = -term.hi;
    term.lo = -term.lo;
    sum = add(sum, term);
    if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
  }
  return sum;
}

}  // namespace ltk::detail
