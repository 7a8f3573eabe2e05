#include "qdice/solvers.hpp"

#include <cmath>
#include <string>

#include "qdice/errors.hpp"

namespace qdice::fairness {

RootResult find_root(const std::function<double(double)>& f, Bracket bracket, double tol) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  if (!(bracket.lo < bracket.hi)) throw BracketingError("bracket must satisfy lo < hi");
  double lo = bracket.lo;
  double hi = bracket.hi;
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return {lo, 0};
  if (f_hi == 0.0) return {hi, 0};
  if (std::signbit(f_lo) == std::signbit(f_hi)) {
    throw BracketingError("no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  RootResult r;
  while (true) {
    ++r.iterations;
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol || (hi - lo) <= tol) {
      r.x = mid;
      return r;
    }
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
}

MaxResult maximize_unimodal(const std::function<double(double)>& f, Bracket bracket, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = bracket.lo;
  double b = bracket.hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  MaxResult best{0.5 * (a + b), f(0.5 * (a + b))};
  for (double x : {bracket.lo, bracket.hi}) {
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

}  // namespace qdice::fairness
