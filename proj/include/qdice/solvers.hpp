#pragma once

// One-dimensional solvers shared by the fairness and dice optimizations.

#include <functional>

namespace qdice::fairness {

struct Bracket {
  double lo = 0.0;
  double hi = 1.0;
};

struct RootResult {
  double x = 0.0;
  int iterations = 0;
};

/// Bisection. Requires f(lo) and f(hi) of opposite sign (a zero endpoint is
/// returned directly). Stops when |f(x)| <= tol or the bracket is narrower
/// than tol; takes at most ceil(log2((hi - lo) / tol)) + 2 iterations.
/// Throws BracketingError without a sign change, DomainError on tol <= 0.
RootResult find_root(const std::function<double(double)>& f, Bracket bracket, double tol);

struct MaxResult {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section search for the maximum of a unimodal f on [lo, hi]; the
/// endpoints are compared against the interior optimum.
MaxResult maximize_unimodal(const std::function<double(double)>& f, Bracket bracket, double tol = 1e-12);

}  // namespace qdice::fairness
