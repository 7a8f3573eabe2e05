#pragma once

// Test-only reference computations. None of these call into the library, so
// they check it along an independent route.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

/// Alice's win-and-pass probability for the delta state, written out from the
/// amplitudes of the evolved state: after U_eta the |↓₂↑₃> component of
/// sqrt(delta)|↓↑↓> is sqrt(delta * eta / (p + eta)), and |xi> weighs
/// |↑↓↓> and |↓↓↑> by sqrt((1-p-eta)/(1-p)) and sqrt(eta/(1-p)).
inline double alice_delta_amplitude_route(double p, double eta, double delta) {
  const double a_udd = std::sqrt(1.0 - delta);
  const double a_ddu = std::sqrt(delta) * std::sqrt(eta / (p + eta));
  const double xi_udd = std::sqrt((1.0 - p - eta) / (1.0 - p));
  const double xi_ddu = std::sqrt(eta / (1.0 - p));
  const double ov = xi_udd * a_udd + xi_ddu * a_ddu;
  return ov * ov;
}

/// Maximum of f over a uniform grid of `points` on [lo, hi].
inline double grid_max(const std::function<double(double)>& f, double lo, double hi, std::size_t points,
                       double* argmax = nullptr) {
  double best = -INFINITY;
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double v = f(x);
    if (v > best) {
      best = v;
      if (argmax) *argmax = x;
    }
  }
  return best;
}

/// Zoomed grid search: repeatedly shrink the window around the best point.
inline double zoom_max(const std::function<double(double)>& f, double lo, double hi, int levels = 8,
                       std::size_t points = 2001) {
  double best = -INFINITY;
  for (int l = 0; l < levels; ++l) {
    double x = lo;
    best = grid_max(f, lo, hi, points, &x);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    lo = std::max(lo, x - 2 * step);
    hi = std::min(hi, x + 2 * step);
  }
  return best;
}

/// Sign-change scan followed by plain halving, for monotone residuals.
inline double scan_root(const std::function<double(double)>& f, double lo, double hi, std::size_t points = 10001) {
  double prev_x = lo;
  double prev_f = f(lo);
  for (std::size_t i = 1; i < points; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    const double fx = f(x);
    if ((prev_f <= 0) != (fx <= 0)) {
      double a = prev_x, b = x, fa = prev_f;
      for (int k = 0; k < 200; ++k) {
        const double m = 0.5 * (a + b);
        const double fm = f(m);
        if ((fm <= 0) == (fa <= 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      return 0.5 * (a + b);
    }
    prev_x = x;
    prev_f = fx;
  }
  return NAN;
}

/// Party n's losing probability in the ladder, by explicitly summing
/// "lose at stage k having survived stages before k": stage losing
/// probabilities are (s-1)/s + d_0 at entry (s = max(n, 2)) and 1/m + d_k.
inline double ladder_losing_sum(int n, int n_parties, const std::vector<double>& d) {
  const int s = std::max(n, 2);
  double total = 0.0;
  double alive = 1.0;
  for (std::size_t k = 0; k < d.size(); ++k) {
    const int m = s + static_cast<int>(k);
    const double lose = (k == 0 ? static_cast<double>(s - 1) / s : 1.0 / m) + d[k];
    total += alive * lose;
    alive *= 1.0 - lose;
  }
  (void)n_parties;
  return total;
}

/// Honest winning probabilities of every party, by enumerating every stage
/// outcome of the ladder (2^(N-1) paths).
inline std::vector<double> ladder_enumeration(int n_parties) {
  std::vector<double> win(static_cast<std::size_t>(n_parties), 0.0);
  const std::uint64_t paths = std::uint64_t{1} << (n_parties - 1);
  for (std::uint64_t mask = 0; mask < paths; ++mask) {
    int holder = 1;
    double prob = 1.0;
    for (int stage = 0; stage < n_parties - 1; ++stage) {
      const int entrant = stage + 2;
      const bool entrant_wins = (mask >> stage) & 1u;
      prob *= entrant_wins ? 1.0 / entrant : 1.0 - 1.0 / entrant;
      if (entrant_wins) holder = entrant;
    }
    win[static_cast<std::size_t>(holder - 1)] += prob;
  }
  return win;
}

/// Three binomial standard deviations around `p` for `trials` draws.
inline bool within_3_sigma(double frequency, double p, std::uint64_t trials) {
  const double sigma = std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  return std::abs(frequency - p) <= 3.0 * sigma;
}

}  // namespace oracle
