#pragma once

#include "qdice/solvers.hpp"

namespace qdice::fairness {

inline constexpr double kFairnessTolerance = 1e-10;

struct FairnessSolution {
  double eta_star = 0.0;
  // The two sides of the fairness equation at eta_star: (P_A*, P_B*) for the
  // balanced coin.
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;  // |lhs - rhs|
};

/// Balanced coin (p = 1/2): eta with P_A* = P_B*. The residual
/// P_A*(eta) - P_B*(eta) is strictly decreasing on [0, 1/2].
FairnessSolution solve_balanced(Bracket bracket = {0.0, 0.5});

}  // namespace qdice::fairness
