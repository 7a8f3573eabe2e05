#include "qdice/fairness.hpp"

#include <cmath>

#include "qdice/adversary.hpp"

namespace qdice::fairness {

FairnessSolution solve_balanced(Bracket bracket) {
  const auto residual = [](double eta) {
    const wcf::ProtocolParams params{0.5, eta};
    return adversary::alice_optimal_value(params).value - adversary::bob_optimal_value(params).value;
  };
  const RootResult root = find_root(residual, bracket, 1e-14);
  const wcf::ProtocolParams params{0.5, root.x};
  FairnessSolution s;
  s.eta_star = root.x;
  s.lhs = adversary::alice_optimal_value(params).value;
  s.rhs = adversary::bob_optimal_value(params).value;
  s.residual = std::abs(s.lhs - s.rhs);
  return s;
}

}  // namespace qdice::fairness
