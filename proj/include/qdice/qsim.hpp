#pragma once

// Dense pure-state engine for the two- and three-qubit registers of the
// coin-flipping protocol, with an optional ancilla register owned by Alice.
//
// Qubits are addressed by position: 0 is qubit 1 (Alice's), 1 is qubit 2
// (sent to Bob), 2 is qubit 3 (Bob's local qubit). The ancilla index is the
// fastest-varying coordinate of the amplitude array.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qdice::qsim {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kZeroBranch = 1e-12;
inline constexpr int kMaxQubits = 3;
inline constexpr int kMaxAncillaDim = 64;

enum class Spin : unsigned char { Down = 0, Up = 1 };

struct RegisterShape {
  int qubits = 2;
  int ancilla_dim = 1;

  std::size_t size() const { return (std::size_t{1} << qubits) * static_cast<std::size_t>(ancilla_dim); }
  friend bool operator==(const RegisterShape&, const RegisterShape&) = default;
};

struct BasisLabel {
  std::vector<Spin> bits;
  int ancilla = 0;

  /// Parses "udd" style strings ('u' = up, 'd' = down).
  static BasisLabel parse(std::string_view spins, int ancilla = 0);
  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

class StateVector {
 public:
  /// All-zero vector; callers fill it and normalize.
  explicit StateVector(RegisterShape shape);
  StateVector(RegisterShape shape, std::vector<Complex> amplitudes);

  /// Normalized superposition of the given terms. Labels must fit `shape`.
  static StateVector from_terms(RegisterShape shape,
                                std::initializer_list<std::pair<std::string_view, Complex>> terms);
  static StateVector basis(RegisterShape shape, const BasisLabel& label);

  const RegisterShape& shape() const { return shape_; }
  std::span<const Complex> amplitudes() const { return amps_; }
  std::span<Complex> amplitudes() { return amps_; }

  Complex amplitude(const BasisLabel& label) const;
  Complex& amplitude(const BasisLabel& label);
  std::size_t index_of(const BasisLabel& label) const;
  BasisLabel label_of(std::size_t index) const;

  double norm_squared() const;
  bool is_normalized(double tol = kNormTolerance) const;
  /// Throws DomainError on a zero vector.
  StateVector normalized() const;

  StateVector& operator+=(const StateVector& other);
  StateVector& operator*=(Complex factor);
  friend StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
  friend StateVector operator*(Complex factor, StateVector a) { return a *= factor; }

  bool approx_equal(const StateVector& other, double tol = kNormTolerance) const;

 private:
  RegisterShape shape_;
  std::vector<Complex> amps_;
};

/// Outcome of one branch of a two-outcome projective measurement.
struct TestOutcome {
  double probability = 0.0;
  std::optional<StateVector> post_state;  // absent when probability < kZeroBranch
};

struct TestResult {
  TestOutcome pass;
  TestOutcome fail;
};

/// Projector onto fixed spins on a subset of qubits, identity elsewhere.
struct BasisPattern {
  std::vector<std::pair<int, Spin>> fixed;  // (qubit position, required spin)
};

/// Projector |t><t| on the qubit register, tensored with identity on the
/// ancilla. `target` must have ancilla_dim 1 and the same qubit count.
struct PureTarget {
  StateVector target;
};

using TestTarget = std::variant<BasisPattern, PureTarget>;

/// state ⊗ |↓₃>. Requires exactly two qubits.
StateVector attach_down_ancilla_qubit(const StateVector& state);

/// Bob's rotation of span{|↑₂↓₃>, |↓₂↑₃>}; identity elsewhere. Requires three
/// qubits, 0 <= eta <= 1 - p and p + eta > 0.
StateVector apply_u_eta(const StateVector& state, double p, double eta);

/// Adjoint of apply_u_eta. The 2x2 block is real symmetric, so this is the
/// same map; it is kept separate so tests state intent.
StateVector apply_u_eta_adjoint(const StateVector& state, double p, double eta);

TestResult projective_test(const StateVector& state, const TestTarget& target);

/// <a|b>. Shapes must match.
Complex overlap(const StateVector& a, const StateVector& b);

}  // namespace qdice::qsim
