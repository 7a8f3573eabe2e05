#include "qdice/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdice/errors.hpp"

namespace qdice::qsim {
namespace {

void check_shape(const RegisterShape& shape) {
  if (shape.qubits < 1 || shape.qubits > kMaxQubits) {
    throw ShapeError("register must hold 1.." + std::to_string(kMaxQubits) + " qubits, got " +
                     std::to_string(shape.qubits));
  }
  if (shape.ancilla_dim < 1 || shape.ancilla_dim > kMaxAncillaDim) {
    throw ShapeError("ancilla dimension must be in 1.." + std::to_string(kMaxAncillaDim));
  }
}

std::size_t qubit_bit(const RegisterShape& shape, int position) {
  return std::size_t{1} << (shape.qubits - 1 - position);
}

double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

TestOutcome make_branch(StateVector projected) {
  const double prob = projected.norm_squared();
  TestOutcome out;
  out.probability = clamp_probability(prob);
  if (prob >= kZeroBranch) {
    projected *= 1.0 / std::sqrt(prob);
    out.post_state = std::move(projected);
  }
  return out;
}

void check_u_eta_params(double p, double eta) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("p must lie in [0, 1]");
  if (!(eta >= 0.0 && eta <= 1.0 - p + 1e-12)) throw DomainError("eta must lie in [0, 1 - p]");
  if (p + eta <= 0.0) throw DegenerateParameterError("U_eta is undefined for p + eta = 0");
}

}  // namespace

BasisLabel BasisLabel::parse(std::string_view spins, int ancilla) {
  BasisLabel label;
  label.ancilla = ancilla;
  for (char c : spins) {
    if (c == 'u' || c == 'U') {
      label.bits.push_back(Spin::Up);
    } else if (c == 'd' || c == 'D') {
      label.bits.push_back(Spin::Down);
    } else {
      throw ShapeError("basis label characters must be 'u' or 'd'");
    }
  }
  return label;
}

StateVector::StateVector(RegisterShape shape) : shape_(shape) {
  check_shape(shape_);
  amps_.assign(shape_.size(), Complex{});
}

StateVector::StateVector(RegisterShape shape, std::vector<Complex> amplitudes)
    : shape_(shape), amps_(std::move(amplitudes)) {
  check_shape(shape_);
  if (amps_.size() != shape_.size()) throw ShapeError("amplitude count does not match register shape");
}

StateVector StateVector::from_terms(RegisterShape shape,
                                    std::initializer_list<std::pair<std::string_view, Complex>> terms) {
  StateVector s(shape);
  for (const auto& [spins, amp] : terms) s.amplitude(BasisLabel::parse(spins)) += amp;
  return s.normalized();
}

StateVector StateVector::basis(RegisterShape shape, const BasisLabel& label) {
  StateVector s(shape);
  s.amplitude(label) = 1.0;
  return s;
}

std::size_t StateVector::index_of(const BasisLabel& label) const {
  if (static_cast<int>(label.bits.size()) != shape_.qubits) throw ShapeError("label length does not match qubit count");
  if (label.ancilla < 0 || label.ancilla >= shape_.ancilla_dim) throw ShapeError("ancilla index out of range");
  std::size_t q = 0;
  for (Spin s : label.bits) q = (q << 1) | (s == Spin::Up ? 1u : 0u);
  return q * static_cast<std::size_t>(shape_.ancilla_dim) + static_cast<std::size_t>(label.ancilla);
}

BasisLabel StateVector::label_of(std::size_t index) const {
  if (index >= amps_.size()) throw ShapeError("basis index out of range");
  const auto dim = static_cast<std::size_t>(shape_.ancilla_dim);
  BasisLabel label;
  label.ancilla = static_cast<int>(index % dim);
  const std::size_t q = index / dim;
  for (int pos = 0; pos < shape_.qubits; ++pos) {
    label.bits.push_back((q & qubit_bit(shape_, pos)) ? Spin::Up : Spin::Down);
  }
  return label;
}

Complex StateVector::amplitude(const BasisLabel& label) const { return amps_[index_of(label)]; }
Complex& StateVector::amplitude(const BasisLabel& label) { return amps_[index_of(label)]; }

double StateVector::norm_squared() const {
  double n = 0.0;
  for (const auto& a : amps_) n += std::norm(a);
  return n;
}

bool StateVector::is_normalized(double tol) const { return std::abs(norm_squared() - 1.0) <= tol; }

StateVector StateVector::normalized() const {
  const double n = norm_squared();
  if (n <= 0.0) throw DomainError("cannot normalize the zero vector");
  StateVector out = *this;
  out *= 1.0 / std::sqrt(n);
  return out;
}

StateVector& StateVector::operator+=(const StateVector& other) {
  if (!(shape_ == other.shape_)) throw ShapeError("cannot add states of different shapes");
  for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += other.amps_[i];
  return *this;
}

StateVector& StateVector::operator*=(Complex factor) {
  for (auto& a : amps_) a *= factor;
  return *this;
}

bool StateVector::approx_equal(const StateVector& other, double tol) const {
  if (!(shape_ == other.shape_)) return false;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (std::abs(amps_[i] - other.amps_[i]) > tol) return false;
  }
  return true;
}

StateVector attach_down_ancilla_qubit(const StateVector& state) {
  if (state.shape().qubits != 2) throw ShapeError("attach_down_ancilla_qubit expects a two-qubit register");
  const RegisterShape out_shape{3, state.shape().ancilla_dim};
  StateVector out(out_shape);
  const auto dim = static_cast<std::size_t>(out_shape.ancilla_dim);
  const auto in = state.amplitudes();
  auto dst = out.amplitudes();
  for (std::size_t q = 0; q < 4; ++q) {
    // New qubit is the least significant and set to Down (bit 0).
    const std::size_t q3 = q << 1;
    for (std::size_t a = 0; a < dim; ++a) dst[q3 * dim + a] = in[q * dim + a];
  }
  return out;
}

StateVector apply_u_eta(const StateVector& state, double p, double eta) {
  check_u_eta_params(p, eta);
  if (state.shape().qubits != 3) throw ShapeError("U_eta acts on qubits 2 and 3 of a three-qubit register");
  const double c = std::sqrt(p / (p + eta));
  const double s = std::sqrt(eta / (p + eta));
  StateVector out = state;
  const auto dim = static_cast<std::size_t>(state.shape().ancilla_dim);
  const auto in = state.amplitudes();
  auto dst = out.amplitudes();
  for (std::size_t q1 = 0; q1 < 2; ++q1) {
    const std::size_t up_down = (q1 << 2) | 0b10;  // |q1 ↑₂ ↓₃>
    const std::size_t down_up = (q1 << 2) | 0b01;  // |q1 ↓₂ ↑₃>
    for (std::size_t a = 0; a < dim; ++a) {
      const Complex x = in[up_down * dim + a];
      const Complex y = in[down_up * dim + a];
      dst[up_down * dim + a] = c * x + s * y;
      dst[down_up * dim + a] = s * x - c * y;
    }
  }
  return out;
}

StateVector apply_u_eta_adjoint(const StateVector& state, double p, double eta) {
  return apply_u_eta(state, p, eta);
}

TestResult projective_test(const StateVector& state, const TestTarget& target) {
  const RegisterShape& shape = state.shape();
  StateVector inside(shape);
  if (const auto* pattern = std::get_if<BasisPattern>(&target)) {
    std::size_t mask = 0;
    std::size_t want = 0;
    for (const auto& [pos, spin] : pattern->fixed) {
      if (pos < 0 || pos >= shape.qubits) throw ShapeError("test pattern names a qubit outside the register");
      mask |= qubit_bit(shape, pos);
      if (spin == Spin::Up) want |= qubit_bit(shape, pos);
    }
    const auto dim = static_cast<std::size_t>(shape.ancilla_dim);
    const auto in = state.amplitudes();
    auto dst = inside.amplitudes();
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (((i / dim) & mask) == want) dst[i] = in[i];
    }
  } else {
    const StateVector& t = std::get<PureTarget>(target).target;
    if (t.shape().qubits != shape.qubits || t.shape().ancilla_dim != 1) {
      throw ShapeError("pure test target must span the qubit register without ancilla");
    }
    const auto dim = static_cast<std::size_t>(shape.ancilla_dim);
    const auto tv = t.amplitudes();
    const auto in = state.amplitudes();
    auto dst = inside.amplitudes();
    for (std::size_t a = 0; a < dim; ++a) {
      Complex c{};
      for (std::size_t q = 0; q < tv.size(); ++q) c += std::conj(tv[q]) * in[q * dim + a];
      for (std::size_t q = 0; q < tv.size(); ++q) dst[q * dim + a] = tv[q] * c;
    }
  }
  StateVector outside = state;
  outside += Complex{-1.0} * inside;
  TestResult result{make_branch(std::move(inside)), make_branch(std::move(outside))};
  return result;
}

Complex overlap(const StateVector& a, const StateVector& b) {
  if (!(a.shape() == b.shape())) throw ShapeError("overlap of states with different shapes");
  Complex sum{};
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::conj(x[i]) * y[i];
  return sum;
}

}  // namespace qdice::qsim
