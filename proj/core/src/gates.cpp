#include "trimon/gates.hpp"

#include <cmath>
#include <string>

#include "trimon/errors.hpp"

namespace trimon {

namespace {

constexpr int ab_index(int a, int b) { return 2 * a + b; }

// Register index of (target state, partner state).
int register_index(Qubit target, int target_state, int partner_state) {
  return target == Qubit::A ? ab_index(target_state, partner_state)
                            : ab_index(partner_state, target_state);
}

void require_ab(Qubit q) {
  if (q == Qubit::C) throw InvalidInput("two-qubit gates act on qubits A and B only");
}

double wrap_phase(double x) { return std::remainder(x, kTwoPi); }

}  // namespace

void GateSpec::validate() const {
  require_ab(target);
  if (!std::isfinite(phi) || !std::isfinite(theta)) throw InvalidInput("non-finite gate angle");
  if (std::abs(theta) > kTwoPi + 1e-12) {
    throw InvalidInput("rotation angle outside [-2 pi, 2 pi]: " + std::to_string(theta));
  }
}

Matrix2cd rotation(double phi, double theta) {
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  const cdouble e = std::polar(1.0, phi);
  Matrix2cd r;
  r << c, -std::conj(e) * s, e * s, c;
  return r;
}

Matrix4cd conditional_rotation(const GateSpec& spec) {
  spec.validate();
  const Matrix2cd r = rotation(spec.phi, spec.theta);
  const int cond = spec.band == Band::Lower ? 1 : 0;
  const int i0 = register_index(spec.target, 0, cond);
  const int i1 = register_index(spec.target, 1, cond);
  Matrix4cd u = Matrix4cd::Identity();
  u(i0, i0) = r(0, 0);
  u(i0, i1) = r(0, 1);
  u(i1, i0) = r(1, 0);
  u(i1, i1) = r(1, 1);
  return u;
}

Matrix4cd unconditional_rotation(Qubit target, double phi, double theta) {
  return conditional_rotation({target, Band::Lower, phi, theta}) *
         conditional_rotation({target, Band::Upper, phi, theta});
}

Matrix4cd cnot(Qubit control, Qubit target) {
  require_ab(control);
  require_ab(target);
  if (control == target) throw InvalidInput("CNOT control and target must differ");
  Matrix4cd u = Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      int na = a;
      int nb = b;
      if (control == Qubit::A && a == 1) nb ^= 1;
      if (control == Qubit::B && b == 1) na ^= 1;
      u(ab_index(na, nb), ab_index(a, b)) = 1.0;
    }
  }
  return u;
}

Matrix4cd swap_gate() {
  Matrix4cd u = Matrix4cd::Zero();
  u(0, 0) = 1.0;
  u(1, 2) = 1.0;
  u(2, 1) = 1.0;
  u(3, 3) = 1.0;
  return u;
}

Matrix4cd FrameLedger::correction() const {
  Matrix4cd d = Matrix4cd::Zero();
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      d(ab_index(a, b), ab_index(a, b)) = std::polar(1.0, a * zeta_a + b * zeta_b);
    }
  }
  return d;
}

GateOp GateOp::crot(Qubit target, Band band, double phi, double theta) {
  return {OpKind::ConditionalRotation, target, band, phi, theta};
}

GateOp GateOp::rot(Qubit target, double phi, double theta) {
  return {OpKind::Rotation, target, Band::Upper, phi, theta};
}

GateOp GateOp::cnot(Qubit control, Qubit target) {
  require_ab(control);
  require_ab(target);
  if (control == target) throw InvalidInput("CNOT control and target must differ");
  return {OpKind::Cnot, target, Band::Lower, -0.5 * kPi, kPi};
}

GateSequence& GateSequence::then(const GateSequence& other) {
  ops.insert(ops.end(), other.ops.begin(), other.ops.end());
  return *this;
}

LoweredSequence lower(const GateSequence& seq, const FrameLedger& ledger) {
  LoweredSequence out;
  out.initial = ledger;
  FrameLedger frame = ledger;
  for (const GateOp& op : seq.ops) {
    require_ab(op.target);
    NativePulse pulse;
    pulse.target = op.target;
    pulse.theta = op.theta;
    pulse.phi = wrap_phase(op.phi - frame[op.target]);
    switch (op.kind) {
      case OpKind::ConditionalRotation:
        pulse.band = op.band;
        break;
      case OpKind::Rotation:
        pulse.both_bands = true;
        break;
      case OpKind::Cnot:
        pulse.band = Band::Lower;
        pulse.phi = wrap_phase(-0.5 * kPi - frame[op.target]);
        pulse.theta = kPi;
        break;
    }
    out.pulses.push_back(pulse);
    out.snapshots.push_back(frame);
    if (op.kind == OpKind::Cnot) {
      // The native pulse is CNOT * diag(1, -i) on the control; the missing
      // diag(1, i) is carried by the control's frame. Since
      // D^dagger R(phi) D = R(phi - zeta), later pulses subtract zeta.
      frame[op.control()] = wrap_phase(frame[op.control()] + 0.5 * kPi);
    }
  }
  out.final = frame;
  return out;
}

Matrix4cd native_unitary(const NativePulse& pulse) {
  if (pulse.both_bands) return unconditional_rotation(pulse.target, pulse.phi, pulse.theta);
  return conditional_rotation({pulse.target, pulse.band, pulse.phi, pulse.theta});
}

Matrix4cd FramedUnitary::logical() const {
  return ledger.correction() * physical * initial.correction().adjoint();
}

FramedUnitary apply_with_frame(const GateSequence& seq, const FrameLedger& ledger) {
  const LoweredSequence lowered = lower(seq, ledger);
  FramedUnitary out;
  out.physical = Matrix4cd::Identity();
  for (const NativePulse& p : lowered.pulses) out.physical = native_unitary(p) * out.physical;
  out.initial = lowered.initial;
  out.ledger = lowered.final;
  return out;
}

Matrix4cd ideal_unitary(const GateSequence& seq) {
  Matrix4cd u = Matrix4cd::Identity();
  for (const GateOp& op : seq.ops) {
    switch (op.kind) {
      case OpKind::ConditionalRotation:
        u = conditional_rotation({op.target, op.band, op.phi, op.theta}) * u;
        break;
      case OpKind::Rotation:
        u = unconditional_rotation(op.target, op.phi, op.theta) * u;
        break;
      case OpKind::Cnot:
        u = cnot(op.control(), op.target) * u;
        break;
    }
  }
  return u;
}

GateSequence swap_sequence() {
  GateSequence s;
  s.then(GateOp::cnot(Qubit::B, Qubit::A))
      .then(GateOp::cnot(Qubit::A, Qubit::B))
      .then(GateOp::cnot(Qubit::B, Qubit::A));
  return s;
}

GateSequence transfer_sequence() {
  GateSequence s;
  s.then(GateOp::cnot(Qubit::A, Qubit::B)).then(GateOp::cnot(Qubit::B, Qubit::A));
  return s;
}

GateSequence bell_sequence() {
  GateSequence s;
  s.then(GateOp::crot(Qubit::B, Band::Upper, 0.0, 0.5 * kPi))
      .then(GateOp::cnot(Qubit::B, Qubit::A));
  return s;
}

GateSequence swap_preparation_sequence() {
  GateSequence s;
  s.then(GateOp::crot(Qubit::B, Band::Upper, 0.0, 0.5 * kPi))
      .then(GateOp::rot(Qubit::A, 0.5 * kPi, 0.25 * kPi));
  return s;
}

GateSequence transfer_preparation_sequence() {
  GateSequence s;
  s.then(GateOp::crot(Qubit::A, Band::Upper, 0.0, 0.5 * kPi));
  return s;
}

Protocol named_protocol(std::string_view name) {
  GateSequence seq;
  if (name == "bell") {
    seq = bell_sequence();
  } else if (name == "swap_initial") {
    seq = swap_preparation_sequence();
  } else if (name == "swap_final") {
    seq = swap_preparation_sequence();
    seq.then(swap_sequence());
  } else if (name == "transfer_initial") {
    seq = transfer_preparation_sequence();
  } else if (name == "transfer_final") {
    seq = transfer_preparation_sequence();
    seq.then(transfer_sequence());
  } else {
    throw InvalidInput("unknown protocol '" + std::string(name) + "'");
  }
  const Vector4cd target = ideal_unitary(seq).col(0);
  return {seq, target};
}

Matrix8cd embed_c_grounded(const Matrix4cd& u) {
  Matrix8cd out = Matrix8cd::Identity();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(2 * i, 2 * j) = u(i, j);
  }
  return out;
}

Matrix4cd restrict_c_grounded(const Matrix8cd& u) {
  Matrix4cd out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = u(2 * i, 2 * j);
  }
  return out;
}

double state_overlap(const Vector4cd& a, const Vector4cd& b) { return std::norm(a.dot(b)); }

double phase_insensitive_overlap(const Matrix4cd& u, const Matrix4cd& v) {
  return std::abs((u.adjoint() * v).trace()) / 4.0;
}

double average_gate_fidelity(const Matrix4cd& target, const Matrix4cd& actual) {
  const Matrix4cd m = target.adjoint() * actual;
  const double d = 4.0;
  return ((m * m.adjoint()).trace().real() + std::norm(m.trace())) / (d * (d + 1.0));
}

double unitarity_error(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd diff =
      u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return diff.cwiseAbs().maxCoeff();
}

}  // namespace trimon
