#pragma once

// Matrix-level gate layer on the two-qubit AB register (qubit C grounded).
// Basis order |AB> = |00>, |01>, |10>, |11>, A being the leftmost label.

#include <string_view>
#include <vector>

#include "trimon/types.hpp"

namespace trimon {

/// Conditional rotation descriptor: rotate `target` by `theta` about the axis
/// at angle `phi` in the equatorial plane, conditioned on the partner being in
/// |0> (upper band) or |1> (lower band).
struct GateSpec {
  Qubit target = Qubit::A;
  Band band = Band::Upper;
  double phi = 0.0;
  double theta = 0.0;

  void validate() const;
};

/// Per-qubit virtual-Z bookkeeping. A native -iCNOT leaves a pending Z phase
/// on its control; later pulses on that qubit are emitted at phi - zeta.
struct FrameLedger {
  double zeta_a = 0.0;
  double zeta_b = 0.0;

  double operator[](Qubit q) const { return q == Qubit::A ? zeta_a : zeta_b; }
  double& operator[](Qubit q) { return q == Qubit::A ? zeta_a : zeta_b; }

  /// Diagonal map taking physical amplitudes to the logical frame,
  /// diag(1, e^{i zeta}) on each qubit.
  Matrix4cd correction() const;

  bool operator==(const FrameLedger&) const = default;
};

/// Single-qubit rotation [[c, -e^{-i phi} s], [e^{i phi} s, c]] with c = cos(theta/2).
Matrix2cd rotation(double phi, double theta);

Matrix4cd conditional_rotation(const GateSpec& spec);

/// Lower- and upper-band rotations with the same (phi, theta); acts on the
/// target independently of the partner state.
Matrix4cd unconditional_rotation(Qubit target, double phi, double theta);

/// Conventional CNOT with the given control and target.
Matrix4cd cnot(Qubit control, Qubit target);

Matrix4cd swap_gate();

/// Logical circuit operations. `Cnot` is realised by a single lower-band
/// pi pulse on the target plus a ledger entry on the control.
enum class OpKind { ConditionalRotation, Rotation, Cnot };

struct GateOp {
  OpKind kind = OpKind::ConditionalRotation;
  Qubit target = Qubit::A;
  Band band = Band::Upper;  ///< ConditionalRotation only
  double phi = 0.0;
  double theta = 0.0;

  static GateOp crot(Qubit target, Band band, double phi, double theta);
  static GateOp rot(Qubit target, double phi, double theta);
  static GateOp cnot(Qubit control, Qubit target);

  Qubit control() const { return partner(target); }
};

/// Ordered logical operations; the first entry is applied first.
struct GateSequence {
  std::vector<GateOp> ops;

  GateSequence& then(const GateOp& op) {
    ops.push_back(op);
    return *this;
  }
  GateSequence& then(const GateSequence& other);
};

/// One physical pulse: a conditional rotation on one band, or both bands at once.
struct NativePulse {
  Qubit target = Qubit::A;
  Band band = Band::Upper;
  bool both_bands = false;
  double phi = 0.0;
  double theta = 0.0;
};

struct LoweredSequence {
  std::vector<NativePulse> pulses;
  std::vector<FrameLedger> snapshots;  ///< ledger in force when each pulse is emitted
  FrameLedger initial;
  FrameLedger final;
};

/// Converts logical operations to physical pulses, offsetting each pulse phase
/// by minus the ledger value of its target and recording ledger updates.
LoweredSequence lower(const GateSequence& seq, const FrameLedger& ledger = {});

Matrix4cd native_unitary(const NativePulse& pulse);

struct FramedUnitary {
  Matrix4cd physical;
  FrameLedger initial;
  FrameLedger ledger;

  /// Physical composite expressed in the logical frame:
  /// D(final) * U * D(initial)^dagger.
  Matrix4cd logical() const;
};

FramedUnitary apply_with_frame(const GateSequence& seq, const FrameLedger& ledger = {});

/// The intended logical unitary of a sequence (textbook CNOTs, no frame).
Matrix4cd ideal_unitary(const GateSequence& seq);

GateSequence swap_sequence();
GateSequence transfer_sequence();

/// Bell preparation: pi/2 on B (upper band, A in |0>), then CNOT with control B.
GateSequence bell_sequence();

/// |psi> = (cos(pi/8)|0> + i sin(pi/8)|1>)_A (x) |+>_B.
GateSequence swap_preparation_sequence();

/// |+>_A (x) |0>_B.
GateSequence transfer_preparation_sequence();

/// A demonstrated circuit with the state it ideally produces from |00>.
struct Protocol {
  GateSequence sequence;
  Vector4cd target;
};

/// bell, swap_initial, swap_final, transfer_initial or transfer_final.
Protocol named_protocol(std::string_view name);

/// Embeds a two-qubit operator in the 8-state space as acting on the C = 0
/// subspace and the identity on C = 1.
Matrix8cd embed_c_grounded(const Matrix4cd& u);

/// Restriction of an 8x8 operator to the C = 0 subspace.
Matrix4cd restrict_c_grounded(const Matrix8cd& u);

/// |<a|b>|^2 for normalised vectors.
double state_overlap(const Vector4cd& a, const Vector4cd& b);

/// |Tr(U^dagger V)| / d: equals 1 iff the unitaries agree up to a global phase.
double phase_insensitive_overlap(const Matrix4cd& u, const Matrix4cd& v);

/// Average gate fidelity of a (possibly non-unitary) 4x4 map against a unitary target.
double average_gate_fidelity(const Matrix4cd& target, const Matrix4cd& actual);

double unitarity_error(const Eigen::MatrixXcd& u);

}  // namespace trimon
