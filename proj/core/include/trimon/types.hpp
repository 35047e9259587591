#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace trimon {

using cdouble = std::complex<double>;
using Matrix2cd = Eigen::Matrix2cd;
using Matrix4cd = Eigen::Matrix4cd;
using Vector4cd = Eigen::Vector4cd;
using Matrix8cd = Eigen::Matrix<cdouble, 8, 8>;
using Vector8cd = Eigen::Matrix<cdouble, 8, 1>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// The three trimon modes. A and B are the dipolar modes, C the quadrupolar one.
enum class Qubit : int { A = 0, B = 1, C = 2 };

/// Unordered partner pairs, in the order the cross-Kerr coefficients are tabulated.
enum class Pair : int { AB = 0, BC = 1, CA = 2 };

/// Upper band: partner qubit in |0>. Lower band: partner qubit in |1>.
enum class Band { Upper, Lower };

constexpr int index(Qubit q) { return static_cast<int>(q); }
constexpr int index(Pair p) { return static_cast<int>(p); }

constexpr Qubit qubit_at(int i) { return static_cast<Qubit>(i); }

constexpr Pair pair_of(Qubit a, Qubit b) {
  const int i = index(a);
  const int j = index(b);
  if ((i == 0 && j == 1) || (i == 1 && j == 0)) return Pair::AB;
  if ((i == 1 && j == 2) || (i == 2 && j == 1)) return Pair::BC;
  return Pair::CA;
}

/// Partner of A or B inside the two-qubit AB register.
constexpr Qubit partner(Qubit q) { return q == Qubit::A ? Qubit::B : Qubit::A; }

std::string_view to_string(Qubit q);
std::string_view to_string(Band b);
Qubit parse_qubit(std::string_view s);
Band parse_band(std::string_view s);

template <typename T>
using PerQubit = std::array<T, 3>;

template <typename T>
using PerPair = std::array<T, 3>;

}  // namespace trimon
