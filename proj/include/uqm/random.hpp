// random.hpp — seeded draws for every sampling path.  All conversions from
// raw engine output are spelled out here so a seed fixes the byte stream.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

#include "uqm/qcore.hpp"

namespace uqm {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // Uniform in [0, 1) from the top 53 bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform point on the sphere as (theta, phi): cos(theta) uniform.
  std::pair<double, double> bloch_angles() {
    const double z = 1.0 - 2.0 * uniform();
    const double phi = 2.0 * std::numbers::pi * uniform();
    return {std::acos(z), phi};
  }

  PureState haar_qubit(std::string label = "q0") {
    const auto [theta, phi] = bloch_angles();
    return PureState::from_bloch_angles(theta, phi, std::move(label));
  }

  // Haar-distributed SU(2) element via a uniform unit quaternion.
  Matrix haar_su2() {
    const double u1 = uniform();
    const double u2 = 2.0 * std::numbers::pi * uniform();
    const double u3 = 2.0 * std::numbers::pi * uniform();
    const double w = std::sqrt(1.0 - u1) * std::sin(u2);
    const double x = std::sqrt(1.0 - u1) * std::cos(u2);
    const double y = std::sqrt(u1) * std::sin(u3);
    const double z = std::sqrt(u1) * std::cos(u3);
    Matrix u(2, 2);
    u << Complex(w, z), Complex(x, y), Complex(-x, y), Complex(w, -z);
    return u;
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace uqm
