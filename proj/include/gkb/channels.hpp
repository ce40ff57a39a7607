#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "gkb/symplectic_core.hpp"

namespace gkb {

// Phase-insensitive single-mode Gaussian channels.
struct ThermalLoss {
  double eta;    // transmissivity, 0 < eta < 1
  double omega;  // environment noise, omega = 2 n_th + 1 >= 1
};
struct ThermalAmp {
  double g;      // gain, g > 1
  double omega;  // environment noise, omega >= 1
};
struct AddedNoise {
  double zeta;  // added thermal photons, 0 < zeta <= 4 (dilation bound)
};
using ChannelSpec = std::variant<ThermalLoss, ThermalAmp, AddedNoise>;

// Throws std::domain_error naming the offending parameter.
void validate(const ChannelSpec& spec);
std::string channel_name(const ChannelSpec& spec);

// V -> eta V + (1-eta) omega I  |  g V + (g-1) omega I  |  V + 2 zeta I.
CovarianceMatrix apply_channel(const ChannelSpec& spec, const CovarianceMatrix& V);

// A Stinespring dilation as a symplectic matrix plus the labels of the modes
// it acts on, in matrix ordering. Loss/amp: 4x4 on (B, E). Added noise: the
// 6x6 integer universal-cloner matrix on (e, E, B).
struct ClonerDilation {
  Eigen::MatrixXd matrix;
  std::vector<char> wiring;
};
ClonerDilation cloner_symplectic(const ChannelSpec& spec);

// The universal-cloner matrix with exact integer entries, for arithmetic
// identities that must hold with zero residual.
std::array<std::array<std::int64_t, 6>, 6> universal_cloner_integer();

// Unique omega >= 1 with 4(omega - sqrt(omega^2 - 1)) = zeta, i.e.
// omega = zeta/8 + 2/zeta. Domain error outside 0 < zeta <= 4.
double eve_omega_for_zeta(double zeta);

// Four-mode pure dilation of a TMSV(mu) input: labels fixed to (A, B, E, e).
// Eve's ancilla is a TMSV of the channel's omega (loss/amp) or of
// eve_omega_for_zeta(zeta) (added noise).
struct JointState {
  std::vector<char> labels;  // {'A','B','E','e'}
  CovarianceMatrix cm;
  int mode_of(char label) const;
};
JointState build_joint_state(const ChannelSpec& spec, double mu);

}  // namespace gkb
