#include "gkb/channels.hpp"

#include <cmath>

namespace gkb {

namespace {

// Embeds a symplectic acting on the listed modes into an n-mode identity.
Eigen::MatrixXd embed(const Eigen::MatrixXd& L, const std::vector<int>& modes, int n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
      out.block<2, 2>(2 * modes[i], 2 * modes[j]) = L.block<2, 2>(2 * i, 2 * j);
    }
  }
  return out;
}

Eigen::MatrixXd beam_splitter(double eta) {
  const double t = std::sqrt(eta);
  const double r = std::sqrt(1.0 - eta);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(4, 4);
  L.block<2, 2>(0, 0) = t * Eigen::Matrix2d::Identity();
  L.block<2, 2>(0, 2) = r * Eigen::Matrix2d::Identity();
  L.block<2, 2>(2, 0) = -r * Eigen::Matrix2d::Identity();
  L.block<2, 2>(2, 2) = t * Eigen::Matrix2d::Identity();
  return L;
}

Eigen::MatrixXd two_mode_squeezer(double g) {
  const Eigen::Matrix2d Z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(4, 4);
  L.block<2, 2>(0, 0) = std::sqrt(g) * Eigen::Matrix2d::Identity();
  L.block<2, 2>(0, 2) = std::sqrt(g - 1.0) * Z;
  L.block<2, 2>(2, 0) = std::sqrt(g - 1.0) * Z;
  L.block<2, 2>(2, 2) = std::sqrt(g) * Eigen::Matrix2d::Identity();
  return L;
}

}  // namespace

void validate(const ChannelSpec& spec) {
  std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          if (!(c.eta > 0.0 && c.eta < 1.0)) {
            throw std::domain_error("eta must lie in (0, 1), got " + std::to_string(c.eta));
          }
          if (!(c.omega >= 1.0)) {
            throw std::domain_error("omega must be >= 1, got " + std::to_string(c.omega));
          }
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          if (!(c.g > 1.0)) {
            throw std::domain_error("g must be > 1, got " + std::to_string(c.g));
          }
          if (!(c.omega >= 1.0)) {
            throw std::domain_error("omega must be >= 1, got " + std::to_string(c.omega));
          }
        } else {
          if (!(c.zeta > 0.0 && c.zeta <= 4.0)) {
            throw std::domain_error("zeta must lie in (0, 4], got " + std::to_string(c.zeta));
          }
        }
      },
      spec);
}

std::string channel_name(const ChannelSpec& spec) {
  return std::visit(
      [](const auto& c) -> std::string {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) return "thermal_loss";
        if constexpr (std::is_same_v<T, ThermalAmp>) return "thermal_amp";
        return "added_noise";
      },
      spec);
}

CovarianceMatrix apply_channel(const ChannelSpec& spec, const CovarianceMatrix& V) {
  validate(spec);
  if (V.dim_modes() != 1) {
    throw std::invalid_argument("apply_channel: expected a single-mode CM");
  }
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d M = V.entries();
  return std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          return CovarianceMatrix(c.eta * M + (1.0 - c.eta) * c.omega * I);
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          return CovarianceMatrix(c.g * M + (c.g - 1.0) * c.omega * I);
        } else {
          return CovarianceMatrix(M + 2.0 * c.zeta * I);
        }
      },
      spec);
}

std::array<std::array<std::int64_t, 6>, 6> universal_cloner_integer() {
  return {{{1, 0, 0, 0, 2, 0},
           {0, 5, 0, 4, 0, -2},
           {0, 0, 1, 0, 2, 0},
           {0, -4, 0, -3, 0, 2},
           {2, 0, -2, 0, 1, 0},
           {0, -2, 0, -2, 0, 1}}};
}

ClonerDilation cloner_symplectic(const ChannelSpec& spec) {
  validate(spec);
  return std::visit(
      [](const auto& c) -> ClonerDilation {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          return {beam_splitter(c.eta), {'B', 'E'}};
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          return {two_mode_squeezer(c.g), {'B', 'E'}};
        } else {
          const auto luc = universal_cloner_integer();
          Eigen::MatrixXd L(6, 6);
          for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) L(i, j) = static_cast<double>(luc[i][j]);
          return {L, {'e', 'E', 'B'}};
        }
      },
      spec);
}

double eve_omega_for_zeta(double zeta) {
  if (!(zeta > 0.0 && zeta <= 4.0)) {
    throw std::domain_error("eve_omega_for_zeta: zeta must lie in (0, 4], got " +
                            std::to_string(zeta));
  }
  return zeta / 8.0 + 2.0 / zeta;
}

int JointState::mode_of(char label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  throw std::invalid_argument(std::string("JointState: no mode labeled ") + label);
}

JointState build_joint_state(const ChannelSpec& spec, double mu) {
  validate(spec);
  if (mu < 1.0) {
    throw std::domain_error("build_joint_state: mu must be >= 1, got " + std::to_string(mu));
  }
  const double omega_e = std::visit(
      [](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, AddedNoise>) return eve_omega_for_zeta(c.zeta);
        else return c.omega;
      },
      spec);

  // Mode order (A, B, E, e): TMSV(mu) on (A, B), Eve's TMSV(omega_e) on (E, e).
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(8, 8);
  V.block<4, 4>(0, 0) = tmsv_cm(mu).entries();
  V.block<4, 4>(4, 4) = tmsv_cm(omega_e).entries();

  const ClonerDilation dil = cloner_symplectic(spec);
  std::vector<int> acted;
  const std::vector<char> order = {'A', 'B', 'E', 'e'};
  for (char w : dil.wiring) {
    for (int m = 0; m < 4; ++m) {
      if (order[m] == w) acted.push_back(m);
    }
  }
  const Eigen::MatrixXd L = embed(dil.matrix, acted, 4);
  return JointState{order, CovarianceMatrix(L * V * L.transpose())};
}

}  // namespace gkb
