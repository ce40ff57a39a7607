#include "verify.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "io_util.hpp"
#include "gkb/bounds.hpp"

namespace gkb::cli {

namespace {

struct Reporter {
  std::ostream& os;
  bool all_ok = true;
  void report(const std::string& name, bool ok, const std::string& detail = "") {
    os << name << ": " << (ok ? "PASS" : "FAIL");
    if (!detail.empty()) os << " " << detail;
    os << "\n";
    all_ok &= ok;
  }
};

bool luc_symplectic_exact() {
  const auto L = universal_cloner_integer();
  // Omega for 3 modes, integer entries.
  std::array<std::array<std::int64_t, 6>, 6> Om{};
  for (int k = 0; k < 3; ++k) {
    Om[2 * k][2 * k + 1] = 1;
    Om[2 * k + 1][2 * k] = -1;
  }
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) {
      std::int64_t s = 0;
      for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) s += L[i][a] * Om[a][b] * L[j][b];
      }
      if (s != Om[i][j]) return false;
    }
  }
  return true;
}

double symplectic_residual(const Eigen::MatrixXd& L) {
  const int n = static_cast<int>(L.rows()) / 2;
  const Eigen::MatrixXd Om = SymplecticForm(n).matrix;
  return (L * Om * L.transpose() - Om).cwiseAbs().maxCoeff();
}

double entanglement_cloner_residual(std::mt19937& rng) {
  std::uniform_real_distribution<double> eta_d(0.01, 0.99), g_d(1.01, 6.0);
  const double r1 = symplectic_residual(cloner_symplectic(ThermalLoss{eta_d(rng), 1.0}).matrix);
  const double r2 = symplectic_residual(cloner_symplectic(ThermalAmp{g_d(rng), 1.0}).matrix);
  return std::max(r1, r2);
}

// Reduced action of the universal cloner on a random physical B input.
double cloner_locality_residual(double zeta, std::mt19937& rng) {
  std::uniform_real_distribution<double> g_d(1.0, 5.0), r_d(-1.0, 1.0), th_d(0.0, 3.14);
  const CovarianceMatrix V = v0_cm({g_d(rng), r_d(rng), th_d(rng), Target::B});
  const double omega = eve_omega_for_zeta(zeta);

  Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(6, 6);
  joint.block<4, 4>(0, 0) = tmsv_cm(omega).entries();  // (e, E)
  joint.block<2, 2>(4, 4) = V.entries();               // B
  const Eigen::MatrixXd L = cloner_symplectic(AddedNoise{zeta}).matrix;
  const Eigen::MatrixXd out = L * joint * L.transpose();
  const Eigen::Matrix2d expected =
      V.entries() + 2.0 * zeta * Eigen::Matrix2d::Identity();
  return (out.block<2, 2>(4, 4) - expected).cwiseAbs().maxCoeff();
}

std::vector<ChannelSpec> verify_grid() {
  std::vector<ChannelSpec> specs;
  const double etas[] = {0.25, 0.4, 0.55, 0.75, 0.9};
  const double omegas[] = {2.0, 1.5, 3.0, 5.0, 1.0};
  const double gains[] = {1.2, 1.6, 2.0, 3.0, 5.0};
  const double zetas[] = {0.1, 0.38, 1.0, 2.0, 3.5};
  for (int i = 0; i < 5; ++i) specs.push_back(ThermalLoss{etas[i], omegas[i]});
  for (int i = 0; i < 5; ++i) specs.push_back(ThermalAmp{gains[i], omegas[i]});
  for (int i = 0; i < 5; ++i) specs.push_back(AddedNoise{zetas[i]});
  return specs;
}

// Worst entropy-scale disagreement between the closed forms and the oracle.
double oracle_discrepancy(const ChannelSpec& spec, double gamma, double mu) {
  const MeasurementSpec m{gamma, 0.0, 0.0, default_target(spec)};
  const OracleEval o = finite_mu_oracle(spec, m, mu);
  const EveEigs e = eve_eigs_closed(spec, gamma);
  const double yv = conditional_y_variance(spec, gamma);
  double worst = std::abs(thermal_entropy(e.lambda_plus) - thermal_entropy(o.eigs.lambda_plus));
  worst = std::max(worst, std::abs(thermal_entropy(e.lambda_minus) -
                                   thermal_entropy(o.eigs.lambda_minus)));
  worst = std::max(worst, std::abs(thermal_entropy(yv) - thermal_entropy(o.y_variance)));
  worst = std::max(worst, std::abs(delta_of_gamma(spec, gamma) - o.delta));
  return worst;
}

}  // namespace

bool run_verify(double mu, double tolerance_override, std::ostream& os) {
  Reporter rep{os};
  std::mt19937 rng(20260814);

  rep.report("L_UC symplectic", luc_symplectic_exact(), "(exact integer identity)");

  double worst = 0.0;
  for (int i = 0; i < 20; ++i) worst = std::max(worst, entanglement_cloner_residual(rng));
  rep.report("beam-splitter / two-mode-squeezer symplectic (20 random draws)", worst < 1e-12,
             "@ 1e-12");

  std::uniform_real_distribution<double> zeta_d(0.05, 4.0);
  worst = 0.0;
  for (int i = 0; i < 3; ++i) worst = std::max(worst, cloner_locality_residual(zeta_d(rng), rng));
  rep.report("cloner locality (3 random zeta)", worst < 1e-12, "@ 1e-12");

  const double oracle_tol = tolerance_override > 0.0
                                ? tolerance_override
                                : tol::oracle_bits * (kOracleReferenceMu / mu);
  worst = 0.0;
  for (const ChannelSpec& spec : verify_grid()) {
    for (int i = 0; i < 5; ++i) {
      const double gamma = std::pow(10.0, i / 4.0);  // log-spaced on [1, 10]
      worst = std::max(worst, oracle_discrepancy(spec, gamma, mu));
    }
  }
  {
    std::ostringstream d;
    d << "@ " << format_double(oracle_tol) << " bits (worst " << format_double(worst) << ")";
    rep.report("oracle agreement (75 grid points)", worst < oracle_tol, d.str());
  }

  const std::vector<ChannelSpec> theta_specs = {ThermalLoss{0.55, 3.0}, ThermalAmp{2.0, 3.0},
                                                AddedNoise{0.38}};
  worst = 0.0;
  for (const ChannelSpec& spec : theta_specs) {
    const Target t = default_target(spec);
    const double base = finite_mu_delta(spec, {2.0, 0.0, 0.0, t}, mu);
    for (double theta : {0.3, 0.7, 2.1}) {
      worst = std::max(worst, std::abs(finite_mu_delta(spec, {2.0, 0.0, theta, t}, mu) - base));
    }
  }
  rep.report("theta-invariance (3 channels x 3 angles)", worst < 1e-9, "@ 1e-9");

  const std::vector<ChannelSpec> r_specs = {ThermalLoss{0.2, 4.0},  ThermalLoss{0.3, 3.0},
                                            ThermalLoss{0.35, 4.0}, ThermalAmp{5.0, 4.0},
                                            ThermalAmp{3.0, 3.0},   ThermalAmp{2.0, 4.0},
                                            AddedNoise{1.5},        AddedNoise{1.0},
                                            AddedNoise{2.0}};
  const double gammas_r[] = {3.0, 3.0, 3.0, 3.0, 3.0, 3.0, 2.0, 2.0, 2.0};
  bool r_ok = true;
  const double step = 1e-4;
  for (std::size_t i = 0; i < r_specs.size(); ++i) {
    const Target t = default_target(r_specs[i]);
    const double g = gammas_r[i];
    const double d0 = finite_mu_delta(r_specs[i], {g, 0.0, 0.0, t}, mu);
    const double dp = finite_mu_delta(r_specs[i], {g, step, 0.0, t}, mu);
    const double dm = finite_mu_delta(r_specs[i], {g, -step, 0.0, t}, mu);
    const double central = (dp - dm) / (2.0 * step);
    const double second = (dp - 2.0 * d0 + dm) / (step * step);
    r_ok &= std::abs(central) < 1e-6 && second < 0.0;
  }
  rep.report("r-stationarity at r=0 (9 sampled points)", r_ok,
             "(|central| < 1e-6, curvature < 0)");

  worst = 0.0;
  for (const ChannelSpec& spec :
       {ChannelSpec(ThermalLoss{0.6, 3.0}), ChannelSpec(ThermalAmp{2.0, 3.0}),
        ChannelSpec(AddedNoise{0.38})}) {
    for (double lam : symplectic_eigenvalues(build_joint_state(spec, 100.0).cm)) {
      worst = std::max(worst, std::abs(lam - 1.0));
    }
  }
  rep.report("dilated-state purity (mu=100)", worst < 1e-6, "@ 1e-6");

  {
    const double irc = coherent_info(ThermalLoss{0.5, 1.0}).first;
    const double ic = coherent_info(AddedNoise{1.0}).first;
    const double ci_tol = 1e-3 * (kOracleReferenceMu / mu);
    const double d1 =
        std::abs(finite_mu_coherent_info(ThermalLoss{0.5, 1.0}, Direction::reverse, mu) - 1.0);
    const double d2 = std::abs(finite_mu_coherent_info(ThermalAmp{2.0, 3.0}, Direction::direct,
                                                       mu) -
                               coherent_info(ThermalAmp{2.0, 3.0}).first);
    const double d3 = std::abs(finite_mu_coherent_info(AddedNoise{1.0}, Direction::direct, mu) -
                               ic);
    const bool ok = irc == 1.0 && std::abs(ic + 1.0 / std::numbers::ln2) < 1e-12 &&
                    d1 < ci_tol && d2 < ci_tol && d3 < ci_tol;
    rep.report("closed-form anchors", ok, "(exact values and finite-mu agreement)");
  }

  return rep.all_ok;
}

}  // namespace gkb::cli
