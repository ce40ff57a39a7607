// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Criteria 1-8 exercise the library directly; criterion 9 drives the
// installed CLI binary (path from argv[1], falling back to the build-time
// location).
#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gkb/bounds.hpp"
#include "gkb/thresholds.hpp"

using namespace gkb;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool ok, const std::string& detail = "") {
  std::cout << "criterion " << number << " (" << name << "): " << (ok ? "PASS" : "FAIL");
  if (!detail.empty()) std::cout << " " << detail;
  std::cout << "\n";
  if (!ok) ++g_failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double sympl_residual(const Eigen::MatrixXd& L) {
  const int modes = static_cast<int>(L.rows()) / 2;
  const Eigen::MatrixXd Om = SymplecticForm(modes).matrix;
  return (L * Om * L.transpose() - Om).cwiseAbs().maxCoeff();
}

// ---- criterion 1: symplecticity -------------------------------------------
void criterion_symplecticity() {
  bool ok = true;
  std::string detail;

  const auto L = universal_cloner_integer();
  int64_t Om[6][6] = {};
  for (int m = 0; m < 3; ++m) {
    Om[2 * m][2 * m + 1] = 1;
    Om[2 * m + 1][2 * m] = -1;
  }
  for (int i = 0; i < 6 && ok; ++i) {
    for (int j = 0; j < 6 && ok; ++j) {
      int64_t acc = 0;
      for (int k = 0; k < 6; ++k) {
        for (int l = 0; l < 6; ++l) acc += L[i][k] * Om[k][l] * L[j][l];
      }
      if (acc != Om[i][j]) {
        ok = false;
        detail = "(integer identity broken)";
      }
    }
  }

  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> eta_d(0.01, 0.99), g_d(1.01, 10.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    worst = std::max(worst, sympl_residual(cloner_symplectic(ThermalLoss{eta_d(rng), 1.0}).matrix));
    worst = std::max(worst, sympl_residual(cloner_symplectic(ThermalAmp{g_d(rng), 1.0}).matrix));
  }
  if (worst >= 1e-12) {
    ok = false;
    detail = "(beam-splitter/squeezer residual " + fmt(worst) + ")";
  }
  report(1, "symplecticity", ok, ok ? "(exact integers; float residual " + fmt(worst) + ")" : detail);
}

// ---- criterion 2: cloner locality ------------------------------------------
void criterion_cloner_locality() {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> zeta_d(0.05, 4.0), g_d(1.0, 5.0), r_d(-1.0, 1.0),
      th_d(0.0, 3.14);
  double worst = 0.0;
  for (int t = 0; t < 3; ++t) {
    const double zeta = zeta_d(rng);
    const double om = eve_omega_for_zeta(zeta);
    const CovarianceMatrix vin = v0_cm({g_d(rng), r_d(rng), th_d(rng), Target::B});
    // joint (e, E, B): Eve's TMSV on (e, E), the probe state on B
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(6, 6);
    joint.block<4, 4>(0, 0) = tmsv_cm(om).entries();
    joint.block<2, 2>(4, 4) = vin.entries();
    const Eigen::MatrixXd L = cloner_symplectic(AddedNoise{zeta}).matrix;
    const Eigen::MatrixXd out = L * joint * L.transpose();
    const Eigen::MatrixXd expect = vin.entries() + 2.0 * zeta * Eigen::Matrix2d::Identity();
    worst = std::max(worst, (out.block<2, 2>(4, 4) - expect).cwiseAbs().maxCoeff());
  }
  report(2, "cloner locality", worst < 1e-12, "(worst residual " + fmt(worst) + ")");
}

// ---- criterion 3: closed forms vs finite-mu oracle -------------------------
struct OracleStats {
  double worst = 0.0;
  int points = 0;
};

void oracle_compare(const ChannelSpec& spec, double gamma, OracleStats* st) {
  MeasurementSpec m;
  m.gamma = gamma;
  m.target = default_target(spec);
  const OracleEval o = finite_mu_oracle(spec, m, kOracleReferenceMu);
  const EveEigs c = eve_eigs_closed(spec, gamma);
  const double yv = conditional_y_variance(spec, gamma);
  double d = std::abs(thermal_entropy(o.eigs.lambda_plus) - thermal_entropy(c.lambda_plus));
  d = std::max(d, std::abs(thermal_entropy(o.eigs.lambda_minus) - thermal_entropy(c.lambda_minus)));
  d = std::max(d, std::abs(thermal_entropy(o.y_variance) - thermal_entropy(yv)));
  d = std::max(d, std::abs(o.delta - delta_of_gamma(spec, gamma)));
  st->worst = std::max(st->worst, d);
  ++st->points;
}

void criterion_oracle_agreement() {
  const std::array<double, 5> etas = {0.25, 0.4, 0.55, 0.75, 0.9};
  const std::array<double, 5> gains = {1.2, 1.6, 2.0, 3.0, 5.0};
  const std::array<double, 5> omegas = {1.0, 1.5, 2.0, 3.0, 5.0};
  std::array<double, 5> gammas{};
  for (int i = 0; i < 5; ++i) gammas[i] = std::pow(10.0, i / 4.0);

  OracleStats st;
  for (double eta : etas) {
    for (double om : omegas) {
      for (double gm : gammas) oracle_compare(ThermalLoss{eta, om}, gm, &st);
    }
  }
  for (double g : gains) {
    for (double om : omegas) {
      for (double gm : gammas) oracle_compare(ThermalAmp{g, om}, gm, &st);
    }
  }
  for (int i = 0; i < 25; ++i) {
    const double zeta = 0.1 + (3.4 - 0.1) * i / 24.0;
    for (double gm : gammas) oracle_compare(AddedNoise{zeta}, gm, &st);
  }
  report(3, "oracle agreement", st.worst < 1e-4 && st.points == 375,
         "(" + std::to_string(st.points) + " points, worst " + fmt(st.worst) + " bits)");
}

// ---- criterion 4: theta-invariance and r = 0 stationarity ------------------
struct SamplePoint {
  ChannelSpec spec;
  double gamma;
};

std::vector<SamplePoint> stationarity_samples() {
  return {
      {ThermalLoss{0.15, 4.0}, 3.0}, {ThermalLoss{0.2, 4.0}, 3.0}, {ThermalLoss{0.25, 4.0}, 3.0},
      {ThermalLoss{0.3, 4.0}, 3.0},  {ThermalLoss{0.35, 4.0}, 3.0}, {ThermalLoss{0.15, 3.0}, 3.0},
      {ThermalLoss{0.4, 4.0}, 3.0},  {ThermalLoss{0.2, 3.0}, 3.0},  {ThermalLoss{0.25, 3.0}, 3.0},
      {ThermalLoss{0.3, 3.0}, 3.0},

      {ThermalAmp{5.0, 4.0}, 3.0},   {ThermalAmp{4.0, 4.0}, 3.0},   {ThermalAmp{3.0, 4.0}, 3.0},
      {ThermalAmp{2.5, 4.0}, 3.0},   {ThermalAmp{5.0, 3.0}, 3.0},   {ThermalAmp{4.0, 3.0}, 3.0},
      {ThermalAmp{2.0, 4.0}, 3.0},   {ThermalAmp{3.0, 3.0}, 3.0},   {ThermalAmp{5.0, 4.0}, 2.0},
      {ThermalAmp{4.0, 4.0}, 2.0},

      {AddedNoise{1.5}, 2.0},        {AddedNoise{2.0}, 2.0},        {AddedNoise{3.0}, 2.0},
      {AddedNoise{1.0}, 2.0},        {AddedNoise{0.8}, 2.0},        {AddedNoise{1.5}, 1.5},
      {AddedNoise{2.0}, 1.5},        {AddedNoise{1.0}, 1.5},        {AddedNoise{3.0}, 1.5},
      {AddedNoise{0.8}, 1.5},
  };
}

void criterion_measurement_geometry() {
  double worst_theta = 0.0, worst_cd = 0.0, worst_sd = -1e9;
  for (const SamplePoint& p : stationarity_samples()) {
    MeasurementSpec base;
    base.gamma = p.gamma;
    base.target = default_target(p.spec);
    const double ref = finite_mu_delta(p.spec, base, kOracleReferenceMu);
    for (double theta : {0.3, 0.7, 2.1}) {
      MeasurementSpec m = base;
      m.theta = theta;
      worst_theta =
          std::max(worst_theta, std::abs(finite_mu_delta(p.spec, m, kOracleReferenceMu) - ref));
    }
    const double h = 1e-4;
    MeasurementSpec up = base, dn = base;
    up.r = h;
    dn.r = -h;
    const double fp = finite_mu_delta(p.spec, up, kOracleReferenceMu);
    const double fm = finite_mu_delta(p.spec, dn, kOracleReferenceMu);
    worst_cd = std::max(worst_cd, std::abs((fp - fm) / (2.0 * h)));
    worst_sd = std::max(worst_sd, (fp - 2.0 * ref + fm) / (h * h));
  }
  const bool ok = worst_theta < 1e-9 && worst_cd < 1e-6 && worst_sd < 0.0;
  report(4, "theta-invariance and r=0 stationarity", ok,
         "(theta " + fmt(worst_theta) + ", first diff " + fmt(worst_cd) + ", second diff " +
             fmt(worst_sd) + ")");
}

// ---- criterion 5: closed-form anchors ---------------------------------------
void criterion_anchors() {
  bool ok = true;
  std::string detail;

  if (coherent_info(ThermalLoss{0.5, 1.0}).first != 1.0) {
    ok = false;
    detail += "[loss anchor not exactly 1]";
  }
  if (std::abs(coherent_info(AddedNoise{1.0}).first + 1.0 / std::numbers::ln2) > 1e-12) {
    ok = false;
    detail += "[noise anchor off]";
  }
  const struct {
    ChannelSpec spec;
    double expect;
  } finite_cases[] = {
      {ThermalLoss{0.5, 1.0}, 1.0},
      {ThermalAmp{2.0, 3.0}, -1.0},  // positive log term: the corrected sign
      {AddedNoise{1.0}, -1.0 / std::numbers::ln2},
  };
  double worst = 0.0;
  for (const auto& c : finite_cases) {
    const auto [info, dir] = coherent_info(c.spec);
    const double fin = finite_mu_coherent_info(c.spec, dir, kOracleReferenceMu);
    worst = std::max(worst, std::abs(fin - c.expect));
    if (std::abs(info - c.expect) > 1e-12) {
      ok = false;
      detail += "[closed form off at " + channel_name(c.spec) + "]";
    }
  }
  if (worst > 1e-3) {
    ok = false;
    detail += "[finite-mu off by " + fmt(worst) + "]";
  }
  report(5, "closed-form anchors", ok,
         ok ? "(finite-mu gap " + fmt(worst) + " bits)" : detail);
}

// ---- criterion 6: qualitative curve structure ---------------------
struct Criterion6Grids {
  std::vector<BoundResult> loss, amp;
  bool ok = true;
  std::string detail;
};

Criterion6Grids run_criterion6() {
  Criterion6Grids out;

  bool strict_somewhere = false;
  for (int i = 0; i < 19; ++i) {
    const double eta = 0.05 + 0.05 * i;
    const BoundResult r = lower_bound(ThermalLoss{eta, 3.0});
    out.loss.push_back(r);
    if (r.lower_bound < r.info_term - 1e-12) {
      out.ok = false;
      out.detail += "[loss dominance broken at eta=" + fmt(eta) + "]";
    }
    if (r.lower_bound > r.info_term + 1e-9) strict_somewhere = true;
  }
  if (!strict_somewhere) {
    out.ok = false;
    out.detail += "[loss improvement never strict]";
  }

  strict_somewhere = false;
  for (int i = 0; i < 9; ++i) {
    const double g = 1.1 + (5.0 - 1.1) * i / 8.0;
    const BoundResult r = lower_bound(ThermalAmp{g, 3.0});
    out.amp.push_back(r);
    if (r.lower_bound < r.info_term - 1e-12) {
      out.ok = false;
      out.detail += "[amp dominance broken at g=" + fmt(g) + "]";
    }
    if (r.lower_bound > r.info_term + 1e-9) strict_somewhere = true;
  }
  if (!strict_somewhere) {
    out.ok = false;
    out.detail += "[amp improvement never strict]";
  }

  const BoundResult noise = lower_bound(AddedNoise{0.38});
  if (!(noise.lower_bound > 0.0 && noise.info_term < 0.0)) {
    out.ok = false;
    out.detail += "[added-noise sign pattern off]";
  }
  // The delta(gamma) curves vs the -I^C reference level: every curve must
  // attain the secure side (strictly above the level), and a curve that starts
  // below the level (I^C < 0, i.e. zeta above 1/e) must genuinely cross it.
  for (double zeta : {0.36, 0.38, 0.40}) {
    const double target = -coherent_info(AddedNoise{zeta}).first;
    const double start = delta_of_gamma(AddedNoise{zeta}, 1.0) - target;
    bool above = start > 0.0;
    bool crossed = false;
    double prev = start;
    for (int i = 1; i <= 200; ++i) {
      const double gamma = std::pow(50.0, i / 200.0);
      const double cur = delta_of_gamma(AddedNoise{zeta}, gamma) - target;
      if (cur > 0.0) above = true;
      if ((prev <= 0.0) != (cur <= 0.0)) crossed = true;
      prev = cur;
    }
    if (!above) {
      out.ok = false;
      out.detail += "[delta never above -I^C at zeta=" + fmt(zeta) + "]";
    }
    if (start < 0.0 && !crossed) {
      out.ok = false;
      out.detail += "[no delta crossing at zeta=" + fmt(zeta) + "]";
    }
  }
  return out;
}

// ---- criterion 7: bound sandwich -------------------------------------------
void criterion_sandwich(const Criterion6Grids& grids) {
  bool ok = true;
  std::string detail;
  auto check_row = [&](const BoundResult& r, const std::string& tag) {
    if (r.delta_g >= 0.0 && r.lower_bound < r.info_term - 1e-12) {
      ok = false;
      detail += "[info above bound " + tag + "]";
    }
    if (r.lower_bound > r.upper_bound + 1e-9) {
      ok = false;
      detail += "[bound above upper " + tag + "]";
    }
  };
  for (const BoundResult& r : grids.loss) check_row(r, "loss");
  for (const BoundResult& r : grids.amp) check_row(r, "amp");
  check_row(lower_bound(AddedNoise{0.38}), "noise");
  report(7, "bound sandwich", ok, ok ? "(all grid points ordered)" : detail);
}

// ---- criterion 8: threshold dominance ---------------------------------------
void criterion_threshold_dominance() {
  bool ok = true;
  std::string detail;
  double min_margin = 1e9;
  const std::array<double, 9> etas = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
  const std::array<double, 9> gains = {1.2, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0};
  for (double eta : etas) {
    ThresholdQuery q{ThresholdFamily::loss_vs_eta, eta, {1.0, 200.0}, 1e-6};
    const ThresholdResult r = security_threshold(q);
    const double info_th = threshold_of_info(ThresholdFamily::loss_vs_eta, eta);
    if (r.status != ThresholdStatus::converged || r.omega_th < info_th - 1e-6) {
      ok = false;
      detail += "[loss eta=" + fmt(eta) + "]";
    }
    min_margin = std::min(min_margin, r.omega_th - info_th);
  }
  for (double g : gains) {
    ThresholdQuery q{ThresholdFamily::amp_vs_g, g, {1.0, 200.0}, 1e-6};
    const ThresholdResult r = security_threshold(q);
    const double info_th = threshold_of_info(ThresholdFamily::amp_vs_g, g);
    if (r.status != ThresholdStatus::converged || r.omega_th < info_th - 1e-6) {
      ok = false;
      detail += "[amp g=" + fmt(g) + "]";
    }
    min_margin = std::min(min_margin, r.omega_th - info_th);
  }
  report(8, "threshold dominance", ok, "(18 points, min margin " + fmt(min_margin) + ")");
}

// ---- criterion 9: determinism ------------------------------------------------
std::string g_cli_path;

int run_cmd(const std::string& args, std::string* output) {
  const std::string cmd = "\"" + g_cli_path + "\" " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return -1;
  char buf[4096];
  std::size_t n = 0;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
    if (output) output->append(buf, n);
  }
  const int status = pclose(pipe);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void criterion_determinism() {
  bool ok = true;
  std::string detail;

  const fs::path dir = fs::temp_directory_path() / "gkb_acceptance";
  fs::create_directories(dir);
  const fs::path a = dir / "rep_a.csv";
  const fs::path b = dir / "rep_b.csv";
  const std::string args =
      "sweep --thermal-loss --omega 3 --sweep eta=0.1:0.9:9 --sweep gamma=1:100:3:log --out \"";
  std::string log;
  if (run_cmd(args + a.string() + "\"", &log) != 0 || run_cmd(args + b.string() + "\"", &log) != 0) {
    ok = false;
    detail += "[sweep run failed]";
  } else if (slurp(a) != slurp(b)) {
    ok = false;
    detail += "[sweep reruns differ]";
  } else if (slurp(a).empty()) {
    ok = false;
    detail += "[sweep produced no output]";
  }

  std::string verify_out;
  const int code = run_cmd("verify", &verify_out);
  if (code != 0) {
    ok = false;
    detail += "[verify exited " + std::to_string(code) + "]";
  }
  report(9, "determinism and self-verification", ok,
         ok ? "(byte-identical sweeps; verify exit 0)" : detail);
}

}  // namespace

int main(int argc, char** argv) {
  g_cli_path = argc > 1 ? argv[1] : GKB_CLI_PATH;

  criterion_symplecticity();
  criterion_cloner_locality();
  criterion_oracle_agreement();
  criterion_measurement_geometry();
  criterion_anchors();
  const Criterion6Grids grids = run_criterion6();
  report(6, "qualitative curve structure", grids.ok,
         grids.ok ? "(dominance, signs, and delta crossings)" : grids.detail);
  criterion_sandwich(grids);
  criterion_threshold_dominance();
  criterion_determinism();

  if (g_failures) {
    std::cout << g_failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 9 criteria passed\n";
  return 0;
}
