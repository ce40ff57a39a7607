#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gkb/bounds.hpp"

namespace gkb {

enum class ThresholdFamily { loss_vs_eta, amp_vs_g };

struct ThresholdQuery {
  ThresholdFamily family;
  double scan_param;  // eta or g
  std::pair<double, double> omega_bracket{1.0, 200.0};
  double tol = 1e-6;
};

enum class ThresholdStatus {
  converged,          // bisection met tol with a sign change across it
  no_security,        // lower bound not positive at the bracket's low end
  bracket_exhausted,  // still positive at the bracket's high end
};
const char* to_string(ThresholdStatus s);

struct ThresholdResult {
  double omega_th;
  ThresholdStatus status;
};

// Largest omega with strictly positive lower bound, by bisection on its sign
// (gamma re-optimized at every evaluation). A 5-point sign scan first checks
// the bracket is monotone; more than one sign change raises NumericalError.
ThresholdResult security_threshold(const ThresholdQuery& q,
                                   const OptimizerOptions& opts = {});

// Root of the information term alone: solves h(omega) = -log2(1-eta) (loss)
// or h(omega) = log2(g/(g-1)) (amp), unique since h is strictly increasing.
double threshold_of_info(ThresholdFamily family, double scan_param);

enum class AxisSpacing { linear, log };
struct SweepAxis {
  std::string name;  // eta | g | omega | zeta | gamma
  double min = 0.0;
  double max = 0.0;
  int points = 0;  // >= 2
  AxisSpacing spacing = AxisSpacing::linear;
};

// A grid over one or two axes around a base channel; a "gamma" axis pins the
// measurement seed instead of optimizing it (delta-profile rows).
struct SweepGrid {
  ChannelSpec base;
  std::vector<SweepAxis> axes;  // 1 or 2, row-major order
};

struct SweepRow {
  std::string channel;
  std::string param1_name;
  double param1 = 0.0;
  std::string param2_name;  // empty if the channel has no second parameter
  std::optional<double> param2;
  double gamma_star = 0.0;
  double delta_g = 0.0;
  double info_term = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  std::string direction;
  std::string diag;  // ok | boundary_argmax | gamma_pinned | error:<what>
};

struct SweepTable {
  std::vector<SweepRow> rows;
};
// The CSV/JSON column set, in order.
const std::vector<std::string>& sweep_columns();

std::vector<double> axis_values(const SweepAxis& axis);

// One row per grid point, deterministic row-major order regardless of thread
// count (threads = 0 picks hardware concurrency). Per-row failures are
// captured in the diag column, never aborting the sweep.
SweepTable run_sweep(const SweepGrid& grid, const OptimizerOptions& opts = {},
                     int threads = 0);

}  // namespace gkb
