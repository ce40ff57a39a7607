#include "gkb/thresholds.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace gkb {

namespace {

ChannelSpec family_spec(ThresholdFamily family, double scan_param, double omega) {
  if (family == ThresholdFamily::loss_vs_eta) return ThermalLoss{scan_param, omega};
  return ThermalAmp{scan_param, omega};
}

void validate_scan_param(ThresholdFamily family, double p) {
  if (family == ThresholdFamily::loss_vs_eta) {
    if (!(p > 0.0 && p < 1.0)) {
      throw std::domain_error("eta must lie in (0, 1), got " + std::to_string(p));
    }
  } else if (!(p > 1.0)) {
    throw std::domain_error("g must be > 1, got " + std::to_string(p));
  }
}

}  // namespace

const char* to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::converged: return "converged";
    case ThresholdStatus::no_security: return "no_security";
    default: return "bracket_exhausted";
  }
}

ThresholdResult security_threshold(const ThresholdQuery& q, const OptimizerOptions& opts) {
  validate_scan_param(q.family, q.scan_param);
  const auto [lo, hi] = q.omega_bracket;
  if (!(lo >= 1.0 && hi > lo)) {
    throw std::domain_error("omega bracket must satisfy 1 <= low < high");
  }
  if (!(q.tol > 0.0)) throw std::domain_error("tol must be positive");

  // Strictly positive lower bound = secure. A boundary argmax means the
  // supremum over gamma is only approached, never attained, and the raw value
  // just below it is already <= 0 there, so no special-casing is needed.
  const auto secure = [&](double omega) {
    return lower_bound(family_spec(q.family, q.scan_param, omega), opts).lower_bound > 0.0;
  };

  if (!secure(lo)) return {lo, ThresholdStatus::no_security};

  // Coarse monotonicity scan: the secure region must be a single prefix.
  bool signs[5];
  double points[5];
  for (int i = 0; i < 5; ++i) {
    points[i] = lo + (hi - lo) * i / 4.0;
    signs[i] = secure(points[i]);
  }
  int changes = 0;
  for (int i = 0; i < 4; ++i) changes += signs[i] != signs[i + 1];
  if (changes > 1) {
    throw NumericalError("security_threshold: sign scan is non-monotone in omega");
  }
  if (signs[4]) return {hi, ThresholdStatus::bracket_exhausted};

  double a = points[0], b = points[4];
  for (int i = 0; i < 4; ++i) {
    if (signs[i] && !signs[i + 1]) {
      a = points[i];
      b = points[i + 1];
      break;
    }
  }
  while (b - a > q.tol) {
    const double mid = (a + b) / 2.0;
    (secure(mid) ? a : b) = mid;
  }
  return {(a + b) / 2.0, ThresholdStatus::converged};
}

double threshold_of_info(ThresholdFamily family, double scan_param) {
  validate_scan_param(family, scan_param);
  const double target = family == ThresholdFamily::loss_vs_eta
                            ? -std::log2(1.0 - scan_param)
                            : std::log2(scan_param / (scan_param - 1.0));
  // h is strictly increasing with h(1) = 0, so bracket by doubling.
  double lo = 1.0, hi = 2.0;
  while (thermal_entropy(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("threshold_of_info: bracket blew up");
  }
  while (hi - lo > 1e-9 * std::max(1.0, lo)) {
    const double mid = (lo + hi) / 2.0;
    (thermal_entropy(mid) < target ? lo : hi) = mid;
  }
  return (lo + hi) / 2.0;
}

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> cols = {
      "channel",    "param1_name", "param1",     "param2_name",
      "param2",     "gamma_star",  "delta_g",    "info_term",
      "lower_bound", "upper_bound", "direction", "diag"};
  return cols;
}

std::vector<double> axis_values(const SweepAxis& axis) {
  if (axis.points < 2) throw std::domain_error("axis " + axis.name + ": points must be >= 2");
  if (!(axis.min < axis.max)) {
    throw std::domain_error("axis " + axis.name + ": min must be < max");
  }
  if (axis.spacing == AxisSpacing::log && !(axis.min > 0.0)) {
    throw std::domain_error("axis " + axis.name + ": log spacing needs min > 0");
  }
  std::vector<double> vals(axis.points);
  for (int i = 0; i < axis.points; ++i) {
    const double t = static_cast<double>(i) / (axis.points - 1);
    vals[i] = axis.spacing == AxisSpacing::linear
                  ? axis.min + (axis.max - axis.min) * t
                  : std::exp(std::log(axis.min) + (std::log(axis.max) - std::log(axis.min)) * t);
  }
  return vals;
}

namespace {

// Applies one axis value onto a copy of the base spec; "gamma" pins the
// measurement seed instead.
void apply_axis(ChannelSpec& spec, const std::string& name, double value,
                double* pinned_gamma) {
  if (name == "gamma") {
    *pinned_gamma = value;
    return;
  }
  const bool ok = std::visit(
      [&](auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          if (name == "eta") return (c.eta = value, true);
          if (name == "omega") return (c.omega = value, true);
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          if (name == "g") return (c.g = value, true);
          if (name == "omega") return (c.omega = value, true);
        } else {
          if (name == "zeta") return (c.zeta = value, true);
        }
        return false;
      },
      spec);
  if (!ok) {
    throw std::domain_error("axis " + name + " does not apply to this channel");
  }
}

// The second reported parameter when only one axis is swept: the channel's
// other fixed parameter (loss/amp), or nothing (added noise).
std::pair<std::string, std::optional<double>> fixed_second_param(const ChannelSpec& spec,
                                                                 const std::string& axis_name) {
  return std::visit(
      [&](const auto& c) -> std::pair<std::string, std::optional<double>> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          if (axis_name == "eta") return {"omega", c.omega};
          return {"eta", c.eta};
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          if (axis_name == "g") return {"omega", c.omega};
          return {"g", c.g};
        } else {
          return {"", std::nullopt};
        }
      },
      spec);
}

SweepRow eval_row(const SweepGrid& grid, double v1, std::optional<double> v2,
                  const OptimizerOptions& opts) {
  SweepRow row;
  row.channel = channel_name(grid.base);
  row.param1_name = grid.axes[0].name;
  row.param1 = v1;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  row.gamma_star = row.delta_g = row.info_term = row.lower_bound = row.upper_bound = nan;
  try {
    ChannelSpec spec = grid.base;
    double pinned_gamma = nan;
    apply_axis(spec, grid.axes[0].name, v1, &pinned_gamma);
    if (v2.has_value()) {
      row.param2_name = grid.axes[1].name;
      row.param2 = *v2;
      apply_axis(spec, grid.axes[1].name, *v2, &pinned_gamma);
    } else {
      std::tie(row.param2_name, row.param2) = fixed_second_param(spec, grid.axes[0].name);
    }
    validate(spec);
    if (std::isfinite(pinned_gamma)) {
      const double d = delta_of_gamma(spec, pinned_gamma);
      const auto [info, dir] = coherent_info(spec);
      row.gamma_star = pinned_gamma;
      row.delta_g = d;
      row.info_term = info;
      row.lower_bound = info + d;
      row.upper_bound = upper_bound(spec);
      row.direction = to_string(dir);
      row.diag = "gamma_pinned";
    } else {
      const BoundResult b = lower_bound(spec, opts);
      row.gamma_star = b.gamma_star;
      row.delta_g = b.delta_g;
      row.info_term = b.info_term;
      row.lower_bound = b.lower_bound;
      row.upper_bound = b.upper_bound;
      row.direction = to_string(b.direction);
      row.diag = b.boundary_argmax ? "boundary_argmax" : "ok";
    }
  } catch (const std::exception& e) {
    row.diag = std::string("error:") + e.what();
  }
  return row;
}

}  // namespace

SweepTable run_sweep(const SweepGrid& grid, const OptimizerOptions& opts, int threads) {
  if (grid.axes.empty() || grid.axes.size() > 2) {
    throw std::domain_error("run_sweep: need one or two axes");
  }
  const std::vector<double> v1 = axis_values(grid.axes[0]);
  std::vector<double> v2;
  if (grid.axes.size() == 2) v2 = axis_values(grid.axes[1]);

  std::vector<std::pair<double, std::optional<double>>> points;
  for (double a : v1) {
    if (v2.empty()) {
      points.emplace_back(a, std::nullopt);
    } else {
      for (double b : v2) points.emplace_back(a, b);
    }
  }

  SweepTable table;
  table.rows.resize(points.size());
  int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(points.size())));

  if (nthreads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) {
      table.rows[i] = eval_row(grid, points[i].first, points[i].second, opts);
    }
    return table;
  }

  // Results land at their grid index, so row order is deterministic no matter
  // how the workers interleave.
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < points.size(); i = next.fetch_add(1)) {
      table.rows[i] = eval_row(grid, points[i].first, points[i].second, opts);
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return table;
}

}  // namespace gkb
