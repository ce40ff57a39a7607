#include "gkb/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace gkb {

namespace {

constexpr double kLn2 = std::numbers::ln2;

void require_gamma(double gamma) {
  if (!(gamma >= 1.0)) {
    throw std::domain_error("gamma must be >= 1, got " + std::to_string(gamma));
  }
}

// Invariants of Eve's conditional pair: tilde = lambda+^2 + lambda-^2 and
// p = lambda+ lambda- (the symplectic determinant root). Working with this
// pair keeps lambda- accurate when tilde^2 and 4p^2 nearly cancel.
struct TildeP {
  double tilde;
  double p;
};

TildeP corrected_tilde_p(const ChannelSpec& spec, double gamma) {
  return std::visit(
      [gamma](const auto& c) -> TildeP {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          const double eta = c.eta, w = c.omega;
          const double a = w + (1.0 - eta) * gamma;
          const double tilde =
              (a * a + eta * eta * w * w - 2.0 * eta * (w * w - 1.0)) / (eta * eta);
          const double p = ((1.0 - eta) * gamma * w + 1.0) / eta;
          return {tilde, p};
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          const double g = c.g, w = c.omega;
          const double a = g * w + (g - 1.0) * gamma;
          const double tilde = a * a + w * w - 2.0 * g * (w * w - 1.0);
          const double p = (g - 1.0) * gamma * w + g;
          return {tilde, p};
        } else {
          const double z = c.zeta;
          return {2.0 + 4.0 * z * (z + gamma), 1.0 + 2.0 * z * gamma};
        }
      },
      spec);
}

EveEigs eigs_from_tilde_p(const TildeP& tp) {
  double disc = tp.tilde * tp.tilde - 4.0 * tp.p * tp.p;
  if (disc < 0.0) {
    if (disc < -1e-12 * tp.tilde * tp.tilde) {
      throw NumericalError("eve_eigs_closed: negative radicand");
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double lp2 = (tp.tilde + root) / 2.0;
  const double lm2 = (2.0 * tp.p * tp.p) / (tp.tilde + root);
  return {std::sqrt(lp2), std::sqrt(lm2)};
}

double checked_sqrt(double x, const char* what) {
  if (x < 0.0) {
    if (x < -1e-12) throw NumericalError(std::string("eve_eigs_closed: negative radicand in ") + what);
    x = 0.0;
  }
  return std::sqrt(x);
}

// The radical coefficients exactly as historically typeset, kept for audit.
// The loss A term, the amplifier A cross term and B sign, and the added-noise
// coefficients all disagree with the finite-mu oracle (see tests); do not use
// for computation.
EveEigs printed_eigs(const ChannelSpec& spec, double gamma) {
  return std::visit(
      [gamma](const auto& c) -> EveEigs {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          const double eta = c.eta, w = c.omega;
          const double d = (eta - 1.0) * (eta - 1.0);
          const double A = d * (gamma - w) * (gamma - w) + 2.0 * eta;
          const double B = d * (gamma + w) * (gamma + w) *
                           (d * (gamma - w) * (gamma - w) - 4.0 * gamma * w * (eta - 1.0) +
                            4.0 * eta);
          const double rb = checked_sqrt(B, "B (loss)");
          return {checked_sqrt(A + rb, "A+sqrt(B) (loss)") / (std::sqrt(2.0) * eta),
                  checked_sqrt(A - rb, "A-sqrt(B) (loss)") / (std::sqrt(2.0) * eta)};
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          const double g = c.g, w = c.omega;
          const double d = (g - 1.0) * (g - 1.0);
          const double A = d * (gamma * gamma + 2.0 * g * gamma * w + w * w) + 2.0 * g;
          const double B = d * (gamma + w) * (gamma + w) *
                           (gamma * gamma * d - 2.0 * gamma * (g * g - 1.0) * w + d * w * w +
                            4.0 * g);
          const double rb = checked_sqrt(B, "B (amp)");
          return {checked_sqrt(A + rb, "A+sqrt(B) (amp)") / std::sqrt(2.0),
                  checked_sqrt(A - rb, "A-sqrt(B) (amp)") / std::sqrt(2.0)};
        } else {
          const double z = c.zeta;
          const double rb = checked_sqrt(4.0 + z * z + 4.0 * z * gamma, "radical (noise)");
          return {checked_sqrt(1.0 + 0.5 * z * (z + 2.0 * gamma + rb), "lambda+ (noise)"),
                  checked_sqrt(1.0 + 0.5 * z * (z + 2.0 * gamma - rb), "lambda- (noise)")};
        }
      },
      spec);
}

}  // namespace

const char* to_string(Direction d) { return d == Direction::direct ? "direct" : "reverse"; }

Direction default_direction(const ChannelSpec& spec) {
  return std::holds_alternative<ThermalLoss>(spec) ? Direction::reverse : Direction::direct;
}

Target default_target(const ChannelSpec& spec) {
  // The measured mode: Bob's in reverse reconciliation, Alice's in direct.
  return default_direction(spec) == Direction::reverse ? Target::B : Target::A;
}

double conditional_y_variance(const ChannelSpec& spec, double gamma) {
  validate(spec);
  require_gamma(gamma);
  return std::visit(
      [gamma](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          return (gamma + (1.0 - c.eta) * c.omega) / c.eta;
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          return c.g * gamma + (c.g - 1.0) * c.omega;
        } else {
          return 2.0 * c.zeta + gamma;
        }
      },
      spec);
}

EveEigs eve_eigs_closed(const ChannelSpec& spec, double gamma, Formula formula) {
  validate(spec);
  require_gamma(gamma);
  if (formula == Formula::printed_verbatim) return printed_eigs(spec, gamma);
  return eigs_from_tilde_p(corrected_tilde_p(spec, gamma));
}

double delta_of_gamma(const ChannelSpec& spec, double gamma) {
  const EveEigs e = eve_eigs_closed(spec, gamma);
  return thermal_entropy(e.lambda_plus) + thermal_entropy(e.lambda_minus) -
         thermal_entropy(conditional_y_variance(spec, gamma));
}

DeltaMax maximize_scalar(const std::function<double(double)>& f, const OptimizerOptions& opts) {
  if (!(opts.gamma_max > 1.0) || opts.coarse_points < 3) {
    throw std::invalid_argument("maximize_scalar: need gamma_max > 1 and coarse_points >= 3");
  }
  const int n = opts.coarse_points;
  const double log_max = std::log(opts.gamma_max);
  std::vector<double> xs(n), fs(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = std::exp(log_max * i / (n - 1));
    fs[i] = f(xs[i]);
  }
  int best = 0;
  for (int i = 1; i < n; ++i) {
    if (fs[i] > fs[best]) best = i;  // ties keep the smaller gamma
  }
  const bool boundary = (best == n - 1);

  double a = xs[best > 0 ? best - 1 : 0];
  double b = xs[best < n - 1 ? best + 1 : n - 1];
  double best_x = xs[best], best_f = fs[best];
  if (b > a) {
    constexpr double invphi = 0.6180339887498949;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200; ++it) {
      const double width_floor =
          std::max(opts.refine_tol, 8.0 * std::numeric_limits<double>::epsilon() * b);
      if (b - a <= width_floor || std::abs(fc - fd) <= opts.value_tol) break;
      if (fc > fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - invphi * (b - a);
        fc = f(c);
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + invphi * (b - a);
        fd = f(d);
      }
    }
    // Accept the refined point only when strictly better, so a flat objective
    // keeps the smallest-gamma grid incumbent.
    const double rx = fc > fd ? c : d;
    const double rf = std::max(fc, fd);
    if (rf > best_f) {
      best_x = rx;
      best_f = rf;
    }
  }
  return {best_f, best_x, boundary};
}

DeltaMax maximize_delta(const ChannelSpec& spec, const OptimizerOptions& opts) {
  validate(spec);
  return maximize_scalar([&spec](double g) { return delta_of_gamma(spec, g); }, opts);
}

std::pair<double, Direction> coherent_info(const ChannelSpec& spec, Formula formula) {
  validate(spec);
  return std::visit(
      [formula](const auto& c) -> std::pair<double, Direction> {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          return {-std::log2(1.0 - c.eta) - thermal_entropy(c.omega), Direction::reverse};
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          // As printed the log term is negated, making the value non-positive
          // everywhere; the finite-mu evaluation fixes the positive sign.
          const double sign = formula == Formula::printed_verbatim ? -1.0 : 1.0;
          return {sign * std::log2(c.g / (c.g - 1.0)) - thermal_entropy(c.omega),
                  Direction::direct};
        } else {
          return {-1.0 / kLn2 - std::log2(c.zeta), Direction::direct};
        }
      },
      spec);
}

double upper_bound(const ChannelSpec& spec, Formula formula) {
  validate(spec);
  return std::visit(
      [formula](const auto& c) -> double {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, ThermalLoss>) {
          const double nth = (c.omega - 1.0) / 2.0;
          if (formula == Formula::printed_verbatim) {
            return -std::log2(std::pow(1.0 - c.eta, nth)) - thermal_entropy(c.omega);
          }
          return -std::log2((1.0 - c.eta) * std::pow(c.eta, nth)) - thermal_entropy(c.omega);
        } else if constexpr (std::is_same_v<T, ThermalAmp>) {
          const double nth = (c.omega - 1.0) / 2.0;
          if (formula == Formula::printed_verbatim) {
            return -std::log2(std::pow(c.g, nth) / (c.g - 1.0)) - thermal_entropy(c.omega);
          }
          return std::log2(std::pow(c.g, nth + 1.0) / (c.g - 1.0)) - thermal_entropy(c.omega);
        } else {
          return (c.zeta - 1.0) / kLn2 - std::log2(c.zeta);
        }
      },
      spec);
}

BoundResult lower_bound(const ChannelSpec& spec, const OptimizerOptions& opts) {
  const DeltaMax dm = maximize_delta(spec, opts);
  const auto [info, dir] = coherent_info(spec);
  BoundResult out;
  out.channel = spec;
  out.direction = dir;
  out.gamma_star = dm.gamma_star;
  out.delta_g = dm.delta_g;
  out.info_term = info;
  out.lower_bound = info + dm.delta_g;
  out.upper_bound = upper_bound(spec);
  out.boundary_argmax = dm.boundary_argmax;
  out.path = EvalPath::closed_form;
  return out;
}

namespace {

// Conditioning the mu-scale joint state cancels products of order mu down to
// O(1) entries, so conditioned eigenvalues carry absolute rounding noise of
// order mu * eps. Eigenvalues that equal 1 in exact arithmetic (the padding
// eigenvalue of a heterodyne posterior at gamma = 1) can land just below the
// fixed physicality window; snap those back to 1 before taking entropies.
double snap_physical(double lambda, double mu) {
  const double noise = 256.0 * std::numeric_limits<double>::epsilon() * mu;
  const double tol = std::max(tol::physicality, noise);
  return (lambda < 1.0 && lambda >= 1.0 - tol) ? 1.0 : lambda;
}

}  // namespace

OracleEval finite_mu_oracle(const ChannelSpec& spec, const MeasurementSpec& m, double mu) {
  const JointState js = build_joint_state(spec, mu);
  const int measured = js.mode_of(m.target == Target::A ? 'A' : 'B');
  const int partner = js.mode_of(m.target == Target::A ? 'B' : 'A');
  const CovarianceMatrix V0 = v0_cm(m);

  const CovarianceMatrix eve = condition_on_gaussian_measurement(
      js.cm, {js.mode_of('E'), js.mode_of('e')}, measured, V0);
  const std::vector<double> ee = symplectic_eigenvalues(eve);

  const CovarianceMatrix y =
      condition_on_gaussian_measurement(js.cm, {partner}, measured, V0);
  const double yv = symplectic_eigenvalues(y)[0];

  OracleEval out;
  out.eigs = {snap_physical(ee[0], mu), snap_physical(ee[1], mu)};
  out.y_variance = snap_physical(yv, mu);
  out.delta = thermal_entropy(out.eigs.lambda_plus) + thermal_entropy(out.eigs.lambda_minus) -
              thermal_entropy(out.y_variance);
  return out;
}

double finite_mu_delta(const ChannelSpec& spec, const MeasurementSpec& m, double mu) {
  return finite_mu_oracle(spec, m, mu).delta;
}

double finite_mu_coherent_info(const ChannelSpec& spec, Direction direction, double mu) {
  const JointState js = build_joint_state(spec, mu);
  const CovarianceMatrix ab = js.cm.marginal({js.mode_of('A'), js.mode_of('B')});
  const char local = direction == Direction::reverse ? 'A' : 'B';
  const CovarianceMatrix loc = js.cm.marginal({js.mode_of(local)});
  return gaussian_entropy(loc) - gaussian_entropy(ab);
}

}  // namespace gkb
