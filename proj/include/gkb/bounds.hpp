#pragma once

#include <functional>
#include <utility>

#include "gkb/channels.hpp"

namespace gkb {

enum class Direction { direct, reverse };
const char* to_string(Direction d);

// Closed forms come in two flavours: the transcription-corrected radicals this
// library trusts (they are the ones that agree with the finite-mu oracle), and
// the as-printed coefficients kept verbatim for audit. The printed loss/amp
// "A" terms and the printed added-noise coefficients disagree with the oracle;
// see the eve_eigs_closed tests for the exact discrepancies.
enum class Formula { corrected, printed_verbatim };

enum class EvalPath { closed_form, finite_mu };

struct OptimizerOptions {
  double gamma_max = 1e6;   // search window is [1, gamma_max], log-spaced
  int coarse_points = 200;  // >= 3
  double refine_tol = 1e-10;  // golden-section interval width, in gamma
  double value_tol = 1e-12;   // early stop when bracket values agree, in bits
};

struct EveEigs {
  double lambda_plus;
  double lambda_minus;
};

struct DeltaMax {
  double delta_g;       // max over gamma of delta(gamma), raw (may be < 0)
  double gamma_star;    // argmax; smallest gamma on ties
  bool boundary_argmax;  // coarse argmax sat on the gamma_max grid point
};

struct BoundResult {
  ChannelSpec channel;
  Direction direction;
  double gamma_star;
  double delta_g;      // raw optimizer value; max(delta_g, 0) is the caller's
                       // trivial improvement, deliberately not applied here
  double info_term;    // coherent or reverse coherent information, bits
  double lower_bound;  // info_term + delta_g, exactly
  double upper_bound;  // reference upper bound, bits
  bool boundary_argmax;
  EvalPath path;
};

// Reconciliation direction each channel's bound is stated in: reverse for
// loss, direct for amplification and added noise (the latter is
// direction-symmetric).
Direction default_direction(const ChannelSpec& spec);
Target default_target(const ChannelSpec& spec);

// Conditional variance of the unmeasured party's mode given the Gaussian
// measurement seed gamma on the measured one (mu -> infinity limit):
// loss (gamma + (1-eta) omega)/eta | amp g gamma + (g-1) omega |
// noise 2 zeta + gamma.
double conditional_y_variance(const ChannelSpec& spec, double gamma);

// Symplectic eigenvalues of Eve's pair conditioned on the measurement, in the
// mu -> infinity limit. Raises NumericalError on a negative radicand (cannot
// happen for corrected forms on valid inputs).
EveEigs eve_eigs_closed(const ChannelSpec& spec, double gamma,
                        Formula formula = Formula::corrected);

// delta(gamma) = h(lambda+) + h(lambda-) - h(conditional_y_variance), bits.
double delta_of_gamma(const ChannelSpec& spec, double gamma);

// Coarse log-grid scan of [1, gamma_max] followed by golden-section
// refinement of the bracketing interval. Deterministic; the returned value is
// never below any coarse-grid evaluation; ties break to the smallest gamma.
DeltaMax maximize_scalar(const std::function<double(double)>& f,
                         const OptimizerOptions& opts = {});
DeltaMax maximize_delta(const ChannelSpec& spec, const OptimizerOptions& opts = {});

// Closed-form information term and its direction:
// loss -log2(1-eta) - h(omega), reverse | amp log2(g/(g-1)) - h(omega),
// direct | noise -1/ln2 - log2(zeta), direct (= reverse).
// The printed_verbatim amplifier form carries the opposite sign on the log
// term; the finite-mu oracle fixes the corrected one.
std::pair<double, Direction> coherent_info(const ChannelSpec& spec,
                                           Formula formula = Formula::corrected);

// Reference upper bound:
// loss -log2((1-eta) eta^{n_th}) - h(omega) | amp log2(g^{n_th+1}/(g-1)) -
// h(omega) | noise (zeta-1)/ln2 - log2(zeta), with n_th = (omega-1)/2.
double upper_bound(const ChannelSpec& spec, Formula formula = Formula::corrected);

// Assembles coherent_info + maximize_delta + upper_bound.
BoundResult lower_bound(const ChannelSpec& spec, const OptimizerOptions& opts = {});

// Finite-mu verification path: builds the four-mode dilation, conditions both
// Eve's pair and the partner mode on the measured mode with V0(gamma, r,
// theta), and reports everything the closed forms predict.
struct OracleEval {
  EveEigs eigs;      // Eve-pair conditional symplectic eigenvalues
  double y_variance;  // partner-mode conditional symplectic eigenvalue
  double delta;       // S(E,e|X) - S(Y|X), bits
};
OracleEval finite_mu_oracle(const ChannelSpec& spec, const MeasurementSpec& m,
                            double mu);
double finite_mu_delta(const ChannelSpec& spec, const MeasurementSpec& m, double mu);

// S(rho_A or rho_B) - S(rho_AB) from the post-channel two-mode state.
double finite_mu_coherent_info(const ChannelSpec& spec, Direction direction,
                               double mu);

}  // namespace gkb
