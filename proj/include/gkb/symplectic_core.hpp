#pragma once

#include <Eigen/Dense>
#include <vector>

#include "gkb/constants.hpp"

namespace gkb {

// Real symmetric 2n x 2n second-moment matrix of an n-mode Gaussian state,
// in shot-noise units (vacuum = identity). Mode ordering is interleaved
// (x1, p1, x2, p2, ...) everywhere in this library.
class CovarianceMatrix {
 public:
  // Symmetrizes on construction. Throws std::invalid_argument for odd sizes
  // or asymmetry beyond tol::symmetry (relative to the largest entry).
  explicit CovarianceMatrix(Eigen::MatrixXd entries);

  int dim_modes() const { return static_cast<int>(m_.rows()) / 2; }
  const Eigen::MatrixXd& entries() const { return m_; }

  // Restriction to a subset of modes, in the order given.
  CovarianceMatrix marginal(const std::vector<int>& modes) const;

  // True when every symplectic eigenvalue is >= 1 - tol::physicality.
  // Checked on demand, not on construction: Schur complements taken while
  // conditioning are re-validated at their use sites.
  bool is_physical() const;

 private:
  Eigen::MatrixXd m_;
};

// Block-diagonal symplectic form, one [[0,1],[-1,0]] block per mode.
struct SymplecticForm {
  explicit SymplecticForm(int dim_modes);
  int dim_modes;
  Eigen::MatrixXd matrix;
};

// Which party's mode the Gaussian measurement acts on.
enum class Target { A, B };

// Single-mode Gaussian POVM seed: V0 = gamma * R(theta) * S(2r) * R(theta)^T.
struct MeasurementSpec {
  double gamma = 1.0;  // thermal parameter, gamma = 2 n_gamma + 1 >= 1
  double r = 0.0;      // squeezing
  double theta = 0.0;  // rotation angle, radians
  Target target = Target::B;
};

// Thermal entropy h(x) in bits. Values in [1 - tol::physicality, 1) clamp to
// the exact limit h(1) = 0; anything lower throws std::domain_error.
double thermal_entropy(double x);

// Two-mode squeezed vacuum with parameter mu = 2 nbar + 1 >= 1:
// [[mu I, sqrt(mu^2-1) Z], [sqrt(mu^2-1) Z, mu I]].
CovarianceMatrix tmsv_cm(double mu);

// 2x2 symplectic building blocks.
Eigen::Matrix2d rotation(double theta);
// diag(e^{2r}, e^{-2r}); as a covariance factor this is the S(2r) above.
Eigen::Matrix2d squeeze(double r);

// The measurement seed CM; det = gamma^2, heterodyne at (gamma=1, r=0).
CovarianceMatrix v0_cm(const MeasurementSpec& spec);

// The n positive values {lambda} with +-i*lambda in the spectrum of Omega V,
// descending. Computed from the eigenvalues of -(Omega V)^2, which come in
// near-degenerate pairs; pairs disagreeing beyond tol::pairing (relative) raise
// NumericalError.
std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& V);

// Sum of thermal_entropy over the symplectic spectrum, in bits.
double gaussian_entropy(const CovarianceMatrix& V);

// Covariance of the kept modes after a Gaussian measurement with seed V0 on
// measured_mode: Y - C (X + V0)^{-1} C^T. Outcome-independent. Raises
// NumericalError when cond(X + V0) exceeds tol::condition_limit.
CovarianceMatrix condition_on_gaussian_measurement(const CovarianceMatrix& V_joint,
                                                   const std::vector<int>& kept_modes,
                                                   int measured_mode,
                                                   const CovarianceMatrix& V0);

}  // namespace gkb
