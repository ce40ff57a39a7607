#include "gkb/symplectic_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace gkb {

CovarianceMatrix::CovarianceMatrix(Eigen::MatrixXd entries) : m_(std::move(entries)) {
  if (m_.rows() != m_.cols() || m_.rows() % 2 != 0 || m_.rows() == 0) {
    throw std::invalid_argument("covariance matrix must be square with even dimension");
  }
  const double scale = std::max(1.0, m_.cwiseAbs().maxCoeff());
  const double asym = (m_ - m_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::symmetry * scale) {
    throw std::invalid_argument("covariance matrix asymmetric beyond tolerance: " +
                                std::to_string(asym));
  }
  m_ = ((m_ + m_.transpose()) / 2.0).eval();
}

CovarianceMatrix CovarianceMatrix::marginal(const std::vector<int>& modes) const {
  const int n = dim_modes();
  Eigen::MatrixXd out(2 * modes.size(), 2 * modes.size());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    for (std::size_t j = 0; j < modes.size(); ++j) {
      if (modes[i] < 0 || modes[i] >= n || modes[j] < 0 || modes[j] >= n) {
        throw std::invalid_argument("marginal: mode index out of range");
      }
      out.block<2, 2>(2 * i, 2 * j) = m_.block<2, 2>(2 * modes[i], 2 * modes[j]);
    }
  }
  return CovarianceMatrix(out);
}

bool CovarianceMatrix::is_physical() const {
  for (double lam : symplectic_eigenvalues(*this)) {
    if (lam < 1.0 - tol::physicality) return false;
  }
  return true;
}

SymplecticForm::SymplecticForm(int n) : dim_modes(n), matrix(Eigen::MatrixXd::Zero(2 * n, 2 * n)) {
  for (int k = 0; k < n; ++k) {
    matrix(2 * k, 2 * k + 1) = 1.0;
    matrix(2 * k + 1, 2 * k) = -1.0;
  }
}

double thermal_entropy(double x) {
  if (x < 1.0 - tol::physicality) {
    throw std::domain_error("thermal_entropy: argument " + std::to_string(x) +
                            " below 1 (unphysical eigenvalue upstream)");
  }
  if (x <= 1.0) return 0.0;
  const double a = (x + 1.0) / 2.0;
  const double b = (x - 1.0) / 2.0;
  return a * std::log2(a) - b * std::log2(b);
}

CovarianceMatrix tmsv_cm(double mu) {
  if (mu < 1.0) throw std::domain_error("tmsv_cm: mu must be >= 1, got " + std::to_string(mu));
  const double c = std::sqrt(mu * mu - 1.0);
  Eigen::Matrix4d V = Eigen::Matrix4d::Zero();
  V.block<2, 2>(0, 0) = mu * Eigen::Matrix2d::Identity();
  V.block<2, 2>(2, 2) = mu * Eigen::Matrix2d::Identity();
  Eigen::Matrix2d Z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  V.block<2, 2>(0, 2) = c * Z;
  V.block<2, 2>(2, 0) = c * Z;
  return CovarianceMatrix(V);
}

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d R;
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return R;
}

Eigen::Matrix2d squeeze(double r) {
  return Eigen::Vector2d(std::exp(2.0 * r), std::exp(-2.0 * r)).asDiagonal();
}

CovarianceMatrix v0_cm(const MeasurementSpec& spec) {
  if (spec.gamma < 1.0) {
    throw std::domain_error("v0_cm: gamma must be >= 1, got " + std::to_string(spec.gamma));
  }
  const Eigen::Matrix2d R = rotation(spec.theta);
  return CovarianceMatrix(spec.gamma * R * squeeze(spec.r) * R.transpose());
}

std::vector<double> symplectic_eigenvalues(const CovarianceMatrix& V) {
  const int n = V.dim_modes();
  const SymplecticForm omega(n);
  const Eigen::MatrixXd OV = omega.matrix * V.entries();
  // -(Omega V)^2 is similar to a positive matrix for physical V; its
  // eigenvalues are the squared symplectic eigenvalues, each twice.
  const Eigen::MatrixXd M = -(OV * OV);
  Eigen::EigenSolver<Eigen::MatrixXd> solver(M);
  std::vector<double> roots(2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    const std::complex<double> ev = solver.eigenvalues()(i);
    roots[i] = std::sqrt(std::max(0.0, ev.real()));
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) {
    const double a = roots[2 * k];
    const double b = roots[2 * k + 1];
    const double scale = std::max(1.0, std::abs(a));
    if (std::abs(a - b) > tol::pairing * scale) {
      throw NumericalError("symplectic_eigenvalues: +-i*lambda pair disagrees (" +
                           std::to_string(a) + " vs " + std::to_string(b) +
                           "), input asymmetric or corrupted");
    }
    out[k] = (a + b) / 2.0;
  }
  return out;
}

double gaussian_entropy(const CovarianceMatrix& V) {
  double s = 0.0;
  for (double lam : symplectic_eigenvalues(V)) s += thermal_entropy(lam);
  return s;
}

CovarianceMatrix condition_on_gaussian_measurement(const CovarianceMatrix& V_joint,
                                                   const std::vector<int>& kept_modes,
                                                   int measured_mode,
                                                   const CovarianceMatrix& V0) {
  if (V0.dim_modes() != 1) {
    throw std::invalid_argument("condition: V0 must be a single-mode CM");
  }
  for (int k : kept_modes) {
    if (k == measured_mode) {
      throw std::invalid_argument("condition: measured mode must be disjoint from kept modes");
    }
  }
  const Eigen::MatrixXd& V = V_joint.entries();
  const int nk = static_cast<int>(kept_modes.size());
  Eigen::MatrixXd Y(2 * nk, 2 * nk);
  Eigen::MatrixXd C(2 * nk, 2);
  for (int i = 0; i < nk; ++i) {
    C.block<2, 2>(2 * i, 0) = V.block<2, 2>(2 * kept_modes[i], 2 * measured_mode);
    for (int j = 0; j < nk; ++j) {
      Y.block<2, 2>(2 * i, 2 * j) = V.block<2, 2>(2 * kept_modes[i], 2 * kept_modes[j]);
    }
  }
  const Eigen::Matrix2d X =
      V.block<2, 2>(2 * measured_mode, 2 * measured_mode) + V0.entries();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(X);
  const double lo = es.eigenvalues()(0);
  const double hi = es.eigenvalues()(1);
  if (!(lo > 0.0) || hi / lo > tol::condition_limit) {
    throw NumericalError("condition: measured block X + V0 is numerically singular");
  }
  // The Schur complement is symmetric by construction; rounding in the
  // C X^{-1} C^T product (entries of order mu^2 cancelling to order 1) leaves
  // an asymmetry of order mu * eps, so restore symmetry before wrapping.
  const Eigen::MatrixXd schur = Y - C * X.inverse() * C.transpose();
  return CovarianceMatrix(((schur + schur.transpose()) / 2.0).eval());
}

}  // namespace gkb
