#pragma once

#include <stdexcept>
#include <string>

namespace gkb {

inline constexpr const char* kVersion = "0.1.0";

// Centralized numeric tolerances so the library and its acceptance tests agree
// on one set of knobs.
namespace tol {
// Relative asymmetry allowed in a covariance matrix before construction fails.
inline constexpr double symmetry = 1e-12;
// Symplectic eigenvalues may undershoot 1 by this much and still be physical.
inline constexpr double physicality = 1e-9;
// Relative disagreement allowed between the two members of a +-i*lambda pair.
inline constexpr double pairing = 1e-8;
// Agreement required between closed forms and the finite-mu oracle, in bits,
// at the reference mu = 1e6.
inline constexpr double oracle_bits = 1e-4;
// Condition-number ceiling for the (X + V0) block inverted while conditioning.
inline constexpr double condition_limit = 1e12;
}  // namespace tol

// Reference mu at which tol::oracle_bits applies; the truncation error of the
// finite-mu construction is O(1/mu), so tolerances scale as reference_mu/mu.
inline constexpr double kOracleReferenceMu = 1e6;

// Numerical failure inside an otherwise well-posed computation (eigenvalue
// pairing broke down, a conditioning block is singular, a radicand went
// negative). Distinct from std::domain_error, which flags bad user input.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace gkb
