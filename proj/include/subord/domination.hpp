#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subord/rng.hpp"
#include "subord/subordination.hpp"

namespace subord {

// Sector of complex times z = x (1 + i tan psi), |psi| <= beta, x > 0.  The
// half-aperture must stay below pi/4 so that Re(z^2) > 0; the comparison
// time shrinks by gamma = sqrt(1 - tan^2 beta) and the claimed pointwise
// constant is 4 sqrt(2) / gamma.
struct SectorSpec {
  double beta;

  explicit SectorSpec(double half_aperture);
  double gamma() const;
  double claimed_constant() const;
};

// sup_{x > 0} (1/4) x^{k-1} |H_{k+1}(x)| e^{-(1 - theta^2) x^2}: the growth
// factor of the derivative subordination weight against the weight at the
// contracted time theta * t.  At k = 0 the supremum is exactly 1/2 for every
// theta.  The pointwise operator bound uses (2/theta) times this value.
double faa_di_bruno_constant(int k, double theta);

// Outcome of one pointwise-domination sweep: the largest observed ratio
// |numerator(x)| / denominator(x) against the claimed constant, with the
// location of the worst case.  Ratios where the denominator is below 1e-250
// are skipped when the numerator is comparably tiny and count as infinite
// otherwise.
struct PointwiseDominationResult {
  std::string label;
  int k = 0;                   // derivative order, 0 when not applicable
  double parameter = 0.0;      // theta or beta
  double empirical_constant = 0.0;
  double reference_constant = 0.0;
  bool pass = false;
  double worst_time = 0.0;     // t (or Re z) of the worst ratio
  int worst_point = -1;        // space index (row index for kernels)
  std::string worst_function;  // empty for kernel sweeps
  long samples = 0;            // ratios actually compared
};

// Violation witness for a claimed constant that fails.
class DominationViolation : public std::runtime_error {
 public:
  DominationViolation(const PointwiseDominationResult& result,
                      double claimed);
  double ratio;
  double time;
  int point;
  std::string function_id;
};

// |(t sqrt(L))^k e^{-t sqrt(L)} f| <= C e^{-theta t sqrt(L)} |f| pointwise,
// over the given times and functions; C defaults to (2/theta) c(theta, k).
PointwiseDominationResult derivative_domination(
    const SubordinationEngine& engine, int k, double theta,
    const std::vector<double>& times,
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& functions);

// |e^{-z sqrt(L)} f| <= (4 sqrt 2 / gamma) e^{-gamma Re(z) sqrt(L)} |f|
// pointwise for random z in the sector, Re z drawn from [tau, 4 tau] over
// the given tau grid.
PointwiseDominationResult sector_function_domination(
    const SubordinationEngine& engine, const SectorSpec& spec,
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& functions,
    const std::vector<double>& tau_grid, int samples_per_tau, Rng& rng);

// The same claim on the integral kernels instead of functions.
PointwiseDominationResult sector_kernel_domination(
    const SubordinationEngine& engine, const SectorSpec& spec,
    const std::vector<double>& tau_grid, int samples_per_tau, Rng& rng);

// Throws DominationViolation when the sweep's largest ratio exceeds the
// given claim (defaults to the result's own reference constant).
void enforce_domination(const PointwiseDominationResult& result,
                        double claimed_constant = -1.0);

// Deltas, the constant, an alternating sign pattern, and `random_count`
// Gaussian draws: a compact default family for domination sweeps.
std::vector<std::pair<std::string, Eigen::VectorXd>> domination_test_functions(
    const DiscreteMeasureSpace& space, Rng& rng, int random_count);

}  // namespace subord
