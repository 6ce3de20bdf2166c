#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "subord/report.hpp"

namespace subord {

// Stability index of a one-sided stable law; must lie strictly inside (0, 1).
struct StabilityIndex {
  double value;
  explicit StabilityIndex(double alpha);
};

enum class StableMethod {
  kFourierInversion,  // oscillatory inversion integral (default)
  kRealIntegral,      // non-oscillatory real-integral representation
  kClosedFormHalf,    // closed form, valid only for alpha == 1/2
};

std::string to_string(StableMethod m);

struct StableDensityModel {
  StabilityIndex alpha;
  StableMethod method = StableMethod::kFourierInversion;
  double abs_tol = 1e-10;
  double grid_truncation = 0.0;  // upper cutoff T for t-integrals

  // grid_truncation == 0 selects the smallest T whose neglected tail mass is
  // below abs_tol/10.
  static StableDensityModel make(double alpha,
                                 StableMethod method = StableMethod::kFourierInversion,
                                 double abs_tol = 1e-10,
                                 double grid_truncation = 0.0);
};

// Evaluator for the density p_u(t) of the one-sided stable subordinator,
// normalised by the Laplace transform  \int_0^inf p_u(t) e^{-t s} dt
// = exp(-u s^alpha).  Evaluations of p_1 are memoized, making repeated
// subordination quadratures over the same nodes cheap.  Values of t at or
// below 1e-6 evaluate to exactly 0 (the density there is far below any
// working tolerance).
class StableDensity {
 public:
  explicit StableDensity(StableDensityModel model);

  const StableDensityModel& model() const { return model_; }

  // p_u(t) for real u > 0; reduces to p_1 through the scaling law
  // p_u(t) = u^{-1/alpha} p_1(u^{-1/alpha} t).
  double density(double u, double t) const;

  // p_1(t), memoized.
  double p1(double t) const;

  // Analytic continuation in u: the same inversion integral evaluated at
  // complex u with |arg u| <= 0.9 * pi * (1 - alpha) / 2.  No positivity or
  // normalisation claims are made for the returned values.
  std::complex<double> density_complex(std::complex<double> u, double t) const;

  // dp_1/dt by central differences with a step adapted to abs_tol.
  double p1_derivative(double t) const;

  // \int_T^inf p_1(t) dt via the convergent large-argument expansion.
  double tail_mass(double T) const;

 private:
  double evaluate_p1(double t) const;

  StableDensityModel model_;
  mutable std::map<double, double> memo_;
  mutable std::mutex memo_mutex_;
};

struct DensityAuditGrid {
  double t_min = 1e-4;
  double t_max = 1e4;
  int points_per_decade = 16;
};

// Grid-based sanity audit of the evaluator: nonnegativity, unit mass, the
// polynomial tail rates of p_1 and p_1', and super-polynomial decay at the
// origin.  Row ids: "nonneg", "mass", "tail-slope", "deriv-tail-slope",
// "origin-decay-N2/4/8".
VerificationReport density_audit(const StableDensity& density,
                                 const DensityAuditGrid& grid = {});

}  // namespace subord
