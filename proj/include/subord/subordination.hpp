#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>

#include "subord/spectral.hpp"
#include "subord/stable_density.hpp"

namespace subord {

// Which function of the generator is being applied.
enum class SemigroupKind {
  kHeat,               // e^{-tL}
  kPoisson,            // e^{-t sqrt(L)}
  kPoissonDerivative,  // (t sqrt(L))^k e^{-t sqrt(L)}
  kComplexPoisson,     // e^{-z sqrt(L)}, complex z with |arg z| < pi/4
  kFractional,         // exp(-t L^alpha), 0 < alpha < 1
};

// How it is evaluated: directly on the spectrum, or as an integral of heat
// operators against a subordinating weight on (0, infinity).
enum class Route { kSpectral, kSubordination };

std::string to_string(SemigroupKind k);
std::string to_string(Route r);

// ---------------------------------------------------------------------------
// Time derivatives of the Gaussian factor g(t) = exp(-t^2 / (4u))
// ---------------------------------------------------------------------------

// d^n/dt^n exp(-t^2/(4u)) as the combinatorial sum
//   g(t) * sum_{m1 + 2 m2 = n} n!/(m1! m2!) (-t/(2u))^{m1} (-1/(4u))^{m2}.
double gaussian_time_derivative(int n, double t, double u);
std::complex<double> gaussian_time_derivative(int n, std::complex<double> z,
                                              double u);

// The same derivative in closed Hermite form,
//   (-1)^n (4u)^{-n/2} H_n(t/(2 sqrt u)) exp(-t^2/(4u)),
// kept as an independent implementation for cross-checking.
double gaussian_time_derivative_hermite(int n, double t, double u);

// Upper bound for |d^n/dt^n exp(-z^2/(4u))| at |z| = abs_t, Re(z^2) = re_t2:
// the Hermite polynomial is replaced by its absolute-coefficient majorant,
//   (4u)^{-n/2} M_n(abs_t/(2 sqrt u)) exp(-re_t2/(4u)).
// Passing re_t2 = 0 drops the exponential factor, which gives a bound that
// is a finite sum of pure powers of u and hence easy to integrate over tails.
double gaussian_time_derivative_envelope(int n, double abs_t, double re_t2,
                                         double u);

// ---------------------------------------------------------------------------
// Engine
// ---------------------------------------------------------------------------

struct SubordinationOptions {
  Route route = Route::kSubordination;
  double tolerance = 1e-10;  // absolute sup-norm tolerance of the result
};

// Evaluates functions of a finite positive self-adjoint generator either
// spectrally or through subordination against the heat semigroup.  The two
// routes are independent up to the shared eigendecomposition, so their
// agreement is a meaningful consistency check.
class SubordinationEngine {
 public:
  explicit SubordinationEngine(SpectralDecomposition dec);

  const SpectralDecomposition& decomposition() const { return dec_; }

  // e^{-tL} f.  There is nothing to subordinate; always spectral.
  Eigen::VectorXd heat(double t, const Eigen::VectorXd& f) const;

  // e^{-t sqrt(L)} f.
  Eigen::VectorXd poisson(double t, const Eigen::VectorXd& f,
                          const SubordinationOptions& opt = {}) const;

  // (t sqrt(L))^k e^{-t sqrt(L)} f for k >= 0.  The subordination route uses
  //   (-1)^{k+1} pi^{-1/2} t^k int_0^inf d^{k+1}/dt^{k+1}[e^{-t^2/(4u)}]
  //                                e^{-uL} f u^{-1/2} du.
  Eigen::VectorXd poisson_derivative(double t, int k, const Eigen::VectorXd& f,
                                     const SubordinationOptions& opt = {}) const;

  // e^{-z sqrt(L)} f for complex z.  The subordination route requires
  // |arg z| < pi/4 so that Re(z^2) > 0; outside that sector it throws
  // std::domain_error.  The spectral route only needs Re z >= 0.
  Eigen::VectorXcd complex_poisson(std::complex<double> z,
                                   const Eigen::VectorXd& f,
                                   const SubordinationOptions& opt = {}) const;

  // exp(-t L^alpha) f for 0 < alpha < 1, subordinated against the one-sided
  // stable density:  exp(-t lambda^alpha) = int_0^inf p_1(u) e^{-u t^{1/alpha}
  // lambda} du.
  Eigen::VectorXd fractional(double t, double alpha, const Eigen::VectorXd& f,
                             const SubordinationOptions& opt = {}) const;

  // Integral kernels k(x,y) of the same operators, symmetric, acting as
  // phi(L) f(x) = sum_y k(x,y) f(y) mu(y).
  Eigen::MatrixXd poisson_kernel(double t,
                                 const SubordinationOptions& opt = {}) const;
  Eigen::MatrixXcd complex_poisson_kernel(
      std::complex<double> z, const SubordinationOptions& opt = {}) const;
  Eigen::MatrixXd fractional_kernel(double t, double alpha,
                                    const SubordinationOptions& opt = {}) const;

  // Shared stable-density evaluator for a given index, accurate to tol; the
  // instances (and their memo tables) are cached on the engine.
  const StableDensity& stable_density(double alpha, double tol) const;

 private:
  Eigen::VectorXd subordinate_poisson_family(double t, int k,
                                             const Eigen::VectorXd& f,
                                             double tolerance) const;

  SpectralDecomposition dec_;
  double basis_row_max_;   // max_x sum_i |B(x,i)|
  double kernel_abs_max_;  // max entry of |B| |B|^T
  mutable std::map<std::pair<double, double>, std::unique_ptr<StableDensity>>
      stable_;
  mutable std::mutex stable_mutex_;
};

}  // namespace subord
