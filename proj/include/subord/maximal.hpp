#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "subord/report.hpp"
#include "subord/spectral.hpp"
#include "subord/stable_density.hpp"
#include "subord/subordination.hpp"

namespace subord {

// (1 - e^{-x}) / x, the spectral symbol of the time average
// (1/s) int_0^s e^{-r lambda} dr at x = s * lambda; value 1 at x = 0.
double averaging_symbol(double x);

// A_s f: the heat semigroup averaged over [0, s].  s = 0 returns f.
Eigen::VectorXd time_average(const SpectralDecomposition& dec, double s,
                             const Eigen::VectorXd& f);

// Log-spaced evaluation grid for the running supremum.  Zeros select
// defaults bracketing the spectrum: s_lo = 1e-3 / lambda_max and
// s_hi = 1e3 / (smallest positive eigenvalue).
struct MaximalGrid {
  double s_lo = 0.0;
  double s_hi = 0.0;
  int points_per_decade = 40;
};

// A* f = sup_{s > 0} |A_s f|, computed over the grid together with both
// limits: |f| as s -> 0 and the absolute weighted mean as s -> infinity.
Eigen::VectorXd maximal_function(const SpectralDecomposition& dec,
                                 const Eigen::VectorXd& f,
                                 const MaximalGrid& grid = {});

// sup_{c > 0} c * mu{ g > c }, evaluated exactly from the sorted values of
// g (the supremum is attained approaching a value of g from below).
double weak_type_functional(const DiscreteMeasureSpace& space,
                            const Eigen::VectorXd& g);

// Weighted p-norm; p = infinity gives the max norm.
double lp_norm(const DiscreteMeasureSpace& space, const Eigen::VectorXd& f,
               double p);

// The strong-type constant 2 (p/(p-1))^{1/p}; 2 at p = infinity.
double hopf_strong_constant(double p);

// Maximal inequalities for A*: the weak (1,1) bound with constant 2 and the
// strong (p,p) bound for every requested p > 1.  Row ids: "weak-1-1", then
// "strong-p-<p>".
VerificationReport hopf_maximal_report(const SpectralDecomposition& dec,
                                       const Eigen::VectorXd& f,
                                       const std::vector<double>& ps,
                                       const MaximalGrid& grid = {});

// C_h = int t |h'(t)| dt over [t_lo, t_hi].  When h decays at infinity and
// the window captures its variation, |h~(L) f| <= C_h A* f pointwise for
// the Laplace transform h~(lambda) = int_0^inf h(t) e^{-t lambda} dt.
double laplace_type_constant(const std::function<double(double)>& h_prime,
                             double t_lo, double t_hi, double tolerance);

// The same constant for h = p_u, the subordinator density, which is
// independent of u by scaling and is therefore computed at u = 1.  The far
// tail is handled exactly through int_T^inf t |p'(t)| dt = T p(T) +
// int_T^inf p (valid because the density is unimodal, so p' has one sign
// beyond T).
double stable_laplace_constant(const StableDensity& density,
                               double tolerance);

// Largest coordinatewise ratio |g(x)| / astar(x); coordinates where both
// sides are below 1e-250 are skipped, a large numerator over a vanishing
// denominator yields infinity.
double pointwise_ratio(const Eigen::VectorXd& g,
                       const Eigen::VectorXd& astar);

// Pointwise domination of Laplace-transform multipliers by A*: h = e^{-t}
// (constant 1, multiplier 1/(1+lambda)) and h = p_u at each requested u
// (constant stable_laplace_constant, multiplier e^{-u lambda^alpha},
// evaluated through the subordination engine's integral route so the two
// sides come from independent machinery).  Row ids: "laplace-exp",
// "laplace-stable-u-<u>".
VerificationReport laplace_type_report(const SubordinationEngine& engine,
                                       double alpha,
                                       const std::vector<double>& u_values,
                                       const Eigen::VectorXd& f,
                                       double tolerance);

// Largest pointwise ratio |e^{-z L^alpha} f| / A* f over the closed sector
// |arg z| <= theta, sampled on an n_r x n_psi grid with |z| log-spaced in
// [r_lo, r_hi].  Requires 0 <= theta < (1 - alpha) pi / 2, the aperture on
// which the subordinated semigroup extends analytically.
struct SectorMaximalResult {
  double constant = 0.0;
  long samples = 0;
  double worst_radius = 0.0;
  double worst_angle = 0.0;
  int worst_point = -1;
};

SectorMaximalResult sector_maximal_constant(const SpectralDecomposition& dec,
                                            double alpha, double theta,
                                            const Eigen::VectorXd& f,
                                            double r_lo, double r_hi, int n_r,
                                            int n_psi,
                                            const MaximalGrid& grid = {});

// Fourier-integral control: int |g^(xi)| dxi is at most
// pi^2 (||g||_inf + sqrt(||s^2 g||_inf ||g''||_inf) + ||s^2 g''||_inf)
// for the transform g^(xi) = int g(s) e^{-i s xi} ds.  The integral is
// computed over [-xi_cut, xi_cut]; the rest is certified by the tail bound
// |g^(xi)| <= ||g''||_1 / xi^2, which is also probed pointwise beyond the
// cut.  The caller guarantees g is negligible outside [-s_span, s_span].
struct FourierBoundReport {
  double integral = 0.0;        // int over [-xi_cut, xi_cut] of |g^|
  double tail_bound = 0.0;      // 2 ||g''||_1 / xi_cut
  double bound = 0.0;           // the three-norm right-hand side
  double tail_pointwise = 0.0;  // max probed |g^(xi)| xi^2 / ||g''||_1
  bool pass = false;
};

FourierBoundReport fourier_l1_check(const std::function<double(double)>& g,
                                    const std::function<double(double)>& g_dd,
                                    double s_span, double xi_cut,
                                    double tolerance);

}  // namespace subord
