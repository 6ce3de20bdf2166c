#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "subord/report.hpp"
#include "subord/rng.hpp"
#include "subord/spectral.hpp"

namespace subord {

// The lab works with the scale family Q_t = W(t, L) for the symbol
// W(t, lambda) = (t^m lambda)^alpha exp(-(t^m lambda)^alpha): the natural
// square-function building block of the order-m semigroup composed with the
// fractional power alpha.  Throughout, m >= 1 is the metric order of the
// generator (2 for the shipped random-walk models) and alpha is in (0, 1].

// w e^{-w} for w >= 0.
double q_symbol(double w);

// Q_t f through the spectral decomposition.
Eigen::VectorXd q_operator(const SpectralDecomposition& dec, int m,
                           double alpha, double t, const Eigen::VectorXd& f);

// int_0^inf W(t, lambda)^2 dt/t = 1 / (4 m alpha) for every lambda > 0, so
// this constant times the squared family integrates back to the identity on
// the mean-free subspace.
double calderon_constant(int m, double alpha);

// |calderon_constant * int W(t,lambda)^2 dt/t - 1| for one eigenvalue,
// evaluated by adaptive quadrature in log t.
double calderon_residual(int m, double alpha, double lambda,
                         double tolerance);

// Rows: "calderon-exact-quarter" (int z e^{-2z} dz against 1/4),
// "calderon-max-residual" (worst eigenvalue residual), and
// "calderon-reproduce" (the operator identity applied to f, max norm).
VerificationReport calderon_report(const SpectralDecomposition& dec, int m,
                                   double alpha, const Eigen::VectorXd& f,
                                   double tolerance);

// The tail profile Phi_t(z) = c_m int_t^inf (s^m z e^{-s^m z})^2 ds/s at
// alpha = 1, where c_m = calderon_constant(m, 1).  It has the closed form
// (c_m / 2m) t^m z e^{-2 t^m z} + (c_m / 4m) e^{-2 t^m z}  -- both terms
// positive -- and decreases from 1 to 0.
double phi_closed_form(int m, double t, double z);
double phi_quadrature(int m, double t, double z, double tolerance);

// Dyadic evaluation grid in t: per_octave midpoints (in log t) per octave
// over [2^{j_lo}, 2^{j_hi}].
struct DyadicGrid {
  int j_lo = -6;
  int j_hi = 6;
  int per_octave = 8;

  std::vector<double> times() const;
  double log_weight() const;  // ln 2 / per_octave
};

// G f (x) = (sum_t |Q_t f(x)|^2 ln2/per)^{1/2}: the vertical square
// function.  For an eigenfunction the continuous-time value is
// |f(x)| / (2 sqrt(m alpha)).
Eigen::VectorXd global_square_function(const SpectralDecomposition& dec,
                                       int m, double alpha,
                                       const Eigen::VectorXd& f,
                                       const DyadicGrid& grid = {});

// S f (x): same integral but averaged over the ball {rho(x,y) < t} with
// its measure, the conical square function at aperture one.
Eigen::VectorXd cone_square_function(const SpectralDecomposition& dec, int m,
                                     double alpha, const Eigen::VectorXd& f,
                                     const DyadicGrid& grid = {});

// max over closed balls B = {rho(x,.) <= r}, r running through the distinct
// positive distances, of
//   ( mu(B)^{-(1+2 nu)} sum_B |(I - e^{-r^{m alpha} L^alpha}) f|^2 mu )^{1/2}.
double bmo_norm(const SpectralDecomposition& dec, int m, double alpha,
                double nu, const Eigen::VectorXd& f);

// Hardy-Littlewood maximal function over closed balls (r = 0 included, so
// M f >= |f| pointwise).
Eigen::VectorXd hardy_littlewood_maximal(const DiscreteMeasureSpace& space,
                                         const Eigen::VectorXd& f);

// Peetre-type maximal function of a fixed profile g at scale t:
// sup_y |g(y)| / (1 + rho(x,y)/t)^{n + eps}.
Eigen::VectorXd peetre_maximal(const DiscreteMeasureSpace& space,
                               const Eigen::VectorXd& g, double t, double n,
                               double eps);

// Largest ratio over x of
//   sum_y s^{-n} (1 + rho(x,y)/s)^{-(n+eps)} |f(y)| mu(y)
// against the Hardy-Littlewood maximal function at x; bounded uniformly in
// s on an n-regular space.
double elementary_estimate_constant(const DiscreteMeasureSpace& space,
                                    double n, double eps, double s,
                                    const Eigen::VectorXd& f);

// Log-log slope of r -> mu(B(x, r)) averaged over centers, fitted on
// closed-ball radii inside [r_lo, r_hi]: the empirical volume dimension.
double ball_dimension(const DiscreteMeasureSpace& space, double r_lo,
                      double r_hi);

// Almost-orthogonality decay: h(s, t) = max over the positive spectrum of
// W(s, lambda) W(t, lambda) behaves like (s/t)^{m alpha} for s << t.  The
// returned value is the fitted decay exponent of h(t_center/r, t_center*r)
// in ln(t/s) over r = 2^{k/2}, k = k_lo..k_lo+n_ratios-1; it approaches
// m * alpha once the ratios are large while the optimizing eigenvalue
// stays inside the spectrum (small k mixes in the flat region near s = t,
// large k runs off the bottom of the spectrum, so pick a middle window).
double almost_orthogonality_slope(const SpectralDecomposition& dec, int m,
                                  double alpha, double t_center,
                                  int n_ratios, int k_lo = 1);

// The standard comparison family on >= 16 points: eight deltas, six delta
// differences at several gaps, eight Gaussian bumps at several widths, and
// eight seeded random vectors, each projected off the lambda = 0 eigenspace.
std::vector<std::pair<std::string, Eigen::VectorXd>>
equivalence_function_family(const SpectralDecomposition& dec,
                            unsigned long long seed);

// Square-function/norm comparison over the standard family: each row is
// (id, ||S f||_2 / ||f||_2), skipping members whose projection is null.
// The spread max/min across rows measures the equivalence constants.
std::vector<std::pair<std::string, double>> equivalence_experiment(
    const SpectralDecomposition& dec, int m, double alpha,
    const DyadicGrid& grid, unsigned long long seed);

double equivalence_spread(
    const std::vector<std::pair<std::string, double>>& rows);

}  // namespace subord
