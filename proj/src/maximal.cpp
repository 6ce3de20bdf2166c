#include "subord/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "subord/quadrature.hpp"

namespace subord {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTiny = 1e-250;

std::string format_parameter(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return std::string(buf);
}

// log-spaced values in [lo, hi], endpoints included
std::vector<double> log_grid(double lo, double hi, int per_decade) {
  const double decades = std::log10(hi / lo);
  const int n = std::max(2, static_cast<int>(std::ceil(decades * per_decade)) + 1);
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
  }
  return out;
}

std::vector<double> decade_seeds(double lo, double hi) {
  std::vector<double> pts{lo};
  for (double p = lo * 10.0; p < hi; p *= 10.0) pts.push_back(p);
  pts.push_back(hi);
  return pts;
}

}  // namespace

double averaging_symbol(double x) {
  if (!(x >= 0.0)) {
    throw std::invalid_argument("averaging symbol needs a nonnegative argument");
  }
  if (x < 1e-8) return 1.0 - 0.5 * x;
  return -std::expm1(-x) / x;
}

Eigen::VectorXd time_average(const SpectralDecomposition& dec, double s,
                             const Eigen::VectorXd& f) {
  if (!(s >= 0.0)) throw std::invalid_argument("averaging time must be >= 0");
  if (s == 0.0) return f;
  return apply_spectral(
      dec, [s](double lambda) { return averaging_symbol(s * lambda); }, f);
}

Eigen::VectorXd maximal_function(const SpectralDecomposition& dec,
                                 const Eigen::VectorXd& f,
                                 const MaximalGrid& grid) {
  if (grid.points_per_decade < 1) {
    throw std::invalid_argument("need at least one grid point per decade");
  }
  const Eigen::VectorXd& lambda = dec.eigenvalues;
  const int n = dec.size();
  if (f.size() != n) throw std::invalid_argument("function has the wrong size");

  // both limits are exact: s -> 0 gives |f|, s -> infinity the mean part
  Eigen::VectorXd astar =
      f.cwiseAbs().cwiseMax(zero_mode_projection(dec, f).cwiseAbs());

  double lambda_min_pos = 0.0;
  for (int i = 0; i < n; ++i) {
    if (lambda[i] > 0.0) {
      lambda_min_pos = lambda[i];
      break;
    }
  }
  double s_lo = grid.s_lo;
  double s_hi = grid.s_hi;
  if (s_lo == 0.0 && lambda_min_pos > 0.0) s_lo = 1e-3 / lambda[n - 1];
  if (s_hi == 0.0 && lambda_min_pos > 0.0) s_hi = 1e3 / lambda_min_pos;
  if (s_lo == 0.0 || s_hi == 0.0) return astar;  // flat spectrum: A_s f = f
  if (!(s_lo > 0.0) || !(s_hi > s_lo)) {
    throw std::invalid_argument("maximal grid range is empty");
  }

  const Eigen::VectorXd c = dec.coefficients(f);
  for (double s : log_grid(s_lo, s_hi, grid.points_per_decade)) {
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = averaging_symbol(s * lambda[i]);
    astar = astar.cwiseMax((dec.basis * phi.cwiseProduct(c).matrix()).cwiseAbs());
  }
  return astar;
}

double weak_type_functional(const DiscreteMeasureSpace& space,
                            const Eigen::VectorXd& g) {
  const int n = static_cast<int>(g.size());
  if (space.weights.size() != n) {
    throw std::invalid_argument("function and measure sizes differ");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g[a] > g[b]; });
  double cumulative = 0.0;
  double best = 0.0;
  for (int idx : order) {
    cumulative += space.weights[idx];
    if (g[idx] > 0.0) best = std::max(best, g[idx] * cumulative);
  }
  return best;
}

double lp_norm(const DiscreteMeasureSpace& space, const Eigen::VectorXd& f,
               double p) {
  if (f.size() != space.weights.size()) {
    throw std::invalid_argument("function and measure sizes differ");
  }
  if (std::isinf(p)) return f.cwiseAbs().maxCoeff();
  if (!(p >= 1.0)) throw std::invalid_argument("exponent must be >= 1");
  const double sum =
      (f.cwiseAbs().array().pow(p) * space.weights.array()).sum();
  return std::pow(sum, 1.0 / p);
}

double hopf_strong_constant(double p) {
  if (std::isinf(p)) return 2.0;
  if (!(p > 1.0)) throw std::invalid_argument("exponent must exceed 1");
  return 2.0 * std::pow(p / (p - 1.0), 1.0 / p);
}

VerificationReport hopf_maximal_report(const SpectralDecomposition& dec,
                                       const Eigen::VectorXd& f,
                                       const std::vector<double>& ps,
                                       const MaximalGrid& grid) {
  const Eigen::VectorXd astar = maximal_function(dec, f, grid);
  VerificationReport report;

  const double weak = weak_type_functional(dec.space, astar);
  const double weak_bound = 2.0 * lp_norm(dec.space, f, 1.0);
  report.add("weak-1-1", weak, weak_bound,
             weak <= weak_bound * (1.0 + 1e-12),
             "sup_c c*mu{A*f > c} against 2 ||f||_1");

  for (double p : ps) {
    const double value = lp_norm(dec.space, astar, p);
    const double bound = hopf_strong_constant(p) * lp_norm(dec.space, f, p);
    report.add("strong-p-" + format_parameter(p), value, bound,
               value <= bound * (1.0 + 1e-12),
               "||A*f||_p against 2 (p/(p-1))^{1/p} ||f||_p");
  }
  return report;
}

double laplace_type_constant(const std::function<double(double)>& h_prime,
                             double t_lo, double t_hi, double tolerance) {
  if (!(t_lo >= 0.0) || !(t_hi > t_lo)) {
    throw std::invalid_argument("integration window is empty");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  auto integrand = [&](double t) { return t * std::abs(h_prime(t)); };
  const double start = std::max(t_lo, 1e-12);
  auto seeds = decade_seeds(start, t_hi);
  return integrate_adaptive_partition(integrand, seeds, tolerance).value;
}

double stable_laplace_constant(const StableDensity& density,
                               double tolerance) {
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  // beyond the mode the density decreases, so the tail of int t |p'| dt is
  // exactly T p(T) + int_T^inf p; march T up until the tail-mass expansion
  // is certified
  double T = 64.0;
  double tail = 0.0;
  for (;;) {
    try {
      tail = density.tail_mass(T);
      break;
    } catch (const QuadratureError&) {
      T *= 2.0;
      if (T > 1048576.0) throw;
    }
  }
  auto integrand = [&](double t) { return t * std::abs(density.p1_derivative(t)); };
  const double body =
      integrate_adaptive_partition(integrand, decade_seeds(1e-5, T), tolerance)
          .value;
  return body + T * density.p1(T) + tail;
}

double pointwise_ratio(const Eigen::VectorXd& g,
                       const Eigen::VectorXd& astar) {
  if (g.size() != astar.size()) {
    throw std::invalid_argument("vector sizes differ");
  }
  double worst = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double num = std::abs(g[i]);
    if (astar[i] < kTiny) {
      if (num < kTiny) continue;
      return std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, num / astar[i]);
  }
  return worst;
}

VerificationReport laplace_type_report(const SubordinationEngine& engine,
                                       double alpha,
                                       const std::vector<double>& u_values,
                                       const Eigen::VectorXd& f,
                                       double tolerance) {
  const SpectralDecomposition& dec = engine.decomposition();
  const Eigen::VectorXd astar = maximal_function(dec, f);
  VerificationReport report;

  {
    const Eigen::VectorXd g = apply_spectral(
        dec, [](double lambda) { return 1.0 / (1.0 + lambda); }, f);
    const double constant = laplace_type_constant(
        [](double t) { return -std::exp(-t); }, 0.0, 60.0, 1e-10);
    const double ratio = pointwise_ratio(g, astar);
    report.add("laplace-exp", ratio, constant * (1.0 + 1e-6),
               ratio <= constant * (1.0 + 1e-6),
               "|(1+L)^{-1} f| against C A*f, C = int t e^{-t} dt");
  }

  const double stable_constant =
      stable_laplace_constant(engine.stable_density(alpha, tolerance), 1e-6);
  for (double u : u_values) {
    SubordinationOptions opt;
    opt.route = Route::kSubordination;
    opt.tolerance = tolerance;
    const Eigen::VectorXd g = engine.fractional(u, alpha, f, opt);
    const double ratio = pointwise_ratio(g, astar);
    report.add("laplace-stable-u-" + format_parameter(u), ratio,
               stable_constant * (1.0 + 1e-6),
               ratio <= stable_constant * (1.0 + 1e-6),
               "fractional semigroup against C_alpha A*f");
  }
  return report;
}

SectorMaximalResult sector_maximal_constant(const SpectralDecomposition& dec,
                                            double alpha, double theta,
                                            const Eigen::VectorXd& f,
                                            double r_lo, double r_hi, int n_r,
                                            int n_psi,
                                            const MaximalGrid& grid) {
  StabilityIndex index(alpha);  // validates alpha in (0, 1)
  const double aperture = (1.0 - index.value) * kPi / 2.0;
  if (!(theta >= 0.0) || theta >= aperture) {
    throw std::invalid_argument(
        "sector aperture must lie in [0, (1-alpha) pi/2)");
  }
  if (!(r_lo > 0.0) || !(r_hi >= r_lo) || n_r < 1 || n_psi < 1) {
    throw std::invalid_argument("sector sampling grid is empty");
  }
  const Eigen::VectorXd astar = maximal_function(dec, f, grid);

  SectorMaximalResult result;
  for (int ir = 0; ir < n_r; ++ir) {
    const double r =
        n_r == 1 ? r_lo
                 : r_lo * std::pow(r_hi / r_lo,
                                   static_cast<double>(ir) / (n_r - 1));
    for (int ip = 0; ip < n_psi; ++ip) {
      const double psi =
          n_psi == 1 ? 0.0 : -theta + 2.0 * theta * ip / (n_psi - 1);
      const std::complex<double> z = std::polar(r, psi);
      const Eigen::VectorXcd g = apply_spectral_complex(
          dec,
          [&](double lambda) { return std::exp(-z * std::pow(lambda, alpha)); },
          f);
      for (int x = 0; x < g.size(); ++x) {
        const double num = std::abs(g[x]);
        double ratio;
        if (astar[x] < kTiny) {
          if (num < kTiny) continue;
          ratio = std::numeric_limits<double>::infinity();
        } else {
          ratio = num / astar[x];
        }
        ++result.samples;
        if (ratio > result.constant) {
          result.constant = ratio;
          result.worst_radius = r;
          result.worst_angle = psi;
          result.worst_point = x;
        }
      }
    }
  }
  return result;
}

FourierBoundReport fourier_l1_check(const std::function<double(double)>& g,
                                    const std::function<double(double)>& g_dd,
                                    double s_span, double xi_cut,
                                    double tolerance) {
  if (!(s_span > 0.0) || !(xi_cut > 0.0) || !(tolerance > 0.0)) {
    throw std::invalid_argument("spans and tolerance must be positive");
  }
  // sup norms scanned on a dense symmetric grid
  double norm_g = 0.0, norm_s2g = 0.0, norm_gdd = 0.0, norm_s2gdd = 0.0;
  const int scan = 20001;
  for (int i = 0; i < scan; ++i) {
    const double s = -s_span + 2.0 * s_span * i / (scan - 1);
    norm_g = std::max(norm_g, std::abs(g(s)));
    norm_s2g = std::max(norm_s2g, s * s * std::abs(g(s)));
    norm_gdd = std::max(norm_gdd, std::abs(g_dd(s)));
    norm_s2gdd = std::max(norm_s2gdd, s * s * std::abs(g_dd(s)));
  }
  const double bound =
      kPi * kPi * (norm_g + std::sqrt(norm_s2g * norm_gdd) + norm_s2gdd);

  const std::vector<double> s_seeds{-s_span,       -0.5 * s_span, -0.1 * s_span,
                                    0.0,           0.1 * s_span,  0.5 * s_span,
                                    s_span};
  const double inner_tol = std::max(tolerance / (16.0 * xi_cut), 1e-13);
  auto transform = [&](double xi) {
    auto integrand = [&](double s) {
      return g(s) * std::exp(std::complex<double>(0.0, -s * xi));
    };
    return integrate_adaptive_partition(integrand, s_seeds, inner_tol).value;
  };

  FourierBoundReport report;
  report.bound = bound;
  report.integral =
      integrate_adaptive_partition(
          [&](double xi) { return std::abs(transform(xi)); },
          {-xi_cut, -0.5 * xi_cut, 0.0, 0.5 * xi_cut, xi_cut},
          0.5 * tolerance)
          .value;

  const double gdd_l1 =
      integrate_adaptive_partition([&](double s) { return std::abs(g_dd(s)); },
                                   s_seeds, 1e-9)
          .value;
  report.tail_bound = 2.0 * gdd_l1 / xi_cut;

  report.tail_pointwise = 0.0;
  for (double factor : {1.0, 1.5, 2.0, 4.0}) {
    const double xi = xi_cut * factor;
    report.tail_pointwise = std::max(
        report.tail_pointwise, std::abs(transform(xi)) * xi * xi / gdd_l1);
  }
  report.pass = report.integral + report.tail_bound <= bound &&
                report.tail_pointwise <= 1.0 + 1e-9;
  return report;
}

}  // namespace subord
