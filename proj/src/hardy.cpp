#include "subord/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "subord/maximal.hpp"
#include "subord/quadrature.hpp"

namespace subord {

namespace {

void validate_order(int m, double alpha) {
  if (m < 1) throw std::invalid_argument("generator order must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("fractional index must lie in (0, 1]");
  }
}

// (t^m lambda)^alpha, the scale variable of the family
double scale_variable(int m, double alpha, double t, double lambda) {
  const double base = std::pow(t, m) * lambda;
  return base > 0.0 ? std::pow(base, alpha) : 0.0;
}

Eigen::VectorXd family_symbol(const SpectralDecomposition& dec, int m,
                              double alpha, double t) {
  Eigen::VectorXd phi(dec.size());
  for (int i = 0; i < dec.size(); ++i) {
    phi[i] = q_symbol(scale_variable(m, alpha, t, dec.eigenvalues[i]));
  }
  return phi;
}

// sorted distinct positive distances of the space
std::vector<double> distinct_radii(const DiscreteMeasureSpace& space) {
  std::set<double> values;
  for (int i = 0; i < space.size(); ++i) {
    for (int j = i + 1; j < space.size(); ++j) {
      values.insert(space.metric(i, j));
    }
  }
  values.erase(0.0);
  return {values.begin(), values.end()};
}

double least_squares_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

double weighted_l2(const DiscreteMeasureSpace& space,
                   const Eigen::VectorXd& v) {
  return std::sqrt((v.array().square() * space.weights.array()).sum());
}

}  // namespace

double q_symbol(double w) {
  if (!(w >= 0.0)) throw std::invalid_argument("scale variable must be >= 0");
  return w > 745.0 ? 0.0 : w * std::exp(-w);
}

Eigen::VectorXd q_operator(const SpectralDecomposition& dec, int m,
                           double alpha, double t, const Eigen::VectorXd& f) {
  validate_order(m, alpha);
  if (!(t > 0.0)) throw std::invalid_argument("scale must be positive");
  return apply_spectral_values(dec, family_symbol(dec, m, alpha, t), f);
}

double calderon_constant(int m, double alpha) {
  validate_order(m, alpha);
  return 4.0 * m * alpha;
}

double calderon_residual(int m, double alpha, double lambda,
                         double tolerance) {
  validate_order(m, alpha);
  if (!(lambda > 0.0)) throw std::invalid_argument("eigenvalue must be > 0");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const double ma = m * alpha;
  auto v_of_w = [&](double w) {
    return (std::log(w) - alpha * std::log(lambda)) / ma;
  };
  auto integrand = [&](double v) {
    const double w = std::exp(ma * v) * std::pow(lambda, alpha);
    const double s = q_symbol(w);
    return s * s;
  };
  const double value =
      integrate_adaptive_partition(
          integrand, {v_of_w(1e-5), v_of_w(0.5), v_of_w(15.0)},
          0.25 * tolerance)
          .value;
  return std::abs(calderon_constant(m, alpha) * value - 1.0);
}

VerificationReport calderon_report(const SpectralDecomposition& dec, int m,
                                   double alpha, const Eigen::VectorXd& f,
                                   double tolerance) {
  validate_order(m, alpha);
  VerificationReport report;

  const double quarter =
      integrate_adaptive([](double z) { return z * std::exp(-2.0 * z); }, 0.0,
                         20.0, 1e-13)
          .value;
  report.add("calderon-exact-quarter", std::abs(quarter - 0.25), 1e-12,
             std::abs(quarter - 0.25) <= 1e-12,
             "the normalizing integral evaluates to 1/4");

  double worst = 0.0;
  double lambda_min = 0.0, lambda_max = 0.0;
  for (int i = 0; i < dec.size(); ++i) {
    const double lambda = dec.eigenvalues[i];
    if (lambda <= 0.0) continue;
    if (lambda_min == 0.0) lambda_min = lambda;
    lambda_max = lambda;
    worst = std::max(worst, calderon_residual(m, alpha, lambda, tolerance));
  }
  report.add("calderon-max-residual", worst, tolerance, worst <= tolerance,
             "worst per-eigenvalue deviation of the reproducing constant");

  if (lambda_min > 0.0) {
    const double ma = m * alpha;
    const double v_lo =
        (std::log(1e-6) - alpha * std::log(lambda_max)) / ma;
    const double v_hi = (std::log(18.0) - alpha * std::log(lambda_min)) / ma;
    const Eigen::VectorXd coeff = dec.coefficients(f);
    auto integrand = [&](double v) -> Eigen::VectorXd {
      Eigen::VectorXd phi2(dec.size());
      for (int i = 0; i < dec.size(); ++i) {
        const double s =
            q_symbol(scale_variable(m, alpha, std::exp(v), dec.eigenvalues[i]));
        phi2[i] = s * s;
      }
      return dec.basis * phi2.cwiseProduct(coeff);
    };
    const Eigen::VectorXd integral =
        integrate_adaptive_partition(integrand,
                                     {v_lo, 0.5 * (v_lo + v_hi), v_hi},
                                     0.25 * tolerance)
            .value;
    const Eigen::VectorXd target = f - zero_mode_projection(dec, f);
    const double deviation =
        (calderon_constant(m, alpha) * integral - target)
            .cwiseAbs()
            .maxCoeff();
    report.add("calderon-reproduce", deviation, tolerance,
               deviation <= tolerance,
               "operator reproducing identity on the mean-free part");
  }
  return report;
}

double phi_closed_form(int m, double t, double z) {
  validate_order(m, 1.0);
  const double w = std::pow(t, m) * z;
  return w > 350.0 ? 0.0 : (2.0 * w + 1.0) * std::exp(-2.0 * w);
}

double phi_quadrature(int m, double t, double z, double tolerance) {
  validate_order(m, 1.0);
  if (!(t > 0.0) || !(z > 0.0)) {
    throw std::invalid_argument("scale and spectral point must be positive");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  const double v_lo = std::log(t);
  const double v_hi =
      std::max(v_lo + 1.0, (std::log(200.0) - std::log(z)) / m);
  auto integrand = [&](double v) {
    const double s = q_symbol(std::exp(m * v) * z);
    return s * s;
  };
  const double value = integrate_adaptive_partition(
                           integrand, {v_lo, 0.5 * (v_lo + v_hi), v_hi},
                           0.25 * tolerance)
                           .value;
  return calderon_constant(m, 1.0) * value;
}

std::vector<double> DyadicGrid::times() const {
  if (j_hi <= j_lo || per_octave < 1) {
    throw std::invalid_argument("dyadic grid is empty");
  }
  std::vector<double> t;
  t.reserve(static_cast<size_t>(j_hi - j_lo) * per_octave);
  for (int j = j_lo; j < j_hi; ++j) {
    for (int k = 0; k < per_octave; ++k) {
      t.push_back(std::pow(2.0, j + (k + 0.5) / per_octave));
    }
  }
  return t;
}

double DyadicGrid::log_weight() const {
  return std::log(2.0) / per_octave;
}

Eigen::VectorXd global_square_function(const SpectralDecomposition& dec,
                                       int m, double alpha,
                                       const Eigen::VectorXd& f,
                                       const DyadicGrid& grid) {
  validate_order(m, alpha);
  const Eigen::VectorXd coeff = dec.coefficients(f);
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(dec.size());
  for (double t : grid.times()) {
    const Eigen::VectorXd qt =
        dec.basis * family_symbol(dec, m, alpha, t).cwiseProduct(coeff);
    acc += qt.cwiseAbs2();
  }
  return (acc * grid.log_weight()).cwiseSqrt();
}

Eigen::VectorXd cone_square_function(const SpectralDecomposition& dec, int m,
                                     double alpha, const Eigen::VectorXd& f,
                                     const DyadicGrid& grid) {
  validate_order(m, alpha);
  const int n = dec.size();
  const Eigen::VectorXd coeff = dec.coefficients(f);
  const Eigen::VectorXd& mu = dec.space.weights;
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  for (double t : grid.times()) {
    const Eigen::VectorXd qt =
        dec.basis * family_symbol(dec, m, alpha, t).cwiseProduct(coeff);
    for (int x = 0; x < n; ++x) {
      double volume = 0.0;
      double sum = 0.0;
      for (int y = 0; y < n; ++y) {
        if (dec.space.metric(x, y) < t) {
          volume += mu[y];
          sum += qt[y] * qt[y] * mu[y];
        }
      }
      acc[x] += sum / volume;
    }
  }
  return (acc * grid.log_weight()).cwiseSqrt();
}

double bmo_norm(const SpectralDecomposition& dec, int m, double alpha,
                double nu, const Eigen::VectorXd& f) {
  validate_order(m, alpha);
  if (!(nu >= 0.0)) throw std::invalid_argument("exponent must be >= 0");
  const int n = dec.size();
  const Eigen::VectorXd& mu = dec.space.weights;
  double best = 0.0;
  for (double r : distinct_radii(dec.space)) {
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) {
      phi[i] = -std::expm1(-scale_variable(m, alpha, r, dec.eigenvalues[i]));
    }
    const Eigen::VectorXd g = apply_spectral_values(dec, phi, f);
    for (int x = 0; x < n; ++x) {
      double volume = 0.0;
      double sum = 0.0;
      for (int y = 0; y < n; ++y) {
        if (dec.space.metric(x, y) <= r) {
          volume += mu[y];
          sum += g[y] * g[y] * mu[y];
        }
      }
      best = std::max(best,
                      std::sqrt(std::pow(volume, -(1.0 + 2.0 * nu)) * sum));
    }
  }
  return best;
}

Eigen::VectorXd hardy_littlewood_maximal(const DiscreteMeasureSpace& space,
                                         const Eigen::VectorXd& f) {
  const int n = space.size();
  if (f.size() != n) throw std::invalid_argument("function has the wrong size");
  Eigen::VectorXd out(n);
  std::vector<int> order(n);
  for (int x = 0; x < n; ++x) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return space.metric(x, a) < space.metric(x, b);
    });
    double volume = 0.0;
    double sum = 0.0;
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
      const int y = order[i];
      volume += space.weights[y];
      sum += std::abs(f[y]) * space.weights[y];
      // a closed ball ends where the next point is strictly farther
      if (i + 1 == n ||
          space.metric(x, order[i + 1]) > space.metric(x, y)) {
        best = std::max(best, sum / volume);
      }
    }
    out[x] = best;
  }
  return out;
}

Eigen::VectorXd peetre_maximal(const DiscreteMeasureSpace& space,
                               const Eigen::VectorXd& g, double t, double n,
                               double eps) {
  if (!(t > 0.0)) throw std::invalid_argument("scale must be positive");
  if (!(n > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("dimension and excess must be positive");
  }
  const int size = space.size();
  if (g.size() != size) throw std::invalid_argument("profile has wrong size");
  Eigen::VectorXd out(size);
  for (int x = 0; x < size; ++x) {
    double best = 0.0;
    for (int y = 0; y < size; ++y) {
      best = std::max(best, std::abs(g[y]) / std::pow(1.0 + space.metric(x, y) / t,
                                                      n + eps));
    }
    out[x] = best;
  }
  return out;
}

double elementary_estimate_constant(const DiscreteMeasureSpace& space,
                                    double n, double eps, double s,
                                    const Eigen::VectorXd& f) {
  if (!(s > 0.0)) throw std::invalid_argument("scale must be positive");
  if (!(n > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("dimension and excess must be positive");
  }
  const int size = space.size();
  const Eigen::VectorXd maximal = hardy_littlewood_maximal(space, f);
  double worst = 0.0;
  for (int x = 0; x < size; ++x) {
    double kernel_sum = 0.0;
    for (int y = 0; y < size; ++y) {
      kernel_sum += std::pow(s, -n) *
                    std::pow(1.0 + space.metric(x, y) / s, -(n + eps)) *
                    std::abs(f[y]) * space.weights[y];
    }
    if (maximal[x] < 1e-250) {
      if (kernel_sum < 1e-250) continue;
      return std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, kernel_sum / maximal[x]);
  }
  return worst;
}

double ball_dimension(const DiscreteMeasureSpace& space, double r_lo,
                      double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) {
    throw std::invalid_argument("radius window is empty");
  }
  const int n = space.size();
  double total = 0.0;
  int counted = 0;
  for (int x = 0; x < n; ++x) {
    std::set<double> radii;
    for (int y = 0; y < n; ++y) {
      const double d = space.metric(x, y);
      if (d >= r_lo && d <= r_hi) radii.insert(d);
    }
    if (radii.size() < 2) continue;
    std::vector<double> lx, ly;
    for (double r : radii) {
      double volume = 0.0;
      for (int y = 0; y < n; ++y) {
        if (space.metric(x, y) <= r) volume += space.weights[y];
      }
      lx.push_back(std::log(r));
      ly.push_back(std::log(volume));
    }
    total += least_squares_slope(lx, ly);
    ++counted;
  }
  if (counted == 0) {
    throw std::invalid_argument("no center sees two radii in the window");
  }
  return total / counted;
}

double almost_orthogonality_slope(const SpectralDecomposition& dec, int m,
                                  double alpha, double t_center, int n_ratios,
                                  int k_lo) {
  validate_order(m, alpha);
  if (!(t_center > 0.0) || n_ratios < 2 || k_lo < 1) {
    throw std::invalid_argument("need a positive center and >= 2 ratios");
  }
  std::vector<double> x, y;
  for (int k = k_lo; k < k_lo + n_ratios; ++k) {
    const double r = std::pow(2.0, 0.5 * k);
    const double s = t_center / r;
    const double t = t_center * r;
    double h = 0.0;
    for (int i = 0; i < dec.size(); ++i) {
      const double lambda = dec.eigenvalues[i];
      if (lambda <= 0.0) continue;
      h = std::max(h, q_symbol(scale_variable(m, alpha, s, lambda)) *
                          q_symbol(scale_variable(m, alpha, t, lambda)));
    }
    if (h <= 0.0) throw std::domain_error("family vanishes on the spectrum");
    x.push_back(std::log(t / s));
    y.push_back(std::log(h));
  }
  return -least_squares_slope(x, y);
}

std::vector<std::pair<std::string, Eigen::VectorXd>>
equivalence_function_family(const SpectralDecomposition& dec,
                            unsigned long long seed) {
  const int n = dec.size();
  if (n < 16) throw std::invalid_argument("experiment needs >= 16 points");

  std::vector<std::pair<std::string, Eigen::VectorXd>> family;
  for (int i = 0; i < 8; ++i) {
    const int at = i * n / 8;
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
    delta[at] = 1.0;
    family.emplace_back("delta-" + std::to_string(at), std::move(delta));
  }
  for (int gap : {1, 2, n / 4}) {
    for (int base : {0, n / 2}) {
      Eigen::VectorXd diff = Eigen::VectorXd::Zero(n);
      diff[base] = 1.0;
      diff[(base + gap) % n] = -1.0;
      family.emplace_back(
          "diff-" + std::to_string(base) + "-" + std::to_string(gap),
          std::move(diff));
    }
  }
  for (double width : {1.0, 2.0, 4.0, 8.0}) {
    for (int center : {0, n / 2}) {
      Eigen::VectorXd bump(n);
      for (int yy = 0; yy < n; ++yy) {
        const double d = dec.space.metric(center, yy);
        bump[yy] = std::exp(-d * d / (2.0 * width * width));
      }
      family.emplace_back("bump-" + std::to_string(center) + "-w" +
                              std::to_string(static_cast<int>(width)),
                          std::move(bump));
    }
  }
  Rng rng(seed);
  for (int r = 0; r < 8; ++r) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = rng.gaussian();
    family.emplace_back("random-" + std::to_string(r), std::move(g));
  }

  for (auto& [id, f] : family) f -= zero_mode_projection(dec, f);
  return family;
}

std::vector<std::pair<std::string, double>> equivalence_experiment(
    const SpectralDecomposition& dec, int m, double alpha,
    const DyadicGrid& grid, unsigned long long seed) {
  validate_order(m, alpha);
  const auto family = equivalence_function_family(dec, seed);

  std::vector<std::pair<std::string, double>> rows;
  rows.reserve(family.size());
  for (const auto& [id, f] : family) {
    const double denom = weighted_l2(dec.space, f);
    if (denom < 1e-14) continue;
    const Eigen::VectorXd s = cone_square_function(dec, m, alpha, f, grid);
    rows.emplace_back(id, weighted_l2(dec.space, s) / denom);
  }
  return rows;
}

double equivalence_spread(
    const std::vector<std::pair<std::string, double>>& rows) {
  if (rows.empty()) throw std::invalid_argument("no ratios to compare");
  double lo = rows.front().second, hi = rows.front().second;
  for (const auto& [id, ratio] : rows) {
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  if (!(lo > 0.0)) throw std::domain_error("a ratio degenerated to zero");
  return hi / lo;
}

}  // namespace subord
