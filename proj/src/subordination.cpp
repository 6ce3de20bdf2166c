#include "subord/subordination.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "subord/quadrature.hpp"

namespace subord {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;
constexpr int kMaxDerivativeOrder = 20;

double factorial(int n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(kMaxDerivativeOrder + 1);
    t[0] = 1.0;
    for (int i = 1; i <= kMaxDerivativeOrder; ++i) t[i] = t[i - 1] * i;
    return t;
  }();
  return table[n];
}

// Coefficient rows of the (physicists') Hermite polynomials, built once via
// H_0 = 1, H_1 = 2x, H_{n+1} = 2 x H_n - 2 n H_{n-1}.
const std::vector<std::vector<double>>& hermite_rows() {
  static const std::vector<std::vector<double>> rows = [] {
    std::vector<std::vector<double>> r(kMaxDerivativeOrder + 1);
    r[0] = {1.0};
    r[1] = {0.0, 2.0};
    for (int n = 1; n < kMaxDerivativeOrder; ++n) {
      std::vector<double> next(n + 2, 0.0);
      for (int j = 0; j <= n; ++j) next[j + 1] += 2.0 * r[n][j];
      for (std::size_t j = 0; j < r[n - 1].size(); ++j) {
        next[j] -= 2.0 * n * r[n - 1][j];
      }
      r[n + 1] = std::move(next);
    }
    return r;
  }();
  return rows;
}

void check_order(int n) {
  if (n < 0 || n > kMaxDerivativeOrder) {
    throw std::invalid_argument("derivative order out of supported range");
  }
}

template <class Scalar>
Scalar gaussian_time_derivative_impl(int n, Scalar t, double u) {
  check_order(n);
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::invalid_argument("u must be positive and finite");
  }
  const Scalar t2 = t * t;
  const double decay = std::real(std::complex<double>(t2)) / (4.0 * u);
  if (decay > 700.0) return Scalar(0.0);
  const Scalar q1 = -t / (2.0 * u);
  const double q2 = -1.0 / (4.0 * u);
  Scalar sum(0.0);
  for (int m2 = 0; 2 * m2 <= n; ++m2) {
    const int m1 = n - 2 * m2;
    Scalar term(factorial(n) / (factorial(m1) * factorial(m2)));
    for (int i = 0; i < m1; ++i) term *= q1;
    for (int i = 0; i < m2; ++i) term *= q2;
    sum += term;
  }
  return std::exp(-t2 / (4.0 * u)) * sum;
}

}  // namespace

double gaussian_time_derivative(int n, double t, double u) {
  return gaussian_time_derivative_impl<double>(n, t, u);
}

std::complex<double> gaussian_time_derivative(int n, std::complex<double> z,
                                              double u) {
  return gaussian_time_derivative_impl<std::complex<double>>(n, z, u);
}

double gaussian_time_derivative_hermite(int n, double t, double u) {
  check_order(n);
  const double x = t / (2.0 * std::sqrt(u));
  if (x * x > 700.0) return 0.0;
  const auto& h = hermite_rows()[n];
  double poly = 0.0;
  for (int j = static_cast<int>(h.size()) - 1; j >= 0; --j) {
    poly = poly * x + h[j];
  }
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * std::pow(4.0 * u, -0.5 * n) * poly * std::exp(-x * x);
}

double gaussian_time_derivative_envelope(int n, double abs_t, double re_t2,
                                         double u) {
  check_order(n);
  const double x = abs_t / (2.0 * std::sqrt(u));
  const auto& h = hermite_rows()[n];
  double poly = 0.0;
  for (int j = static_cast<int>(h.size()) - 1; j >= 0; --j) {
    poly = poly * x + std::abs(h[j]);
  }
  const double decay = re_t2 / (4.0 * u);
  const double factor = decay > 700.0 ? 0.0 : std::exp(-decay);
  return std::pow(4.0 * u, -0.5 * n) * poly * factor;
}

std::string to_string(SemigroupKind k) {
  switch (k) {
    case SemigroupKind::kHeat: return "heat";
    case SemigroupKind::kPoisson: return "poisson";
    case SemigroupKind::kPoissonDerivative: return "poisson-derivative";
    case SemigroupKind::kComplexPoisson: return "complex-poisson";
    case SemigroupKind::kFractional: return "fractional";
  }
  return "unknown";
}

std::string to_string(Route r) {
  return r == Route::kSpectral ? "spectral" : "subordination";
}

// ---------------------------------------------------------------------------

namespace {

double validated_tolerance(const SubordinationOptions& opt) {
  if (!(opt.tolerance > 0.0) || opt.tolerance > 1e-2) {
    throw std::invalid_argument("tolerance must lie in (0, 1e-2]");
  }
  return opt.tolerance;
}

void validate_time(double t) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::domain_error("time must be finite and nonnegative");
  }
}

// Marches v downward in unit steps until the local contribution density
// drops below the threshold; the integrand decays super-exponentially on
// the left, so two extra steps make the neglected mass negligible.
double march_down(const std::function<double(double)>& density_in_v,
                  double v_start, double threshold) {
  double v = v_start;
  for (int it = 0; it < 6000; ++it) {
    if (!(density_in_v(v) > threshold)) return v - 2.0;
    v -= 1.0;
  }
  throw QuadratureError(
      "subordination weight has no representable lower integration bound",
      threshold);
}

// Marches v upward until the analytic bound for the remaining tail drops
// below the threshold.  `tail_bound_at` must bound the full integral beyond
// e^v from above.
double march_up(const std::function<double(double)>& tail_bound_at,
                double v_start, double threshold) {
  double v = v_start;
  for (int it = 0; it < 1200; ++it) {
    if (!(tail_bound_at(v) > threshold)) return v + 0.5;
    v += 1.3862943611198906;  // u grows by a factor of 4 per step
    if (v > 688.0) break;
  }
  throw QuadratureError(
      "subordination tail cannot be brought below tolerance", threshold);
}

std::vector<double> seed_points(double v_lo, double v_mid, double v_hi) {
  std::vector<double> pts{v_lo};
  if (v_mid > v_lo + 1e-9 && v_mid < v_hi - 1e-9) pts.push_back(v_mid);
  pts.push_back(v_hi);
  return pts;
}

}  // namespace

SubordinationEngine::SubordinationEngine(SpectralDecomposition dec)
    : dec_(std::move(dec)) {
  basis_row_max_ = dec_.basis.cwiseAbs().rowwise().sum().maxCoeff();
  const Eigen::MatrixXd babs = dec_.basis.cwiseAbs();
  kernel_abs_max_ = (babs * babs.transpose()).maxCoeff();
}

Eigen::VectorXd SubordinationEngine::heat(double t,
                                          const Eigen::VectorXd& f) const {
  validate_time(t);
  Eigen::VectorXd phi(dec_.size());
  for (int i = 0; i < dec_.size(); ++i) {
    phi[i] = std::exp(-t * dec_.eigenvalues[i]);
  }
  return apply_spectral_values(dec_, phi, f);
}

Eigen::VectorXd SubordinationEngine::poisson(
    double t, const Eigen::VectorXd& f, const SubordinationOptions& opt) const {
  return poisson_derivative(t, 0, f, opt);
}

namespace {

// symbol (t sqrt(lambda))^k e^{-t sqrt(lambda)} evaluated stably
double poisson_derivative_symbol(double t, int k, double lambda) {
  const double a = t * std::sqrt(lambda);
  if (a == 0.0) return k == 0 ? 1.0 : 0.0;
  const double log_value = k * std::log(a) - a;
  return log_value < -745.0 ? 0.0 : std::exp(log_value);
}

}  // namespace

Eigen::VectorXd SubordinationEngine::poisson_derivative(
    double t, int k, const Eigen::VectorXd& f,
    const SubordinationOptions& opt) const {
  validate_time(t);
  if (k < 0 || k + 1 > kMaxDerivativeOrder) {
    throw std::invalid_argument("derivative order out of supported range");
  }
  const double tol = validated_tolerance(opt);
  if (t == 0.0) {
    return k == 0 ? f : Eigen::VectorXd::Zero(f.size()).eval();
  }
  if (opt.route == Route::kSpectral) {
    Eigen::VectorXd phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      phi[i] = poisson_derivative_symbol(t, k, dec_.eigenvalues[i]);
    }
    return apply_spectral_values(dec_, phi, f);
  }
  return subordinate_poisson_family(t, k, f, tol);
}

Eigen::VectorXd SubordinationEngine::subordinate_poisson_family(
    double t, int k, const Eigen::VectorXd& f, double tolerance) const {
  if (t < 1e-150) {
    throw std::domain_error("time too small for the subordination weight");
  }
  const Eigen::VectorXd c = dec_.coefficients(f);
  const double cmax = c.cwiseAbs().maxCoeff();
  if (cmax == 0.0) return Eigen::VectorXd::Zero(f.size());

  const double tol_c = 0.9 * tolerance / basis_row_max_;
  const int n = k + 1;
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  const double tk = std::pow(t, k);

  auto weight = [&](double u) {
    return sign * tk * gaussian_time_derivative(n, t, u) /
           (std::sqrt(u) * kSqrtPi);
  };
  auto env_plain = [&](double u) {
    return tk * gaussian_time_derivative_envelope(n, t, t * t, u) /
           (std::sqrt(u) * kSqrtPi);
  };
  auto env_tail = [&](double u) {
    return tk * gaussian_time_derivative_envelope(n, t, 0.0, u) /
           (std::sqrt(u) * kSqrtPi);
  };

  const double v0 = std::log(t * t / (2.0 * (k + 3)));
  const double v_lo = march_down(
      [&](double v) {
        const double u = std::exp(v);
        return env_plain(u) * u * cmax;
      },
      v0, 0.0375 * tol_c);
  const double v_hi = march_up(
      [&](double v) {
        const double u = std::exp(v);
        const double damped =
            (c.cwiseAbs().array() * (-u * dec_.eigenvalues.array()).exp())
                .maxCoeff();
        return 2.0 * u * env_tail(u) * damped;
      },
      std::max(v0, v_lo + 1.0), 0.15 * tol_c);

  auto g = [&](double v) -> Eigen::VectorXd {
    const double u = std::exp(v);
    const double w = weight(u) * u;
    return (c.array() * (-u * dec_.eigenvalues.array()).exp()).matrix() * w;
  };
  const auto res = integrate_adaptive_partition(
      g, seed_points(v_lo, v0, v_hi), 0.7 * tol_c, 20000, 0.5);
  return dec_.basis * res.value;
}

Eigen::VectorXcd SubordinationEngine::complex_poisson(
    std::complex<double> z, const Eigen::VectorXd& f,
    const SubordinationOptions& opt) const {
  const double tol = validated_tolerance(opt);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error("complex time must be finite");
  }
  if (z == 0.0) return f.cast<std::complex<double>>();

  if (opt.route == Route::kSpectral) {
    if (z.real() < 0.0) {
      throw std::domain_error("complex time needs a nonnegative real part");
    }
    Eigen::VectorXcd phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      phi[i] = std::exp(-z * std::sqrt(dec_.eigenvalues[i]));
    }
    return apply_spectral_values(dec_, phi, f);
  }

  constexpr double kQuarterPi = 0.78539816339744830962;
  if (!(z.real() > 0.0) || std::abs(std::arg(z)) >= kQuarterPi) {
    throw std::domain_error(
        "subordination needs |arg z| < pi/4 so the weight stays integrable");
  }
  const Eigen::VectorXd c = dec_.coefficients(f);
  const double cmax = c.cwiseAbs().maxCoeff();
  if (cmax == 0.0) return Eigen::VectorXcd::Zero(f.size());
  const double az = std::abs(z);
  if (az < 1e-150) {
    throw std::domain_error("time too small for the subordination weight");
  }
  const std::complex<double> z2 = z * z;
  const double re2 = z2.real();  // > 0 inside the sector

  const double tol_c = 0.9 * tol / basis_row_max_;
  auto weight = [&](double u) -> std::complex<double> {
    if (re2 / (4.0 * u) > 700.0) return 0.0;
    return z * std::exp(-z2 / (4.0 * u)) /
           (2.0 * kSqrtPi * u * std::sqrt(u));
  };
  auto env_plain = [&](double u) {
    const double d = re2 / (4.0 * u);
    return d > 700.0 ? 0.0
                     : az * std::exp(-d) / (2.0 * kSqrtPi * u * std::sqrt(u));
  };
  auto env_tail = [&](double u) {
    return az / (2.0 * kSqrtPi * u * std::sqrt(u));
  };

  const double v0 = std::log(re2 / 6.0);
  const double v_lo = march_down(
      [&](double v) {
        const double u = std::exp(v);
        return env_plain(u) * u * cmax;
      },
      v0, 0.0375 * tol_c);
  const double v_hi = march_up(
      [&](double v) {
        const double u = std::exp(v);
        const double damped =
            (c.cwiseAbs().array() * (-u * dec_.eigenvalues.array()).exp())
                .maxCoeff();
        return 2.0 * u * env_tail(u) * damped;
      },
      std::max(v0, v_lo + 1.0), 0.15 * tol_c);

  auto g = [&](double v) -> Eigen::VectorXcd {
    const double u = std::exp(v);
    const std::complex<double> w = weight(u) * u;
    return (c.array() * (-u * dec_.eigenvalues.array()).exp())
               .matrix()
               .cast<std::complex<double>>() *
           w;
  };
  const auto res = integrate_adaptive_partition(
      g, seed_points(v_lo, v0, v_hi), 0.7 * tol_c, 20000, 0.5);
  return dec_.basis.cast<std::complex<double>>() * res.value;
}

Eigen::VectorXd SubordinationEngine::fractional(
    double t, double alpha, const Eigen::VectorXd& f,
    const SubordinationOptions& opt) const {
  const StabilityIndex index(alpha);
  validate_time(t);
  const double tol = validated_tolerance(opt);
  if (t == 0.0) return f;

  if (opt.route == Route::kSpectral) {
    Eigen::VectorXd phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      const double lam = dec_.eigenvalues[i];
      phi[i] = lam == 0.0 ? 1.0 : std::exp(-t * std::pow(lam, alpha));
    }
    return apply_spectral_values(dec_, phi, f);
  }

  const Eigen::VectorXd c = dec_.coefficients(f);
  const double cmax = c.cwiseAbs().maxCoeff();
  if (cmax == 0.0) return Eigen::VectorXd::Zero(f.size());
  const double scale = std::pow(t, 1.0 / alpha);
  if (!std::isfinite(scale)) {
    throw std::domain_error("t^{1/alpha} is not representable");
  }

  const double tol_c = 0.9 * tol / basis_row_max_;
  const StableDensity& den =
      stable_density(alpha, std::min(tol_c / 256.0, 1e-11));

  const double v_lo = march_down(
      [&](double v) {
        const double u = std::exp(v);
        return den.p1(u) * u * cmax;
      },
      0.0, 0.0375 * tol_c);
  const double v_hi = march_up(
      [&](double v) {
        const double u = std::exp(v);
        double tail;
        try {
          tail = den.tail_mass(u);
        } catch (const QuadratureError&) {
          // expansion not certified this far in: keep marching outward
          return std::numeric_limits<double>::infinity();
        }
        const double damped =
            (c.cwiseAbs().array() *
             (-scale * u * dec_.eigenvalues.array()).exp())
                .maxCoeff();
        return tail * damped;
      },
      std::max(1.0, v_lo + 1.0), 0.15 * tol_c);

  auto g = [&](double v) -> Eigen::VectorXd {
    const double u = std::exp(v);
    const double w = den.p1(u) * u;
    return (c.array() * (-scale * u * dec_.eigenvalues.array()).exp())
               .matrix() *
           w;
  };
  const auto res = integrate_adaptive_partition(
      g, seed_points(v_lo, 0.0, v_hi), 0.7 * tol_c, 20000, 0.5);
  return dec_.basis * res.value;
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

Eigen::MatrixXd SubordinationEngine::poisson_kernel(
    double t, const SubordinationOptions& opt) const {
  validate_time(t);
  const double tol = validated_tolerance(opt);
  if (t == 0.0 || opt.route == Route::kSpectral) {
    Eigen::VectorXd phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      phi[i] = std::exp(-t * std::sqrt(dec_.eigenvalues[i]));
    }
    return kernel_matrix(dec_, phi);
  }
  if (t < 1e-150) {
    throw std::domain_error("time too small for the subordination weight");
  }
  const double tol_k = 0.9 * tol;
  auto weight = [&](double u) {
    return -gaussian_time_derivative(1, t, u) / (std::sqrt(u) * kSqrtPi);
  };
  auto env_plain = [&](double u) {
    return gaussian_time_derivative_envelope(1, t, t * t, u) /
           (std::sqrt(u) * kSqrtPi);
  };
  auto env_tail = [&](double u) {
    return gaussian_time_derivative_envelope(1, t, 0.0, u) /
           (std::sqrt(u) * kSqrtPi);
  };
  const Eigen::MatrixXd babs = dec_.basis.cwiseAbs();
  auto kernel_damped = [&](double u) {
    return (babs *
            (-u * dec_.eigenvalues.array()).exp().matrix().asDiagonal() *
            babs.transpose())
        .maxCoeff();
  };
  const double v0 = std::log(t * t / 6.0);
  const double v_lo = march_down(
      [&](double v) {
        const double u = std::exp(v);
        return env_plain(u) * u * kernel_abs_max_;
      },
      v0, 0.0375 * tol_k);
  const double v_hi = march_up(
      [&](double v) {
        const double u = std::exp(v);
        return 2.0 * u * env_tail(u) * kernel_damped(u);
      },
      std::max(v0, v_lo + 1.0), 0.15 * tol_k);

  auto g = [&](double v) -> Eigen::MatrixXd {
    const double u = std::exp(v);
    Eigen::VectorXd heat_phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      heat_phi[i] = std::exp(-u * dec_.eigenvalues[i]);
    }
    return kernel_matrix(dec_, heat_phi) * (weight(u) * u);
  };
  const auto res = integrate_adaptive_partition(
      g, seed_points(v_lo, v0, v_hi), 0.7 * tol_k, 20000, 0.5);
  return 0.5 * (res.value + res.value.transpose());
}

Eigen::MatrixXcd SubordinationEngine::complex_poisson_kernel(
    std::complex<double> z, const SubordinationOptions& opt) const {
  const double tol = validated_tolerance(opt);
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::domain_error("complex time must be finite");
  }
  if (z == 0.0 || opt.route == Route::kSpectral) {
    if (z.real() < 0.0) {
      throw std::domain_error("complex time needs a nonnegative real part");
    }
    Eigen::VectorXcd phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      phi[i] = std::exp(-z * std::sqrt(dec_.eigenvalues[i]));
    }
    return kernel_matrix(dec_, phi);
  }
  constexpr double kQuarterPi = 0.78539816339744830962;
  if (!(z.real() > 0.0) || std::abs(std::arg(z)) >= kQuarterPi) {
    throw std::domain_error(
        "subordination needs |arg z| < pi/4 so the weight stays integrable");
  }
  const double az = std::abs(z);
  if (az < 1e-150) {
    throw std::domain_error("time too small for the subordination weight");
  }
  const std::complex<double> z2 = z * z;
  const double re2 = z2.real();
  const double tol_k = 0.9 * tol;
  auto weight = [&](double u) -> std::complex<double> {
    if (re2 / (4.0 * u) > 700.0) return 0.0;
    return z * std::exp(-z2 / (4.0 * u)) /
           (2.0 * kSqrtPi * u * std::sqrt(u));
  };
  auto env_plain = [&](double u) {
    const double d = re2 / (4.0 * u);
    return d > 700.0 ? 0.0
                     : az * std::exp(-d) / (2.0 * kSqrtPi * u * std::sqrt(u));
  };
  auto env_tail = [&](double u) {
    return az / (2.0 * kSqrtPi * u * std::sqrt(u));
  };
  const Eigen::MatrixXd babs = dec_.basis.cwiseAbs();
  auto kernel_damped = [&](double u) {
    return (babs *
            (-u * dec_.eigenvalues.array()).exp().matrix().asDiagonal() *
            babs.transpose())
        .maxCoeff();
  };
  const double v0 = std::log(re2 / 6.0);
  const double v_lo = march_down(
      [&](double v) {
        const double u = std::exp(v);
        return env_plain(u) * u * kernel_abs_max_;
      },
      v0, 0.0375 * tol_k);
  const double v_hi = march_up(
      [&](double v) {
        const double u = std::exp(v);
        return 2.0 * u * env_tail(u) * kernel_damped(u);
      },
      std::max(v0, v_lo + 1.0), 0.15 * tol_k);

  auto g = [&](double v) -> Eigen::MatrixXcd {
    const double u = std::exp(v);
    Eigen::VectorXd heat_phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      heat_phi[i] = std::exp(-u * dec_.eigenvalues[i]);
    }
    return kernel_matrix(dec_, heat_phi).cast<std::complex<double>>() *
           (weight(u) * u);
  };
  const auto res = integrate_adaptive_partition(
      g, seed_points(v_lo, v0, v_hi), 0.7 * tol_k, 20000, 0.5);
  return 0.5 * (res.value + res.value.transpose());
}

Eigen::MatrixXd SubordinationEngine::fractional_kernel(
    double t, double alpha, const SubordinationOptions& opt) const {
  const StabilityIndex index(alpha);
  validate_time(t);
  const double tol = validated_tolerance(opt);
  if (t == 0.0 || opt.route == Route::kSpectral) {
    Eigen::VectorXd phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      const double lam = dec_.eigenvalues[i];
      phi[i] = lam == 0.0 ? 1.0 : std::exp(-t * std::pow(lam, alpha));
    }
    return kernel_matrix(dec_, phi);
  }
  const double scale = std::pow(t, 1.0 / alpha);
  if (!std::isfinite(scale)) {
    throw std::domain_error("t^{1/alpha} is not representable");
  }
  const double tol_k = 0.9 * tol;
  const StableDensity& den =
      stable_density(alpha, std::min(tol_k / 256.0, 1e-11));
  const Eigen::MatrixXd babs = dec_.basis.cwiseAbs();
  auto kernel_damped = [&](double u) {
    return (babs *
            (-scale * u * dec_.eigenvalues.array()).exp().matrix().asDiagonal() *
            babs.transpose())
        .maxCoeff();
  };
  const double v_lo = march_down(
      [&](double v) {
        const double u = std::exp(v);
        return den.p1(u) * u * kernel_abs_max_;
      },
      0.0, 0.0375 * tol_k);
  const double v_hi = march_up(
      [&](double v) {
        const double u = std::exp(v);
        double tail;
        try {
          tail = den.tail_mass(u);
        } catch (const QuadratureError&) {
          return std::numeric_limits<double>::infinity();
        }
        return tail * kernel_damped(u);
      },
      std::max(1.0, v_lo + 1.0), 0.15 * tol_k);

  auto g = [&](double v) -> Eigen::MatrixXd {
    const double u = std::exp(v);
    Eigen::VectorXd heat_phi(dec_.size());
    for (int i = 0; i < dec_.size(); ++i) {
      heat_phi[i] = std::exp(-scale * u * dec_.eigenvalues[i]);
    }
    return kernel_matrix(dec_, heat_phi) * (den.p1(u) * u);
  };
  const auto res = integrate_adaptive_partition(
      g, seed_points(v_lo, 0.0, v_hi), 0.7 * tol_k, 20000, 0.5);
  return 0.5 * (res.value + res.value.transpose());
}

const StableDensity& SubordinationEngine::stable_density(double alpha,
                                                         double tol) const {
  std::lock_guard<std::mutex> lock(stable_mutex_);
  const auto key = std::make_pair(alpha, tol);
  auto it = stable_.find(key);
  if (it == stable_.end()) {
    const auto model =
        StableDensityModel::make(alpha, StableMethod::kFourierInversion, tol);
    it = stable_.emplace(key, std::make_unique<StableDensity>(model)).first;
  }
  return *it->second;
}

}  // namespace subord
