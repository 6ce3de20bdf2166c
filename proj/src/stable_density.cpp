#include "subord/stable_density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "subord/quadrature.hpp"

namespace subord {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTCutoff = 1e-6;     // density returned as exactly 0 below
constexpr double kMaxPeriods = 1e5;   // budget for the oscillatory integral

// ---------------------------------------------------------------------------
// Convergent large-argument expansion
//
//   p_1(t) = (1/pi) sum_{k>=1} (-1)^{k+1} Gamma(k a + 1)/k! sin(pi k a) t^{-ka-1}
//
// valid for every t > 0 when a < 1.  Numerically usable only where the
// largest intermediate term does not swamp the result in roundoff, which the
// evaluation certifies before accepting.
// ---------------------------------------------------------------------------

struct SeriesEval {
  double value = 0.0;
  double error = std::numeric_limits<double>::infinity();
  bool ok = false;
};

SeriesEval p1_series(double alpha, double t, double abs_tol) {
  SeriesEval out;
  const double lt = std::log(t);
  double sum = 0.0;
  double max_term = 0.0;
  double mag = 0.0;
  int calm = 0;
  const int kmax = 6000;
  for (int k = 1; k <= kmax; ++k) {
    const double logmag = std::lgamma(k * alpha + 1.0) -
                          std::lgamma(k + 1.0) - (k * alpha + 1.0) * lt;
    if (logmag > 690.0) return out;  // term would overflow; expansion unusable
    mag = std::exp(logmag);
    max_term = std::max(max_term, mag);
    if (max_term * 5e-16 > abs_tol) return out;  // roundoff exceeds tolerance
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * mag * std::sin(kPi * k * alpha);
    if (mag < 0.05 * abs_tol) {
      if (++calm >= 3) break;
    } else {
      calm = 0;
    }
  }
  if (calm < 3) return out;  // never settled
  out.value = sum / kPi;
  out.error = (max_term * 5e-16 + 3.0 * mag) / kPi;
  out.ok = out.error <= abs_tol;
  return out;
}

// Tail mass int_T^inf p_1 dt by termwise integration of the same expansion.
SeriesEval tail_mass_series(double alpha, double T, double abs_tol) {
  SeriesEval out;
  const double lT = std::log(T);
  double sum = 0.0;
  double max_term = 0.0;
  double mag = 0.0;
  int calm = 0;
  for (int k = 1; k <= 6000; ++k) {
    const double logmag = std::lgamma(k * alpha + 1.0) -
                          std::lgamma(k + 1.0) - k * alpha * lT -
                          std::log(k * alpha);
    if (logmag > 690.0) return out;
    mag = std::exp(logmag);
    max_term = std::max(max_term, mag);
    if (max_term * 5e-16 > abs_tol) return out;
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    sum += sign * mag * std::sin(kPi * k * alpha);
    if (mag < 0.05 * abs_tol) {
      if (++calm >= 3) break;
    } else {
      calm = 0;
    }
  }
  if (calm < 3) return out;
  out.value = sum / kPi;
  out.error = (max_term * 5e-16 + 3.0 * mag) / kPi;
  out.ok = out.error <= abs_tol;
  return out;
}

// ---------------------------------------------------------------------------
// Damped oscillatory inversion integral
//
//   J(c, sigma) = int_0^inf exp(-c y^alpha) exp(i sigma t y) dy,   Re c > 0,
//
// so that p_u(t) = Re J(u e^{i pi alpha/2}, +1) / pi for real u, and the two
// half-line pieces with c = u e^{+-i pi alpha/2} assemble the analytic
// continuation in u.  The finite integral over [0, y_end] is done by the
// adaptive panel rule; the truncated tail is restored by the first two
// integration-by-parts corrections, whose residual is bounded analytically
// and folded into the reported error estimate.
// ---------------------------------------------------------------------------

struct OscResult {
  std::complex<double> value{0.0, 0.0};
  double error = 0.0;
};

OscResult oscillatory_inversion(double alpha, std::complex<double> c, double t,
                                double sigma, double abs_tol) {
  const double a = c.real();
  if (!(a > 0.0)) throw std::domain_error("inversion envelope must decay");
  const double cmag = std::abs(c);

  // Choose the hard truncation cap y_decay so that already the plain envelope
  // tail int_y^inf e^{-a s^alpha} ds ~ e^{-w} y^{1-alpha}/(a alpha) sits below
  // a quarter of the budget; the exponent w solves that condition by a short
  // fixed-point iteration.
  const double tail_target =
      std::max(0.25 * abs_tol * a * alpha, 1e-280);
  double w_decay = std::max(10.0, -std::log(tail_target));
  for (int i = 0; i < 6; ++i) {
    const double ly = std::log(w_decay / a) / alpha;
    w_decay = -std::log(tail_target) + (1.0 - alpha) * ly;
  }
  w_decay *= 1.15;
  const double y_decay = std::pow(w_decay / a, 1.0 / alpha);
  if (!std::isfinite(y_decay)) {
    throw QuadratureError("inversion truncation not representable",
                          std::numeric_limits<double>::infinity());
  }

  // magnitude of the envelope and its derivative
  auto env = [&](double y) { return std::exp(-a * std::pow(y, alpha)); };
  auto env_deriv_mag = [&](double y) {
    return cmag * alpha * std::pow(y, alpha - 1.0) * env(y);
  };
  // two bounds for the tail beyond y: plain integral of the envelope (tail
  // dropped entirely), and the residual after the two-term
  // integration-by-parts correction (tail replaced by the correction).  The
  // correction is only worth applying when its residual is the smaller bound;
  // otherwise its 1/t^2 terms dwarf the tail they are meant to restore.
  auto plain_bound = [&](double y) {
    const double ya = std::pow(y, alpha);
    return env(y) * (std::pow(y, 1.0 - alpha) / (a * alpha)) *
           (1.0 + std::max(0.0, (1.0 - alpha) / (a * alpha * ya)));
  };
  auto byparts_bound = [&](double y) {
    return (1.0 + cmag / a) * env_deriv_mag(y) / (t * t);
  };
  auto tail_bound = [&](double y) {
    return std::min(plain_bound(y), byparts_bound(y));
  };

  double y_end = std::min(y_decay, std::max(std::pow(1.0 / a, 1.0 / alpha),
                                            6.283185307179586 / t));
  while (tail_bound(y_end) > 0.25 * abs_tol && y_end < y_decay) {
    y_end = std::min(y_decay * 1.0000001, y_end * 1.35);
  }
  double tail_err = tail_bound(y_end);

  const double periods = t * y_end / (2.0 * kPi);
  if (periods > kMaxPeriods) {
    throw QuadratureError(
        "oscillatory inversion integral needs too many periods", periods);
  }

  const std::complex<double> iphase(0.0, sigma * t);
  auto f = [&](double y) {
    return std::exp(-c * std::pow(y, alpha) + iphase * y);
  };
  auto panel = integrate_adaptive(f, 0.0, y_end, 0.7 * abs_tol, 700000, 0.5);

  OscResult out;
  out.value = panel.value;
  if (byparts_bound(y_end) <= plain_bound(y_end)) {
    // two-term correction for the truncated oscillatory tail
    const double ya = std::pow(y_end, alpha);
    const std::complex<double> g = std::exp(-c * ya);
    const std::complex<double> gp =
        -c * alpha * std::pow(y_end, alpha - 1.0) * g;
    const std::complex<double> rot = std::exp(iphase * y_end);
    out.value += rot * (std::complex<double>(0.0, sigma) * g / t - gp / (t * t));
  }
  out.error = panel.error + tail_err;
  return out;
}

double p1_fourier(double alpha, double t, double abs_tol) {
  const std::complex<double> c(std::cos(kPi * alpha / 2.0),
                               std::sin(kPi * alpha / 2.0));
  OscResult r = oscillatory_inversion(alpha, c, t, +1.0, 0.9 * kPi * abs_tol);
  const double err = r.error / kPi;
  if (err > abs_tol) {
    throw QuadratureError("stable density inversion integral: achieved error " +
                              std::to_string(err) + " > tolerance " +
                              std::to_string(abs_tol),
                          err);
  }
  return r.value.real() / kPi;
}

// ---------------------------------------------------------------------------
// Non-oscillatory real-integral representation
//
//   p_1(t) = a/((1-a) pi) t^{-1/(1-a)} int_0^pi A(phi) e^{-t^{-a/(1-a)} A(phi)} dphi
//   A(phi) = [sin(a phi)/sin phi]^{a/(1-a)} sin((1-a) phi)/sin phi
//
// The integrand is positive with a single boundary layer, so plain adaptive
// panels resolve it for every t.  (At a = 1/2 this reduces to the closed
// form, which the tests cross-check.)
// ---------------------------------------------------------------------------

double p1_real_integral(double alpha, double t, double abs_tol) {
  const double om = 1.0 - alpha;
  const double lt = std::log(t);
  const double lpref = std::log(alpha / (om * kPi)) - lt / om;
  const double leps = -alpha / om * lt;
  if (lpref < -740.0) return 0.0;
  const double pref = std::exp(lpref);
  const double eps = leps > 709.0 ? std::numeric_limits<double>::infinity()
                                  : std::exp(leps);

  auto integrand = [&](double phi) {
    if (phi <= 0.0 || phi >= kPi) return 0.0;
    const double la = (alpha / om) * std::log(std::sin(alpha * phi)) +
                      std::log(std::sin(om * phi)) -
                      (1.0 / om) * std::log(std::sin(phi));
    if (la > 690.0) return 0.0;  // e^{-eps A} underflows first
    const double A = std::exp(la);
    const double x = la - eps * A;
    return x < -740.0 ? 0.0 : std::exp(x);
  };

  // The integrand lives on two scales the blind bisection cannot discover on
  // its own: a peak of width ~ eps^{-1/2} at the left endpoint when eps is
  // large, and a boundary layer of width ~ sin(pi a) t^{-a} at the right
  // endpoint when eps is small (it carries the entire polynomial tail).
  // Seed a geometric zoom into both endpoints down to those scales.
  auto zoom_count = [](double scale) {
    const double s_min = std::max(1e-2 * std::min(1.0, scale), 1e-280);
    const int j = static_cast<int>(std::ceil(std::log(kPi / s_min) /
                                             std::log(4.0)));
    return std::clamp(j, 6, 600);
  };
  const double a0 = om * std::pow(alpha, alpha / om);  // infimum of A
  const double left_scale =
      eps * a0 > 1.0 ? 1.0 / std::sqrt(eps * a0) : 1.0;
  const double right_scale = std::sin(kPi * alpha) * std::exp(-alpha * lt);
  const int jl = zoom_count(left_scale);
  const int jr = zoom_count(right_scale);
  std::vector<double> pts;
  pts.push_back(0.0);
  for (int j = jl; j >= 1; --j) pts.push_back(kPi * std::pow(4.0, -j));
  for (int j = 1; j <= jr; ++j) {
    const double s = kPi * std::pow(4.0, -j);
    if (kPi - s > pts.back()) pts.push_back(kPi - s);
  }
  pts.push_back(kPi);

  const double tol_phi = abs_tol / std::max(pref, 1e-300) ;
  auto r = integrate_adaptive_partition(integrand, pts,
                                        std::min(tol_phi, 1e280), 200000, 0.5);
  if (pref * r.error > abs_tol) {
    throw QuadratureError("real-integral representation: achieved error " +
                              std::to_string(pref * r.error),
                          pref * r.error);
  }
  return pref * r.value;
}

double p1_closed_form_half(double t) {
  // (2 sqrt(pi))^{-1} t^{-3/2} e^{-1/(4t)}
  return 0.5 / std::sqrt(kPi) * std::pow(t, -1.5) * std::exp(-0.25 / t);
}

double leading_tail_constant(double alpha) {
  // p_1(t) ~ (1/pi) Gamma(a+1) sin(pi a) t^{-1-a}
  return std::tgamma(alpha + 1.0) * std::sin(kPi * alpha) / kPi;
}

}  // namespace

// ---------------------------------------------------------------------------

StabilityIndex::StabilityIndex(double alpha) : value(alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0) || !std::isfinite(alpha)) {
    throw std::domain_error("stability index must lie strictly in (0, 1)");
  }
}

std::string to_string(StableMethod m) {
  switch (m) {
    case StableMethod::kFourierInversion: return "fourier-inversion";
    case StableMethod::kRealIntegral: return "real-integral";
    case StableMethod::kClosedFormHalf: return "closed-form-half";
  }
  return "unknown";
}

StableDensityModel StableDensityModel::make(double alpha, StableMethod method,
                                            double abs_tol,
                                            double grid_truncation) {
  StabilityIndex idx(alpha);
  if (!(abs_tol > 0.0) || abs_tol > 1e-2) {
    throw std::invalid_argument("abs_tol must lie in (0, 1e-2]");
  }
  if (method == StableMethod::kClosedFormHalf && alpha != 0.5) {
    throw std::invalid_argument(
        "closed-form-half method requires alpha == 0.5 exactly");
  }
  StableDensityModel model{idx, method, abs_tol, grid_truncation};
  if (grid_truncation == 0.0) {
    // smallest T whose neglected tail mass is below abs_tol/10, from the
    // leading tail rate, then verified (and enlarged if needed)
    const double target = abs_tol / 10.0;
    const double c1 = leading_tail_constant(alpha);
    double T = std::pow(c1 / (alpha * target), 1.0 / alpha) * 1.3;
    if (!std::isfinite(T)) {
      throw std::domain_error(
          "tail truncation for the requested tolerance is not representable "
          "for this stability index");
    }
    for (int i = 0; i < 60; ++i) {
      SeriesEval tm = tail_mass_series(alpha, T, 1e-13);
      if (tm.ok && tm.value <= target) break;
      T *= 2.0;
      if (!std::isfinite(T)) {
        throw std::domain_error("tail truncation overflow");
      }
    }
    model.grid_truncation = T;
  } else if (!(grid_truncation > 0.0)) {
    throw std::invalid_argument("grid_truncation must be positive");
  } else {
    SeriesEval tm = tail_mass_series(alpha, grid_truncation, 1e-13);
    if (!tm.ok || tm.value > abs_tol) {
      throw std::invalid_argument(
          "grid_truncation leaves more tail mass than abs_tol");
    }
  }
  return model;
}

StableDensity::StableDensity(StableDensityModel model) : model_(model) {
  if (model_.grid_truncation == 0.0) {
    model_ = StableDensityModel::make(model.alpha.value, model.method,
                                      model.abs_tol, 0.0);
  }
}

double StableDensity::evaluate_p1(double t) const {
  if (!std::isfinite(t)) throw std::domain_error("time must be finite");
  if (t <= kTCutoff) return 0.0;
  const double alpha = model_.alpha.value;
  switch (model_.method) {
    case StableMethod::kClosedFormHalf:
      return p1_closed_form_half(t);
    case StableMethod::kRealIntegral:
      return p1_real_integral(alpha, t, model_.abs_tol);
    case StableMethod::kFourierInversion: {
      SeriesEval s = p1_series(alpha, t, 0.9 * model_.abs_tol);
      if (s.ok) return s.value;
      return p1_fourier(alpha, t, model_.abs_tol);
    }
  }
  throw std::logic_error("unreachable");
}

double StableDensity::p1(double t) const {
  if (!std::isfinite(t)) throw std::domain_error("time must be finite");
  if (t <= kTCutoff) return 0.0;
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(t);
    if (it != memo_.end()) return it->second;
  }
  const double v = evaluate_p1(t);
  std::lock_guard<std::mutex> lock(memo_mutex_);
  memo_.emplace(t, v);
  return v;
}

double StableDensity::density(double u, double t) const {
  if (!(u > 0.0) || !std::isfinite(u)) {
    throw std::domain_error("subordination parameter u must be positive");
  }
  const double s = std::pow(u, -1.0 / model_.alpha.value);
  return s * p1(s * t);
}

std::complex<double> StableDensity::density_complex(std::complex<double> u,
                                                    double t) const {
  const double alpha = model_.alpha.value;
  const double max_arg = 0.9 * kPi * (1.0 - alpha) / 2.0;
  if (!(std::abs(u) > 0.0) || std::abs(std::arg(u)) > max_arg) {
    throw std::domain_error(
        "complex u must satisfy |arg u| <= 0.9 pi (1 - alpha)/2");
  }
  if (!std::isfinite(t)) throw std::domain_error("time must be finite");
  if (t <= kTCutoff) return {0.0, 0.0};
  const std::complex<double> rot(std::cos(kPi * alpha / 2.0),
                                 std::sin(kPi * alpha / 2.0));
  const double tol = 0.9 * kPi * model_.abs_tol;
  OscResult plus = oscillatory_inversion(alpha, u * rot, t, +1.0, tol);
  OscResult minus =
      oscillatory_inversion(alpha, u * std::conj(rot), t, -1.0, tol);
  const double err = (plus.error + minus.error) / (2.0 * kPi);
  if (err > model_.abs_tol) {
    throw QuadratureError("complex-u inversion: achieved error " +
                              std::to_string(err),
                          err);
  }
  return (plus.value + minus.value) / (2.0 * kPi);
}

double StableDensity::p1_derivative(double t) const {
  if (!(t > 0.0)) return 0.0;
  // the step trades the cubic truncation bias against the evaluator's
  // absolute tolerance, which enters as noise / h
  const double h = t * std::max(2.0 * std::cbrt(model_.abs_tol), 0.02);
  return (p1(t + h) - p1(t - h)) / (2.0 * h);
}

double StableDensity::tail_mass(double T) const {
  if (!(T > 0.0)) throw std::domain_error("tail cutoff must be positive");
  SeriesEval tm = tail_mass_series(model_.alpha.value, T, 1e-12);
  if (!tm.ok) {
    throw QuadratureError("tail mass expansion not certified at this cutoff",
                          tm.error);
  }
  return tm.value;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const int n = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= n; ++i) {
    g.push_back(lo * std::pow(10.0, static_cast<double>(i) / per_decade));
  }
  if (g.back() < hi) g.push_back(hi);
  return g;
}

// least-squares slope of y against x
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  return (n * sxy - sx * sy) / denom;
}

}  // namespace

VerificationReport density_audit(const StableDensity& density,
                                 const DensityAuditGrid& grid) {
  if (!(grid.t_min > 0.0) || !(grid.t_max > grid.t_min) ||
      grid.points_per_decade < 2) {
    throw std::invalid_argument("bad audit grid");
  }
  VerificationReport report;
  const double alpha = density.model().alpha.value;
  const double abs_tol = density.model().abs_tol;
  const auto ts = log_grid(grid.t_min, grid.t_max, grid.points_per_decade);

  std::vector<double> ps(ts.size());
  double min_p = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    ps[i] = density.p1(ts[i]);
    min_p = std::min(min_p, ps[i]);
  }
  report.add("nonneg", min_p, -abs_tol, min_p >= -abs_tol,
             "smallest density value on the audit grid");

  // unit mass: quadrature on a logarithmic axis up to the truncation cutoff,
  // plus the tail mass beyond it
  {
    const double T = density.model().grid_truncation;
    auto integrand = [&](double v) {
      const double t = std::exp(v);
      return density.p1(t) * t;
    };
    auto q = integrate_adaptive(integrand, std::log(kTCutoff), std::log(T),
                                2e-8, 60000, 0.5);
    const double mass = q.value + density.tail_mass(T);
    report.add("mass", std::abs(mass - 1.0), 1e-6, std::abs(mass - 1.0) <= 1e-6,
               "deviation of the total mass from 1");
  }

  // polynomial tail rates over the top two decades of the grid
  {
    std::vector<double> lx, ly, lyp;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i] >= 1e2 && ts[i] <= 1e4 && ps[i] > 0.0) {
        lx.push_back(std::log(ts[i]));
        ly.push_back(std::log(ps[i]));
        lyp.push_back(std::log(std::abs(density.p1_derivative(ts[i])) + 1e-300));
      }
    }
    if (lx.size() >= 4) {
      const double slope = fit_slope(lx, ly);
      const double want = -(1.0 + alpha);
      report.add("tail-slope", slope, std::nullopt,
                 std::abs(slope - want) <= 0.05,
                 "log-log tail rate, expected " + std::to_string(want));
      const double slope_p = fit_slope(lx, lyp);
      const double want_p = -(2.0 + alpha);
      report.add("deriv-tail-slope", slope_p, std::nullopt,
                 std::abs(slope_p - want_p) <= 0.1,
                 "log-log tail rate of the derivative, expected " +
                     std::to_string(want_p));
    } else {
      report.add("tail-slope", 0.0, std::nullopt, false,
                 "audit grid has no tail window [1e2, 1e4]");
    }
  }

  // super-polynomial decay at the origin: fitted envelope constants stay
  // finite for every polynomial order
  for (int N : {2, 4, 8}) {
    double cN = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      if (ts[i] < 1.0) {
        cN = std::max(cN, std::max(ps[i], 0.0) / std::pow(ts[i], N));
      }
    }
    report.add("origin-decay-N" + std::to_string(N), cN, std::nullopt,
               std::isfinite(cN), "fitted envelope constant for p <= C t^N");
  }

  return report;
}

}  // namespace subord
