#include "subord/domination.hpp"

#include <cmath>
#include <limits>

namespace subord {

namespace {

constexpr double kQuarterPi = 0.78539816339744830962;
constexpr double kTinyDenominator = 1e-250;

// accumulates ratios |num| / den with the tiny-denominator skip rule
struct RatioTracker {
  double sup = 0.0;
  double worst_time = 0.0;
  int worst_point = -1;
  std::string worst_function;
  long samples = 0;

  void offer(double num_abs, double den, double time, int point,
             const std::string& function_id, double claimed) {
    double ratio;
    if (den < kTinyDenominator) {
      if (num_abs < kTinyDenominator * std::max(claimed, 1.0)) return;
      ratio = std::numeric_limits<double>::infinity();
    } else {
      ratio = num_abs / den;
    }
    ++samples;
    if (ratio > sup) {
      sup = ratio;
      worst_time = time;
      worst_point = point;
      worst_function = function_id;
    }
  }
};

PointwiseDominationResult finish(const std::string& label, int k,
                                 double parameter, double reference,
                                 const RatioTracker& tracker) {
  PointwiseDominationResult r;
  r.label = label;
  r.k = k;
  r.parameter = parameter;
  r.empirical_constant = tracker.sup;
  r.reference_constant = reference;
  r.pass = std::isfinite(tracker.sup) && tracker.sup <= reference &&
           tracker.samples > 0;
  r.worst_time = tracker.worst_time;
  r.worst_point = tracker.worst_point;
  r.worst_function = tracker.worst_function;
  r.samples = tracker.samples;
  return r;
}

}  // namespace

SectorSpec::SectorSpec(double half_aperture) : beta(half_aperture) {
  if (!(beta > 0.0) || !(beta < kQuarterPi)) {
    throw std::invalid_argument(
        "sector half-aperture must lie strictly between 0 and pi/4");
  }
}

double SectorSpec::gamma() const {
  const double t = std::tan(beta);
  return std::sqrt(1.0 - t * t);
}

double SectorSpec::claimed_constant() const {
  return 4.0 * std::sqrt(2.0) / gamma();
}

double faa_di_bruno_constant(int k, double theta) {
  if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (!(theta > 0.0) || !(theta < 1.0)) {
    throw std::invalid_argument("contraction factor must lie in (0, 1)");
  }
  const double q = 1.0 - theta * theta;
  // The expression decays like e^{-q x^2} times a fixed polynomial, so the
  // supremum lives on x^2 <= (degree + safety) / q; scan a dense log grid.
  const double x_max = std::sqrt((2.0 * k + 60.0) / q);
  const double x_min = 1e-8;
  const int n = 20000;
  const double step = std::log(x_max / x_min) / n;
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = x_min * std::exp(i * step);
    double h_prev = 1.0, h = 2.0 * x;  // H_0, H_1 by recurrence
    for (int j = 1; j <= k; ++j) {
      const double h_next = 2.0 * x * h - 2.0 * j * h_prev;
      h_prev = h;
      h = h_next;
    }
    const double decay = q * x * x;
    const double value = decay > 700.0 ? 0.0
                                       : 0.25 * std::pow(x, k - 1) *
                                             std::abs(h) * std::exp(-decay);
    if (value > sup) sup = value;
  }
  return sup;
}

DominationViolation::DominationViolation(
    const PointwiseDominationResult& result, double claimed)
    : std::runtime_error(
          "pointwise domination fails: ratio " +
          std::to_string(result.empirical_constant) + " > claimed " +
          std::to_string(claimed) + " at time " +
          std::to_string(result.worst_time) + ", point " +
          std::to_string(result.worst_point) +
          (result.worst_function.empty()
               ? std::string()
               : ", function " + result.worst_function)),
      ratio(result.empirical_constant),
      time(result.worst_time),
      point(result.worst_point),
      function_id(result.worst_function) {}

void enforce_domination(const PointwiseDominationResult& result,
                        double claimed_constant) {
  const double claim = claimed_constant >= 0.0 ? claimed_constant
                                               : result.reference_constant;
  if (!(result.empirical_constant <= claim) || result.samples == 0) {
    throw DominationViolation(result, claim);
  }
}

PointwiseDominationResult derivative_domination(
    const SubordinationEngine& engine, int k, double theta,
    const std::vector<double>& times,
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& functions) {
  if (k < 0) throw std::invalid_argument("derivative order must be >= 0");
  if (!(theta > 0.0) || !(theta < 1.0)) {
    throw std::invalid_argument("contraction factor must lie in (0, 1)");
  }
  const double reference = (2.0 / theta) * faa_di_bruno_constant(k, theta);
  SubordinationOptions spectral;
  spectral.route = Route::kSpectral;

  RatioTracker tracker;
  for (const auto& [id, f] : functions) {
    const Eigen::VectorXd fabs = f.cwiseAbs();
    for (double t : times) {
      const Eigen::VectorXd num =
          engine.poisson_derivative(t, k, f, spectral);
      const Eigen::VectorXd den = engine.poisson(theta * t, fabs, spectral);
      for (int x = 0; x < num.size(); ++x) {
        tracker.offer(std::abs(num[x]), den[x], t, x, id, reference);
      }
    }
  }
  return finish("derivative", k, theta, reference, tracker);
}

PointwiseDominationResult sector_function_domination(
    const SubordinationEngine& engine, const SectorSpec& spec,
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& functions,
    const std::vector<double>& tau_grid, int samples_per_tau, Rng& rng) {
  const double gamma = spec.gamma();
  const double reference = spec.claimed_constant();
  SubordinationOptions spectral;
  spectral.route = Route::kSpectral;

  RatioTracker tracker;
  for (double tau : tau_grid) {
    for (int s = 0; s < samples_per_tau; ++s) {
      const double x = rng.uniform(tau, 4.0 * tau);
      const double psi = rng.uniform(-spec.beta, spec.beta);
      const std::complex<double> z(x, x * std::tan(psi));
      for (const auto& [id, f] : functions) {
        const Eigen::VectorXcd num = engine.complex_poisson(z, f, spectral);
        const Eigen::VectorXd den =
            engine.poisson(gamma * x, f.cwiseAbs(), spectral);
        for (int p = 0; p < num.size(); ++p) {
          tracker.offer(std::abs(num[p]), den[p], x, p, id, reference);
        }
      }
    }
  }
  return finish("sector-function", 0, spec.beta, reference, tracker);
}

PointwiseDominationResult sector_kernel_domination(
    const SubordinationEngine& engine, const SectorSpec& spec,
    const std::vector<double>& tau_grid, int samples_per_tau, Rng& rng) {
  const double gamma = spec.gamma();
  const double reference = spec.claimed_constant();
  SubordinationOptions spectral;
  spectral.route = Route::kSpectral;

  RatioTracker tracker;
  for (double tau : tau_grid) {
    for (int s = 0; s < samples_per_tau; ++s) {
      const double x = rng.uniform(tau, 4.0 * tau);
      const double psi = rng.uniform(-spec.beta, spec.beta);
      const std::complex<double> z(x, x * std::tan(psi));
      const Eigen::MatrixXcd num = engine.complex_poisson_kernel(z, spectral);
      const Eigen::MatrixXd den = engine.poisson_kernel(gamma * x, spectral);
      for (int r = 0; r < num.rows(); ++r) {
        for (int c = 0; c < num.cols(); ++c) {
          tracker.offer(std::abs(num(r, c)), den(r, c), x, r, "", reference);
        }
      }
    }
  }
  return finish("sector-kernel", 0, spec.beta, reference, tracker);
}

std::vector<std::pair<std::string, Eigen::VectorXd>> domination_test_functions(
    const DiscreteMeasureSpace& space, Rng& rng, int random_count) {
  const int n = space.size();
  std::vector<std::pair<std::string, Eigen::VectorXd>> out;
  for (int at : {0, n / 3, (2 * n) / 3}) {
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
    delta[at] = 1.0;
    out.emplace_back("delta-" + std::to_string(at), std::move(delta));
  }
  out.emplace_back("ones", Eigen::VectorXd::Ones(n));
  Eigen::VectorXd alt(n);
  for (int i = 0; i < n; ++i) alt[i] = (i % 2 == 0) ? 1.0 : -1.0;
  out.emplace_back("alternating", std::move(alt));
  for (int r = 0; r < random_count; ++r) {
    Eigen::VectorXd g(n);
    for (int i = 0; i < n; ++i) g[i] = rng.gaussian();
    out.emplace_back("random-" + std::to_string(r), std::move(g));
  }
  return out;
}

}  // namespace subord
