#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "subord/quadrature.hpp"
#include "subord/stable_density.hpp"

using subord::DensityAuditGrid;
using subord::StableDensity;
using subord::StableDensityModel;
using subord::StableMethod;

namespace {

constexpr double kPi = 3.14159265358979323846;

double closed_form_half(double t) {
  return 0.5 / std::sqrt(kPi) * std::pow(t, -1.5) * std::exp(-0.25 / t);
}

std::vector<double> log_points(double lo, double hi, int per_decade) {
  std::vector<double> g;
  const int n = static_cast<int>(std::ceil(std::log10(hi / lo) * per_decade));
  for (int i = 0; i <= n; ++i) g.push_back(lo * std::pow(10.0, double(i) / per_decade));
  return g;
}

// Laplace transform of the density by quadrature on a logarithmic axis.
double laplace_by_quadrature(const StableDensity& d, double u, double s) {
  const double T = std::min(d.model().grid_truncation, 400.0 / s);
  auto f = [&](double v) {
    const double t = std::exp(v);
    return d.density(u, t) * std::exp(-s * t) * t;
  };
  auto q = subord::integrate_adaptive(f, std::log(1e-6), std::log(T), 1e-11,
                                      100000, 0.5);
  return q.value;
}

std::complex<double> laplace_by_quadrature_complex(const StableDensity& d,
                                                   std::complex<double> u,
                                                   double s) {
  const double T = 400.0 / s;
  auto f = [&](double v) {
    const double t = std::exp(v);
    return d.density_complex(u, t) * std::exp(-s * t) * t;
  };
  auto q = subord::integrate_adaptive(f, std::log(1e-6), std::log(T), 1e-10,
                                      100000, 0.5);
  return q.value;
}

}  // namespace

TEST_CASE("index and model validation") {
  CHECK_THROWS_AS(subord::StabilityIndex(0.0), std::domain_error);
  CHECK_THROWS_AS(subord::StabilityIndex(1.0), std::domain_error);
  CHECK_THROWS_AS(subord::StabilityIndex(-0.2), std::domain_error);
  CHECK_THROWS_AS(subord::StabilityIndex(1.7), std::domain_error);
  CHECK_THROWS_AS(subord::StabilityIndex(std::nan("")), std::domain_error);
  CHECK_NOTHROW(subord::StabilityIndex(0.5));

  CHECK_THROWS_AS(
      StableDensityModel::make(0.3, StableMethod::kClosedFormHalf, 1e-10, 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      StableDensityModel::make(0.5, StableMethod::kFourierInversion, -1.0, 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      StableDensityModel::make(0.5, StableMethod::kFourierInversion, 0.5, 0.0),
      std::invalid_argument);
  // an explicit truncation that leaves too much tail mass is rejected
  CHECK_THROWS_AS(
      StableDensityModel::make(0.5, StableMethod::kFourierInversion, 1e-10, 5.0),
      std::invalid_argument);
}

TEST_CASE("closed form at index one half, hand-computed point") {
  StableDensity d(StableDensityModel::make(0.5, StableMethod::kClosedFormHalf,
                                           1e-10, 0.0));
  // (2 sqrt(pi))^{-1} 0.25^{-3/2} e^{-1} = 0.830214994840...
  CHECK(d.p1(0.25) == doctest::Approx(0.83021499484).epsilon(1e-9));
  CHECK(d.p1(1.0) == doctest::Approx(0.5 / std::sqrt(kPi) * std::exp(-0.25))
                         .epsilon(1e-12));
}

TEST_CASE("inversion and real-integral methods match the closed form") {
  StableDensity inv(StableDensityModel::make(
      0.5, StableMethod::kFourierInversion, 1e-10, 0.0));
  StableDensity real(
      StableDensityModel::make(0.5, StableMethod::kRealIntegral, 1e-10, 0.0));
  double worst_inv = 0.0, worst_real = 0.0;
  for (double t : log_points(1e-2, 1e2, 16)) {
    const double exact = closed_form_half(t);
    worst_inv = std::max(worst_inv, std::abs(inv.p1(t) - exact));
    worst_real = std::max(worst_real, std::abs(real.p1(t) - exact));
  }
  CHECK(worst_inv <= 1e-8);
  CHECK(worst_real <= 1e-8);
}

TEST_CASE("methods agree away from the closed-form index") {
  for (double alpha : {0.3, 0.7}) {
    StableDensity inv(StableDensityModel::make(
        alpha, StableMethod::kFourierInversion, 1e-10, 0.0));
    StableDensity real(
        StableDensityModel::make(alpha, StableMethod::kRealIntegral, 1e-10, 0.0));
    for (double t : {0.05, 0.2, 1.0, 7.0, 120.0}) {
      CHECK(std::abs(inv.p1(t) - real.p1(t)) <= 2e-9);
    }
  }
}

TEST_CASE("density vanishes below the origin cutoff") {
  StableDensity d(StableDensityModel::make(0.3, StableMethod::kFourierInversion,
                                           1e-10, 0.0));
  CHECK(d.p1(1e-6) == 0.0);
  CHECK(d.p1(9e-7) == 0.0);
  CHECK(d.p1(0.0) == 0.0);
  CHECK(d.p1(-3.0) == 0.0);
  CHECK(d.p1(2e-6) >= -1e-10);  // within the evaluator's absolute tolerance
}

TEST_CASE("scaling in u is the exact implemented expression") {
  StableDensity d(StableDensityModel::make(0.7, StableMethod::kFourierInversion,
                                           1e-10, 0.0));
  for (double u : {0.25, 1.0, 4.0}) {
    for (double t : {0.3, 1.0, 5.0}) {
      const double s = std::pow(u, -1.0 / 0.7);
      CHECK(d.density(u, t) == s * d.p1(s * t));  // bitwise agreement
    }
  }
  CHECK_THROWS_AS(d.density(0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(d.density(-1.0, 1.0), std::domain_error);
}

TEST_CASE("tail mass against the error-function antiderivative") {
  StableDensity d(StableDensityModel::make(0.5, StableMethod::kFourierInversion,
                                           1e-10, 0.0));
  // int_T^inf p_1 = erf(1/(2 sqrt(T))) at index 1/2
  CHECK(d.tail_mass(25.0) == doctest::Approx(std::erf(0.1)).epsilon(1e-11));
  CHECK(d.tail_mass(100.0) == doctest::Approx(std::erf(0.05)).epsilon(1e-11));
  // default truncation leaves at most a tenth of the tolerance behind
  CHECK(d.tail_mass(d.model().grid_truncation) <= 1e-11);
}

TEST_CASE("semigroup property under convolution") {
  StableDensity d(StableDensityModel::make(0.3, StableMethod::kFourierInversion,
                                           1e-10, 0.0));
  for (double t : {3.0, 8.0}) {
    auto f = [&](double s) { return d.density(1.0, s) * d.density(2.0, t - s); };
    auto q = subord::integrate_adaptive(f, 1e-6, t - 1e-6, 1e-10, 200000, 0.5);
    CHECK(q.value == doctest::Approx(d.density(3.0, t)).epsilon(1e-7));
  }
}

TEST_CASE("Laplace transform is the stretched exponential") {
  for (double alpha : {0.3, 0.5, 0.7}) {
    StableDensity d(StableDensityModel::make(
        alpha, StableMethod::kFourierInversion, 1e-10, 0.0));
    for (double u : {0.5, 1.0, 2.0}) {
      for (double s : {0.5, 1.0, 2.0, 5.0}) {
        const double exact = std::exp(-u * std::pow(s, alpha));
        CHECK(std::abs(laplace_by_quadrature(d, u, s) - exact) <= 1e-8);
      }
    }
  }
}

TEST_CASE("complex subordination parameter") {
  const double alpha = 0.5;
  StableDensity d(StableDensityModel::make(
      alpha, StableMethod::kFourierInversion, 1e-10, 0.0));

  SUBCASE("reduces to the real evaluation on the positive axis") {
    for (double t : {0.3, 1.0, 4.0}) {
      const std::complex<double> p = d.density_complex({2.0, 0.0}, t);
      CHECK(std::abs(p.imag()) <= 1e-9);
      CHECK(p.real() == doctest::Approx(d.density(2.0, t)).epsilon(1e-8));
    }
  }

  SUBCASE("conjugate symmetry") {
    const std::complex<double> u(0.9, 0.35);
    for (double t : {0.5, 2.0}) {
      const auto a = d.density_complex(u, t);
      const auto b = d.density_complex(std::conj(u), t);
      CHECK(std::abs(a - std::conj(b)) <= 1e-9);
    }
  }

  SUBCASE("Laplace transform continues analytically") {
    // |arg u| = 0.45 pi (1-alpha)/2, half of the admissible aperture
    const double phi = 0.45 * kPi * (1.0 - alpha) / 2.0;
    const std::complex<double> u = std::polar(1.0, phi);
    for (double s : {1.0, 2.0}) {
      const std::complex<double> exact = std::exp(-u * std::pow(s, alpha));
      const std::complex<double> got = laplace_by_quadrature_complex(d, u, s);
      CHECK(std::abs(got - exact) <= 1e-7);
    }
  }

  SUBCASE("aperture is enforced") {
    const double beyond = 1.1 * 0.9 * kPi * (1.0 - alpha) / 2.0;
    CHECK_THROWS_AS(d.density_complex(std::polar(1.0, beyond), 1.0),
                    std::domain_error);
    CHECK_THROWS_AS(d.density_complex({0.0, 0.0}, 1.0), std::domain_error);
  }
}

TEST_CASE("audit report on the shipped indices") {
  for (double alpha : {0.3, 0.5, 0.7}) {
    CAPTURE(alpha);
    StableDensity d(StableDensityModel::make(
        alpha, StableMethod::kFourierInversion, 1e-10, 0.0));
    DensityAuditGrid grid;
    auto report = subord::density_audit(d, grid);
    for (const auto& row : report.rows) {
      CAPTURE(row.id);
      CAPTURE(row.value);
      CHECK(row.pass);
    }
    const auto* mass = report.find("mass");
    REQUIRE(mass != nullptr);
    CHECK(mass->value <= 1e-6);
    const auto* slope = report.find("tail-slope");
    REQUIRE(slope != nullptr);
    CHECK(std::abs(slope->value + 1.0 + alpha) <= 0.05);
  }
}

TEST_CASE("audit also passes through the real-integral method") {
  StableDensity d(
      StableDensityModel::make(0.5, StableMethod::kRealIntegral, 1e-10, 0.0));
  auto report = subord::density_audit(d, DensityAuditGrid{});
  CHECK(report.all_pass());
}

TEST_CASE("derivative matches the closed-form derivative at index one half") {
  StableDensity d(StableDensityModel::make(0.5, StableMethod::kFourierInversion,
                                           1e-10, 0.0));
  for (double t : {0.5, 1.0, 10.0, 100.0}) {
    const double exact =
        closed_form_half(t) * (-1.5 / t + 0.25 / (t * t));
    CHECK(d.p1_derivative(t) == doctest::Approx(exact).epsilon(5e-3));
  }
}
