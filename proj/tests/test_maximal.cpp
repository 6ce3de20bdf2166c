#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>

#include "subord/maximal.hpp"
#include "subord/quadrature.hpp"
#include "subord/rng.hpp"

using namespace subord;

namespace {

constexpr double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

SpectralDecomposition diagonal_decomposition() {
  Eigen::MatrixXd rho(3, 3);
  rho << 0, 1, 1,
         1, 0, 1,
         1, 1, 0;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(3, 3);
  L(1, 1) = 1.0;
  L(2, 2) = 4.0;
  return decompose(SelfAdjointOperator::make(
      DiscreteMeasureSpace::make(Eigen::VectorXd::Ones(3), rho), L));
}

double closed_form_half_density(double t) {
  return std::pow(t, -1.5) * std::exp(-0.25 / t) / (2.0 * std::sqrt(kPi));
}

}  // namespace

TEST_CASE("averaging symbol values and limits") {
  CHECK(averaging_symbol(0.0) == 1.0);
  CHECK(std::abs(averaging_symbol(1e-10) - 1.0) <= 1e-10);
  CHECK(std::abs(averaging_symbol(1.0) - (1.0 - std::exp(-1.0))) <= 1e-15);
  CHECK(std::abs(averaging_symbol(100.0) - 0.01) <= 1e-15);
  CHECK(averaging_symbol(2.0) < averaging_symbol(1.0));
  CHECK_THROWS_AS(averaging_symbol(-0.5), std::invalid_argument);
}

TEST_CASE("time average acts coordinatewise on a diagonal generator") {
  const auto dec = diagonal_decomposition();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  const Eigen::VectorXd a = time_average(dec, 2.0, ones);
  CHECK(std::abs(a[0] - 1.0) <= 1e-14);
  CHECK(std::abs(a[1] - (1.0 - std::exp(-2.0)) / 2.0) <= 1e-14);
  CHECK(std::abs(a[2] - (1.0 - std::exp(-8.0)) / 8.0) <= 1e-14);
  CHECK(time_average(dec, 0.0, ones) == ones);
}

TEST_CASE("maximal function sits between the pointwise and mean limits") {
  const auto dec = decompose(make_cycle(8));
  Rng rng(11);
  Eigen::VectorXd f(8);
  for (int i = 0; i < 8; ++i) f[i] = 0.5 + rng.uniform(0.0, 1.0);
  const Eigen::VectorXd astar = maximal_function(dec, f);

  const double mean = f.sum() / 8.0;  // unit weights on the cycle
  for (int i = 0; i < 8; ++i) {
    CHECK(astar[i] >= std::abs(f[i]) - 1e-15);
    CHECK(astar[i] >= std::abs(mean) - 1e-12);
    CHECK(astar[i] <= f.maxCoeff() + 1e-12);  // averaging is Markov
  }
}

TEST_CASE("weak type functional evaluated exactly by hand") {
  const auto space = make_cycle(4).space();
  Eigen::VectorXd g(4);
  g << 4.0, 2.0, 2.0, 1.0;
  // candidate thresholds just below each value: 4*1, 2*3, 1*4
  CHECK(weak_type_functional(space, g) == 6.0);

  const auto two = make_path(2).space();
  Eigen::VectorXd h(2);
  h << -5.0, 1.0;
  CHECK(weak_type_functional(two, h) == 1.0);
  CHECK(weak_type_functional(two, Eigen::VectorXd::Zero(2)) == 0.0);
}

TEST_CASE("weighted norms and strong-type constants") {
  const auto space = make_cycle(4).space();
  Eigen::VectorXd f(4);
  f << 3.0, 0.0, -4.0, 0.0;
  CHECK(std::abs(lp_norm(space, f, 2.0) - 5.0) <= 1e-14);
  CHECK(lp_norm(space, f, kInf) == 4.0);
  CHECK(std::abs(lp_norm(space, f, 1.0) - 7.0) <= 1e-14);
  CHECK_THROWS_AS(lp_norm(space, f, 0.5), std::invalid_argument);

  CHECK(std::abs(hopf_strong_constant(1.5) - 4.1601676) <= 1e-5);
  CHECK(std::abs(hopf_strong_constant(2.0) - 2.0 * std::sqrt(2.0)) <= 1e-14);
  CHECK(std::abs(hopf_strong_constant(4.0) - 2.1491399) <= 1e-5);
  CHECK(hopf_strong_constant(kInf) == 2.0);
  CHECK_THROWS_AS(hopf_strong_constant(1.0), std::invalid_argument);
}

TEST_CASE("maximal inequalities hold on the cycle across seeds") {
  const auto dec = decompose(make_cycle(16));
  const std::vector<double> ps{1.5, 2.0, 4.0, kInf};
  for (unsigned seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    Eigen::VectorXd f(16);
    for (int i = 0; i < 16; ++i) f[i] = rng.gaussian();
    const auto report = hopf_maximal_report(dec, f, ps);
    CHECK(report.all_pass());
    CHECK(report.rows.size() == 5);
    CHECK(report.find("weak-1-1") != nullptr);
    CHECK(report.find("strong-p-inf") != nullptr);
  }
}

TEST_CASE("laplace-type constants against closed forms") {
  // h = e^{-t}: int t e^{-t} dt = 1
  const double c_exp = laplace_type_constant(
      [](double t) { return -std::exp(-t); }, 0.0, 60.0, 1e-10);
  CHECK(std::abs(c_exp - 1.0) <= 1e-9);

  // h = e^{-t^2}: int t |h'| dt = 2 int t^2 e^{-t^2} dt = sqrt(pi)/2
  const double c_gauss = laplace_type_constant(
      [](double t) { return -2.0 * t * std::exp(-t * t); }, 0.0, 40.0, 1e-10);
  CHECK(std::abs(c_gauss - std::sqrt(kPi) / 2.0) <= 1e-8);

  CHECK_THROWS_AS(laplace_type_constant([](double) { return 0.0; }, 1.0, 1.0,
                                        1e-8),
                  std::invalid_argument);
}

TEST_CASE("stable laplace constant matches the closed form at index 1/2") {
  const StableDensity density(StableDensityModel::make(
      0.5, StableMethod::kClosedFormHalf, 1e-12));
  const double lib = stable_laplace_constant(density, 1e-7);

  // t p'(t) = p(t) (1/(4t) - 3/2) for the closed-form density, and the tail
  // mass beyond T is erf(1/(2 sqrt T)) exactly
  const double T = 64.0;
  auto integrand = [](double t) {
    return closed_form_half_density(t) * std::abs(0.25 / t - 1.5);
  };
  const double oracle =
      integrate_adaptive_partition(
          integrand, {1e-4, 0.05, 1.0 / 6.0, 0.5, 2.0, 10.0, T}, 1e-10)
          .value +
      T * closed_form_half_density(T) + std::erf(1.0 / (2.0 * std::sqrt(T)));

  CHECK(oracle > 1.0);  // |E a - E b| with E a = 3/2, E b = 1/2
  CHECK(oracle < 2.0);  // E a + E b
  CHECK(std::abs(lib - oracle) <= 5e-3);
}

TEST_CASE("laplace multipliers are dominated by the maximal function") {
  const SubordinationEngine engine(decompose(make_cycle(8)));
  Rng rng(5);
  Eigen::VectorXd f(8);
  for (int i = 0; i < 8; ++i) f[i] = 1.0 + 0.4 * rng.gaussian();

  const auto report =
      laplace_type_report(engine, 0.5, {0.25, 1.0, 4.0}, f, 1e-8);
  CHECK(report.all_pass());
  CHECK(report.rows.size() == 4);
  const auto* exp_row = report.find("laplace-exp");
  REQUIRE(exp_row != nullptr);
  CHECK(exp_row->value <= 1.0 + 1e-9);  // the resolvent never beats A* itself
  CHECK(exp_row->value >= 0.5);
  const auto* u1 = report.find("laplace-stable-u-1");
  REQUIRE(u1 != nullptr);
  CHECK(u1->value > 0.0);
  // every stable row shares one u-independent constant
  CHECK(report.find("laplace-stable-u-0.25")->bound ==
        report.find("laplace-stable-u-4")->bound);
}

TEST_CASE("sector ratio degenerates to one on the positive ray") {
  const auto dec = diagonal_decomposition();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  const auto result =
      sector_maximal_constant(dec, 0.3, 0.0, ones, 0.01, 100.0, 12, 1, {});
  CHECK(result.constant == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.worst_point == 0);  // the flat coordinate never decays
  CHECK(result.samples == 36);
}

TEST_CASE("sector sampling rejects apertures beyond analyticity") {
  const auto dec = diagonal_decomposition();
  const Eigen::VectorXd f = Eigen::VectorXd::Ones(3);
  CHECK_THROWS_AS(
      sector_maximal_constant(dec, 0.5, 0.79, f, 0.1, 10.0, 4, 3, {}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      sector_maximal_constant(dec, 0.5, -0.1, f, 0.1, 10.0, 4, 3, {}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      sector_maximal_constant(dec, 1.5, 0.1, f, 0.1, 10.0, 4, 3, {}),
      std::domain_error);
}

TEST_CASE("sector maximal ratio is stable under grid refinement") {
  const auto dec = decompose(make_cycle(8));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(8);
  f[0] = 1.0;
  const double theta = 0.5 * (1.0 - 0.3) * kPi / 2.0;
  const auto coarse =
      sector_maximal_constant(dec, 0.3, theta, f, 0.01, 100.0, 16, 9, {});
  const auto fine =
      sector_maximal_constant(dec, 0.3, theta, f, 0.01, 100.0, 32, 17, {});
  CHECK(coarse.constant >= 0.9);
  CHECK(std::isfinite(fine.constant));
  CHECK(std::abs(fine.constant - coarse.constant) <= 0.05 * coarse.constant);
}

TEST_CASE("fourier integral bound with the gaussian as exact witness") {
  auto g = [](double s) { return std::exp(-0.5 * s * s); };
  auto gdd = [](double s) { return (s * s - 1.0) * std::exp(-0.5 * s * s); };
  const auto report = fourier_l1_check(g, gdd, 12.0, 12.0, 1e-6);

  // the transform is sqrt(2 pi) e^{-xi^2/2} >= 0, so the integral is
  // exactly 2 pi and the three-norm bound evaluates near 34.73
  CHECK(std::abs(report.integral - 2.0 * kPi) <= 2e-6);
  CHECK(std::abs(report.tail_bound - 4.0 * std::exp(-0.5) / 6.0) <= 1e-3);
  CHECK(std::abs(report.bound - 34.726) <= 0.02);
  CHECK(report.tail_pointwise <= 1e-4);
  CHECK(report.pass);
}

TEST_CASE("fourier integral bound on a compactly supported bump") {
  auto g = [](double s) {
    const double w = 1.0 - s * s;
    return w > 0.0 ? w * w : 0.0;
  };
  auto gdd = [](double s) {
    return std::abs(s) < 1.0 ? 12.0 * s * s - 4.0 : 0.0;
  };
  const auto report = fourier_l1_check(g, gdd, 1.0, 60.0, 1e-6);
  CHECK(report.pass);
  CHECK(report.integral >= 2.0 * kPi * (16.0 / 15.0) - 1e-3);  // >= |int g^|
  CHECK(std::abs(report.tail_bound - 2.0 * 6.1584 / 60.0) <= 1e-3);
  CHECK(report.tail_pointwise <= 1.0 + 1e-9);
}
