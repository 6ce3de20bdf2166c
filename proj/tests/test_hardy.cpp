#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <stdexcept>

#include "subord/csv.hpp"
#include "subord/hardy.hpp"
#include "subord/rng.hpp"

using namespace subord;

namespace {

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

Eigen::VectorXd seeded_gaussian(const SpectralDecomposition& dec,
                                unsigned long long seed) {
  Rng rng(seed);
  Eigen::VectorXd f(dec.size());
  for (int i = 0; i < dec.size(); ++i) f[i] = rng.gaussian();
  return f;
}

double weighted_l2(const DiscreteMeasureSpace& space,
                   const Eigen::VectorXd& v) {
  return std::sqrt((v.array().square() * space.weights.array()).sum());
}

}  // namespace

TEST_CASE("scale family symbol values and validation") {
  CHECK(q_symbol(0.0) == 0.0);
  CHECK(q_symbol(1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(q_symbol(2.0) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(q_symbol(800.0) == 0.0);
  // the symbol peaks at w = 1
  CHECK(q_symbol(0.9) < q_symbol(1.0));
  CHECK(q_symbol(1.1) < q_symbol(1.0));
  CHECK_THROWS_AS(q_symbol(-0.5), std::invalid_argument);
}

TEST_CASE("scale family operator on a diagonal model") {
  auto dec = diagonal_decomposition();
  // eigenvalues 0, 1, 4; at t = 1, m = 2, alpha = 1/2 the symbol values are
  // q(0) = 0, q(1) = e^{-1}, q(2) = 2 e^{-2}
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(3);
  CHECK(q_operator(dec, 2, 0.5, 1.0, dec.basis.col(0))
            .cwiseAbs()
            .maxCoeff() <= 1e-14);

  for (int mode : {1, 2}) {
    Eigen::VectorXd ef = dec.basis.col(mode);
    const double w = std::sqrt(dec.eigenvalues[mode]);
    const Eigen::VectorXd out = q_operator(dec, 2, 0.5, 1.0, ef);
    CHECK((out - q_symbol(w) * ef).cwiseAbs().maxCoeff() <= 1e-14);
  }

  // alpha = 1 is part of the family, unlike the strictly fractional labs
  CHECK_NOTHROW(q_operator(dec, 2, 1.0, 1.0, ones));
  CHECK_THROWS_AS(q_operator(dec, 0, 0.5, 1.0, ones), std::invalid_argument);
  CHECK_THROWS_AS(q_operator(dec, 2, 0.0, 1.0, ones), std::invalid_argument);
  CHECK_THROWS_AS(q_operator(dec, 2, 1.5, 1.0, ones), std::invalid_argument);
  CHECK_THROWS_AS(q_operator(dec, 2, 0.5, 0.0, ones), std::invalid_argument);
}

TEST_CASE("reproducing constant and per-eigenvalue residual") {
  CHECK(calderon_constant(1, 1.0) == 4.0);
  CHECK(calderon_constant(2, 0.5) == 4.0);
  CHECK(calderon_constant(2, 1.0) == 8.0);
  CHECK(calderon_constant(1, 0.25) == 1.0);

  // the residual floor is the integration window truncation, about 2e-10,
  // independent of order, index and eigenvalue
  for (int m : {1, 2}) {
    for (double alpha : {0.3, 1.0}) {
      for (double lambda : {0.01, 1.0, 100.0}) {
        const double r = calderon_residual(m, alpha, lambda, 1e-10);
        CHECK(r <= 1e-9);
        CHECK(r >= 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(calderon_residual(1, 0.5, 0.0, 1e-10),
                  std::invalid_argument);
}

TEST_CASE("square of the tail profile in closed form") {
  // at order m the tail profile depends on t^m z only, with value
  // (2w + 1) e^{-2w}; at w = 1 that is 3 e^{-2}
  CHECK(phi_closed_form(1, 1.0, 1.0) ==
        doctest::Approx(3.0 * std::exp(-2.0)).epsilon(1e-15));
  CHECK(phi_closed_form(2, 1.0, 1.0) == phi_closed_form(1, 1.0, 1.0));
  // normalized to one at t = 0
  CHECK(phi_closed_form(1, 1e-9, 2.0) == doctest::Approx(1.0).epsilon(1e-8));
  // decreasing in t
  CHECK(phi_closed_form(1, 2.0, 1.0) < phi_closed_form(1, 1.0, 1.0));

  for (int m : {1, 2}) {
    for (double z : {0.3, 1.0, 4.0}) {
      for (double t : {0.1, 1.0}) {
        const double cf = phi_closed_form(m, t, z);
        const double quad = phi_quadrature(m, t, z, 1e-12);
        CHECK(std::abs(cf - quad) <= 1e-10);
      }
    }
  }
}

TEST_CASE("reproducing identity report on a cycle") {
  auto dec = decompose(make_cycle(16));
  const Eigen::VectorXd f = seeded_gaussian(dec, 77);
  auto report = calderon_report(dec, 2, 0.5, f, 1e-8);
  CHECK(report.all_pass());
  CHECK(report.rows.size() == 3);
  REQUIRE(report.find("calderon-exact-quarter") != nullptr);
  CHECK(report.find("calderon-exact-quarter")->value <= 1e-12);
  REQUIRE(report.find("calderon-max-residual") != nullptr);
  CHECK(report.find("calderon-max-residual")->value <= 1e-9);
  REQUIRE(report.find("calderon-reproduce") != nullptr);
  CHECK(report.find("calderon-reproduce")->value <= 1e-10);
}

TEST_CASE("dyadic grid layout") {
  DyadicGrid grid;
  auto times = grid.times();
  CHECK(times.size() == 96);
  CHECK(times.front() == doctest::Approx(std::pow(2.0, -6 + 0.5 / 8)));
  CHECK(times.back() == doctest::Approx(std::pow(2.0, 5 + 7.5 / 8)));
  for (size_t i = 1; i < times.size(); ++i) CHECK(times[i] > times[i - 1]);
  CHECK(grid.log_weight() == doctest::Approx(std::log(2.0) / 8));

  DyadicGrid fine{-6, 6, 16};
  CHECK(fine.times().size() == 192);
  CHECK_THROWS_AS((DyadicGrid{2, 2, 8}).times(), std::invalid_argument);
}

TEST_CASE("vertical square function calibrates on eigenfunctions") {
  auto dec = diagonal_decomposition();
  Eigen::VectorXd ef = dec.basis.col(1);  // eigenvalue 1

  // discrete log-time sum vs the continuous value 1/(2 sqrt(m alpha));
  // the default grid truncates at 2^{-6}, which bites for small m*alpha
  struct Case {
    int m;
    double alpha;
    double rel_tol;
  };
  for (auto c : {Case{2, 0.5, 5e-4}, Case{1, 1.0, 5e-4}, Case{2, 1.0, 1e-6}}) {
    const Eigen::VectorXd g = global_square_function(dec, c.m, c.alpha, ef);
    const double expect = 1.0 / (2.0 * std::sqrt(c.m * c.alpha));
    CHECK((g - expect * ef.cwiseAbs()).cwiseAbs().maxCoeff() <=
          c.rel_tol * expect);
  }

  // widening the grid recovers the small-exponent case
  DyadicGrid wide{-20, 8, 8};
  const Eigen::VectorXd g = global_square_function(dec, 1, 0.3, ef, wide);
  const double expect = 1.0 / (2.0 * std::sqrt(0.3));
  CHECK((g - expect * ef.cwiseAbs()).cwiseAbs().maxCoeff() <= 2e-3 * expect);

  // the kernel mode carries no oscillation
  CHECK(global_square_function(dec, 2, 0.5, dec.basis.col(0)).maxCoeff() <=
        1e-13);
}

TEST_CASE("cone and vertical square functions carry the same mass") {
  auto dec = decompose(make_cycle(64));
  Eigen::VectorXd f = seeded_gaussian(dec, 123);
  f -= zero_mode_projection(dec, f);

  const Eigen::VectorXd s = cone_square_function(dec, 2, 0.5, f);
  const Eigen::VectorXd g = global_square_function(dec, 2, 0.5, f);
  CHECK(s.minCoeff() >= 0.0);
  // averaging over balls redistributes but conserves the square integral
  // exactly when every point sees balls of the same measure
  const double sn = weighted_l2(dec.space, s);
  const double gn = weighted_l2(dec.space, g);
  CHECK(std::abs(sn / gn - 1.0) <= 1e-12);
  // pointwise they differ
  CHECK((s - g).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("oscillation norm vanishes on constants and scales linearly") {
  auto dec = decompose(make_cycle(64));
  CHECK(bmo_norm(dec, 2, 0.5, 0.0, Eigen::VectorXd::Ones(64)) <= 1e-12);

  const Eigen::VectorXd f = seeded_gaussian(dec, 123);
  const double b1 = bmo_norm(dec, 2, 0.5, 0.0, f);
  CHECK(b1 > 0.0);
  CHECK(bmo_norm(dec, 2, 0.5, 0.0, 2.0 * f) ==
        doctest::Approx(2.0 * b1).epsilon(1e-12));
  // larger measure exponent can only shrink the supremum (masses are >= 1)
  CHECK(bmo_norm(dec, 2, 0.5, 0.5, f) <= b1 + 1e-15);
}

TEST_CASE("maximal average over closed balls") {
  auto dec = decompose(make_cycle(64));
  const Eigen::VectorXd f = seeded_gaussian(dec, 123);
  const Eigen::VectorXd m = hardy_littlewood_maximal(dec.space, f);

  // the radius-zero ball gives M f >= |f|, the full space gives the mean
  const double mean = f.cwiseAbs().mean();
  for (int x = 0; x < 64; ++x) {
    CHECK(m[x] >= std::abs(f[x]) - 1e-15);
    CHECK(m[x] >= mean - 1e-15);
  }

  // for a point mass the best ball centered at distance d holds 2d+1 points
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(64);
  delta[10] = 1.0;
  const Eigen::VectorXd md = hardy_littlewood_maximal(dec.space, delta);
  CHECK(md[10] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(md[11] == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(md[15] == doctest::Approx(1.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("peetre maximal function structure") {
  auto dec = decompose(make_cycle(64));
  const Eigen::VectorXd g = seeded_gaussian(dec, 123);
  const Eigen::VectorXd p = peetre_maximal(dec.space, g, 1.0, 1.0, 0.5);

  const double sup = g.cwiseAbs().maxCoeff();
  for (int x = 0; x < 64; ++x) {
    CHECK(p[x] >= std::abs(g[x]) - 1e-15);  // y = x term
    CHECK(p[x] <= sup + 1e-15);             // denominators are >= 1
  }
  CHECK(p.maxCoeff() == doctest::Approx(sup).epsilon(1e-15));

  // large scale flattens the weight, so every point sees the supremum
  const Eigen::VectorXd flat = peetre_maximal(dec.space, g, 1e9, 1.0, 0.5);
  CHECK(flat.minCoeff() == doctest::Approx(sup).epsilon(1e-6));

  CHECK_THROWS_AS(peetre_maximal(dec.space, g, 0.0, 1.0, 0.5),
                  std::invalid_argument);
}

TEST_CASE("kernel sum against the maximal function is scale stable") {
  auto dec = decompose(make_cycle(64));

  // a point mass at scale s <= 1 realizes the ratio s^{-n} exactly
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(64);
  delta[10] = 1.0;
  CHECK(elementary_estimate_constant(dec.space, 1.0, 0.5, 0.25, delta) ==
        doctest::Approx(4.0).epsilon(1e-12));

  const Eigen::VectorXd f = seeded_gaussian(dec, 123);
  CHECK(elementary_estimate_constant(dec.space, 1.0, 0.5, 1.0, f) ==
        doctest::Approx(3.088854).epsilon(1e-4));
  for (double s : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) {
    const double c = elementary_estimate_constant(dec.space, 1.0, 0.5, s, f);
    CHECK(std::isfinite(c));
    CHECK(c > 0.5);
    CHECK(c < 8.0);
  }
}

TEST_CASE("ball growth dimension of the cycle") {
  auto dec = decompose(make_cycle(64));
  // open balls: radius 1 holds the center, radius 2.5 five points, 7 thirteen
  CHECK(dec.space.ball_measure(0, 1.0) == doctest::Approx(1.0));
  CHECK(dec.space.ball_measure(0, 2.5) == doctest::Approx(5.0));
  CHECK(dec.space.ball_measure(0, 7.0) == doctest::Approx(13.0));

  const double dim = ball_dimension(dec.space, 2.0, 16.0);
  CHECK(dim >= 0.9);
  CHECK(dim <= 1.1);
  CHECK_THROWS_AS(ball_dimension(dec.space, 16.0, 2.0), std::invalid_argument);
}

TEST_CASE("almost orthogonality decay exponent") {
  auto dec = decompose(make_cycle(64));

  // in the covered asymptotic window the fitted exponent tracks m * alpha
  struct Case {
    int m;
    double alpha;
    double lo, hi;
  };
  for (auto c : {Case{2, 0.5, 0.85, 1.1}, Case{1, 1.0, 0.85, 1.1},
                 Case{2, 1.0, 0.9, 1.1}, Case{2, 0.3, 0.8, 1.0}}) {
    const double slope =
        almost_orthogonality_slope(dec, c.m, c.alpha, 1.0, 4, 5);
    const double ratio = slope / (c.m * c.alpha);
    CHECK(ratio >= c.lo);
    CHECK(ratio <= c.hi);
  }

  // small ratios sit in the flat region near s = t and drag the fit down
  CHECK(almost_orthogonality_slope(dec, 2, 0.5, 1.0, 4, 1) <
        almost_orthogonality_slope(dec, 2, 0.5, 1.0, 4, 5));

  CHECK_THROWS_AS(almost_orthogonality_slope(dec, 2, 0.5, 0.0, 4, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(almost_orthogonality_slope(dec, 2, 0.5, 1.0, 1, 5),
                  std::invalid_argument);
  CHECK_THROWS_AS(almost_orthogonality_slope(dec, 2, 0.5, 1.0, 4, 0),
                  std::invalid_argument);
}

TEST_CASE("norm comparison on the cycle against the stored baseline") {
  auto dec = decompose(make_cycle(64));
  auto rows = equivalence_experiment(dec, 2, 0.5, {}, 4242);
  REQUIRE(rows.size() == 30);

  // every ratio sits at the single-eigenvalue calibration 1/(2 sqrt(m a)),
  // because averaging over balls conserves mass here; the spread is tiny
  for (const auto& [id, ratio] : rows) {
    CHECK(ratio >= 0.49);
    CHECK(ratio <= 0.51);
  }
  const double spread = equivalence_spread(rows);
  CHECK(spread >= 1.0);
  CHECK(spread <= 1.01);

  // refining the time grid moves nothing by more than a whisker
  DyadicGrid fine{-6, 6, 16};
  auto fine_rows = equivalence_experiment(dec, 2, 0.5, fine, 4242);
  REQUIRE(fine_rows.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(fine_rows[i].first == rows[i].first);
    CHECK(std::abs(fine_rows[i].second / rows[i].second - 1.0) <= 1e-3);
  }

  // and the stored baseline pins the exact configuration
  const CsvTable baseline =
      read_csv(std::string(SUBORD_TEST_DATA_DIR) + "/equivalence_z64.csv");
  REQUIRE(baseline.header == std::vector<std::string>{"function_id", "ratio"});
  REQUIRE(baseline.rows.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(baseline.rows[i][0] == rows[i].first);
    const double stored = std::stod(baseline.rows[i][1]);
    CHECK(std::abs(rows[i].second / stored - 1.0) <= 0.02);
  }
}

TEST_CASE("norm comparison on a path has honest spread") {
  auto dec = decompose(make_path(32));
  auto rows = equivalence_experiment(dec, 2, 0.5, {}, 4242);
  REQUIRE(rows.size() == 30);
  const double spread = equivalence_spread(rows);
  // boundary balls are smaller, so the cone average no longer conserves
  // mass and the two norms genuinely separate
  CHECK(spread > 1.01);
  CHECK(spread < 100.0);

  CHECK_THROWS_AS(equivalence_spread({}), std::invalid_argument);
  auto small = decompose(make_cycle(8));
  CHECK_THROWS_AS(equivalence_experiment(small, 2, 0.5, {}, 1),
                  std::invalid_argument);
}
