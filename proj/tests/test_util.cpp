#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "subord/csv.hpp"
#include "subord/quadrature.hpp"
#include "subord/report.hpp"
#include "subord/rng.hpp"

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("adaptive panels on smooth and oscillatory integrands") {
  auto poly = [](double x) { return x * x; };
  CHECK(subord::integrate_adaptive(poly, 0.0, 1.0, 1e-12).value ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));

  auto osc = [](double x) { return std::cos(x); };
  const double got = subord::integrate_adaptive(osc, 0.0, 40.0 * kPi, 1e-11).value;
  CHECK(std::abs(got) <= 1e-10);

  auto gauss = [](double x) { return std::exp(-x * x); };
  CHECK(subord::integrate_adaptive(gauss, -12.0, 12.0, 1e-12).value ==
        doctest::Approx(std::sqrt(kPi)).epsilon(1e-13));
}

TEST_CASE("adaptive panels with complex and vector values") {
  auto cf = [](double x) { return std::polar(1.0, 3.0 * x); };
  const std::complex<double> exact =
      (std::polar(1.0, 3.0) - 1.0) / std::complex<double>(0.0, 3.0);
  CHECK(std::abs(subord::integrate_adaptive(cf, 0.0, 1.0, 1e-12).value - exact) <=
        1e-12);

  auto vf = [](double x) {
    Eigen::VectorXd v(3);
    v << 1.0, 2.0 * x, 3.0 * x * x;
    return v;
  };
  Eigen::VectorXd got = subord::integrate_adaptive(vf, 0.0, 1.0, 1e-12).value;
  CHECK((got - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("seeded partition finds structure blind bisection misses") {
  // a spike of width 1e-7 at x = 3e-7 carrying mass ~ sqrt(pi) * 1e-7
  auto spike = [](double x) {
    const double z = (x - 3e-7) / 1e-7;
    return std::exp(-z * z);
  };
  const double mass = 1e-7 * std::sqrt(kPi) * 0.5 * (1.0 + std::erf(3.0));
  auto seeded = subord::integrate_adaptive_partition(
      spike, {0.0, 1e-7, 1e-6, 1e-4, 1e-2, 1.0}, 1e-12, 100000, 0.5);
  CHECK(std::abs(seeded.value - mass) <= 1e-12);
}

TEST_CASE("quadrature failure carries the achieved error") {
  auto nasty = [](double x) { return std::sin(1.0 / (x + 1e-14)) / (x + 1e-14); };
  try {
    subord::integrate_adaptive(nasty, 0.0, 1.0, 1e-14, 8, 0.0);
    CHECK(false);
  } catch (const subord::QuadratureError& e) {
    CHECK(e.achieved > 1e-14);
  }
}

TEST_CASE("deterministic random stream") {
  subord::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  subord::Rng c(42);
  subord::Rng d = c.fork(7);
  CHECK(c.next_u64() != d.next_u64());
  subord::Rng e(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = e.uniform(2.0, 3.0);
    CHECK(x >= 2.0);
    CHECK(x < 3.0);
    CHECK(std::isfinite(e.gaussian()));
  }
}

TEST_CASE("csv output is byte-stable") {
  subord::CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{subord::format_float(1.0 / 3.0), subord::format_float(1e-300)},
            {subord::format_float(-0.0), subord::format_float(12345.0)}};
  const char* path = "util_csv_test.csv";
  auto slurp = [&]() {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  subord::write_csv(path, t);
  const std::string first = slurp();
  subord::write_csv(path, t);
  CHECK(first == slurp());
  CHECK(first.find("0.33333333333333331") != std::string::npos);
  CHECK(first.find('\r') == std::string::npos);
  std::remove(path);
}

TEST_CASE("verification report bookkeeping") {
  subord::VerificationReport r;
  r.add("x", 1.0, 2.0, true, "");
  r.add("y", 3.0, std::nullopt, false, "informational");
  CHECK(!r.all_pass());
  CHECK(r.find("x") != nullptr);
  CHECK(r.find("zzz") == nullptr);
  auto table = subord::report_to_table(r, "demo");
  CHECK(table.rows.size() == 2);
  CHECK(table.rows[0][0] == "demo");
}

TEST_CASE("csv tables round trip through disk") {
  const char* path = "roundtrip_test.csv";
  subord::CsvTable t;
  t.header = {"id", "value", "note"};
  t.rows = {{"a", subord::format_float(1.0 / 3.0), ""},
            {"b", subord::format_float(-2.5e-300), "tail"}};
  subord::write_csv(path, t);
  const subord::CsvTable back = subord::read_csv(path);
  CHECK(back.header == t.header);
  REQUIRE(back.rows.size() == t.rows.size());
  for (size_t i = 0; i < t.rows.size(); ++i) CHECK(back.rows[i] == t.rows[i]);
  CHECK(std::stod(back.rows[0][1]) == 1.0 / 3.0);
  std::remove(path);

  CHECK_THROWS_AS(subord::read_csv("does_not_exist.csv"), std::runtime_error);

  {
    std::ofstream bad("ragged_test.csv", std::ios::binary);
    bad << "a,b\n1,2,3\n";
  }
  CHECK_THROWS_AS(subord::read_csv("ragged_test.csv"), std::runtime_error);
  std::remove("ragged_test.csv");
}
