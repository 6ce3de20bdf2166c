#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace subord {

// Thrown when an adaptive rule exhausts its panel budget before reaching the
// requested tolerance.  `achieved` carries the error estimate at give-up time
// so callers can report how close the run came.
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_estimate)
      : std::runtime_error(what), achieved(achieved_estimate) {}
  double achieved;
};

inline double error_norm(double v) { return std::abs(v); }
inline double error_norm(const std::complex<double>& v) { return std::abs(v); }
template <typename Derived>
double error_norm(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

template <typename T>
struct QuadratureResult {
  T value;
  double error = 0.0;        // estimate of the absolute error (max-norm)
  std::size_t panels = 0;
  std::size_t evaluations = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod pair on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.99145537112081263920685469752633, 0.94910791234275852452618968404785,
    0.86486442335976907278971278864093, 0.74153118559939443986386477328079,
    0.58608723546769113029414483825873, 0.40584515137739716690660641207696,
    0.20778495500789846760068940377324, 0.0};
inline constexpr double kKronrodWeights[8] = {
    0.02293532201052922496373200805897, 0.06309209262997855329070066318920,
    0.10479001032225018383987632254152, 0.14065325971552591874518959051024,
    0.16900472663926790282658342659855, 0.19035057806478540991325640242101,
    0.20443294007529889241416199923465, 0.20948214108472782801299917489171};
inline constexpr double kGaussWeights[4] = {
    0.12948496616886969327061143267908, 0.27970539148927666790146777142378,
    0.38183005050511894495036977548898, 0.41795918367346938775510204081633};

template <typename F>
auto gauss_kronrod_panel(F&& f, double a, double b, double* err)
    -> decltype(f(a)) {
  using T = decltype(f(a));
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  T fc = f(mid);
  T kron = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    T lo = f(mid - dx);
    T hi = f(mid + dx);
    T pair = lo + hi;
    kron += pair * kKronrodWeights[i];
    if (i % 2 == 1) gauss += pair * kGaussWeights[i / 2];
  }
  kron *= half;
  gauss *= half;
  *err = error_norm(T(kron - gauss));
  return kron;
}

template <typename T>
struct Panel {
  double a, b, err;
  T value;
};

// Summation in position order with pairwise reduction keeps the rounding
// error logarithmic in the panel count, which matters for long oscillatory
// integrals whose panel values nearly cancel.
template <typename T>
T pairwise_value_sum(const std::vector<Panel<T>>& panels, std::size_t lo,
                     std::size_t hi) {
  if (hi - lo == 1) return panels[lo].value;
  const std::size_t mid = lo + (hi - lo) / 2;
  return T(pairwise_value_sum(panels, lo, mid) +
           pairwise_value_sum(panels, mid, hi));
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod integration over the partition given by
// `points` (strictly increasing, at least two entries) to an absolute
// tolerance (max-norm for vector-valued integrands).  The panel with the
// largest error estimate is bisected until the total estimate is below
// abs_tol or the budget runs out; in the latter case a QuadratureError is
// thrown unless the overshoot is within `slack` of the tolerance.  Seeding a
// partition matters whenever the integrand has structure far narrower than
// the full interval, which blind bisection from one panel can miss entirely.
template <typename F>
auto integrate_adaptive_partition(F&& f, const std::vector<double>& points,
                                  double abs_tol,
                                  std::size_t max_panels = 20000,
                                  double slack = 1.0)
    -> QuadratureResult<decltype(f(points.front()))> {
  using T = decltype(f(points.front()));
  if (points.size() < 2) {
    throw std::invalid_argument("integration partition needs two points");
  }
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i] > points[i - 1])) {
      throw std::invalid_argument("integration partition must increase");
    }
  }

  auto cmp = [](const detail::Panel<T>& p, const detail::Panel<T>& q) {
    if (p.err != q.err) return p.err < q.err;
    return p.a > q.a;  // deterministic tie-break
  };
  std::priority_queue<detail::Panel<T>, std::vector<detail::Panel<T>>,
                      decltype(cmp)>
      heap(cmp);

  QuadratureResult<T> result;
  double total_err = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    double err0 = 0.0;
    T v0 = detail::gauss_kronrod_panel(f, points[i - 1], points[i], &err0);
    heap.push({points[i - 1], points[i], err0, v0});
    result.evaluations += 15;
    total_err += err0;
  }

  while (total_err > abs_tol && heap.size() < max_panels) {
    detail::Panel<T> worst = heap.top();
    // Nothing left worth splitting: every panel is at rounding level.
    if (worst.err <= 1e-300) break;
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // interval at double resolution
      worst.err = 0.0;
      heap.push(worst);
      total_err = 0.0;
      for (auto copy = heap; !copy.empty(); copy.pop())
        total_err += copy.top().err;
      if (total_err <= abs_tol) break;
      continue;
    }
    double el = 0.0, er = 0.0;
    T vl = detail::gauss_kronrod_panel(f, worst.a, mid, &el);
    T vr = detail::gauss_kronrod_panel(f, mid, worst.b, &er);
    result.evaluations += 30;
    total_err += el + er - worst.err;
    heap.push({worst.a, mid, el, vl});
    heap.push({mid, worst.b, er, vr});
  }

  result.panels = heap.size();
  std::vector<detail::Panel<T>> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const detail::Panel<T>& p, const detail::Panel<T>& q) {
              return p.a < q.a;
            });
  result.value = detail::pairwise_value_sum(panels, 0, panels.size());
  double recomputed_err = 0.0;
  for (const auto& p : panels) recomputed_err += p.err;
  result.error = recomputed_err;
  if (result.error > abs_tol * (1.0 + slack) && result.panels >= max_panels) {
    throw QuadratureError(
        "adaptive quadrature did not converge: error estimate " +
            std::to_string(result.error) + " > tolerance " +
            std::to_string(abs_tol),
        result.error);
  }
  return result;
}

template <typename F>
auto integrate_adaptive(F&& f, double a, double b, double abs_tol,
                        std::size_t max_panels = 20000, double slack = 1.0)
    -> QuadratureResult<decltype(f(a))> {
  using T = decltype(f(a));
  if (!(b > a)) {
    T zero = f(a) * 0.0;
    return QuadratureResult<T>{zero, 0.0, 0, 1};
  }
  return integrate_adaptive_partition(f, std::vector<double>{a, b}, abs_tol,
                                      max_panels, slack);
}

}  // namespace subord
