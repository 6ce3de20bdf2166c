#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subord/report.hpp"

namespace subord {

// A finite set of points carrying positive weights and a symmetric
// metric-like distance with zero diagonal.  The measure of a set is the sum
// of its weights.  `dimension_hint` optionally records the expected volume
// growth exponent for consumers that need one.
struct DiscreteMeasureSpace {
  Eigen::VectorXd weights;
  Eigen::MatrixXd metric;
  std::optional<double> dimension_hint;

  int size() const { return static_cast<int>(weights.size()); }
  double total_mass() const { return weights.sum(); }

  // Validates positivity of the weights, symmetry / zero diagonal /
  // nonnegativity of the distance matrix and, for sizes up to 512, the
  // triangle inequality.  Throws std::invalid_argument on violation.
  static DiscreteMeasureSpace make(Eigen::VectorXd weights,
                                   Eigen::MatrixXd metric,
                                   std::optional<double> dimension_hint = {});

  // Weighted measure of the open ball {y : rho(x, y) < r}.
  double ball_measure(int x, double r) const;
};

// A linear operator on the weighted space, self-adjoint with respect to the
// weighted inner product <f, g> = sum_x f(x) g(x) mu(x).
class SelfAdjointOperator {
 public:
  // Validates mu(x) L(x,y) = mu(y) L(y,x) within 1e-12 of the largest entry
  // of the weighted matrix.  Throws std::invalid_argument on violation.
  static SelfAdjointOperator make(DiscreteMeasureSpace space,
                                  Eigen::MatrixXd matrix);

  const DiscreteMeasureSpace& space() const { return space_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

 private:
  SelfAdjointOperator(DiscreteMeasureSpace space, Eigen::MatrixXd matrix)
      : space_(std::move(space)), matrix_(std::move(matrix)) {}
  DiscreteMeasureSpace space_;
  Eigen::MatrixXd matrix_;
};

// Eigenvalues (ascending, tiny negatives clamped to zero) and an
// eigenbasis orthonormal in the weighted inner product.  Column i of `basis`
// is the eigenvector for eigenvalues[i].
struct SpectralDecomposition {
  DiscreteMeasureSpace space;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd basis;

  int size() const { return static_cast<int>(eigenvalues.size()); }

  // Coefficients of f in the eigenbasis: c_i = <f, basis_i>.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& f) const;
  Eigen::VectorXcd coefficients(const Eigen::VectorXcd& f) const;
};

// Diagonalizes the operator.  Eigenvalues below -1e-12 times the spectral
// radius are rejected (std::domain_error); small negatives are clamped to 0.
SpectralDecomposition decompose(const SelfAdjointOperator& op);

// phi(L) f for a scalar function phi evaluated on the spectrum.
Eigen::VectorXd apply_spectral(const SpectralDecomposition& dec,
                               const std::function<double(double)>& phi,
                               const Eigen::VectorXd& f);
Eigen::VectorXcd apply_spectral_complex(
    const SpectralDecomposition& dec,
    const std::function<std::complex<double>(double)>& phi,
    const Eigen::VectorXd& f);

// Same with the symbol already tabulated per eigenvalue.
Eigen::VectorXd apply_spectral_values(const SpectralDecomposition& dec,
                                      const Eigen::VectorXd& phi,
                                      const Eigen::VectorXd& f);
Eigen::VectorXcd apply_spectral_values(const SpectralDecomposition& dec,
                                       const Eigen::VectorXcd& phi,
                                       const Eigen::VectorXd& f);

// Matrix of phi(L) acting on functions: (phi(L) f)(x) = sum_y M(x,y) f(y).
Eigen::MatrixXd operator_matrix(const SpectralDecomposition& dec,
                                const Eigen::VectorXd& phi);

// Integral kernel k(x,y) with phi(L) f(x) = sum_y k(x,y) f(y) mu(y); it is
// symmetric in (x, y).
Eigen::MatrixXd kernel_matrix(const SpectralDecomposition& dec,
                              const Eigen::VectorXd& phi);
Eigen::MatrixXcd kernel_matrix(const SpectralDecomposition& dec,
                               const Eigen::VectorXcd& phi);

// Orthogonal projection onto the kernel of L (eigenvalue exactly 0 after
// clamping).
Eigen::VectorXd zero_mode_projection(const SpectralDecomposition& dec,
                                     const Eigen::VectorXd& f);

// ---------------------------------------------------------------------------
// Markov property audit for the heat semigroup e^{-tL}
// ---------------------------------------------------------------------------

struct MarkovAudit {
  bool positive = true;           // entries of e^{-tL} >= -1e-10
  bool linf_contractive = true;   // row absolute sums <= 1 + 1e-10
  bool l1_contractive = true;     // weighted column sums <= 1 + 1e-10
  bool conservative = true;       // e^{-tL} 1 = 1 within 1e-10
  double min_entry = 0.0;
  double max_row_sum = 0.0;
  double max_col_sum = 0.0;
  double max_conservativity_error = 0.0;
  double witness_time = 0.0;  // time of the worst violation, 0 if none
  int witness_row = -1;
  int witness_col = -1;

  bool all_pass() const {
    return positive && linf_contractive && l1_contractive && conservative;
  }
};

MarkovAudit markov_audit(const SpectralDecomposition& dec,
                         const std::vector<double>& times);

VerificationReport markov_audit_report(const MarkovAudit& audit);

// ---------------------------------------------------------------------------
// Shipped models
// ---------------------------------------------------------------------------

// Simple random walk on the cycle Z_N: L = I - P with P the nearest-neighbor
// step, counting measure, graph metric min(|i-j|, N-|i-j|).
SelfAdjointOperator make_cycle(int n);

// Lazy reflecting random walk on the path {0..N-1}: interior steps 1/2 each
// way, endpoints hold with probability 1/2.
SelfAdjointOperator make_path(int n);

// Three-point Neumann second-difference operator on a uniform grid over
// [0, 1] with spacing h = 1/(N-1), scaled by h^{-2}, weights mu = h.
SelfAdjointOperator make_grid_interval(int n);

// Plain-text operator file: size N, then N weights, then the N x N distance
// rows, then the N x N operator rows, whitespace separated.
SelfAdjointOperator read_operator(const std::string& path);
void write_operator(const std::string& path, const SelfAdjointOperator& op);

}  // namespace subord
