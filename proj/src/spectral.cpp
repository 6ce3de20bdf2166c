#include "subord/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace subord {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

DiscreteMeasureSpace DiscreteMeasureSpace::make(
    Eigen::VectorXd weights, Eigen::MatrixXd metric,
    std::optional<double> dimension_hint) {
  const int n = static_cast<int>(weights.size());
  require(n >= 1, "space needs at least one point");
  require(metric.rows() == n && metric.cols() == n,
          "distance matrix size does not match the weights");
  for (int i = 0; i < n; ++i) {
    require(std::isfinite(weights[i]) && weights[i] > 0.0,
            "weights must be positive and finite");
  }
  const double scale = metric.size() == 0 ? 0.0 : metric.cwiseAbs().maxCoeff();
  require(std::isfinite(scale), "distances must be finite");
  for (int i = 0; i < n; ++i) {
    require(metric(i, i) == 0.0, "distance diagonal must be zero");
    for (int j = 0; j < i; ++j) {
      require(metric(i, j) >= 0.0, "distances must be nonnegative");
      require(std::abs(metric(i, j) - metric(j, i)) <= 1e-12 * scale,
              "distance matrix must be symmetric");
    }
  }
  if (n <= 512) {
    const double slack = 1e-9 * std::max(scale, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          require(metric(i, k) <= metric(i, j) + metric(j, k) + slack,
                  "triangle inequality violated");
        }
      }
    }
  }
  DiscreteMeasureSpace s;
  s.weights = std::move(weights);
  s.metric = std::move(metric);
  s.dimension_hint = dimension_hint;
  return s;
}

double DiscreteMeasureSpace::ball_measure(int x, double r) const {
  double m = 0.0;
  for (int y = 0; y < size(); ++y) {
    if (metric(x, y) < r) m += weights[y];
  }
  return m;
}

SelfAdjointOperator SelfAdjointOperator::make(DiscreteMeasureSpace space,
                                              Eigen::MatrixXd matrix) {
  const int n = space.size();
  require(matrix.rows() == n && matrix.cols() == n,
          "operator size does not match the space");
  require(matrix.allFinite(), "operator entries must be finite");
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(space.weights[i] * matrix(i, j)));
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      const double left = space.weights[i] * matrix(i, j);
      const double right = space.weights[j] * matrix(j, i);
      require(std::abs(left - right) <= 1e-12 * std::max(scale, 1e-300),
              "operator is not self-adjoint for the weighted inner product");
    }
  }
  return SelfAdjointOperator(std::move(space), std::move(matrix));
}

SpectralDecomposition decompose(const SelfAdjointOperator& op) {
  const int n = op.space().size();
  const Eigen::VectorXd sqrt_mu = op.space().weights.cwiseSqrt();
  Eigen::MatrixXd sym(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      sym(i, j) = sqrt_mu[i] * op.matrix()(i, j) / sqrt_mu[j];
    }
  }
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigenvalue iteration failed");
  }
  Eigen::VectorXd lambda = solver.eigenvalues();
  const double radius = lambda.cwiseAbs().maxCoeff();
  const double clamp = 1e-12 * radius;
  for (int i = 0; i < n; ++i) {
    if (lambda[i] < -clamp) {
      throw std::domain_error(
          "operator has a genuinely negative eigenvalue: " +
          std::to_string(lambda[i]));
    }
    // eigenvalues within rounding distance of zero become exactly zero so the
    // zero mode can be identified by equality
    if (std::abs(lambda[i]) <= clamp) lambda[i] = 0.0;
  }

  SpectralDecomposition dec;
  dec.space = op.space();
  dec.eigenvalues = std::move(lambda);
  dec.basis = sqrt_mu.cwiseInverse().asDiagonal() * solver.eigenvectors();
  return dec;
}

Eigen::VectorXd SpectralDecomposition::coefficients(
    const Eigen::VectorXd& f) const {
  return basis.transpose() * (space.weights.asDiagonal() * f);
}

Eigen::VectorXcd SpectralDecomposition::coefficients(
    const Eigen::VectorXcd& f) const {
  return basis.transpose() * (space.weights.asDiagonal() * f);
}

Eigen::VectorXd apply_spectral_values(const SpectralDecomposition& dec,
                                      const Eigen::VectorXd& phi,
                                      const Eigen::VectorXd& f) {
  return dec.basis * (phi.cwiseProduct(dec.coefficients(f)));
}

Eigen::VectorXcd apply_spectral_values(const SpectralDecomposition& dec,
                                       const Eigen::VectorXcd& phi,
                                       const Eigen::VectorXd& f) {
  return dec.basis * (phi.cwiseProduct(dec.coefficients(f).cast<std::complex<double>>()));
}

Eigen::VectorXd apply_spectral(const SpectralDecomposition& dec,
                               const std::function<double(double)>& phi,
                               const Eigen::VectorXd& f) {
  Eigen::VectorXd values(dec.size());
  for (int i = 0; i < dec.size(); ++i) values[i] = phi(dec.eigenvalues[i]);
  return apply_spectral_values(dec, values, f);
}

Eigen::VectorXcd apply_spectral_complex(
    const SpectralDecomposition& dec,
    const std::function<std::complex<double>(double)>& phi,
    const Eigen::VectorXd& f) {
  Eigen::VectorXcd values(dec.size());
  for (int i = 0; i < dec.size(); ++i) values[i] = phi(dec.eigenvalues[i]);
  return apply_spectral_values(dec, values, f);
}

Eigen::MatrixXd operator_matrix(const SpectralDecomposition& dec,
                                const Eigen::VectorXd& phi) {
  return dec.basis * phi.asDiagonal() * dec.basis.transpose() *
         dec.space.weights.asDiagonal();
}

Eigen::MatrixXd kernel_matrix(const SpectralDecomposition& dec,
                              const Eigen::VectorXd& phi) {
  Eigen::MatrixXd k = dec.basis * phi.asDiagonal() * dec.basis.transpose();
  return 0.5 * (k + k.transpose()).eval();
}

Eigen::MatrixXcd kernel_matrix(const SpectralDecomposition& dec,
                               const Eigen::VectorXcd& phi) {
  Eigen::MatrixXcd k = dec.basis.cast<std::complex<double>>() *
                       phi.asDiagonal() *
                       dec.basis.transpose().cast<std::complex<double>>();
  return 0.5 * (k + k.transpose()).eval();
}

Eigen::VectorXd zero_mode_projection(const SpectralDecomposition& dec,
                                     const Eigen::VectorXd& f) {
  Eigen::VectorXd phi(dec.size());
  for (int i = 0; i < dec.size(); ++i) {
    phi[i] = dec.eigenvalues[i] == 0.0 ? 1.0 : 0.0;
  }
  return apply_spectral_values(dec, phi, f);
}

// ---------------------------------------------------------------------------

MarkovAudit markov_audit(const SpectralDecomposition& dec,
                         const std::vector<double>& times) {
  MarkovAudit audit;
  const int n = dec.size();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  audit.min_entry = 0.0;
  audit.max_row_sum = 0.0;
  audit.max_col_sum = 0.0;

  auto witness = [&](double t, int r, int c) {
    audit.witness_time = t;
    audit.witness_row = r;
    audit.witness_col = c;
  };

  for (double t : times) {
    if (!(t >= 0.0)) throw std::invalid_argument("audit times must be >= 0");
    Eigen::VectorXd phi(n);
    for (int i = 0; i < n; ++i) phi[i] = std::exp(-t * dec.eigenvalues[i]);
    const Eigen::MatrixXd m = operator_matrix(dec, phi);

    for (int i = 0; i < n; ++i) {
      double row = 0.0;
      for (int j = 0; j < n; ++j) {
        row += std::abs(m(i, j));
        if (m(i, j) < audit.min_entry) {
          audit.min_entry = m(i, j);
          if (m(i, j) < -1e-10) witness(t, i, j);
        }
      }
      if (row > audit.max_row_sum) {
        audit.max_row_sum = row;
        if (row > 1.0 + 1e-10) witness(t, i, -1);
      }
    }
    for (int j = 0; j < n; ++j) {
      double col = 0.0;
      for (int i = 0; i < n; ++i) {
        col += dec.space.weights[i] * std::abs(m(i, j));
      }
      col /= dec.space.weights[j];
      if (col > audit.max_col_sum) {
        audit.max_col_sum = col;
        if (col > 1.0 + 1e-10) witness(t, -1, j);
      }
    }
    const double cons = ((m * ones) - ones).cwiseAbs().maxCoeff();
    if (cons > audit.max_conservativity_error) {
      audit.max_conservativity_error = cons;
      if (cons > 1e-10) witness(t, -1, -1);
    }
  }

  audit.positive = audit.min_entry >= -1e-10;
  audit.linf_contractive = audit.max_row_sum <= 1.0 + 1e-10;
  audit.l1_contractive = audit.max_col_sum <= 1.0 + 1e-10;
  audit.conservative = audit.max_conservativity_error <= 1e-10;
  return audit;
}

VerificationReport markov_audit_report(const MarkovAudit& audit) {
  VerificationReport r;
  r.add("heat-positivity", audit.min_entry, -1e-10, audit.positive,
        "smallest heat matrix entry over the audited times");
  r.add("heat-linf-contraction", audit.max_row_sum, 1.0 + 1e-10,
        audit.linf_contractive, "largest row absolute sum");
  r.add("heat-l1-contraction", audit.max_col_sum, 1.0 + 1e-10,
        audit.l1_contractive, "largest weighted column sum");
  r.add("heat-conservativity", audit.max_conservativity_error, 1e-10,
        audit.conservative, "largest deviation of e^{-tL} 1 from 1");
  return r;
}

// ---------------------------------------------------------------------------

SelfAdjointOperator make_cycle(int n) {
  require(n >= 3, "cycle needs at least three points");
  Eigen::VectorXd mu = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd rho(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int d = std::abs(i - j);
      rho(i, j) = std::min(d, n - d);
    }
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    L(i, (i + 1) % n) -= 0.5;
    L(i, (i + n - 1) % n) -= 0.5;
  }
  return SelfAdjointOperator::make(
      DiscreteMeasureSpace::make(std::move(mu), std::move(rho), 1.0),
      std::move(L));
}

SelfAdjointOperator make_path(int n) {
  require(n >= 2, "path needs at least two points");
  Eigen::VectorXd mu = Eigen::VectorXd::Ones(n);
  Eigen::MatrixXd rho(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rho(i, j) = std::abs(i - j);
  }
  // lazy reflecting walk: interior moves 1/2 left / 1/2 right, endpoints
  // hold with probability 1/2
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    if (i > 0) P(i, i - 1) = 0.5;
    if (i + 1 < n) P(i, i + 1) = 0.5;
    if (i == 0 || i == n - 1) P(i, i) = 0.5;
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n) - P;
  return SelfAdjointOperator::make(
      DiscreteMeasureSpace::make(std::move(mu), std::move(rho), 1.0),
      std::move(L));
}

SelfAdjointOperator make_grid_interval(int n) {
  require(n >= 2, "grid needs at least two points");
  const double h = 1.0 / (n - 1);
  Eigen::VectorXd mu = Eigen::VectorXd::Constant(n, h);
  Eigen::MatrixXd rho(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) rho(i, j) = h * std::abs(i - j);
  }
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  const double inv_h2 = 1.0 / (h * h);
  for (int i = 0; i < n; ++i) {
    if (i > 0) {
      L(i, i) += inv_h2;
      L(i, i - 1) -= inv_h2;
    }
    if (i + 1 < n) {
      L(i, i) += inv_h2;
      L(i, i + 1) -= inv_h2;
    }
  }
  return SelfAdjointOperator::make(
      DiscreteMeasureSpace::make(std::move(mu), std::move(rho), 1.0),
      std::move(L));
}

SelfAdjointOperator read_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open operator file: " + path);
  int n = 0;
  if (!(in >> n) || n < 1) {
    throw std::invalid_argument("operator file: bad size header");
  }
  Eigen::VectorXd mu(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> mu[i])) {
      throw std::invalid_argument("operator file: truncated weights");
    }
  }
  Eigen::MatrixXd rho(n, n), L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(in >> rho(i, j))) {
        throw std::invalid_argument("operator file: truncated distances");
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(in >> L(i, j))) {
        throw std::invalid_argument("operator file: truncated operator rows");
      }
    }
  }
  return SelfAdjointOperator::make(
      DiscreteMeasureSpace::make(std::move(mu), std::move(rho)), std::move(L));
}

void write_operator(const std::string& path, const SelfAdjointOperator& op) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write operator file: " + path);
  const int n = op.space().size();
  out << n << "\n";
  char buf[64];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << buf << sep;
  };
  for (int i = 0; i < n; ++i) put(op.space().weights[i], i + 1 < n ? ' ' : '\n');
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) put(op.space().metric(i, j), j + 1 < n ? ' ' : '\n');
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) put(op.matrix()(i, j), j + 1 < n ? ' ' : '\n');
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace subord
