#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmc/error.hpp"

namespace cmc::rgflow {

// Couplings g_a at scale k, for the linearized flow dg_a/dk = sum_b B_ab(k) g_b.
struct CouplingVector {
  Eigen::VectorXd g;
  double k = 1.0;
};

// The linearization matrix B_ab(k): a constant matrix, a constant matrix
// scaled by a power of k, or an arbitrary callable.
class BetaMatrix {
 public:
  static BetaMatrix constant(Eigen::MatrixXd b) {
    check_square(b);
    const Eigen::Index n = b.rows();
    return BetaMatrix([b = std::move(b)](double) { return b; }, n);
  }

  // B(k) = base * k^p. Shares eigenvectors with `base` at every scale.
  static BetaMatrix scaled_power(Eigen::MatrixXd base, double p) {
    check_square(base);
    const Eigen::Index n = base.rows();
    return BetaMatrix(
        [base = std::move(base), p](double k) { return (base * std::pow(k, p)).eval(); }, n);
  }

  static BetaMatrix of(std::function<Eigen::MatrixXd(double)> fn, Eigen::Index dim) {
    return BetaMatrix(std::move(fn), dim);
  }

  Eigen::MatrixXd at(double k) const {
    Eigen::MatrixXd b = fn_(k);
    require(b.rows() == dim_ && b.cols() == dim_, errc::dimension_mismatch,
            "beta matrix changed dimension at k = " + std::to_string(k));
    require(b.allFinite(), errc::invalid_argument,
            "beta matrix has non-finite entries at k = " + std::to_string(k));
    return b;
  }

  Eigen::Index dim() const { return dim_; }

 private:
  BetaMatrix(std::function<Eigen::MatrixXd(double)> fn, Eigen::Index dim)
      : fn_(std::move(fn)), dim_(dim) {}

  static void check_square(const Eigen::MatrixXd& b) {
    require(b.rows() == b.cols(), errc::dimension_mismatch, "beta matrix must be square");
    require(b.allFinite(), errc::invalid_argument, "beta matrix has non-finite entries");
  }

  std::function<Eigen::MatrixXd(double)> fn_;
  Eigen::Index dim_;
};

// Real eigensystem B = sum_n lambda_n u_n v_n^T with biorthonormal left and
// right vectors, sum_n u_an v_bn = delta_ab. Columns of `right` are u_n,
// columns of `left` are v_n; eigenvalues sorted ascending.
struct EigenSystem {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd right;
  Eigen::MatrixXd left;

  Eigen::Index dim() const { return eigenvalues.size(); }

  Eigen::MatrixXd reconstruct() const {
    return right * eigenvalues.asDiagonal() * left.transpose();
  }

  static EigenSystem identity(Eigen::Index n) {
    EigenSystem es;
    es.eigenvalues = Eigen::VectorXd::Ones(n);
    es.right = Eigen::MatrixXd::Identity(n, n);
    es.left = Eigen::MatrixXd::Identity(n, n);
    return es;
  }
};

// Diagonalize B(k). Symmetric input takes the self-adjoint path (orthonormal,
// left == right); otherwise a general real eigensystem is computed and the
// left vectors come from inverting the right-vector matrix, which makes the
// biorthonormality exact to solver precision. Complex spectra and (near-)
// defective matrices are rejected, not regularized.
inline EigenSystem diagonalize(const BetaMatrix& beta, double k) {
  const Eigen::MatrixXd b = beta.at(k);
  const Eigen::Index n = b.rows();
  EigenSystem es;

  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if ((b - b.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(b);
    require(solver.info() == Eigen::Success, errc::defective_matrix,
            "self-adjoint eigendecomposition failed");
    es.eigenvalues = solver.eigenvalues();  // ascending
    es.right = solver.eigenvectors();
    es.left = es.right;
    return es;
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(b);
  require(solver.info() == Eigen::Success, errc::defective_matrix, "eigendecomposition failed");
  const Eigen::VectorXcd values = solver.eigenvalues();
  const double radius = values.cwiseAbs().maxCoeff();
  require(values.imag().cwiseAbs().maxCoeff() <= 1e-9 * std::max(radius, 1e-300),
          errc::complex_spectrum, "beta matrix has a complex eigenvalue pair");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index a, Eigen::Index c) { return values(a).real() < values(c).real(); });

  es.eigenvalues.resize(n);
  es.right.resize(n, n);
  const Eigen::MatrixXcd vectors = solver.eigenvectors();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    es.eigenvalues(i) = values(src).real();
    es.right.col(i) = vectors.col(src).real();
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(es.right, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const double smin = svd.singularValues()(n - 1);
  const double smax = svd.singularValues()(0);
  require(smin > 1e-12 * smax, errc::defective_matrix,
          "eigenvector matrix is numerically singular (defective input)");
  es.left = es.right.inverse().transpose();
  return es;
}

struct BasisFunction {
  std::string name;
  std::function<double(std::span<const double>)> fn;
};

// H = sum_a g_a xi_a with named basis measurements xi_a.
struct Hamiltonian {
  Eigen::VectorXd couplings;
  std::vector<BasisFunction> basis;
};

// Basis that reads coordinate a of the feature vector.
inline std::vector<BasisFunction> coordinate_basis(std::size_t n) {
  std::vector<BasisFunction> basis;
  basis.reserve(n);
  for (std::size_t a = 0; a < n; ++a)
    basis.push_back({"xi_" + std::to_string(a),
                     [a](std::span<const double> x) { return x[a]; }});
  return basis;
}

inline double evaluate_hamiltonian(const Hamiltonian& h, std::span<const double> x) {
  require(static_cast<std::size_t>(h.couplings.size()) == h.basis.size(),
          errc::dimension_mismatch, "couplings and basis differ in length");
  double sum = 0.0;
  for (Eigen::Index a = 0; a < h.couplings.size(); ++a)
    sum += h.couplings(a) * h.basis[static_cast<std::size_t>(a)].fn(x);
  return sum;
}

namespace detail {

inline void check_scales(double k0, double k1, int steps) {
  require(k0 > 0 && k1 > 0, errc::non_positive_scale,
          "scales must be positive (k0 = " + std::to_string(k0) + ", k1 = " +
              std::to_string(k1) + ")");
  require(steps >= 1, errc::invalid_argument, "steps must be >= 1");
}

}  // namespace detail

// Classical 4th-order step for dy/dk = f(k, y), composed over uniform
// substeps. Works on scalars and Eigen vectors alike.
template <typename State, typename Rhs>
State rk4_integrate(State y, const Rhs& f, double k0, double k1, int steps) {
  const double h = (k1 - k0) / steps;
  for (int i = 0; i < steps; ++i) {
    const double k = k0 + i * h;
    const State s1 = f(k, y);
    const State s2 = f(k + h / 2, State(y + (h / 2) * s1));
    const State s3 = f(k + h / 2, State(y + (h / 2) * s2));
    const State s4 = f(k + h, State(y + h * s3));
    y = State(y + (h / 6) * (s1 + 2 * s2 + 2 * s3 + s4));
  }
  return y;
}

// Decoupled mode flow dh/dk = lambda(k) h from k0 to k1 (either direction).
inline double flow_decoupled(double h0, const std::function<double(double)>& lambda, double k0,
                             double k1, int steps) {
  detail::check_scales(k0, k1, steps);
  return rk4_integrate(h0, [&](double k, double y) { return lambda(k) * y; }, k0, k1, steps);
}

// Full linear flow dg/dk = B(k) g integrated directly.
inline CouplingVector flow_full(const CouplingVector& g0, const BetaMatrix& beta, double k1,
                                int steps) {
  detail::check_scales(g0.k, k1, steps);
  require(g0.g.size() == beta.dim(), errc::dimension_mismatch,
          "coupling vector and beta matrix differ in dimension");
  CouplingVector out;
  out.k = k1;
  out.g = rk4_integrate(
      Eigen::VectorXd(g0.g),
      [&](double k, const Eigen::VectorXd& y) { return Eigen::VectorXd(beta.at(k) * y); }, g0.k,
      k1, steps);
  return out;
}

// Interface slot for a user-supplied right-hand side dg/dk = f(k, g); same
// stepper, no claims beyond local accuracy.
inline Eigen::VectorXd flow_general(
    const Eigen::VectorXd& g0,
    const std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>& rhs, double k0,
    double k1, int steps) {
  detail::check_scales(k0, k1, steps);
  return rk4_integrate(Eigen::VectorXd(g0), rhs, k0, k1, steps);
}

enum class CouplingTag { Relevant, Irrelevant, Marginal };

inline const char* coupling_tag_name(CouplingTag t) {
  switch (t) {
    case CouplingTag::Relevant: return "relevant";
    case CouplingTag::Irrelevant: return "irrelevant";
    case CouplingTag::Marginal: return "marginal";
  }
  return "?";
}

// Modes whose amplitude grows as the scale decreases (lambda < 0) are the
// relevant ones; growth requires looking against the flow direction.
inline std::vector<CouplingTag> classify_couplings(const EigenSystem& es, double tol = 1e-12) {
  std::vector<CouplingTag> tags;
  tags.reserve(static_cast<std::size_t>(es.eigenvalues.size()));
  for (Eigen::Index n = 0; n < es.eigenvalues.size(); ++n) {
    const double l = es.eigenvalues(n);
    tags.push_back(l < -tol   ? CouplingTag::Relevant
                   : l > tol ? CouplingTag::Irrelevant
                             : CouplingTag::Marginal);
  }
  return tags;
}

// Rotate into the eigenmode basis: h_n = sum_a v_an g_a, eta_n = sum_a u_an
// xi_a. Biorthonormality makes the energy the same function in both forms.
inline Hamiltonian rotate_basis(const Hamiltonian& h, const EigenSystem& es) {
  require(h.couplings.size() == es.dim(), errc::dimension_mismatch,
          "hamiltonian and eigensystem differ in dimension");
  require(static_cast<std::size_t>(h.couplings.size()) == h.basis.size(),
          errc::dimension_mismatch, "couplings and basis differ in length");
  Hamiltonian out;
  out.couplings = es.left.transpose() * h.couplings;
  const auto base = std::make_shared<std::vector<BasisFunction>>(h.basis);
  for (Eigen::Index n = 0; n < es.dim(); ++n) {
    Eigen::VectorXd weights = es.right.col(n);
    out.basis.push_back({"eta_" + std::to_string(n),
                         [base, weights](std::span<const double> x) {
                           double sum = 0.0;
                           for (Eigen::Index a = 0; a < weights.size(); ++a)
                             sum += weights(a) * (*base)[static_cast<std::size_t>(a)].fn(x);
                           return sum;
                         }});
  }
  return out;
}

}  // namespace cmc::rgflow
