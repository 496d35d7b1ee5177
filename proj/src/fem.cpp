#include "hsv/fem.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "hsv/domains.hpp"
#include "hsv/error.hpp"

namespace hsv {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Shifted operator K + sigma M, applied through its inverse.
class ShiftedInverse {
 public:
  ShiftedInverse(const SparseSym& k_mat, const SparseSym& m_mat, InnerSolver kind) : kind_(kind) {
    const double sigma = 1e-3 * k_mat.diagonal().sum() / static_cast<double>(k_mat.rows());
    shifted_ = k_mat + sigma * m_mat;
    if (kind_ == InnerSolver::sparse_ldlt) {
      ldlt_.compute(Eigen::SparseMatrix<double>(shifted_));
      if (ldlt_.info() != Eigen::Success) {
        throw Error(ErrorCode::ConvergenceFailure, "factorization of the shifted operator failed");
      }
    } else {
      inv_diag_ = shifted_.diagonal().cwiseInverse();
    }
  }

  MatrixXd apply(const MatrixXd& rhs) const {
    if (kind_ == InnerSolver::sparse_ldlt) return ldlt_.solve(rhs);
    MatrixXd out(rhs.rows(), rhs.cols());
    for (Eigen::Index c = 0; c < rhs.cols(); ++c) out.col(c) = pcg(rhs.col(c));
    return out;
  }

 private:
  VectorXd pcg(const VectorXd& b) const {
    VectorXd x = VectorXd::Zero(b.size());
    VectorXd r = b;
    VectorXd z = inv_diag_.cwiseProduct(r);
    VectorXd p = z;
    double rz = r.dot(z);
    const double target = 1e-10 * b.norm();
    for (Eigen::Index it = 0; it < 20 * b.size() && r.norm() > target; ++it) {
      const VectorXd ap = shifted_ * p;
      const double alpha = rz / p.dot(ap);
      x += alpha * p;
      r -= alpha * ap;
      z = inv_diag_.cwiseProduct(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    if (r.norm() > target) throw Error(ErrorCode::ConvergenceFailure, "inner conjugate gradient stalled");
    return x;
  }

  InnerSolver kind_;
  SparseSym shifted_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  VectorXd inv_diag_;
};

// Columns of x become M-orthonormal (Cholesky QR, applied twice).
void m_orthonormalize(MatrixXd& x, const SparseSym& m_mat) {
  for (int pass = 0; pass < 2; ++pass) {
    const MatrixXd gram = x.transpose() * (m_mat * x);
    Eigen::LLT<MatrixXd> llt(0.5 * (gram + gram.transpose()));
    if (llt.info() != Eigen::Success) {
      // Rank-deficient block: fall back to a symmetric eigen-basis.
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (gram + gram.transpose()));
      const VectorXd vals = es.eigenvalues().cwiseMax(1e-300);
      x = x * es.eigenvectors() * vals.cwiseSqrt().cwiseInverse().asDiagonal();
      continue;
    }
    x = llt.matrixU().solve<Eigen::OnTheRight>(x);
  }
}

struct RawPairs {
  VectorXd values;
  MatrixXd vectors;
  std::vector<double> residuals;
  int iterations = 0;
};

// Shift-invert subspace iteration with Rayleigh-Ritz. `deflate` (possibly
// empty) is an M-normalized vector kept out of every iterate.
RawPairs subspace_iteration(const SparseSym& k_mat, const SparseSym& m_mat, int wanted, const VectorXd& deflate,
                            const EigenOptions& opts) {
  const Eigen::Index n = k_mat.rows();
  const Eigen::Index free_dims = n - (deflate.size() > 0 ? 1 : 0);
  const Eigen::Index block = std::min<Eigen::Index>(free_dims, std::max<Eigen::Index>(2 * wanted, wanted + 8));
  if (wanted > free_dims) throw Error(ErrorCode::InvalidArgument, "more eigenpairs requested than unknowns");

  const ShiftedInverse op(k_mat, m_mat, opts.inner);
  XorShift rng(opts.seed);
  MatrixXd x(n, block);
  for (Eigen::Index j = 0; j < block; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = rng.uniform(-0.5, 0.5);
  }
  const auto project = [&](MatrixXd& y) {
    if (deflate.size() == 0) return;
    const Eigen::RowVectorXd coeff = (m_mat * deflate).transpose() * y;
    y -= deflate * coeff;
  };
  project(x);
  m_orthonormalize(x, m_mat);

  RawPairs out;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    MatrixXd y = op.apply(m_mat * x);
    project(y);
    m_orthonormalize(y, m_mat);
    project(y);
    const MatrixXd reduced = y.transpose() * (k_mat * y);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (reduced + reduced.transpose()));
    x = y * es.eigenvectors();

    out.values = es.eigenvalues().head(wanted);
    out.vectors = x.leftCols(wanted);
    out.residuals.assign(static_cast<std::size_t>(wanted), 0.0);
    const MatrixXd kx = k_mat * out.vectors;
    const MatrixXd mx = m_mat * out.vectors;
    bool converged = true;
    for (int i = 0; i < wanted; ++i) {
      const double mu = out.values(i);
      const double res = (kx.col(i) - mu * mx.col(i)).norm() / ((1.0 + std::fabs(mu)) * mx.col(i).norm());
      out.residuals[static_cast<std::size_t>(i)] = res;
      converged = converged && res <= opts.tol;
    }
    out.iterations = it;
    if (converged) return out;
  }
  double worst = 0.0;
  for (double r : out.residuals) worst = std::max(worst, r);
  throw Error(ErrorCode::ConvergenceFailure, "eigensolver did not converge in " + std::to_string(opts.max_iterations) +
                                                 " iterations; worst relative residual " + std::to_string(worst));
}

// Eigenvector signs are fixed so the entry of largest magnitude is positive.
void normalize_signs(MatrixXd& v) {
  for (Eigen::Index c = 0; c < v.cols(); ++c) {
    Eigen::Index arg = 0;
    v.col(c).cwiseAbs().maxCoeff(&arg);
    if (v(arg, c) < 0.0) v.col(c) *= -1.0;
  }
}

}  // namespace

SparseSym assemble_stiffness(const TriMesh& mesh) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Point p0 = mesh.vertices[tri[0]], p1 = mesh.vertices[tri[1]], p2 = mesh.vertices[tri[2]];
    const double area = mesh.triangle_area(t);
    // Gradient of the hat function i is (b_i, c_i) / (2A).
    const double b[3] = {p1.y - p2.y, p2.y - p0.y, p0.y - p1.y};
    const double c[3] = {p2.x - p1.x, p0.x - p2.x, p1.x - p0.x};
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) trip.emplace_back(tri[i], tri[j], (b[i] * b[j] + c[i] * c[j]) / (4.0 * area));
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  SparseSym k_mat(n, n);
  k_mat.setFromTriplets(trip.begin(), trip.end());
  return k_mat;
}

SparseSym assemble_mass(const TriMesh& mesh, bool lumped) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(9 * mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    const double area = mesh.triangle_area(t);
    for (int i = 0; i < 3; ++i) {
      if (lumped) {
        trip.emplace_back(tri[i], tri[i], area / 3.0);
        continue;
      }
      for (int j = 0; j < 3; ++j) trip.emplace_back(tri[i], tri[j], area / 12.0 * (i == j ? 2.0 : 1.0));
    }
  }
  const auto n = static_cast<Eigen::Index>(mesh.vertices.size());
  SparseSym m_mat(n, n);
  m_mat.setFromTriplets(trip.begin(), trip.end());
  return m_mat;
}

Spectrum solve_neumann(const SparseSym& k_mat, const SparseSym& m_mat, int k, const EigenOptions& opts) {
  if (k < 2) throw Error(ErrorCode::InvalidArgument, "solve_neumann needs k >= 2");
  const Eigen::Index n = k_mat.rows();
  VectorXd constant = VectorXd::Ones(n);
  constant /= std::sqrt(constant.dot(m_mat * constant));

  const RawPairs pairs = subspace_iteration(k_mat, m_mat, k - 1, constant, opts);

  Spectrum s;
  s.boundary_condition = BoundaryCondition::neumann;
  s.iterations = pairs.iterations;
  s.eigenvectors.resize(n, k);
  s.eigenvectors.col(0) = constant;
  s.eigenvectors.rightCols(k - 1) = pairs.vectors;
  normalize_signs(s.eigenvectors);
  const VectorXd mc = m_mat * constant;
  s.eigenvalues.push_back(0.0);
  s.residuals.push_back((k_mat * constant).norm() / mc.norm());
  for (int i = 0; i < k - 1; ++i) {
    s.eigenvalues.push_back(pairs.values(i));
    s.residuals.push_back(pairs.residuals[static_cast<std::size_t>(i)]);
  }
  return s;
}

Spectrum solve_dirichlet(const TriMesh& mesh, int k, const EigenOptions& opts) {
  std::vector<int> interior;
  std::vector<int> slot(mesh.vertices.size(), -1);
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (mesh.interior_mask[v]) {
      slot[v] = static_cast<int>(interior.size());
      interior.push_back(static_cast<int>(v));
    }
  }
  if (interior.empty()) throw Error(ErrorCode::NoInteriorVertices, "mesh has no interior vertices");

  const SparseSym k_full = assemble_stiffness(mesh);
  const SparseSym m_full = assemble_mass(mesh);
  const auto reduce = [&](const SparseSym& full) {
    std::vector<Eigen::Triplet<double>> trip;
    for (Eigen::Index r = 0; r < full.outerSize(); ++r) {
      if (slot[static_cast<std::size_t>(r)] < 0) continue;
      for (SparseSym::InnerIterator it(full, r); it; ++it) {
        const int c = slot[static_cast<std::size_t>(it.col())];
        if (c >= 0) trip.emplace_back(slot[static_cast<std::size_t>(r)], c, it.value());
      }
    }
    const auto m = static_cast<Eigen::Index>(interior.size());
    SparseSym out(m, m);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
  };
  const SparseSym k_red = reduce(k_full);
  const SparseSym m_red = reduce(m_full);
  const RawPairs pairs = subspace_iteration(k_red, m_red, k, VectorXd(), opts);

  Spectrum s;
  s.boundary_condition = BoundaryCondition::dirichlet;
  s.iterations = pairs.iterations;
  s.eigenvectors = MatrixXd::Zero(static_cast<Eigen::Index>(mesh.vertices.size()), k);
  for (std::size_t i = 0; i < interior.size(); ++i) {
    s.eigenvectors.row(interior[i]) = pairs.vectors.row(static_cast<Eigen::Index>(i));
  }
  normalize_signs(s.eigenvectors);
  for (int i = 0; i < k; ++i) {
    s.eigenvalues.push_back(pairs.values(i));
    s.residuals.push_back(pairs.residuals[static_cast<std::size_t>(i)]);
  }
  return s;
}

double rayleigh(const SparseSym& k_mat, const SparseSym& m_mat, const Eigen::VectorXd& v) {
  const double denom = v.dot(m_mat * v);
  if (!(denom > 0.0)) throw Error(ErrorCode::ZeroVector, "Rayleigh quotient of a zero vector");
  return v.dot(k_mat * v) / denom;
}

}  // namespace hsv
