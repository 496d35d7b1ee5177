#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Sparse>

#include "hsv/mesh.hpp"

namespace hsv {

/// Symmetric Galerkin matrix in compressed-row storage (full pattern).
using SparseSym = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum class BoundaryCondition { neumann, dirichlet };

enum class InnerSolver {
  sparse_ldlt,  ///< sparse LDL^T factorization of the shifted operator
  jacobi_pcg,   ///< conjugate gradient with diagonal preconditioning
};

struct Spectrum {
  std::vector<double> eigenvalues;  ///< ascending
  Eigen::MatrixXd eigenvectors;     ///< one M-orthonormal column per eigenvalue
  std::vector<double> residuals;    ///< ||K v - mu M v|| / ((1 + mu) ||M v||)
  BoundaryCondition boundary_condition = BoundaryCondition::neumann;
  int iterations = 0;

  Eigen::VectorXd vector(int i) const { return eigenvectors.col(i); }
};

struct EigenOptions {
  double tol = 1e-8;
  int max_iterations = 500;
  std::uint64_t seed = 1;
  InnerSolver inner = InnerSolver::sparse_ldlt;
};

/// P1 stiffness matrix; the natural (Neumann) condition needs no boundary terms.
SparseSym assemble_stiffness(const TriMesh& mesh);

/// Consistent P1 mass matrix, or its row-sum lumped diagonal.
SparseSym assemble_mass(const TriMesh& mesh, bool lumped = false);

/// k smallest pairs of K v = mu M v with the constant mode deflated and
/// reported first as mu_1 = 0. Requires k >= 2. Throws ConvergenceFailure
/// after opts.max_iterations outer steps.
Spectrum solve_neumann(const SparseSym& k_mat, const SparseSym& m_mat, int k, const EigenOptions& opts = {});

/// k smallest Dirichlet pairs; eigenvectors carry zeros on boundary vertices.
Spectrum solve_dirichlet(const TriMesh& mesh, int k, const EigenOptions& opts = {});

/// v^T K v / v^T M v. Throws ZeroVector.
double rayleigh(const SparseSym& k_mat, const SparseSym& m_mat, const Eigen::VectorXd& v);

}  // namespace hsv
