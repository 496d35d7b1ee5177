#include <cmath>
#include <numbers>

#include "doctest.h"
#include "hsv/bessel.hpp"
#include "hsv/domains.hpp"
#include "hsv/error.hpp"
#include "hsv/fem.hpp"

using hsv::Point;
constexpr double pi = std::numbers::pi;

namespace {

hsv::ConvexPolygon box(double l, double w) {
  std::vector<Point> v{{0, 0}, {l, 0}, {l, w}, {0, w}};
  return hsv::validate(v);
}

hsv::ConvexPolygon disk(int n, double r = 1.0) {
  hsv::DomainSpec s;
  s.kind = hsv::DomainKind::disk;
  s.radius = r;
  s.polygonization_n = n;
  return hsv::realize(s);
}

hsv::TriMesh single_triangle() {
  hsv::TriMesh m;
  m.vertices = {{0, 0}, {1, 0}, {0, 1}};
  m.triangles = {{0, 1, 2}};
  m.interior_mask = {0, 0, 0};
  return m;
}

void check_spectrum(const hsv::Spectrum& s, const hsv::SparseSym& k, const hsv::SparseSym& m, double tol) {
  const Eigen::MatrixXd g = s.eigenvectors.transpose() * (m * s.eigenvectors);
  CHECK((g - Eigen::MatrixXd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() <= 1e-8);
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const Eigen::VectorXd v = s.eigenvectors.col(static_cast<Eigen::Index>(i));
    const Eigen::VectorXd mv = m * v;
    CHECK((k * v - s.eigenvalues[i] * mv).norm() <= tol * (1 + s.eigenvalues[i]) * mv.norm());
    if (i > 0) CHECK(s.eigenvalues[i] >= s.eigenvalues[i - 1]);
  }
}

double neumann_mu2(const hsv::TriMesh& mesh) {
  const auto k = hsv::assemble_stiffness(mesh);
  const auto m = hsv::assemble_mass(mesh);
  return hsv::solve_neumann(k, m, 3).eigenvalues[1];
}

}  // namespace

TEST_CASE("element matrices of the reference triangle") {
  const auto m = single_triangle();
  const Eigen::MatrixXd k = Eigen::MatrixXd(hsv::assemble_stiffness(m));
  Eigen::Matrix3d kref;
  kref << 1, -0.5, -0.5, -0.5, 0.5, 0, -0.5, 0, 0.5;
  CHECK((k - kref).cwiseAbs().maxCoeff() <= 1e-15);
  const Eigen::MatrixXd mass = Eigen::MatrixXd(hsv::assemble_mass(m));
  Eigen::Matrix3d mref;
  mref << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  mref /= 24.0;
  CHECK((mass - mref).cwiseAbs().maxCoeff() <= 1e-16);
  const Eigen::MatrixXd lumped = Eigen::MatrixXd(hsv::assemble_mass(m, true));
  CHECK(lumped.trace() == doctest::Approx(0.5));
  CHECK((lumped - Eigen::MatrixXd(lumped.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("global matrices: kernel, symmetry, partition of unity") {
  const auto poly = disk(128);
  const auto mesh = hsv::generate(poly, 0.08);
  const auto k = hsv::assemble_stiffness(mesh);
  const auto m = hsv::assemble_mass(mesh);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k.rows());
  const double knorm = Eigen::MatrixXd(k).cwiseAbs().rowwise().sum().maxCoeff();
  CHECK((k * ones).cwiseAbs().maxCoeff() <= 1e-12 * knorm);
  const hsv::SparseSym kt = k.transpose();
  CHECK((Eigen::MatrixXd(k) - Eigen::MatrixXd(kt)).cwiseAbs().maxCoeff() <= 1e-14 * knorm);
  CHECK(ones.dot(m * ones) == doctest::Approx(poly.area()).epsilon(1e-10));
  CHECK(Eigen::MatrixXd(hsv::assemble_mass(mesh, true)).trace() == doctest::Approx(poly.area()).epsilon(1e-10));
  hsv::XorShift rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd v(k.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
    CHECK(v.dot(k * v) >= -1e-12 * knorm * v.squaredNorm());
  }
}

TEST_CASE("unit square Neumann and Dirichlet spectra") {
  const auto mesh = hsv::generate(box(1, 1), 0.02);
  const auto k = hsv::assemble_stiffness(mesh);
  const auto m = hsv::assemble_mass(mesh);
  const auto s = hsv::solve_neumann(k, m, 4);
  check_spectrum(s, k, m, 1e-8);
  CHECK(s.eigenvalues[0] <= 1e-8 * s.eigenvalues[1]);
  const Eigen::VectorXd v1 = s.eigenvectors.col(0);
  CHECK((v1.array() - v1.mean()).abs().maxCoeff() <= 1e-6 * std::abs(v1.mean()));
  CHECK(s.eigenvalues[1] >= pi * pi);
  CHECK(s.eigenvalues[1] <= 1.01 * pi * pi);
  CHECK(s.eigenvalues[2] <= 1.01 * pi * pi);
  const auto d = hsv::solve_dirichlet(mesh, 1);
  CHECK(d.eigenvalues[0] >= 2 * pi * pi);
  CHECK(d.eigenvalues[0] <= 1.01 * 2 * pi * pi);
  CHECK(s.eigenvalues[1] < d.eigenvalues[0]);
  // boundary values vanish
  for (const auto& e : mesh.boundary_edges) CHECK(d.eigenvectors(e.a, 0) == 0.0);
}

TEST_CASE("unit disk spectrum against Bessel zeros") {
  const auto& c = hsv::bessel::constants();
  const auto mesh = hsv::generate(disk(512), 0.02);
  const auto k = hsv::assemble_stiffness(mesh);
  const auto m = hsv::assemble_mass(mesh);
  const auto s = hsv::solve_neumann(k, m, 4);
  check_spectrum(s, k, m, 1e-8);
  const double mu2 = c.jp11 * c.jp11;
  CHECK(std::abs(mu2 - 3.389964) <= 1e-5);
  CHECK(mu2 == doctest::Approx(3.3899577).epsilon(1e-7));
  CHECK(s.eigenvalues[1] >= 3.3900 * (1 - 2e-3));
  CHECK(s.eigenvalues[1] <= 3.3900 * 1.01);
  CHECK(s.eigenvalues[2] - s.eigenvalues[1] <= 0.01 * s.eigenvalues[1]);
  CHECK(s.eigenvalues[0] <= 1e-8 * s.eigenvalues[1]);
  const auto d = hsv::solve_dirichlet(mesh, 1);
  CHECK(std::abs(d.eigenvalues[0] / (c.j0 * c.j0) - 1) <= 0.01);
  CHECK(s.eigenvalues[1] < d.eigenvalues[0]);
}

TEST_CASE("Dirichlet domain monotonicity") {
  const auto big = hsv::generate(disk(128, 1.0), 0.05);
  const auto small = hsv::generate(disk(128, 0.8), 0.04);
  CHECK(hsv::solve_dirichlet(small, 1).eigenvalues[0] > hsv::solve_dirichlet(big, 1).eigenvalues[0]);
  const auto rect = hsv::generate(box(2, 1), 0.05);
  const auto sq = hsv::generate(box(1, 1), 0.05);
  CHECK(hsv::solve_dirichlet(sq, 1).eigenvalues[0] > hsv::solve_dirichlet(rect, 1).eigenvalues[0]);
}

TEST_CASE("Rayleigh quotient") {
  const auto mesh = hsv::generate(box(1, 1), 0.05);
  const auto k = hsv::assemble_stiffness(mesh);
  const auto m = hsv::assemble_mass(mesh);
  const auto s = hsv::solve_neumann(k, m, 3);
  CHECK(std::abs(hsv::rayleigh(k, m, Eigen::VectorXd::Ones(k.rows()))) <= 1e-12);
  CHECK(hsv::rayleigh(k, m, s.eigenvectors.col(1)) == doctest::Approx(s.eigenvalues[1]).epsilon(1e-8));
  CHECK_THROWS_AS(hsv::rayleigh(k, m, Eigen::VectorXd::Zero(k.rows())), hsv::Error);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(k.rows());
  const double area = ones.dot(m * ones);
  hsv::XorShift rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v(k.rows());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = rng.uniform(-1, 1);
    v -= (ones.dot(m * v) / area) * ones;
    CHECK(hsv::rayleigh(k, m, v) >= s.eigenvalues[1] - 1e-10);
  }
}

TEST_CASE("second-order convergence on the unit square") {
  auto mesh = hsv::generate(box(1, 1), 0.05);
  double err[3];
  for (int level = 0; level < 3; ++level) {
    err[level] = neumann_mu2(mesh) - pi * pi;
    CHECK(err[level] > 0.0);
    if (level < 2) mesh = hsv::refine(mesh);
  }
  const double r1 = err[0] / err[1], r2 = err[1] / err[2];
  CHECK(r1 >= 3.5);
  CHECK(r1 <= 4.5);
  CHECK(r2 >= 3.5);
  CHECK(r2 <= 4.5);
}

TEST_CASE("Jacobi-preconditioned CG inner solver agrees with the factorization") {
  const auto mesh = hsv::generate(disk(128), 0.06);
  const auto k = hsv::assemble_stiffness(mesh);
  const auto m = hsv::assemble_mass(mesh);
  hsv::EigenOptions pcg;
  pcg.inner = hsv::InnerSolver::jacobi_pcg;
  const auto a = hsv::solve_neumann(k, m, 4);
  const auto b = hsv::solve_neumann(k, m, 4, pcg);
  check_spectrum(b, k, m, 1e-8);
  for (int i = 1; i < 4; ++i) CHECK(b.eigenvalues[i] == doctest::Approx(a.eigenvalues[i]).epsilon(1e-8));
}

TEST_CASE("solver determinism and argument checks") {
  const auto mesh = hsv::generate(box(1.5, 1), 0.08);
  const auto k = hsv::assemble_stiffness(mesh);
  const auto m = hsv::assemble_mass(mesh);
  const auto a = hsv::solve_neumann(k, m, 3), b = hsv::solve_neumann(k, m, 3);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.eigenvectors == b.eigenvectors);
  CHECK_THROWS_AS(hsv::solve_neumann(k, m, 1), hsv::Error);
  hsv::EigenOptions starved;
  starved.max_iterations = 1;
  starved.tol = 1e-14;
  CHECK_THROWS_AS(hsv::solve_neumann(k, m, 3, starved), hsv::Error);
}
