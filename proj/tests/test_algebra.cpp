#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "cqd/algebra.hpp"
#include "cqd/algebra_io.hpp"
#include "cqd/errors.hpp"
#include "cqd/rotor.hpp"

using namespace cqd::algebra;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

std::mt19937 rng(20020828);  // fixed seed, deterministic tests

VectorXd random_vector(int n, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("so(3) bracket reproduces the cyclic relations") {
  const auto sc = so3_structure_constants();
  sc.validate(1e-12);

  VectorXd e1 = VectorXd::Unit(3, 0), e2 = VectorXd::Unit(3, 1), e3 = VectorXd::Unit(3, 2);
  CHECK((bracket(sc, e1, e2) - e3).norm() == 0.0);
  CHECK((bracket(sc, e2, e3) - e1).norm() == 0.0);
  CHECK((bracket(sc, e3, e1) - e2).norm() == 0.0);

  for (int trial = 0; trial < 10; ++trial) {
    const VectorXd a = random_vector(3, 2.0);
    CHECK(bracket(sc, a, a).norm() == 0.0);  // antisymmetry
  }
}

TEST_CASE("bracket rejects dimension mismatch") {
  const auto sc = so3_structure_constants();
  CHECK_THROWS_AS(bracket(sc, VectorXd::Zero(4), VectorXd::Zero(3)), cqd::ValidationError);
}

TEST_CASE("poisson matrix: so(3) closed form, linearity, antisymmetry") {
  const auto sc = so3_structure_constants();
  const double ell = 1.7;
  VectorXd rho(3);
  rho << 0, 0, ell;
  MatrixXd expected(3, 3);
  expected << 0, ell, 0, -ell, 0, 0, 0, 0, 0;
  CHECK((poisson_matrix(sc, rho) - expected).cwiseAbs().maxCoeff() == 0.0);

  CHECK(poisson_matrix(sc, VectorXd::Zero(3)).cwiseAbs().maxCoeff() == 0.0);

  for (int trial = 0; trial < 5; ++trial) {
    const VectorXd r1 = random_vector(3), r2 = random_vector(3);
    const MatrixXd lin =
        poisson_matrix(sc, 2.0 * r1 - 0.5 * r2) -
        (2.0 * poisson_matrix(sc, r1) - 0.5 * poisson_matrix(sc, r2));
    CHECK(lin.cwiseAbs().maxCoeff() < 1e-14);
    const MatrixXd s = poisson_matrix(sc, r1);
    CHECK((s + s.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("orbit analysis: rank and kernel") {
  const auto sc = so3_structure_constants();
  VectorXd rho(3);
  rho << 0, 0, 1;
  const auto oa = orbit_analysis(sc, rho);
  CHECK(oa.rank == 2);
  REQUIRE(oa.kernel.cols() == 1);
  // kernel = span(L_3)
  CHECK(std::abs(std::abs(oa.kernel(2, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(oa.kernel(0, 0)) < 1e-12);
  CHECK(std::abs(oa.kernel(1, 0)) < 1e-12);

  CHECK(orbit_analysis(sc, VectorXd::Zero(3)).rank == 0);

  // rank + nullity = dim and rank is even, on random densities
  for (int trial = 0; trial < 10; ++trial) {
    const auto r = orbit_analysis(sc, random_vector(3, 3.0));
    CHECK(r.rank + r.kernel.cols() == 3);
    CHECK(r.rank % 2 == 0);
  }
}

TEST_CASE("kernel directions are first integrals of every Lie-Poisson flow") {
  const auto sc = cqd::rotor::rma_structure_constants();
  for (int trial = 0; trial < 20; ++trial) {
    const VectorXd rho = random_vector(9, 2.0);
    const auto oa = orbit_analysis(sc, rho);
    if (oa.kernel.cols() == 0) continue;
    const VectorXd grad = random_vector(9, 3.0);
    const VectorXd rhs = lie_poisson_rhs(sc, rho, grad);
    for (int c = 0; c < oa.kernel.cols(); ++c)
      CHECK(std::abs(rhs.dot(oa.kernel.col(c))) < 1e-10);
  }
}

TEST_CASE("lie-poisson flow: equilibria and Casimirs") {
  const auto sc = so3_structure_constants();
  const VectorXd rho = random_vector(3, 2.0);
  CHECK(lie_poisson_rhs(sc, rho, VectorXd::Zero(3)).norm() == 0.0);

  // H = |rho|^2 is the so(3) Casimir: grad = 2 rho
  CHECK(lie_poisson_rhs(sc, rho, 2.0 * rho).norm() < 1e-14);
}

TEST_CASE("so(3) flow with rigid-body Hamiltonian precesses about the momentum") {
  // H = (1/2) sum rho_i^2 / I_i, grad = omega; the component form gives
  // rhodot = omega x rho (see ledger note on the spec's mirrored example).
  const auto sc = so3_structure_constants();
  VectorXd inertia(3);
  inertia << 1.0, 2.0, 3.0;
  const VectorXd rho = random_vector(3, 2.0);
  VectorXd omega = rho.cwiseQuotient(inertia);
  const VectorXd rhs = lie_poisson_rhs(sc, rho, omega);
  Eigen::Vector3d cross = Eigen::Vector3d(omega).cross(Eigen::Vector3d(rho));
  CHECK((rhs - cross).norm() < 1e-14);
  // |rho|^2 invariant under the flow direction
  CHECK(std::abs(rhs.dot(rho)) < 1e-14);
}

TEST_CASE("spin-1 representation closes on the so(3) constants") {
  const auto sc = so3_structure_constants();
  const auto rep = spin1_representation();
  CHECK(rep.hermiticity_residual() < 1e-15);
  CHECK(rep.closure_residual(sc) < 1e-15);
  rep.validate(sc);
}

TEST_CASE("moment map on spin-1 states") {
  const auto rep = spin1_representation();

  VectorXcd up = VectorXcd::Zero(3);
  up[0] = 1.0;  // |m = +1> in the J_z basis
  const auto rho = density_from_matrix(rep, QuantalDensity::pure(up));
  CHECK(std::abs(rho[0]) < 1e-15);
  CHECK(std::abs(rho[1]) < 1e-15);
  CHECK(rho[2] == doctest::Approx(1.0).epsilon(1e-15));

  // maximally mixed state of a semisimple algebra maps to zero
  const QuantalDensity mixed(MatrixXcd::Identity(3, 3) / 3.0);
  CHECK(density_from_matrix(rep, mixed).norm() < 1e-15);
}

TEST_CASE("conjugation: pi rotation about x reverses the J_z populations") {
  const auto rep = spin1_representation();
  MatrixXcd m = MatrixXcd::Zero(3, 3);
  m(0, 0) = 0.5;
  m(1, 1) = 0.3;
  m(2, 2) = 0.2;
  const QuantalDensity rhohat(m);

  const MatrixXcd u = exp_generator(rep.generator(0), std::numbers::pi);
  const auto rotated = conjugate_density(rep, rhohat, u);
  CHECK(std::abs(rotated.matrix()(0, 0) - 0.2) < 1e-12);
  CHECK(std::abs(rotated.matrix()(1, 1) - 0.3) < 1e-12);
  CHECK(std::abs(rotated.matrix()(2, 2) - 0.5) < 1e-12);

  // identity leaves the density unchanged
  const auto same = conjugate_density(rep, rhohat, MatrixXcd::Identity(3, 3));
  CHECK((same.matrix() - rhohat.matrix()).cwiseAbs().maxCoeff() < 1e-15);

  // eigenvalues are preserved by any conjugation
  const MatrixXcd g = exp_generator(rep.generator(1), 0.77);
  const auto conj = conjugate_density(rep, rhohat, g);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> e1(rhohat.matrix()), e2(conj.matrix());
  CHECK((e1.eigenvalues() - e2.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(conjugate_density(rep, rhohat, 2.0 * MatrixXcd::Identity(3, 3)),
                  cqd::ValidationError);
}

TEST_CASE("coadjoint action agrees between matrix and structure-constant routes") {
  const auto sc = so3_structure_constants();
  const auto rep = spin1_representation();

  VectorXcd psi(3);
  psi << std::complex<double>(0.6, 0.1), std::complex<double>(0.2, -0.4),
      std::complex<double>(0.5, 0.3);
  const QuantalDensity rhohat = QuantalDensity::pure(psi);
  const VectorXd rho = density_from_matrix(rep, rhohat);

  for (int gen = 0; gen < 3; ++gen) {
    const double theta = 0.3 + 0.2 * gen;
    const MatrixXcd u = exp_generator(rep.generator(gen), theta);
    const VectorXd via_matrix = density_from_matrix(rep, conjugate_density(rep, rhohat, u));
    const VectorXd via_constants = coadjoint_rotation(sc, gen, theta) * rho;
    CHECK((via_matrix - via_constants).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("gauge averaging over z-rotations") {
  const auto rep = spin1_representation();
  const auto k_action = FiniteGroupAction::one_parameter_samples(rep.generator(2), 64);

  VectorXcd psi(3);
  psi << std::complex<double>(0.3, 0.2), std::complex<double>(0.5, -0.1),
      std::complex<double>(0.4, 0.6);
  const QuantalDensity rhohat = QuantalDensity::pure(psi);

  const auto averaged = gauge_average(rep, rhohat, k_action);

  // averaging projects onto the U(1) invariants: diagonal in the J_z basis
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(std::abs(averaged.matrix()(i, j)) < 1e-14);

  // Richardson check of the sampled invariant measure: doubling the samples
  // does not move the result
  const auto k2 = FiniteGroupAction::one_parameter_samples(rep.generator(2), 128);
  const auto averaged2 = gauge_average(rep, rhohat, k2);
  CHECK((averaged.matrix() - averaged2.matrix()).cwiseAbs().maxCoeff() < 1e-13);

  // idempotence
  const auto twice = gauge_average(rep, averaged, k_action);
  CHECK((twice.matrix() - averaged.matrix()).cwiseAbs().maxCoeff() < 1e-13);

  // averaged density commutes with every element of the closed sample group
  for (int i = 0; i < k_action.size(); ++i) {
    const MatrixXcd& u = k_action.element(i);
    CHECK((u * averaged.matrix() - averaged.matrix() * u).cwiseAbs().maxCoeff() < 1e-13);
  }

  // trivial group leaves the input unchanged
  const FiniteGroupAction trivial({MatrixXcd::Identity(3, 3)});
  const auto same = gauge_average(rep, rhohat, trivial);
  CHECK((same.matrix() - rhohat.matrix()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("gauge averaging preserves the classical density it stabilizes") {
  const auto rep = spin1_representation();
  const auto k_action = FiniteGroupAction::one_parameter_samples(rep.generator(2), 64);

  VectorXcd up = VectorXcd::Zero(3);
  up[0] = 1.0;
  const QuantalDensity rhohat = QuantalDensity::pure(up);
  const VectorXd before = density_from_matrix(rep, rhohat);
  const VectorXd after = density_from_matrix(rep, gauge_average(rep, rhohat, k_action));

  CHECK(before[2] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(before[0]) < 1e-14);
  CHECK(std::abs(before[1]) < 1e-14);
  CHECK((after - before).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("expectation evolution check") {
  const auto rep = spin1_representation();
  const auto k_action = FiniteGroupAction::one_parameter_samples(rep.generator(2), 32);

  VectorXcd up = VectorXcd::Zero(3);
  up[0] = 1.0;
  const QuantalDensity rhohat = QuantalDensity::pure(up);

  // H a function of J_z only: commuting flows
  const MatrixXcd jz2 = rep.generator(2) * rep.generator(2);
  auto chk = expectation_evolution_check(rep, rhohat, jz2, k_action);
  CHECK(chk.consistent);
  CHECK(chk.residual < 1e-13);

  // H = J_x with a K-invariant density
  chk = expectation_evolution_check(rep, rhohat, rep.generator(0), k_action);
  CHECK(chk.consistent);
  CHECK(chk.residual < 1e-13);

  // trivial K always passes
  const FiniteGroupAction trivial({MatrixXcd::Identity(3, 3)});
  VectorXcd psi(3);
  psi << 0.3, std::complex<double>(0.1, 0.8), -0.2;
  chk = expectation_evolution_check(rep, QuantalDensity::pure(psi), rep.generator(0), trivial);
  CHECK(chk.residual == 0.0);
}

TEST_CASE("quantal density invariants are enforced") {
  MatrixXcd bad = MatrixXcd::Zero(2, 2);
  bad(0, 0) = 1.2;
  bad(1, 1) = -0.2;  // negative eigenvalue
  CHECK_THROWS_AS(QuantalDensity{bad}, cqd::ValidationError);

  MatrixXcd not_unit = MatrixXcd::Identity(2, 2);
  CHECK_THROWS_AS(QuantalDensity{not_unit}, cqd::ValidationError);

  MatrixXcd not_herm(2, 2);
  not_herm << 0.5, std::complex<double>(0.1, 0.2), 0.0, 0.5;
  CHECK_THROWS_AS(QuantalDensity{not_herm}, cqd::ValidationError);
}

TEST_CASE("shipped fixtures load and validate") {
  const std::string dir = CQD_DATA_DIR;
  for (const char* name : {"so3.json", "r6.json", "rma.json", "spin1.json"}) {
    const auto doc = load_algebra_document(dir + "/" + name);
    doc.constants.validate(1e-12);
    if (doc.representation) {
      CHECK(doc.representation->hermiticity_residual() < 1e-12);
      CHECK(doc.representation->closure_residual(doc.constants) < 1e-10);
    }
  }

  // loaded constants match the built-in constructors
  const auto so3_file = load_algebra_document(dir + "/so3.json");
  const auto so3_code = so3_structure_constants();
  for (int k = 0; k < 3; ++k)
    CHECK((so3_file.constants.table(k) - so3_code.table(k)).cwiseAbs().maxCoeff() == 0.0);

  const auto rma_file = load_algebra_document(dir + "/rma.json");
  const auto rma_code = cqd::rotor::rma_structure_constants();
  for (int k = 0; k < 9; ++k)
    CHECK((rma_file.constants.table(k) - rma_code.table(k)).cwiseAbs().maxCoeff() == 0.0);
}
