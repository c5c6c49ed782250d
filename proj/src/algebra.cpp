#include "cqd/algebra.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include <unsupported/Eigen/MatrixFunctions>

#include "cqd/errors.hpp"

namespace cqd::algebra {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {
constexpr std::complex<double> kI{0.0, 1.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}
}  // namespace

StructureConstants::StructureConstants(std::vector<MatrixXd> tables)
    : dim_(static_cast<int>(tables.size())), tables_(std::move(tables)) {
  require(dim_ > 0, "structure constants: empty tensor");
  for (const auto& t : tables_) {
    require(t.rows() == dim_ && t.cols() == dim_,
            "structure constants: tables must be dim x dim");
    require(t.allFinite(), "structure constants: non-finite entry");
  }
}

StructureConstants StructureConstants::from_triplets(int dim,
                                                     const std::vector<Triplet>& entries) {
  require(dim > 0, "structure constants: dim must be positive");
  std::vector<MatrixXd> tables(dim, MatrixXd::Zero(dim, dim));
  for (const auto& e : entries) {
    require(e.a >= 0 && e.a < dim && e.b >= 0 && e.b < dim && e.k >= 0 && e.k < dim,
            "structure constants: triplet index out of range");
    tables[e.k](e.a, e.b) += e.value;
  }
  return StructureConstants(std::move(tables));
}

double StructureConstants::antisymmetry_residual() const {
  double r = 0.0;
  for (const auto& t : tables_)
    r = std::max(r, (t + t.transpose()).cwiseAbs().maxCoeff());
  return r;
}

double StructureConstants::jacobi_residual() const {
  // sum_m (c_abm c_mek + c_bem c_mak + c_eam c_mbk) = 0
  double r = 0.0;
  for (int a = 0; a < dim_; ++a)
    for (int b = 0; b < dim_; ++b)
      for (int e = 0; e < dim_; ++e)
        for (int k = 0; k < dim_; ++k) {
          double s = 0.0;
          for (int m = 0; m < dim_; ++m)
            s += c(a, b, m) * c(m, e, k) + c(b, e, m) * c(m, a, k) +
                 c(e, a, m) * c(m, b, k);
          r = std::max(r, std::abs(s));
        }
  return r;
}

void StructureConstants::validate(double tol) const {
  if (antisymmetry_residual() > tol)
    throw ValidationError("structure constants: antisymmetry violated, residual " +
                          std::to_string(antisymmetry_residual()));
  if (jacobi_residual() > tol)
    throw ValidationError("structure constants: Jacobi identity violated, residual " +
                          std::to_string(jacobi_residual()));
}

MatrixXd StructureConstants::adjoint_matrix(int generator) const {
  require(generator >= 0 && generator < dim_, "adjoint_matrix: generator out of range");
  MatrixXd ad(dim_, dim_);
  for (int a = 0; a < dim_; ++a)
    for (int k = 0; k < dim_; ++k) ad(a, k) = c(generator, a, k);
  return ad;
}

std::vector<StructureConstants::Triplet> StructureConstants::triplets() const {
  std::vector<Triplet> out;
  for (int k = 0; k < dim_; ++k)
    for (int a = 0; a < dim_; ++a)
      for (int b = 0; b < dim_; ++b)
        if (tables_[k](a, b) != 0.0) out.push_back({a, b, k, tables_[k](a, b)});
  return out;
}

AlgebraElement bracket(const StructureConstants& sc, const AlgebraElement& a,
                       const AlgebraElement& b) {
  require(a.size() == sc.dim() && b.size() == sc.dim(), "bracket: dimension mismatch");
  require(a.allFinite() && b.allFinite(), "bracket: non-finite coefficients");
  AlgebraElement out(sc.dim());
  for (int k = 0; k < sc.dim(); ++k) out[k] = a.dot(sc.table(k) * b);
  return out;
}

MatrixXd poisson_matrix(const StructureConstants& sc, const Density& rho) {
  require(rho.size() == sc.dim(), "poisson_matrix: dimension mismatch");
  require(rho.allFinite(), "poisson_matrix: non-finite density");
  MatrixXd sigma = MatrixXd::Zero(sc.dim(), sc.dim());
  for (int k = 0; k < sc.dim(); ++k)
    if (rho[k] != 0.0) sigma += rho[k] * sc.table(k);
  return sigma;
}

OrbitAnalysis orbit_analysis(const StructureConstants& sc, const Density& rho,
                             double rel_threshold) {
  const MatrixXd sigma = poisson_matrix(sc, rho);
  Eigen::JacobiSVD<MatrixXd> svd(sigma, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = (sv.size() > 0 && sv[0] > 0) ? rel_threshold * sv[0] : 0.0;

  OrbitAnalysis out;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++out.rank;
  const int nullity = sc.dim() - out.rank;
  out.kernel = svd.matrixV().rightCols(nullity);
  return out;
}

Density lie_poisson_rhs(const StructureConstants& sc, const Density& rho,
                        const VectorXd& grad_h) {
  require(grad_h.size() == sc.dim(), "lie_poisson_rhs: gradient dimension mismatch");
  return poisson_matrix(sc, rho) * grad_h;
}

Eigen::MatrixXd coadjoint_rotation(const StructureConstants& sc, int generator,
                                   double theta) {
  return (theta * sc.adjoint_matrix(generator)).exp();
}

// ---------------------------------------------------------------------------

MatrixRepresentation::MatrixRepresentation(std::vector<MatrixXcd> generators)
    : generators_(std::move(generators)) {
  require(!generators_.empty(), "representation: no generators");
  hilbert_dim_ = static_cast<int>(generators_[0].rows());
  for (const auto& g : generators_)
    require(g.rows() == hilbert_dim_ && g.cols() == hilbert_dim_,
            "representation: generators must be square and equally sized");
}

double MatrixRepresentation::hermiticity_residual() const {
  double r = 0.0;
  for (const auto& g : generators_)
    r = std::max(r, (g - g.adjoint()).cwiseAbs().maxCoeff());
  return r;
}

double MatrixRepresentation::closure_residual(const StructureConstants& sc) const {
  require(sc.dim() == algebra_dim(), "closure_residual: dimension mismatch");
  double r = 0.0;
  for (int a = 0; a < algebra_dim(); ++a)
    for (int b = 0; b < algebra_dim(); ++b) {
      MatrixXcd lhs = generators_[a] * generators_[b] - generators_[b] * generators_[a];
      for (int k = 0; k < algebra_dim(); ++k)
        if (sc.c(a, b, k) != 0.0) lhs -= kI * sc.c(a, b, k) * generators_[k];
      r = std::max(r, lhs.cwiseAbs().maxCoeff());
    }
  return r;
}

void MatrixRepresentation::validate(const StructureConstants& sc, double hermitian_tol,
                                    double closure_tol) const {
  if (hermiticity_residual() > hermitian_tol)
    throw ValidationError("representation: generators not Hermitian, residual " +
                          std::to_string(hermiticity_residual()));
  if (closure_residual(sc) > closure_tol)
    throw ValidationError("representation: commutator closure violated, residual " +
                          std::to_string(closure_residual(sc)));
}

QuantalDensity::QuantalDensity(MatrixXcd matrix) : matrix_(std::move(matrix)) {
  require(matrix_.rows() == matrix_.cols(), "quantal density: must be square");
  const double herm = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw ValidationError("quantal density: not Hermitian, residual " + std::to_string(herm));
  const double trace_err = std::abs(matrix_.trace() - std::complex<double>(1.0, 0.0));
  if (trace_err > 1e-12)
    throw ValidationError("quantal density: trace differs from 1 by " +
                          std::to_string(trace_err));
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-12)
    throw ValidationError("quantal density: negative eigenvalue " +
                          std::to_string(es.eigenvalues().minCoeff()));
}

QuantalDensity QuantalDensity::pure(const VectorXcd& psi) {
  const double n2 = psi.squaredNorm();
  require(n2 > 0, "quantal density: zero state vector");
  return QuantalDensity((psi * psi.adjoint()) / n2);
}

FiniteGroupAction::FiniteGroupAction(std::vector<MatrixXcd> elements)
    : FiniteGroupAction(std::move(elements), VectorXd()) {}

FiniteGroupAction::FiniteGroupAction(std::vector<MatrixXcd> elements, VectorXd weights)
    : elements_(std::move(elements)), weights_(std::move(weights)) {
  require(!elements_.empty(), "group action: no elements");
  const int n = static_cast<int>(elements_.size());
  if (weights_.size() == 0)
    weights_ = VectorXd::Constant(n, 1.0 / n);
  require(weights_.size() == n, "group action: weights/elements size mismatch");
  const double wsum = weights_.sum();
  if (std::abs(wsum - 1.0) > 1e-12)
    throw ValidationError("group action: weights sum to " + std::to_string(wsum));
  const auto dim = elements_[0].rows();
  for (const auto& u : elements_) {
    require(u.rows() == dim && u.cols() == dim, "group action: element size mismatch");
    const double uerr =
        (u.adjoint() * u - MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
    if (uerr > 1e-12)
      throw ValidationError("group action: element not unitary, residual " +
                            std::to_string(uerr));
  }
}

FiniteGroupAction FiniteGroupAction::one_parameter_samples(const MatrixXcd& generator,
                                                           int n) {
  require(n > 0, "group action: sample count must be positive");
  std::vector<MatrixXcd> elements;
  elements.reserve(n);
  for (int j = 0; j < n; ++j)
    elements.push_back(exp_generator(generator, 2.0 * std::numbers::pi * j / n));
  return FiniteGroupAction(std::move(elements));
}

Density density_from_matrix(const MatrixRepresentation& rep, const QuantalDensity& rhohat) {
  require(rhohat.dim() == rep.hilbert_dim(), "density_from_matrix: dimension mismatch");
  Density rho(rep.algebra_dim());
  for (int a = 0; a < rep.algebra_dim(); ++a)
    rho[a] = (rhohat.matrix() * rep.generator(a)).trace().real();
  return rho;
}

QuantalDensity conjugate_density(const MatrixRepresentation& rep,
                                 const QuantalDensity& rhohat, const MatrixXcd& g) {
  require(g.rows() == rep.hilbert_dim() && g.cols() == rep.hilbert_dim(),
          "conjugate_density: dimension mismatch");
  const double uerr =
      (g.adjoint() * g - MatrixXcd::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  if (uerr > 1e-12)
    throw ValidationError("conjugate_density: g not unitary, residual " +
                          std::to_string(uerr));
  MatrixXcd m = g.adjoint() * rhohat.matrix() * g;
  // Re-symmetrize round-off so the result satisfies the density invariants.
  m = 0.5 * (m + m.adjoint().eval());
  return QuantalDensity(std::move(m));
}

QuantalDensity gauge_average(const MatrixRepresentation& rep, const QuantalDensity& rhohat,
                             const FiniteGroupAction& k_action) {
  require(k_action.element(0).rows() == rep.hilbert_dim(),
          "gauge_average: dimension mismatch");
  MatrixXcd acc = MatrixXcd::Zero(rep.hilbert_dim(), rep.hilbert_dim());
  for (int i = 0; i < k_action.size(); ++i) {
    const MatrixXcd& u = k_action.element(i);
    acc += k_action.weight(i) * (u.adjoint() * rhohat.matrix() * u);
  }
  acc = 0.5 * (acc + acc.adjoint().eval());
  return QuantalDensity(std::move(acc));
}

EvolutionCheck expectation_evolution_check(const MatrixRepresentation& rep,
                                           const QuantalDensity& rhohat,
                                           const MatrixXcd& hamiltonian,
                                           const FiniteGroupAction& k_action,
                                           double tol) {
  const double herm = (hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-12)
    throw ValidationError("expectation_evolution_check: Hamiltonian not Hermitian");

  std::vector<std::complex<double>> base(rep.algebra_dim());
  std::vector<MatrixXcd> commutators(rep.algebra_dim());
  for (int a = 0; a < rep.algebra_dim(); ++a) {
    commutators[a] =
        rep.generator(a) * hamiltonian - hamiltonian * rep.generator(a);
    base[a] = (rhohat.matrix() * commutators[a]).trace();
  }

  EvolutionCheck out;
  for (int i = 0; i < k_action.size(); ++i) {
    const QuantalDensity conj = conjugate_density(rep, rhohat, k_action.element(i));
    for (int a = 0; a < rep.algebra_dim(); ++a) {
      const std::complex<double> v = (conj.matrix() * commutators[a]).trace();
      out.residual = std::max(out.residual, std::abs(v - base[a]));
    }
  }
  out.consistent = out.residual < tol;
  return out;
}

// ---------------------------------------------------------------------------

StructureConstants so3_structure_constants() {
  std::vector<StructureConstants::Triplet> t;
  // c_abk = epsilon_abk
  t.push_back({0, 1, 2, 1.0});
  t.push_back({1, 0, 2, -1.0});
  t.push_back({1, 2, 0, 1.0});
  t.push_back({2, 1, 0, -1.0});
  t.push_back({2, 0, 1, 1.0});
  t.push_back({0, 2, 1, -1.0});
  return StructureConstants::from_triplets(3, t);
}

StructureConstants abelian_structure_constants(int dim) {
  return StructureConstants(std::vector<MatrixXd>(dim, MatrixXd::Zero(dim, dim)));
}

MatrixRepresentation spin1_representation() {
  const double s = 1.0 / std::sqrt(2.0);
  MatrixXcd jx = MatrixXcd::Zero(3, 3), jy = MatrixXcd::Zero(3, 3),
            jz = MatrixXcd::Zero(3, 3);
  jx(0, 1) = s;
  jx(1, 0) = s;
  jx(1, 2) = s;
  jx(2, 1) = s;
  jy(0, 1) = -kI * s;
  jy(1, 0) = kI * s;
  jy(1, 2) = -kI * s;
  jy(2, 1) = kI * s;
  jz(0, 0) = 1.0;
  jz(2, 2) = -1.0;
  return MatrixRepresentation({jx, jy, jz});
}

Eigen::MatrixXcd exp_generator(const MatrixXcd& generator, double theta) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(generator);
  if (es.info() != Eigen::Success)
    throw NumericalError("exp_generator: eigendecomposition failed");
  VectorXcd phases(es.eigenvalues().size());
  for (int i = 0; i < phases.size(); ++i)
    phases[i] = std::exp(-kI * theta * es.eigenvalues()[i]);
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace cqd::algebra
