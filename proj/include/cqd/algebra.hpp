#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace cqd::algebra {

// Coefficient vector of an observable A = sum_a coeffs[a] E_a in the algebra
// basis, and a classical density rho in the dual with rho[a] = rho(E_a).
using AlgebraElement = Eigen::VectorXd;
using Density = Eigen::VectorXd;

// Real antisymmetrized structure tensor of a finite-dimensional Lie algebra,
// convention [E_a, E_b] = i sum_k c_abk E_k with hbar = 1 absorbed into the
// basis units.
class StructureConstants {
 public:
  // tables[k](a, b) = c_abk
  explicit StructureConstants(std::vector<Eigen::MatrixXd> tables);

  struct Triplet {
    int a, b, k;
    double value;
  };
  static StructureConstants from_triplets(int dim, const std::vector<Triplet>& entries);

  int dim() const { return dim_; }
  double c(int a, int b, int k) const { return tables_[k](a, b); }
  const Eigen::MatrixXd& table(int k) const { return tables_[k]; }

  double antisymmetry_residual() const;
  double jacobi_residual() const;
  // Throws ValidationError when either residual exceeds its tolerance.
  void validate(double tol = 1e-12) const;

  // Matrix of the adjoint action ad_g on coefficient vectors:
  // (ad_g)_{ak} = c(g, a, k), so that conjugation by exp(-i theta G_g)
  // maps rho -> exp(theta ad_g^T ...) -- see coadjoint_rotation.
  Eigen::MatrixXd adjoint_matrix(int generator) const;

  std::vector<Triplet> triplets() const;

 private:
  int dim_;
  std::vector<Eigen::MatrixXd> tables_;
};

// [OPERATIONS on the abstract algebra]

// result_k = sum_{a,b} A_a B_b c_abk
AlgebraElement bracket(const StructureConstants& sc, const AlgebraElement& a,
                       const AlgebraElement& b);

// sigma_ab(rho) = sum_k c_abk rho_k  (the Lie-Poisson two-form at rho)
Eigen::MatrixXd poisson_matrix(const StructureConstants& sc, const Density& rho);

struct OrbitAnalysis {
  int rank = 0;
  Eigen::MatrixXd kernel;  // dim x nullity, orthonormal columns
};

// Rank and kernel of sigma(rho) via SVD with relative threshold.
OrbitAnalysis orbit_analysis(const StructureConstants& sc, const Density& rho,
                             double rel_threshold = 1e-9);

// rho_dot_a = sum_b sigma_ab(rho) grad_h_b
Density lie_poisson_rhs(const StructureConstants& sc, const Density& rho,
                        const Eigen::VectorXd& grad_h);

// Coadjoint rotation of densities induced by conjugating quantal densities
// with exp(-i theta G_g): rho -> exp(theta A) rho with A_{ak} = c(g, a, k).
Eigen::MatrixXd coadjoint_rotation(const StructureConstants& sc, int generator,
                                   double theta);

// ---------------------------------------------------------------------------

// Hermitian generators G_a of a unitary representation on C^n, satisfying
// [G_a, G_b] = i sum_k c_abk G_k.
class MatrixRepresentation {
 public:
  explicit MatrixRepresentation(std::vector<Eigen::MatrixXcd> generators);

  int algebra_dim() const { return static_cast<int>(generators_.size()); }
  int hilbert_dim() const { return hilbert_dim_; }
  const Eigen::MatrixXcd& generator(int a) const { return generators_[a]; }

  double hermiticity_residual() const;
  double closure_residual(const StructureConstants& sc) const;
  void validate(const StructureConstants& sc, double hermitian_tol = 1e-12,
                double closure_tol = 1e-10) const;

 private:
  int hilbert_dim_;
  std::vector<Eigen::MatrixXcd> generators_;
};

// Hermitian, positive semidefinite, unit-trace matrix.
class QuantalDensity {
 public:
  explicit QuantalDensity(Eigen::MatrixXcd matrix);
  static QuantalDensity pure(const Eigen::VectorXcd& psi);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }

 private:
  Eigen::MatrixXcd matrix_;
};

// Discrete (or compact-sampled) stand-in for the invariant measure on a
// stability subgroup: a list of unitaries with probability weights.
class FiniteGroupAction {
 public:
  explicit FiniteGroupAction(std::vector<Eigen::MatrixXcd> elements);
  FiniteGroupAction(std::vector<Eigen::MatrixXcd> elements, Eigen::VectorXd weights);

  // n uniform samples exp(-i 2 pi j/n G), j = 0..n-1, of the one-parameter
  // group generated by G.
  static FiniteGroupAction one_parameter_samples(const Eigen::MatrixXcd& generator, int n);

  int size() const { return static_cast<int>(elements_.size()); }
  const Eigen::MatrixXcd& element(int i) const { return elements_[i]; }
  double weight(int i) const { return weights_[i]; }

 private:
  std::vector<Eigen::MatrixXcd> elements_;
  Eigen::VectorXd weights_;
};

// [OPERATIONS at the matrix-representation level]

// The moment map: rho_a = Re Tr(rhohat G_a).
Density density_from_matrix(const MatrixRepresentation& rep, const QuantalDensity& rhohat);

// rhohat_g = g^dagger rhohat g for unitary g (the matrix of T(g)).
QuantalDensity conjugate_density(const MatrixRepresentation& rep,
                                 const QuantalDensity& rhohat,
                                 const Eigen::MatrixXcd& g);

// Weighted average of conjugates over the supplied group elements.
QuantalDensity gauge_average(const MatrixRepresentation& rep, const QuantalDensity& rhohat,
                             const FiniteGroupAction& k_action);

struct EvolutionCheck {
  bool consistent = false;
  double residual = 0.0;
};

// max over h in K and generators a of
//   |Tr(rhohat_h [G_a, H]) - Tr(rhohat [G_a, H])| :
// zero residual means the SGA expectation flow descends to the coadjoint
// orbit unchanged by the gauge directions sampled in K.
EvolutionCheck expectation_evolution_check(const MatrixRepresentation& rep,
                                           const QuantalDensity& rhohat,
                                           const Eigen::MatrixXcd& hamiltonian,
                                           const FiniteGroupAction& k_action,
                                           double tol = 1e-10);

// ---------------------------------------------------------------------------
// Built-in algebras and representations.

// so(3): c_abk = epsilon_abk.
StructureConstants so3_structure_constants();
// Abelian R^dim: all constants zero.
StructureConstants abelian_structure_constants(int dim);
// Spin-1 J_x, J_y, J_z in the J_z eigenbasis (m = +1, 0, -1), hbar = 1.
MatrixRepresentation spin1_representation();

// Unitary exp(-i theta G).
Eigen::MatrixXcd exp_generator(const Eigen::MatrixXcd& generator, double theta);

}  // namespace cqd::algebra
