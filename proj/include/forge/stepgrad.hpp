#pragma once

#include "forge/common.hpp"

namespace forge::stepgrad {

/// Eigendecomposition of one Hermitian step Hamiltonian together with the
/// step duration; the building block for exact propagator derivatives.
struct EigStep {
  MatrixXcd vecs;
  VectorXd vals;
  VectorXcd phases; // exp(-i vals dt)
  double dt = 0.0;
};

inline EigStep decompose(const MatrixXcd& h, double dt) {
  EigStep s;
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  s.vecs = es.eigenvectors();
  s.vals = es.eigenvalues();
  s.phases = (-kImag * dt * s.vals.array()).exp();
  s.dt = dt;
  return s;
}

inline VectorXcd apply(const EigStep& s, const VectorXcd& psi) {
  return s.vecs * (s.phases.asDiagonal() * (s.vecs.adjoint() * psi));
}

inline VectorXcd apply_adjoint(const EigStep& s, const VectorXcd& chi) {
  return s.vecs * (s.phases.conjugate().asDiagonal() * (s.vecs.adjoint() * chi));
}

inline cplx sinch(cplx z) {
  if (std::abs(z) < 1e-6) return 1.0 + z * z / 6.0;
  return std::sinh(z) / z;
}

/// Divided-difference kernel of the exponential in the eigenbasis:
/// phi(a,b) = (exp(mu_a) - exp(mu_b)) / (mu_a - mu_b) with mu = -i dt val,
/// continued to exp(mu_a) on the diagonal.
inline MatrixXcd phi_matrix(const EigStep& s) {
  const int n = static_cast<int>(s.vals.size());
  MatrixXcd phi(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      cplx avg = -kImag * s.dt * 0.5 * (s.vals(a) + s.vals(b));
      cplx half = -kImag * s.dt * 0.5 * (s.vals(a) - s.vals(b));
      phi(a, b) = std::exp(avg) * sinch(half);
    }
  }
  return phi;
}

/// <chi| dU |psi> for U = exp(-i H dt) and a Hamiltonian perturbation dh,
/// with chi and psi given in the original basis.
inline cplx overlap_deriv(const EigStep& s, const MatrixXcd& phi, const VectorXcd& chi,
                          const VectorXcd& psi, const MatrixXcd& dh) {
  VectorXcd chi_t = s.vecs.adjoint() * chi;
  VectorXcd psi_t = s.vecs.adjoint() * psi;
  MatrixXcd e_t = s.vecs.adjoint() * dh * s.vecs;
  return chi_t.dot(((-kImag * s.dt) * e_t).cwiseProduct(phi) * psi_t);
}

/// <chi| dU/d(dt) |psi> = <chi| -i H U |psi>.
inline cplx overlap_dt_deriv(const EigStep& s, const VectorXcd& chi, const VectorXcd& psi) {
  VectorXcd chi_t = s.vecs.adjoint() * chi;
  VectorXcd psi_t = s.vecs.adjoint() * psi;
  cplx acc = 0.0;
  for (int a = 0; a < s.vals.size(); ++a)
    acc += std::conj(chi_t(a)) * (-kImag * s.vals(a)) * s.phases(a) * psi_t(a);
  return acc;
}

}  // namespace forge::stepgrad
