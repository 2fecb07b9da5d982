#ifndef POLYMECH_SBFEM_HPP
#define POLYMECH_SBFEM_HPP

#include <Eigen/Dense>
#include <vector>

namespace polymech::sbfem {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Scaled-boundary element: a chain of boundary nodes scaled toward a center.
// A closed chain wraps around (uncracked polygon); an open chain leaves the
// gap between its end nodes unconnected (crack faces meeting at the tip).
// frame_angle rotates the local analysis frame; for crack tips the local +x
// axis must point along the crack extension direction.
struct SbfemElement {
  std::vector<Vector2d> coords;  // boundary nodes, global frame
  Vector2d center = Vector2d::Zero();
  bool closed = true;
  double frame_angle = 0.0;
};

// Coefficient matrices from 2-node line elements on the scaled boundary,
// 2-point Gauss, in the local (shifted, rotated) frame.
struct CoeffMats {
  MatrixXd E0, E1, E2;  // 2n x 2n
};

CoeffMats sbfem_coefficient_matrices(const SbfemElement& el,
                                     const Eigen::Matrix3d& D);

// Modal decomposition of the Hamiltonian-like matrix
//   Z = [ E0^-1 E1^T, -E0^-1 ; E1 E0^-1 E1^T - E2, -E1 E0^-1 ].
// Kept fully complex: eigenvalues are sorted by (real, imag), clusters within
// 1e-6 of the spectral radius share a QR-orthonormalized eigenvector block
// (the stiffness is invariant to basis changes inside a cluster), and each
// column is normalized by its largest displacement entry. Modes with
// Re(lambda) < -eps are retained; the two rigid translations are appended
// analytically with lambda = 0.
struct ModalBasis {
  VectorXcd lambda;
  MatrixXcd Phi_u, Phi_q;  // 2n x m displacement / force mode blocks
  double rigid_eps = 0.0;
};

ModalBasis sbfem_modal_basis(const CoeffMats& cm);

// K = Re(Phi_q Phi_u^{-1}) in the local frame, rotated back to global dofs.
// Throws if the imaginary part or the asymmetry exceeds 1e-8 relative.
MatrixXd sbfem_stiffness(const SbfemElement& el, const ModalBasis& mb);

struct SifResult {
  double KI = 0.0;
  double KII = 0.0;
  std::vector<double> singular_exponents;  // Re(lambda) in (-1, 0)
};

// Mode I/II intensity factors from the modal expansion of a solved boundary
// displacement vector (global frame, chain dof order). The stress modes are
// evaluated on the boundary element whose first node lies on the crack
// extension ray (local theta = 0), at its first node; L_O is that node's
// distance from the center.
SifResult sbfem_stress_and_sif(const SbfemElement& el, const ModalBasis& mb,
                               const Eigen::Matrix3d& D, const VectorXd& u_chain);

}  // namespace polymech::sbfem

#endif
