#include "polymech/sbfem.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace polymech::sbfem {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

constexpr double kGauss1 = 0.5773502691896257645091488;

struct LocalChain {
  std::vector<Vector2d> pts;            // center-shifted, frame-rotated
  std::vector<std::pair<int, int>> elems;
};

LocalChain local_chain(const SbfemElement& el) {
  LocalChain lc;
  const double c = std::cos(el.frame_angle), s = std::sin(el.frame_angle);
  for (const auto& p : el.coords) {
    const Vector2d d = p - el.center;
    lc.pts.emplace_back(c * d.x() + s * d.y(), -s * d.x() + c * d.y());
  }
  const int n = static_cast<int>(lc.pts.size());
  if (n < 2) fail("sbfem: chain needs at least 2 nodes");
  for (int i = 0; i + 1 < n; ++i) lc.elems.emplace_back(i, i + 1);
  if (el.closed) lc.elems.emplace_back(n - 1, 0);
  return lc;
}

struct LinePointOps {
  Eigen::Matrix<double, 3, 4> B1, B2;
  double jac;
};

// b1, b2 follow from the inverse of the scaled-boundary Jacobian; the strain
// is b1 N u' /xi + b2 N,eta u with u' the radial derivative.
LinePointOps line_point_ops(const Vector2d& c1, const Vector2d& c2, double eta) {
  const double n1 = 0.5 * (1 - eta), n2 = 0.5 * (1 + eta);
  const double xb = n1 * c1.x() + n2 * c2.x();
  const double yb = n1 * c1.y() + n2 * c2.y();
  const double xd = 0.5 * (c2.x() - c1.x());
  const double yd = 0.5 * (c2.y() - c1.y());
  const double J = xb * yd - yb * xd;
  if (std::abs(J) < 1e-300) fail("sbfem: singular boundary Jacobian");
  LinePointOps ops;
  ops.jac = J;
  Eigen::Matrix<double, 3, 2> b1, b2;
  b1 << yd, 0, 0, -xd, -xd, yd;
  b2 << -yb, 0, 0, xb, xb, -yb;
  b1 /= J;
  b2 /= J;
  Eigen::Matrix<double, 2, 4> N, dN;
  N << n1, 0, n2, 0, 0, n1, 0, n2;
  dN << -0.5, 0, 0.5, 0, 0, -0.5, 0, 0.5;
  ops.B1 = b1 * N;
  ops.B2 = b2 * dN;
  return ops;
}

}  // namespace

CoeffMats sbfem_coefficient_matrices(const SbfemElement& el,
                                     const Eigen::Matrix3d& D) {
  const LocalChain lc = local_chain(el);
  const int nd = 2 * static_cast<int>(lc.pts.size());
  CoeffMats cm;
  cm.E0 = MatrixXd::Zero(nd, nd);
  cm.E1 = MatrixXd::Zero(nd, nd);
  cm.E2 = MatrixXd::Zero(nd, nd);
  for (const auto& [i, j] : lc.elems) {
    Eigen::Matrix4d e0 = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d e1 = Eigen::Matrix4d::Zero();
    Eigen::Matrix4d e2 = Eigen::Matrix4d::Zero();
    for (const double eta : {-kGauss1, kGauss1}) {
      const LinePointOps ops = line_point_ops(lc.pts[i], lc.pts[j], eta);
      e0 += ops.B1.transpose() * D * ops.B1 * ops.jac;
      e1 += ops.B2.transpose() * D * ops.B1 * ops.jac;
      e2 += ops.B2.transpose() * D * ops.B2 * ops.jac;
    }
    const int dofs[4] = {2 * i, 2 * i + 1, 2 * j, 2 * j + 1};
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        cm.E0(dofs[a], dofs[b]) += e0(a, b);
        cm.E1(dofs[a], dofs[b]) += e1(a, b);
        cm.E2(dofs[a], dofs[b]) += e2(a, b);
      }
  }
  return cm;
}

ModalBasis sbfem_modal_basis(const CoeffMats& cm) {
  const int nd = static_cast<int>(cm.E0.rows());
  // The exponents are invariant under a uniform rescaling of E0/E1/E2
  // (block-diagonal similarity); normalizing by the material scale keeps the
  // Hamiltonian balanced, which the unsymmetric eigensolver needs. The
  // boundary-force modes are scaled back afterwards.
  const double mat_scale = cm.E0.norm();
  const MatrixXd E0 = cm.E0 / mat_scale;
  const MatrixXd E1 = cm.E1 / mat_scale;
  const MatrixXd E2 = cm.E2 / mat_scale;
  const MatrixXd E0i = E0.inverse();
  MatrixXd Z(2 * nd, 2 * nd);
  Z.topLeftCorner(nd, nd) = E0i * E1.transpose();
  Z.topRightCorner(nd, nd) = -E0i;
  Z.bottomLeftCorner(nd, nd) = E1 * E0i * E1.transpose() - E2;
  Z.bottomRightCorner(nd, nd) = -E1 * E0i;
  Eigen::EigenSolver<MatrixXd> es(Z);
  if (es.info() != Eigen::Success) fail("sbfem: eigen decomposition failed");
  VectorXcd lam = es.eigenvalues();
  MatrixXcd V = es.eigenvectors();
  const double rho = lam.cwiseAbs().maxCoeff();
  const double eps = 1e-6 * rho;
  std::vector<int> order(2 * nd);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (lam(a).real() != lam(b).real()) return lam(a).real() < lam(b).real();
    return lam(a).imag() < lam(b).imag();
  });
  VectorXcd lam_s(2 * nd);
  MatrixXcd Vs(2 * nd, 2 * nd);
  for (int k = 0; k < 2 * nd; ++k) {
    lam_s(k) = lam(order[k]);
    Vs.col(k) = V.col(order[k]);
  }
  // Within a cluster of (numerically) equal eigenvalues the eigenvector
  // basis returned by the solver can be nearly parallel; replace it by an
  // orthonormal basis of the same span and average the eigenvalue.
  int k = 0;
  while (k < 2 * nd) {
    int j = k + 1;
    while (j < 2 * nd && std::abs(lam_s(j) - lam_s(k)) < eps) ++j;
    if (j - k > 1) {
      const Eigen::HouseholderQR<MatrixXcd> qr(Vs.middleCols(k, j - k));
      Vs.middleCols(k, j - k) =
          qr.householderQ() * MatrixXcd::Identity(2 * nd, j - k);
      lam_s.segment(k, j - k).setConstant(lam_s.segment(k, j - k).mean());
    }
    k = j;
  }
  std::vector<int> keep;
  for (int m = 0; m < 2 * nd; ++m)
    if (lam_s(m).real() < -eps) keep.push_back(m);
  const int nm = static_cast<int>(keep.size());
  ModalBasis mb;
  mb.rigid_eps = eps;
  mb.lambda.resize(nm + 2);
  mb.Phi_u = MatrixXcd::Zero(nd, nm + 2);
  mb.Phi_q = MatrixXcd::Zero(nd, nm + 2);
  for (int m = 0; m < nm; ++m) {
    VectorXcd u = Vs.col(keep[m]).head(nd);
    VectorXcd q = Vs.col(keep[m]).tail(nd);
    int imax = 0;
    u.cwiseAbs().maxCoeff(&imax);
    const std::complex<double> scale = u(imax);
    mb.lambda(m) = lam_s(keep[m]);
    mb.Phi_u.col(m) = u / scale;
    mb.Phi_q.col(m) = q * (mat_scale / scale);
  }
  // Rigid translations: u constant, no boundary force, lambda = 0.
  for (int t = 0; t < 2; ++t) {
    mb.lambda(nm + t) = 0.0;
    for (int i = t; i < nd; i += 2) mb.Phi_u(i, nm + t) = 1.0;
  }
  if (nm + 2 != nd)
    fail("sbfem: mode count does not match boundary dof count");
  return mb;
}

namespace {

MatrixXd frame_rotation(const SbfemElement& el) {
  const int n = static_cast<int>(el.coords.size());
  MatrixXd R = MatrixXd::Zero(2 * n, 2 * n);
  const double c = std::cos(el.frame_angle), s = std::sin(el.frame_angle);
  for (int i = 0; i < n; ++i) {
    R(2 * i, 2 * i) = c;
    R(2 * i, 2 * i + 1) = -s;
    R(2 * i + 1, 2 * i) = s;
    R(2 * i + 1, 2 * i + 1) = c;
  }
  return R;  // local -> global
}

}  // namespace

MatrixXd sbfem_stiffness(const SbfemElement& el, const ModalBasis& mb) {
  const MatrixXcd K = mb.Phi_q * mb.Phi_u.inverse();
  const double kmax = K.cwiseAbs().maxCoeff();
  const double imax = K.imag().cwiseAbs().maxCoeff();
  if (imax > 1e-8 * kmax) fail("sbfem_stiffness: non-real stiffness");
  MatrixXd Kr = K.real();
  const double asym = (Kr - Kr.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-8 * kmax) fail("sbfem_stiffness: asymmetric stiffness");
  Kr = 0.5 * (Kr + Kr.transpose());
  const MatrixXd R = frame_rotation(el);
  return R * Kr * R.transpose();
}

SifResult sbfem_stress_and_sif(const SbfemElement& el, const ModalBasis& mb,
                               const Eigen::Matrix3d& D, const VectorXd& u_chain) {
  const LocalChain lc = local_chain(el);
  const int n = static_cast<int>(lc.pts.size());
  // Solution in the local frame.
  VectorXcd ul(2 * n);
  const double c = std::cos(el.frame_angle), s = std::sin(el.frame_angle);
  for (int i = 0; i < n; ++i) {
    ul(2 * i) = c * u_chain(2 * i) + s * u_chain(2 * i + 1);
    ul(2 * i + 1) = -s * u_chain(2 * i) + c * u_chain(2 * i + 1);
  }
  const VectorXcd coef = mb.Phi_u.partialPivLu().solve(ul);
  // The intensity factors follow from the singular modes' displacement jump
  // across the crack faces, i.e. between the two copies of the chain's end
  // vertex: K = (E'/8) sqrt(2 pi / L) (u_top - u_bot). The displacement jump
  // is a nodal quantity, so it avoids the tangential-derivative error that a
  // pointwise stress evaluation on an irregular chain picks up.
  if (el.closed) fail("sbfem_stress_and_sif: chain is not cracked");
  const Vector2d pa = lc.pts.front(), pb = lc.pts.back();
  if ((pa - pb).norm() > 1e-9 * (pa.norm() + pb.norm()))
    fail("sbfem_stress_and_sif: crack-face end nodes do not coincide");
  const double L = pa.norm();
  if (!(L > 0.0)) fail("sbfem_stress_and_sif: crack mouth at the center");
  // The chain runs counterclockwise, so it starts on the bottom face.
  if (n > 2 && lc.pts[1].y() > lc.pts[n - 2].y())
    fail("sbfem_stress_and_sif: chain does not start on the bottom face");
  // Plane modulus from the constitutive matrix; equals E in plane stress and
  // E/(1-nu^2) in plane strain.
  const double Ep = (D(0, 0) * D(0, 0) - D(0, 1) * D(0, 1)) / D(0, 0);
  const double amp =
      Ep / 8.0 * std::sqrt(2.0 * std::numbers::pi / L);
  SifResult out;
  std::complex<double> KI = 0.0, KII = 0.0;
  for (int m = 0; m < mb.lambda.size(); ++m) {
    const double lr = mb.lambda(m).real();
    if (!(lr > -1.0 + mb.rigid_eps && lr < -mb.rigid_eps)) continue;
    out.singular_exponents.push_back(lr);
    const std::complex<double> dux =
        mb.Phi_u(2 * (n - 1), m) - mb.Phi_u(0, m);
    const std::complex<double> duy =
        mb.Phi_u(2 * (n - 1) + 1, m) - mb.Phi_u(1, m);
    KI += amp * duy * coef(m);
    KII += amp * dux * coef(m);
  }
  out.KI = KI.real();
  out.KII = KII.real();
  return out;
}

}  // namespace polymech::sbfem
