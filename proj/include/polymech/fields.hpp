#ifndef POLYMECH_FIELDS_HPP
#define POLYMECH_FIELDS_HPP

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

namespace polymech::fields {

using Eigen::Vector2d;
using Eigen::Vector3d;
using Vector6d = Eigen::Matrix<double, 6, 1>;

// Closed-form reference solution on a two-dimensional domain. Stress order:
// xx, yy, xy.
struct PlaneField {
  std::function<Vector2d(const Vector2d&)> disp;
  std::function<Vector3d(const Vector2d&)> stress;
};

// Reference solution in 3D. Stress order: xx, yy, zz, xy, yz, zx.
struct SolidField {
  std::function<Vector3d(const Vector3d&)> disp;
  std::function<Vector6d(const Vector3d&)> stress;
};

// End-loaded cantilever on [0,L] x [-D/2, D/2], clamped through the exact
// displacements at x = 0, parabolic shear resultant P at x = L.
PlaneField cantilever_field(double E, double nu, double P, double L, double D,
                            bool plane_stress = true);

// Uniaxial far-field tension sigma along x around a traction-free circular
// hole of radius a (plane stress).
PlaneField kirsch_field(double E, double nu, double a, double sigma);

// Leading mode I eigenfield of a 270-degree reentrant corner at the origin;
// material occupies polar angles (0, 3pi/2), generalized intensity factor
// normalized to 1, plane strain.
PlaneField corner_singular_field(double E, double nu);

// Mode I/II crack-tip displacement field, crack along the negative x axis.
PlaneField crack_tip_field(double KI, double KII, double E, double nu,
                           bool plane_stress = true);

// Shear-loaded prismatic cantilever [-a,a] x [-b,b] x [0,L], end load F at
// z = 0, fixed through exact displacements at z = L. Series evaluated with
// overflow-safe exponential ratios.
SolidField shear_beam_field(double E, double nu, double F, double a, double b,
                            double L, int terms = 512);

// Root of lambda*sin(omega) + sin(lambda*omega) = 0 in (0.5, 0.6) for a
// corner of opening angle omega (bisection).
double corner_mode1_exponent(double omega);

// Handbook reference factors.
double edge_crack_reference_ki(double a, double b, double sigma);
// Center crack of half-length a at angle beta to the x axis under biaxial
// stress (sigma1 along y at beta = 0 convention): returns (KI, KII).
std::pair<double, double> inclined_crack_reference(double beta, double sigma1,
                                                   double sigma2, double a);

// Max norm of the stress divergence over the sample points, stresses
// differentiated by central differences with step h.
double fd_equilibrium_residual(const PlaneField& f,
                               const std::vector<Vector2d>& points, double h);

}  // namespace polymech::fields

#endif
