#include "polymech/fields.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polymech::fields {

namespace {
constexpr double kPi = std::numbers::pi;
}

PlaneField cantilever_field(double E, double nu, double P, double L, double D,
                            bool plane_stress) {
  const double Eb = plane_stress ? E : E / (1 - nu * nu);
  const double nub = plane_stress ? nu : nu / (1 - nu);
  const double I = D * D * D / 12.0;
  PlaneField f;
  f.disp = [=](const Vector2d& p) {
    const double x = p.x(), y = p.y();
    const double u = P * y / (6 * Eb * I) *
                     ((6 * L - 3 * x) * x + (2 + nub) * (y * y - D * D / 4));
    const double v = -P / (6 * Eb * I) *
                     (3 * nub * y * y * (L - x) + (4 + 5 * nub) * D * D * x / 4 +
                      (3 * L - x) * x * x);
    return Vector2d(u, v);
  };
  f.stress = [=](const Vector2d& p) {
    const double x = p.x(), y = p.y();
    return Eigen::Vector3d(P * (L - x) * y / I, 0.0,
                           -P / (2 * I) * (D * D / 4 - y * y));
  };
  return f;
}

PlaneField kirsch_field(double E, double nu, double a, double sigma) {
  const double mu = E / (2 * (1 + nu));
  const double kap = (3 - nu) / (1 + nu);
  PlaneField f;
  f.disp = [=](const Vector2d& p) {
    const double r = p.norm(), th = std::atan2(p.y(), p.x());
    const double c = sigma * a / (8 * mu);
    const double ux = c * ((r / a) * (kap + 1) * std::cos(th) +
                           (2 * a / r) * ((1 + kap) * std::cos(th) + std::cos(3 * th)) -
                           (2 * a * a * a / (r * r * r)) * std::cos(3 * th));
    const double uy = c * ((r / a) * (kap - 3) * std::sin(th) +
                           (2 * a / r) * ((1 - kap) * std::sin(th) + std::sin(3 * th)) -
                           (2 * a * a * a / (r * r * r)) * std::sin(3 * th));
    return Vector2d(ux, uy);
  };
  f.stress = [=](const Vector2d& p) {
    const double r = p.norm(), th = std::atan2(p.y(), p.x());
    const double q = a * a / (r * r), q2 = q * q;
    const double c2 = std::cos(2 * th), c4 = std::cos(4 * th);
    const double s2 = std::sin(2 * th), s4 = std::sin(4 * th);
    return Eigen::Vector3d(
        sigma * (1 - q * (1.5 * c2 + c4) + 1.5 * q2 * c4),
        sigma * (-q * (0.5 * c2 - c4) - 1.5 * q2 * c4),
        sigma * (-q * (0.5 * s2 + s4) + 1.5 * q2 * s4));
  };
  return f;
}

PlaneField corner_singular_field(double E, double nu) {
  const double omega = 1.5 * kPi;
  const double lam = corner_mode1_exponent(omega);
  const double mu = E / (2 * (1 + nu));
  const double kap = 3 - 4 * nu;  // plane strain
  const double A = 1.0;
  const double B = -A * std::cos((lam + 1) * omega / 2) /
                   std::cos((lam - 1) * omega / 2);
  const double scale = 1.0 / (lam * (lam + 1) * (A + B));
  const double rot = 0.75 * kPi;  // local bisector direction in global frame
  auto local_theta = [=](const Vector2d& p) {
    double thg = std::atan2(p.y(), p.x());
    if (thg < 0) thg += 2 * kPi;  // material spans (0, 3pi/2)
    return thg - rot;
  };
  PlaneField f;
  f.disp = [=](const Vector2d& p) {
    const double r = p.norm();
    if (r == 0.0) return Vector2d::Zero().eval();
    const double th = local_theta(p);
    const double rl = std::pow(r, lam);
    const double ur = scale / (2 * mu) * rl *
                      (-A * (lam + 1) * std::cos((lam + 1) * th) +
                       B * (kap - lam) * std::cos((lam - 1) * th));
    const double ut = scale / (2 * mu) * rl *
                      (A * (lam + 1) * std::sin((lam + 1) * th) +
                       B * (kap + lam) * std::sin((lam - 1) * th));
    const double ang = th + rot;
    const double ce = std::cos(ang), se = std::sin(ang);
    return Vector2d(ur * ce - ut * se, ur * se + ut * ce);
  };
  f.stress = [=](const Vector2d& p) {
    const double r = p.norm();
    const double th = local_theta(p);
    const double g = A * std::cos((lam + 1) * th) + B * std::cos((lam - 1) * th);
    const double gp = -A * (lam + 1) * std::sin((lam + 1) * th) -
                      B * (lam - 1) * std::sin((lam - 1) * th);
    const double gpp = -A * (lam + 1) * (lam + 1) * std::cos((lam + 1) * th) -
                       B * (lam - 1) * (lam - 1) * std::cos((lam - 1) * th);
    const double rl = scale * std::pow(r, lam - 1);
    const double stt = rl * lam * (lam + 1) * g;
    const double srt = -rl * lam * gp;
    const double srr = rl * ((lam + 1) * g + gpp);
    const double ang = th + rot;
    const double ce = std::cos(ang), se = std::sin(ang);
    return Eigen::Vector3d(
        srr * ce * ce + stt * se * se - 2 * srt * ce * se,
        srr * se * se + stt * ce * ce + 2 * srt * ce * se,
        (srr - stt) * ce * se + srt * (ce * ce - se * se));
  };
  return f;
}

PlaneField crack_tip_field(double KI, double KII, double E, double nu,
                           bool plane_stress) {
  const double mu = E / (2 * (1 + nu));
  const double kap = plane_stress ? (3 - nu) / (1 + nu) : 3 - 4 * nu;
  PlaneField f;
  f.disp = [=](const Vector2d& p) {
    const double r = p.norm(), th = std::atan2(p.y(), p.x());
    const double c2 = std::cos(th / 2), s2 = std::sin(th / 2);
    const double g = std::sqrt(r / (2 * kPi)) / (2 * mu);
    const double ux = g * (KI * c2 * (kap - 1 + 2 * s2 * s2) +
                           KII * s2 * (kap + 1 + 2 * c2 * c2));
    const double uy = g * (KI * s2 * (kap + 1 - 2 * c2 * c2) -
                           KII * c2 * (kap - 1 - 2 * s2 * s2));
    return Vector2d(ux, uy);
  };
  f.stress = [=](const Vector2d& p) {
    const double r = p.norm(), th = std::atan2(p.y(), p.x());
    const double c2 = std::cos(th / 2), s2 = std::sin(th / 2);
    const double c32 = std::cos(3 * th / 2), s32 = std::sin(3 * th / 2);
    const double g = 1.0 / std::sqrt(2 * kPi * r);
    return Eigen::Vector3d(
        g * (KI * c2 * (1 - s2 * s32) - KII * s2 * (2 + c2 * c32)),
        g * (KI * c2 * (1 + s2 * s32) + KII * s2 * c2 * c32),
        g * (KI * c2 * s2 * c32 + KII * c2 * (1 - s2 * s32)));
  };
  return f;
}

SolidField shear_beam_field(double E, double nu, double F, double a, double b,
                            double L, int terms) {
  const double I = 4.0 * a * b * b * b / 3.0;
  // Ratio helpers keep every exponent nonpositive for |y| <= b.
  auto sinh_ratio = [](double p, double q) {
    return (std::exp(p - q) - std::exp(-p - q)) / (1 + std::exp(-2 * q));
  };
  auto cosh_ratio = [](double p, double q) {
    return (std::exp(p - q) + std::exp(-p - q)) / (1 + std::exp(-2 * q));
  };
  SolidField f;
  f.disp = [=](const Vector3d& p) {
    const double x = p.x(), y = p.y(), z = p.z();
    double series = 0.0;
    for (int n = 1; n <= terms; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      series += sign / (n * n * n) * std::cos(n * kPi * x / a) *
                sinh_ratio(n * kPi * y / a, n * kPi * b / a);
    }
    const double u = -nu * F * x * y * z / (E * I);
    const double v = F / (E * I) * (nu * (x * x - y * y) * z / 2 - z * z * z / 6);
    const double w =
        F / (E * I) *
        (y * (nu * x * x + z * z) / 2 + nu * y * y * y / 6 +
         (1 + nu) * (b * b * y - y * y * y / 3) - nu * a * a * y / 3 -
         4 * nu * a * a * a / (kPi * kPi * kPi) * series);
    return Vector3d(u, v, w);
  };
  f.stress = [=](const Vector3d& p) {
    const double x = p.x(), y = p.y(), z = p.z();
    double sx = 0.0, sy = 0.0;
    for (int n = 1; n <= terms; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      sx += sign / (n * n) * std::sin(n * kPi * x / a) *
            sinh_ratio(n * kPi * y / a, n * kPi * b / a);
      sy += sign / (n * n) * std::cos(n * kPi * x / a) *
            cosh_ratio(n * kPi * y / a, n * kPi * b / a);
    }
    Vector6d s = Vector6d::Zero();
    s(2) = F * y * z / I;  // zz
    const double c = nu * F / (I * (1 + nu));
    s(5) = 2 * a * a * c / (kPi * kPi) * sx;  // zx
    s(4) = F * (b * b - y * y) / (2 * I) +
           c * ((3 * x * x - a * a) / 6 - 2 * a * a / (kPi * kPi) * sy);  // yz
    return s;
  };
  (void)L;
  return f;
}

double corner_mode1_exponent(double omega) {
  auto g = [omega](double lam) {
    return lam * std::sin(omega) + std::sin(lam * omega);
  };
  double lo = 0.5, hi = 0.6;
  if (g(lo) * g(hi) > 0) throw std::runtime_error("corner_mode1_exponent: no bracket");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(lo) * g(mid) <= 0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double edge_crack_reference_ki(double a, double b, double sigma) {
  const double t = a / b;
  const double C = 1.12 + 0.203 * t - 1.197 * t * t + 1.930 * t * t * t;
  return C * sigma * std::sqrt(kPi * a);
}

std::pair<double, double> inclined_crack_reference(double beta, double sigma1,
                                                   double sigma2, double a) {
  const double sb = std::sin(beta), cb = std::cos(beta);
  const double KI = (sigma2 * sb * sb + sigma1 * cb * cb) * std::sqrt(kPi * a);
  const double KII = (sigma2 - sigma1) * sb * cb * std::sqrt(kPi * a);
  return {KI, KII};
}

double fd_equilibrium_residual(const PlaneField& f,
                               const std::vector<Vector2d>& points, double h) {
  double worst = 0.0;
  for (const auto& p : points) {
    const Eigen::Vector3d sxp = f.stress(p + Vector2d(h, 0));
    const Eigen::Vector3d sxm = f.stress(p - Vector2d(h, 0));
    const Eigen::Vector3d syp = f.stress(p + Vector2d(0, h));
    const Eigen::Vector3d sym = f.stress(p - Vector2d(0, h));
    const double rx = (sxp(0) - sxm(0)) / (2 * h) + (syp(2) - sym(2)) / (2 * h);
    const double ry = (sxp(2) - sxm(2)) / (2 * h) + (syp(1) - sym(1)) / (2 * h);
    worst = std::max({worst, std::abs(rx), std::abs(ry)});
  }
  return worst;
}

}  // namespace polymech::fields
