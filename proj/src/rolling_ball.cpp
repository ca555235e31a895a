#include "dirac/rolling_ball.hpp"

#include <cmath>
#include <complex>
#include <memory>

namespace dirac {

namespace {

using Complex = std::complex<double>;
constexpr double kComplexStep = 1e-30;
constexpr double kPi = 3.141592653589793;

// A = (1 - cos phi) / phi^2 and B = (phi - sin phi) / phi^3 as functions of
// phi^2, analytic so that complex-step differentiation goes through.
template <class T>
void jacobian_coeffs(const T& phi2, T& a, T& b) {
  if (std::abs(phi2) < 1e-2) {
    T term_a = T(0.5), term_b = T(1.0 / 6.0);
    a = T(0.0);
    b = T(0.0);
    for (int k = 0; k < 7; ++k) {
      a += term_a;
      b += term_b;
      term_a *= -phi2 / T(double((2 * k + 3) * (2 * k + 4)));
      term_b *= -phi2 / T(double((2 * k + 4) * (2 * k + 5)));
    }
    return;
  }
  using std::cos;
  using std::sin;
  using std::sqrt;
  const T phi = sqrt(phi2);
  a = (T(1.0) - cos(phi)) / phi2;
  b = (phi - sin(phi)) / (phi2 * phi);
}

template <class T>
using Vec3 = Eigen::Matrix<T, 3, 1>;

// Bilinear (non-conjugating) dot product; Eigen's dot conjugates complex input.
template <class T>
T bdot(const Vec3<T>& a, const Vec3<T>& b) {
  return a(0) * b(0) + a(1) * b(1) + a(2) * b(2);
}

template <class T>
Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return Vec3<T>(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2),
                 a(0) * b(1) - a(1) * b(0));
}

// Body angular velocity J_r(theta) theta_dot.
template <class T>
Vec3<T> body_rate(const Vec3<T>& th, const Vec3<T>& thd) {
  T a, b;
  jacobian_coeffs<T>(bdot<T>(th, th), a, b);
  const Vec3<T> c1 = cross<T>(th, thd);
  return thd - a * c1 + b * cross<T>(th, c1);
}

struct Inertia {
  double i1, i2, m3;
};

template <class T>
T ball_lagrangian(const Inertia& in, const Eigen::Matrix<T, 8, 1>& q,
                  const Eigen::Matrix<T, 8, 1>& v) {
  const Vec3<T> th = q.template segment<3>(2);
  const Vec3<T> thd = v.template segment<3>(2);
  const Vec3<T> w = body_rate<T>(th, thd);
  const Vec3<T> ud = v.template segment<3>(5);
  return T(0.5 * in.i1) * v(0) * v(0) + T(0.5 * in.i2) * v(1) * v(1) + T(in.m3) * bdot<T>(w, w) +
         T(0.5 * in.m3) * bdot<T>(ud, ud);
}

Vector complex_step_gradient(const Inertia& in, const Vector& q, const Vector& v, bool in_q) {
  Eigen::Matrix<Complex, 8, 1> qc = q.cast<Complex>();
  Eigen::Matrix<Complex, 8, 1> vc = v.cast<Complex>();
  Vector g(8);
  for (Index i = 0; i < 8; ++i) {
    Complex& x = in_q ? qc(i) : vc(i);
    const Complex saved = x;
    x += Complex(0.0, kComplexStep);
    g(i) = ball_lagrangian<Complex>(in, qc, vc).imag() / kComplexStep;
    x = saved;
  }
  return g;
}

}  // namespace

Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0, -w(2), w(1), w(2), 0, -w(0), -w(1), w(0), 0;
  return m;
}

Eigen::Matrix3d exp_so3(const Eigen::Vector3d& theta) {
  double a, b;
  jacobian_coeffs<double>(theta.squaredNorm(), a, b);
  // sin(phi)/phi = 1 - phi^2 B.
  const double s = 1.0 - theta.squaredNorm() * b;
  const Eigen::Matrix3d k = hat(theta);
  return Eigen::Matrix3d::Identity() + s * k + a * k * k;
}

Eigen::Matrix3d left_jacobian(const Eigen::Vector3d& theta) {
  double a, b;
  jacobian_coeffs<double>(theta.squaredNorm(), a, b);
  const Eigen::Matrix3d k = hat(theta);
  return Eigen::Matrix3d::Identity() + a * k + b * k * k;
}

Eigen::Matrix3d right_jacobian(const Eigen::Vector3d& theta) { return left_jacobian(-theta); }

LagrangeDiracSystem build_rolling_ball(const RollingBallParams& params) {
  const Inertia in{params.inertia_small, params.inertia_large,
                   4.0 * kPi / 3.0 * params.density};
  auto chart = std::make_shared<Eigen::Matrix3d>(Eigen::Matrix3d::Identity());

  auto lagrangian = LagrangianModel::closed_form(
      8,
      [in](const Vector& q, const Vector& v) {
        return ball_lagrangian<double>(in, q, v);
      },
      [in](const Vector& q, const Vector& v) { return complex_step_gradient(in, q, v, true); },
      [in](const Vector& q, const Vector& v) { return complex_step_gradient(in, q, v, false); });

  const double tau = params.torque;
  auto force = ForceField::custom(8, [tau](const Vector&, const Vector&, const Vector&) {
    Vector f = Vector::Zero(8);
    f(0) = tau;
    return f;
  });

  Matrix ball_row = Matrix::Zero(1, 6);
  ball_row(0, 5) = 1.0;
  std::vector<DistributionField> subs{DistributionField::unconstrained(1),
                                      DistributionField::unconstrained(1),
                                      DistributionField::constant(ball_row)};
  auto coupling = DistributionField::custom(8, 3, [chart](const Vector& q) {
    const Eigen::Matrix3d rj = *chart * left_jacobian(q.segment<3>(2));
    Matrix w = Matrix::Zero(3, 8);
    // Gears mesh: s1_dot + s2_dot = 0.
    w(0, 0) = 1.0;
    w(0, 1) = 1.0;
    // Contact point of the ball moves with table 2 (axle at the origin).
    w.block<1, 3>(1, 2) = -rj.row(1);
    w(1, 5) = 1.0;
    w(1, 1) = q(6);
    w.block<1, 3>(2, 2) = rj.row(0);
    w(2, 6) = 1.0;
    w(2, 1) = -q(5);
    return w;
  });

  LagrangeDiracSystem sys{"rolling-ball", std::move(lagrangian), std::move(force),
                          InterconnectionSpec(std::move(subs), std::move(coupling)), {}};
  sys.rechart = [chart](LagrangeDiracSystem& s, PontryaginState& st) {
    const Eigen::Vector3d th = st.q.segment<3>(2);
    if (th.norm() <= kRechartThreshold) return false;
    const Eigen::Vector3d rate = right_jacobian(th) * st.v.segment<3>(2);
    *chart = *chart * exp_so3(th);
    st.q.segment<3>(2).setZero();
    st.v.segment<3>(2) = rate;
    st.p = s.lagrangian.grad_v(st.q, st.v);
    return true;
  };
  return sys;
}

}  // namespace dirac
