#pragma once
// Hamiltonians and vector fields of the circular 2+2 Sitnikov problem, the
// symplectic regularization rho, the regularized Hamiltonian L and the
// collision bounce maps.
//
// Units: primaries of mass 1/2 on a circle of radius 1/2, hence the 1/4 under
// every radical.  Positions q3, q4 are measured on the common vertical axis.
//
// Momentum conventions.  The reduced Hamiltonian (and rho, L, bounce_map) use
// the mass momenta p = diag(alpha, beta) v.  The restricted Hamiltonian with
// the c-weighting and the analytic solutions use p_i = dq_i/dt.  Use
// to_velocities / from_velocities to move between them.

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>

#include "sitnikov/error.hpp"

namespace sitnikov {

template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;
template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

/// |q3 - q4| below this counts as a collision.
inline constexpr double kCollisionTolerance = 1e-10;

/// Mass-ratio bundle: c = nu/mu in (0, 1], alpha = 1/(1+c), beta = 1 - alpha.
template <typename Scalar = double>
struct MassParams {
  Scalar c = 1;
  Scalar mu = 0;
  Scalar alpha = Scalar(0.5);
  Scalar beta = Scalar(0.5);

  static MassParams from_ratio(Scalar c, Scalar mu = 0) {
    if (!(c > 0 && c <= 1)) {
      throw DomainError("MassParams: mass ratio c must lie in (0, 1], got " + std::to_string(double(c)));
    }
    if (!(mu >= 0) || !std::isfinite(mu)) throw DomainError("MassParams: mu must be finite and >= 0");
    const Scalar alpha = 1 / (1 + c);
    return {c, mu, alpha, 1 - alpha};
  }

  bool restricted() const { return mu == 0; }
  bool equal_masses() const {
    using std::abs;
    return abs(alpha - Scalar(0.5)) <= 8 * std::numeric_limits<Scalar>::epsilon();
  }
};

/// (q3, q4, p3, p4) of the two secondaries in original coordinates.
template <typename Scalar = double>
struct State {
  Scalar q3 = 0;
  Scalar q4 = 0;
  Scalar p3 = 0;
  Scalar p4 = 0;

  Vector4<Scalar> vector() const { return {q3, q4, p3, p4}; }
  static State from_vector(const Vector4<Scalar>& v) { return {v(0), v(1), v(2), v(3)}; }
};

/// (Q3, Q4, P3, P4) regularized coordinates; Q3 = 0 is the collision locus.
template <typename Scalar = double>
struct RegState {
  Scalar Q3 = 0;
  Scalar Q4 = 0;
  Scalar P3 = 0;
  Scalar P4 = 0;

  Vector4<Scalar> vector() const { return {Q3, Q4, P3, P4}; }
  static RegState from_vector(const Vector4<Scalar>& v) { return {v(0), v(1), v(2), v(3)}; }
};

// ---------------------------------------------------------------------------
// Potentials and Hamiltonians

/// 1 / sqrt(q^2 + 1/4), the attraction of the two primaries on the axis.
template <typename Scalar>
Scalar axis_potential(Scalar q) {
  using std::sqrt;
  return 1 / sqrt(q * q + Scalar(0.25));
}

/// d/dq of -axis_potential, i.e. q / (q^2 + 1/4)^{3/2}.
template <typename Scalar>
Scalar axis_force_gradient(Scalar q) {
  using std::sqrt;
  const Scalar r2 = q * q + Scalar(0.25);
  return q / (r2 * sqrt(r2));
}

/// Energy of one decoupled Sitnikov oscillator, p^2/2 - 1/sqrt(q^2 + 1/4).
template <typename Scalar>
Scalar partial_energy(Scalar q, Scalar p) {
  return p * p / 2 - axis_potential(q);
}

namespace detail {

template <typename Scalar>
void require_separated(const State<Scalar>& s, const MassParams<Scalar>& m, const char* who) {
  if (m.mu > 0 && s.q3 == s.q4) {
    throw SingularityError(std::string(who) + ": collision q3 = q4 is singular when mu > 0");
  }
}

}  // namespace detail

/// Reduced Hamiltonian with mass momenta; singular at q3 = q4 when mu > 0.
template <typename Scalar>
Scalar hamiltonian_reduced(const State<Scalar>& s, const MassParams<Scalar>& m) {
  detail::require_separated(s, m, "hamiltonian_reduced");
  Scalar value = s.p3 * s.p3 / (2 * m.alpha) + s.p4 * s.p4 / (2 * m.beta) - m.alpha * axis_potential(s.q3) -
                 m.beta * axis_potential(s.q4);
  if (m.mu > 0) value -= m.mu * m.beta / (s.q3 - s.q4);
  return value;
}

/// Two uncoupled Sitnikov problems, (p3^2/2 - V3) + c (p4^2/2 - V4), p_i = dq_i/dt.
template <typename Scalar>
Scalar hamiltonian_restricted(const State<Scalar>& s, Scalar c) {
  return partial_energy(s.q3, s.p3) + c * partial_energy(s.q4, s.p4);
}

/// (dq3/dt, dq4/dt, dp3/dt, dp4/dt) of the reduced Hamiltonian.
template <typename Scalar>
Vector4<Scalar> vector_field_original(const State<Scalar>& s, const MassParams<Scalar>& m) {
  detail::require_separated(s, m, "vector_field_original");
  Vector4<Scalar> out;
  out(0) = s.p3 / m.alpha;
  out(1) = s.p4 / m.beta;
  out(2) = -m.alpha * axis_force_gradient(s.q3);
  out(3) = -m.beta * axis_force_gradient(s.q4);
  if (m.mu > 0) {
    const Scalar d = s.q3 - s.q4;
    const Scalar pair = m.mu * m.beta / (d * d);
    out(2) -= pair;
    out(3) += pair;
  }
  return out;
}

template <typename Scalar>
State<Scalar> to_velocities(const State<Scalar>& s, const MassParams<Scalar>& m) {
  return {s.q3, s.q4, s.p3 / m.alpha, s.p4 / m.beta};
}

template <typename Scalar>
State<Scalar> from_velocities(const State<Scalar>& v, const MassParams<Scalar>& m) {
  return {v.q3, v.q4, m.alpha * v.p3, m.beta * v.p4};
}

// ---------------------------------------------------------------------------
// Regularization

/// Positions of rho; defined on Q3 = 0 as well (q3 = q4 = Q4 there).
template <typename Scalar>
std::pair<Scalar, Scalar> rho_positions(const RegState<Scalar>& r, const MassParams<Scalar>& m) {
  const Scalar half_sq = r.Q3 * r.Q3 / 2;
  return {r.Q4 + m.beta * half_sq, r.Q4 - m.alpha * half_sq};
}

/// The symplectic map rho: (Q, P) -> (q, p).  Momenta are undefined at Q3 = 0.
template <typename Scalar>
State<Scalar> rho(const RegState<Scalar>& r, const MassParams<Scalar>& m) {
  if (r.Q3 == 0) throw SingularityError("rho: momenta are undefined on the collision locus Q3 = 0");
  const auto [q3, q4] = rho_positions(r, m);
  const Scalar w = r.P3 / r.Q3;
  return {q3, q4, m.alpha * r.P4 + w, m.beta * r.P4 - w};
}

/// Inverse of rho on q3 > q4; branch = +1 or -1 picks the sign of Q3.
template <typename Scalar>
RegState<Scalar> rho_inverse(const State<Scalar>& s, const MassParams<Scalar>& m, int branch = 1) {
  using std::sqrt;
  const Scalar gap = s.q3 - s.q4;
  if (!(gap > 0)) {
    throw DomainError("rho_inverse: regularized coordinates cover q3 > q4 only (q3 - q4 = Q3^2 / 2)");
  }
  const Scalar Q3 = (branch >= 0 ? 1 : -1) * sqrt(2 * gap);
  return {Q3, s.q3 - m.beta * gap, Q3 * (m.beta * s.p3 - m.alpha * s.p4), s.p3 + s.p4};
}

/// Closed-form Jacobian d(q3, q4, p3, p4) / d(Q3, Q4, P3, P4).
template <typename Scalar>
Matrix4<Scalar> rho_jacobian(const RegState<Scalar>& r, const MassParams<Scalar>& m) {
  if (r.Q3 == 0) throw SingularityError("rho_jacobian: singular at Q3 = 0");
  const Scalar inv = 1 / r.Q3;
  const Scalar w = r.P3 * inv * inv;
  Matrix4<Scalar> j = Matrix4<Scalar>::Zero();
  j(0, 0) = m.beta * r.Q3;
  j(0, 1) = 1;
  j(1, 0) = -m.alpha * r.Q3;
  j(1, 1) = 1;
  j(2, 0) = -w;
  j(2, 2) = inv;
  j(2, 3) = m.alpha;
  j(3, 0) = w;
  j(3, 2) = -inv;
  j(3, 3) = m.beta;
  return j;
}

/// Standard symplectic matrix for omega = sum dp ^ dq in (q, p) ordering.
template <typename Scalar>
Matrix4<Scalar> standard_symplectic_matrix() {
  Matrix4<Scalar> omega = Matrix4<Scalar>::Zero();
  omega.template topRightCorner<2, 2>() = -Matrix2<Scalar>::Identity();
  omega.template bottomLeftCorner<2, 2>() = Matrix2<Scalar>::Identity();
  return omega;
}

enum class JacobianMode { analytic, finite_difference };

/// Frobenius norm of J^T Omega J - Omega for the Jacobian J of rho at r.
template <typename Scalar>
Scalar symplectic_defect(const RegState<Scalar>& r, const MassParams<Scalar>& m,
                         JacobianMode mode = JacobianMode::analytic) {
  using std::abs;
  using std::cbrt;
  using std::max;
  Matrix4<Scalar> j;
  if (mode == JacobianMode::analytic) {
    j = rho_jacobian(r, m);
  } else {
    if (r.Q3 == 0) throw SingularityError("symplectic_defect: singular at Q3 = 0");
    const Vector4<Scalar> x = r.vector();
    const Scalar base = cbrt(std::numeric_limits<Scalar>::epsilon());
    for (int col = 0; col < 4; ++col) {
      Scalar step = base * max(Scalar(1), abs(x(col)));
      if (col == 0) step = std::min(step, abs(x(0)) / 4);
      Vector4<Scalar> plus = x, minus = x;
      plus(col) += step;
      minus(col) -= step;
      j.col(col) = (rho(RegState<Scalar>::from_vector(plus), m).vector() -
                    rho(RegState<Scalar>::from_vector(minus), m).vector()) /
                   (2 * step);
    }
  }
  const Matrix4<Scalar> omega = standard_symplectic_matrix<Scalar>();
  return (j.transpose() * omega * j - omega).norm();
}

/// Regularized Hamiltonian L = alpha beta Q3^2 (H o rho - h), regular on Q3 = 0.
template <typename Scalar>
Scalar hamiltonian_regularized(const RegState<Scalar>& r, Scalar mu, Scalar h, const MassParams<Scalar>& m) {
  using std::sqrt;
  const Scalar ab = m.alpha * m.beta;
  const Scalar q3sq = r.Q3 * r.Q3;
  const Scalar a = 2 * r.Q4 + m.beta * q3sq;
  const Scalar b = 2 * r.Q4 - m.alpha * q3sq;
  const Scalar attraction = 2 * m.alpha / sqrt(a * a + 1) + 2 * m.beta / sqrt(b * b + 1);
  return (ab * r.P4 * r.P4 * q3sq + r.P3 * r.P3) / 2 - 2 * ab * m.beta * mu - ab * q3sq * (attraction + h);
}

/// Hamiltonian vector field of L in the fictitious time tau:
/// (dQ3, dQ4, dP3, dP4) / dtau.
template <typename Scalar>
Vector4<Scalar> regularized_vector_field(const RegState<Scalar>& r, Scalar h, const MassParams<Scalar>& m) {
  using std::sqrt;
  const Scalar ab = m.alpha * m.beta;
  const Scalar q3sq = r.Q3 * r.Q3;
  const Scalar a = 2 * r.Q4 + m.beta * q3sq;
  const Scalar b = 2 * r.Q4 - m.alpha * q3sq;
  const Scalar sa2 = a * a + 1, sb2 = b * b + 1;
  const Scalar sa = sqrt(sa2), sb = sqrt(sb2);
  const Scalar g = 2 * m.alpha / sa + 2 * m.beta / sb + h;
  const Scalar ca = a / (sa2 * sa);
  const Scalar cb = b / (sb2 * sb);
  const Scalar dg_dq3 = -4 * ab * r.Q3 * (ca - cb);
  const Scalar dg_dq4 = -4 * (m.alpha * ca + m.beta * cb);
  const Scalar dl_dq3 = ab * r.P4 * r.P4 * r.Q3 - 2 * ab * r.Q3 * g - ab * q3sq * dg_dq3;
  const Scalar dl_dq4 = -ab * q3sq * dg_dq4;
  return {r.P3, ab * r.P4 * q3sq, -dl_dq3, -dl_dq4};
}

// ---------------------------------------------------------------------------
// Collisions

/// Velocity-space elastic collision matrix A (v_hat = A v); mass momenta
/// transform with A^T.
template <typename Scalar>
Matrix2<Scalar> bounce_matrix(const MassParams<Scalar>& m) {
  Matrix2<Scalar> a;
  a << 1 - 2 * m.beta, 2 * m.beta, 2 * m.alpha, 1 - 2 * m.alpha;
  return a;
}

/// Elastic bounce at a collision, acting on mass momenta: p_hat = A^T p.
/// For alpha = 1/2 this is the exchange (p3, p4) -> (p4, p3); with
/// p3 + p4 = 0 it is the reversal p -> -p.
template <typename Scalar>
State<Scalar> bounce_map(const State<Scalar>& s, const MassParams<Scalar>& m,
                         Scalar tolerance = Scalar(kCollisionTolerance)) {
  using std::abs;
  if (!(abs(s.q3 - s.q4) < tolerance)) {
    throw NotAtCollisionError("bounce_map: |q3 - q4| = " + std::to_string(double(abs(s.q3 - s.q4))) +
                              " exceeds the collision tolerance");
  }
  if (m.equal_masses()) return {s.q3, s.q4, s.p4, s.p3};
  const Eigen::Matrix<Scalar, 2, 1> p(s.p3, s.p4);
  const Eigen::Matrix<Scalar, 2, 1> out = bounce_matrix(m).transpose() * p;
  return {s.q3, s.q4, out(0), out(1)};
}

/// (q3 - q4, p3 + p4); both zero on the plane P = {q3 = q4} and {p3 = -p4}.
template <typename Scalar>
std::pair<Scalar, Scalar> crossing_plane_residual(const State<Scalar>& s) {
  return {s.q3 - s.q4, s.p3 + s.p4};
}

}  // namespace sitnikov
