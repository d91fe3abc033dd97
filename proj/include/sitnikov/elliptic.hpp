#pragma once
// Elliptic integrals and Jacobi elliptic functions in the real-modulus regime.
//
// Conventions (used everywhere in the library):
//   * the second argument is always the modulus k, never the parameter m = k^2;
//   * incomplete integrals take the amplitude phi;  the *_sine companions take
//     s = sin(phi) with |s| <= 1;
//   * the third kind is ordered (characteristic n, amplitude phi, modulus k):
//       Pi(n, phi, k) = int_0^phi dt / ((1 - n sin^2 t) sqrt(1 - k^2 sin^2 t)).
//
// K and E come from the arithmetic-geometric mean, the incomplete integrals
// and Pi from Carlson's symmetric forms (duplication), and sn/cn/dn from the
// descending Landen transformation driven by the same AGM sequence.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sitnikov/error.hpp"

namespace sitnikov::elliptic {

/// Relative termination tolerance of every iteration in this header
/// (about 1.1e-14 for double).
template <typename Scalar>
inline constexpr Scalar kTerminationTolerance = std::numeric_limits<Scalar>::epsilon() * 50;

/// Below this complementary modulus the results carry a precision warning.
template <typename Scalar>
inline constexpr Scalar kDegenerateComplement = Scalar(1e-8);

/// A value together with a flag raised when the input is close enough to a
/// logarithmic singularity for the relative accuracy to degrade.
template <typename Scalar>
struct Flagged {
  Scalar value;
  bool precision_warning;
};

template <typename Scalar>
struct JacobiTriple {
  Scalar sn;
  Scalar cn;
  Scalar dn;
};

namespace detail {

template <typename Scalar>
void require_modulus(Scalar k, const char* who, bool allow_one = false) {
  const bool ok = std::isfinite(k) && k >= Scalar(0) && (allow_one ? k <= Scalar(1) : k < Scalar(1));
  if (!ok) {
    throw DomainError(std::string(who) + ": modulus k must lie in " + (allow_one ? "[0, 1]" : "[0, 1)") +
                      ", got " + std::to_string(static_cast<double>(k)));
  }
}

template <typename Scalar>
Scalar complement(Scalar k) {
  using std::sqrt;
  return sqrt((Scalar(1) - k) * (Scalar(1) + k));
}

// RC(1, 1 + e) for e > -1.
template <typename Scalar>
Scalar rc_one_plus(Scalar e) {
  using std::abs;
  using std::atan;
  using std::atanh;
  using std::sqrt;
  if (abs(e) < Scalar(1e-4)) {
    return Scalar(1) - e / 3 + e * e / 5 - e * e * e / 7 + e * e * e * e / 9;
  }
  if (e > 0) {
    const Scalar r = sqrt(e);
    return atan(r) / r;
  }
  const Scalar r = sqrt(-e);
  return atanh(r) / r;
}

// Split phi = m*pi + r with r in [-pi/2, pi/2].
template <typename Scalar>
std::pair<Scalar, Scalar> reduce_amplitude(Scalar phi) {
  using std::round;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  const Scalar m = round(phi / pi);
  return {m, phi - m * pi};
}

inline constexpr int kMaxIterations = 100;

}  // namespace detail

// ---------------------------------------------------------------------------
// Carlson symmetric forms

/// R_F(x, y, z); x, y, z >= 0 with at most one of them zero.
template <typename Scalar>
Scalar carlson_rf(Scalar x, Scalar y, Scalar z) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0 || x + y == 0 || x + z == 0 || y + z == 0) {
    throw DomainError("carlson_rf: arguments must be non-negative with at most one zero");
  }
  const Scalar tol = kTerminationTolerance<Scalar>;
  const Scalar a0 = (x + y + z) / 3;
  const Scalar q = pow(3 * tol, Scalar(-1) / 6) * std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z)});
  Scalar a = a0;
  Scalar xm = x, ym = y, zm = z;
  Scalar scale = 1;
  for (int it = 0; scale * q >= abs(a); ++it) {
    if (it > detail::kMaxIterations) throw NonConvergenceError("carlson_rf: no convergence");
    const Scalar sx = sqrt(xm), sy = sqrt(ym), sz = sqrt(zm);
    const Scalar lambda = sx * sy + sx * sz + sy * sz;
    a = (a + lambda) / 4;
    xm = (xm + lambda) / 4;
    ym = (ym + lambda) / 4;
    zm = (zm + lambda) / 4;
    scale /= 4;
  }
  const Scalar X = (a0 - x) * scale / a;
  const Scalar Y = (a0 - y) * scale / a;
  const Scalar Z = -(X + Y);
  const Scalar e2 = X * Y - Z * Z;
  const Scalar e3 = X * Y * Z;
  return (1 - e2 / 10 + e3 / 14 + e2 * e2 / 24 - 3 * e2 * e3 / 44) / sqrt(a);
}

/// R_D(x, y, z); x, y >= 0 not both zero, z > 0.
template <typename Scalar>
Scalar carlson_rd(Scalar x, Scalar y, Scalar z) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || x + y == 0 || !(z > 0)) {
    throw DomainError("carlson_rd: need x, y >= 0 (not both zero) and z > 0");
  }
  const Scalar tol = kTerminationTolerance<Scalar>;
  const Scalar a0 = (x + y + 3 * z) / 5;
  const Scalar q = pow(tol / 4, Scalar(-1) / 6) * std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z)});
  Scalar a = a0;
  Scalar xm = x, ym = y, zm = z;
  Scalar scale = 1;
  Scalar sum = 0;
  for (int it = 0; scale * q >= abs(a); ++it) {
    if (it > detail::kMaxIterations) throw NonConvergenceError("carlson_rd: no convergence");
    const Scalar sx = sqrt(xm), sy = sqrt(ym), sz = sqrt(zm);
    const Scalar lambda = sx * sy + sx * sz + sy * sz;
    sum += scale / (sz * (zm + lambda));
    a = (a + lambda) / 4;
    xm = (xm + lambda) / 4;
    ym = (ym + lambda) / 4;
    zm = (zm + lambda) / 4;
    scale /= 4;
  }
  const Scalar X = (a0 - x) * scale / a;
  const Scalar Y = (a0 - y) * scale / a;
  const Scalar Z = -(X + Y) / 3;
  const Scalar xy = X * Y;
  const Scalar z2 = Z * Z;
  const Scalar e2 = xy - 6 * z2;
  const Scalar e3 = (3 * xy - 8 * z2) * Z;
  const Scalar e4 = 3 * (xy - z2) * z2;
  const Scalar e5 = xy * z2 * Z;
  const Scalar series = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 - 9 * e2 * e3 / 52 + 3 * e5 / 26;
  return scale * series / (a * sqrt(a)) + 3 * sum;
}

/// R_J(x, y, z, p) for p > 0; x, y, z >= 0 with at most one zero.
template <typename Scalar>
Scalar carlson_rj(Scalar x, Scalar y, Scalar z, Scalar p) {
  using std::abs;
  using std::pow;
  using std::sqrt;
  if (x < 0 || y < 0 || z < 0 || x + y == 0 || x + z == 0 || y + z == 0 || !(p > 0)) {
    throw DomainError("carlson_rj: need x, y, z >= 0 (at most one zero) and p > 0");
  }
  const Scalar tol = kTerminationTolerance<Scalar>;
  const Scalar a0 = (x + y + z + 2 * p) / 5;
  const Scalar delta = (p - x) * (p - y) * (p - z);
  const Scalar q =
      pow(tol / 4, Scalar(-1) / 6) * std::max({abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p)});
  Scalar a = a0;
  Scalar xm = x, ym = y, zm = z, pm = p;
  Scalar scale = 1;
  Scalar sum = 0;
  for (int it = 0; scale * q >= abs(a); ++it) {
    if (it > detail::kMaxIterations) throw NonConvergenceError("carlson_rj: no convergence");
    const Scalar sx = sqrt(xm), sy = sqrt(ym), sz = sqrt(zm), sp = sqrt(pm);
    const Scalar d = (sp + sx) * (sp + sy) * (sp + sz);
    const Scalar e = delta * scale * scale * scale / (d * d);
    sum += scale / d * detail::rc_one_plus(e);
    const Scalar lambda = sx * sy + sx * sz + sy * sz;
    a = (a + lambda) / 4;
    xm = (xm + lambda) / 4;
    ym = (ym + lambda) / 4;
    zm = (zm + lambda) / 4;
    pm = (pm + lambda) / 4;
    scale /= 4;
  }
  const Scalar X = (a0 - x) * scale / a;
  const Scalar Y = (a0 - y) * scale / a;
  const Scalar Z = (a0 - z) * scale / a;
  const Scalar P = -(X + Y + Z) / 2;
  const Scalar p2 = P * P;
  const Scalar xyz = X * Y * Z;
  const Scalar e2 = X * Y + X * Z + Y * Z - 3 * p2;
  const Scalar e3 = xyz + 2 * e2 * P + 4 * p2 * P;
  const Scalar e4 = (2 * xyz + e2 * P + 3 * p2 * P) * P;
  const Scalar e5 = xyz * p2;
  const Scalar series = 1 - 3 * e2 / 14 + e3 / 6 + 9 * e2 * e2 / 88 - 3 * e4 / 22 - 9 * e2 * e3 / 52 + 3 * e5 / 26;
  return scale * series / (a * sqrt(a)) + 6 * sum;
}

/// R_C(x, y) for x >= 0, y > 0.
template <typename Scalar>
Scalar carlson_rc(Scalar x, Scalar y) {
  using std::sqrt;
  if (x < 0 || !(y > 0)) throw DomainError("carlson_rc: need x >= 0 and y > 0");
  if (x == 0) return std::numbers::pi_v<Scalar> / (2 * sqrt(y));
  return detail::rc_one_plus(y / x - 1) / sqrt(x);
}

// ---------------------------------------------------------------------------
// Complete integrals

template <typename Scalar>
Scalar complete_K(Scalar k) {
  using std::abs;
  using std::sqrt;
  detail::require_modulus(k, "complete_K");
  Scalar a = 1;
  Scalar b = detail::complement(k);
  for (int it = 0; abs(a - b) > kTerminationTolerance<Scalar> * a; ++it) {
    if (it > detail::kMaxIterations) throw NonConvergenceError("complete_K: AGM did not converge");
    const Scalar an = (a + b) / 2;
    b = sqrt(a * b);
    a = an;
  }
  return std::numbers::pi_v<Scalar> / (a + b);
}

template <typename Scalar>
Flagged<Scalar> complete_K_checked(Scalar k) {
  return {complete_K(k), detail::complement(k) < kDegenerateComplement<Scalar>};
}

template <typename Scalar>
Scalar complete_E(Scalar k) {
  using std::abs;
  using std::sqrt;
  detail::require_modulus(k, "complete_E", /*allow_one=*/true);
  if (k == Scalar(1)) return Scalar(1);
  Scalar a = 1;
  Scalar b = detail::complement(k);
  Scalar c = k;
  Scalar weight = Scalar(0.5);
  Scalar sum = weight * c * c;
  for (int it = 0; abs(c) > kTerminationTolerance<Scalar> * a; ++it) {
    if (it > detail::kMaxIterations) throw NonConvergenceError("complete_E: AGM did not converge");
    c = (a - b) / 2;
    const Scalar an = (a + b) / 2;
    b = sqrt(a * b);
    a = an;
    weight *= 2;
    sum += weight * c * c;
  }
  return std::numbers::pi_v<Scalar> / (2 * a) * (1 - sum);
}

template <typename Scalar>
Flagged<Scalar> complete_E_checked(Scalar k) {
  return {complete_E(k), k < Scalar(1) && detail::complement(k) < kDegenerateComplement<Scalar>};
}

namespace detail {

template <typename Scalar>
void require_characteristic(Scalar n, const char* who) {
  if (!(n < Scalar(1)) || !std::isfinite(n)) {
    throw DomainError(std::string(who) + ": characteristic n must be < 1 (hyperbolic case unsupported), got " +
                      std::to_string(static_cast<double>(n)));
  }
}

// Pi(n, k) with 1 - n supplied separately so callers that know it exactly
// (n = 2k^2 with 1 - n = -h/2) avoid the cancellation.
template <typename Scalar>
Scalar complete_Pi_split(Scalar n, Scalar one_minus_n, Scalar k) {
  const Scalar kc = complement(k);
  const Scalar y = kc * kc;
  return carlson_rf(Scalar(0), y, Scalar(1)) + n / 3 * carlson_rj(Scalar(0), y, Scalar(1), one_minus_n);
}

}  // namespace detail

template <typename Scalar>
Scalar complete_Pi(Scalar n, Scalar k) {
  detail::require_modulus(k, "complete_Pi");
  detail::require_characteristic(n, "complete_Pi");
  return detail::complete_Pi_split(n, Scalar(1) - n, k);
}

// ---------------------------------------------------------------------------
// Incomplete integrals (amplitude form; any real phi)

template <typename Scalar>
Scalar incomplete_F(Scalar phi, Scalar k) {
  using std::cos;
  using std::sin;
  detail::require_modulus(k, "incomplete_F");
  const auto [m, r] = detail::reduce_amplitude(phi);
  const Scalar s = sin(r), c = cos(r);
  Scalar value = s * carlson_rf(c * c, 1 - k * k * s * s, Scalar(1));
  if (m != 0) value += 2 * m * complete_K(k);
  return value;
}

template <typename Scalar>
Scalar incomplete_E(Scalar phi, Scalar k) {
  using std::cos;
  using std::sin;
  detail::require_modulus(k, "incomplete_E");
  const auto [m, r] = detail::reduce_amplitude(phi);
  const Scalar s = sin(r), c = cos(r);
  const Scalar x = c * c, y = 1 - k * k * s * s;
  Scalar value = s * carlson_rf(x, y, Scalar(1));
  if (k != 0 && s != 0) value -= k * k / 3 * s * s * s * carlson_rd(x, y, Scalar(1));
  if (m != 0) value += 2 * m * complete_E(k);
  return value;
}

template <typename Scalar>
Scalar incomplete_Pi(Scalar n, Scalar phi, Scalar k) {
  using std::cos;
  using std::sin;
  detail::require_modulus(k, "incomplete_Pi");
  detail::require_characteristic(n, "incomplete_Pi");
  const auto [m, r] = detail::reduce_amplitude(phi);
  const Scalar s = sin(r), c = cos(r);
  const Scalar x = c * c, y = 1 - k * k * s * s;
  Scalar value = s * carlson_rf(x, y, Scalar(1));
  if (n != 0 && s != 0) value += n / 3 * s * s * s * carlson_rj(x, y, Scalar(1), 1 - n * s * s);
  if (m != 0) value += 2 * m * complete_Pi(n, k);
  return value;
}

namespace detail {

template <typename Scalar>
Scalar amplitude_from_sine(Scalar s, const char* who) {
  using std::abs;
  using std::asin;
  if (!(abs(s) <= Scalar(1))) throw DomainError(std::string(who) + ": sine of amplitude must lie in [-1, 1]");
  return asin(s);
}

}  // namespace detail

/// F(s, k) in the sine-of-amplitude notation, s = sin(phi) in [-1, 1].
template <typename Scalar>
Scalar incomplete_F_sine(Scalar s, Scalar k) {
  return incomplete_F(detail::amplitude_from_sine(s, "incomplete_F_sine"), k);
}

template <typename Scalar>
Scalar incomplete_E_sine(Scalar s, Scalar k) {
  return incomplete_E(detail::amplitude_from_sine(s, "incomplete_E_sine"), k);
}

template <typename Scalar>
Scalar incomplete_Pi_sine(Scalar n, Scalar s, Scalar k) {
  return incomplete_Pi(n, detail::amplitude_from_sine(s, "incomplete_Pi_sine"), k);
}

/// Heuman's Lambda function Lambda0(phi, k).
template <typename Scalar>
Scalar heuman_lambda(Scalar phi, Scalar k) {
  using std::sin;
  detail::require_modulus(k, "heuman_lambda");
  if (k == 0) return sin(phi);
  const Scalar kc = detail::complement(k);
  const Scalar big_k = complete_K(k);
  const Scalar f = incomplete_F(phi, kc);
  return 2 / std::numbers::pi_v<Scalar> * (complete_E(k) * f + big_k * incomplete_E(phi, kc) - big_k * f);
}

// ---------------------------------------------------------------------------
// Jacobi elliptic functions

namespace detail {

// Amplitude for |u| <= K by descending Landen transformation.
template <typename Scalar>
Scalar landen_amplitude(Scalar u, Scalar k) {
  using std::abs;
  using std::asin;
  using std::ldexp;
  using std::sin;
  using std::sqrt;
  constexpr int kMaxDepth = 32;
  std::array<Scalar, kMaxDepth + 1> a{};
  std::array<Scalar, kMaxDepth + 1> c{};
  a[0] = 1;
  c[0] = k;
  Scalar b = complement(k);
  int depth = 0;
  while (abs(c[depth]) > std::numeric_limits<Scalar>::epsilon() * a[depth]) {
    if (depth == kMaxDepth) throw NonConvergenceError("jacobi: Landen sequence did not converge");
    a[depth + 1] = (a[depth] + b) / 2;
    c[depth + 1] = (a[depth] - b) / 2;
    b = sqrt(a[depth] * b);
    ++depth;
  }
  Scalar phi = ldexp(a[depth] * u, depth);
  for (int n = depth; n > 0; --n) {
    phi = (phi + asin(c[n] / a[n] * sin(phi))) / 2;
  }
  return phi;
}

}  // namespace detail

/// Jacobi amplitude am(u, k), continuous and increasing in u.
template <typename Scalar>
Scalar jacobi_amplitude(Scalar u, Scalar k) {
  using std::round;
  detail::require_modulus(k, "jacobi_amplitude");
  if (k == 0) return u;
  const Scalar half_period = 2 * complete_K(k);
  const Scalar m = round(u / half_period);
  return detail::landen_amplitude(u - m * half_period, k) + m * std::numbers::pi_v<Scalar>;
}

template <typename Scalar>
JacobiTriple<Scalar> jacobi(Scalar u, Scalar k) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  detail::require_modulus(k, "jacobi");
  if (k == 0) return {sin(u), cos(u), Scalar(1)};
  const Scalar phi = jacobi_amplitude(u, k);
  const Scalar sn = sin(phi);
  return {sn, cos(phi), sqrt(1 - k * k * sn * sn)};
}

}  // namespace sitnikov::elliptic
