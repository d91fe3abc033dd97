#pragma once
// Adaptive Gauss-Kronrod (7, 15) quadrature and the defining integrals of the
// period and action, used as run-time cross-checks.

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sitnikov/error.hpp"
#include "sitnikov/solution.hpp"

namespace sitnikov::quadrature {

namespace detail {

inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {0.129484966168869693270611432679082,
                                               0.279705391489276667901467771423780,
                                               0.381830050505118944950369775488975,
                                               0.417959183673469387755102040816327};

template <class F>
std::pair<double, double> gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b), r = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int i = 0; i < 7; ++i) {
    const double x = r * kXgk[i];
    const double s = f(c - x) + f(c + x);
    kron += kWgk[i] * s;
    if (i % 2 == 1) gauss += kWg[i / 2] * s;
  }
  return {kron * r, std::abs((kron - gauss) * r)};
}

template <class F>
double adapt(const F& f, double a, double b, double whole, double err, double tol, int depth) {
  // below a few ulps of the panel value further bisection cannot help
  const double floor = 8 * std::numeric_limits<double>::epsilon() * std::abs(whole);
  if (err <= std::max(tol, floor) || depth > 50) {
    if (err > std::max(tol, floor)) throw NonConvergenceError("quadrature: tolerance not met");
    return whole;
  }
  const double m = 0.5 * (a + b);
  const auto [left, el] = gk15(f, a, m);
  const auto [right, er] = gk15(f, m, b);
  return adapt(f, a, m, left, el, tol / 2, depth + 1) + adapt(f, m, b, right, er, tol / 2, depth + 1);
}

}  // namespace detail

/// Integral of f over [a, b] with error estimate below rel_tol times the
/// magnitude of the first estimate.
template <class F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-14) {
  const auto [whole, err] = detail::gk15(f, a, b);
  const double tol = rel_tol * std::max(std::abs(whole), std::numeric_limits<double>::min());
  return detail::adapt(f, a, b, whole, err, tol, 0);
}

namespace detail {

// sqrt(a b) (sqrt a + sqrt b) with a = q^2 + 1/4, b = q_max^2 + 1/4, so that
// h + V(q) = V(q) - V(q_max) = q_max^2 cos^2(theta) / denominator.
inline double kinetic_denominator(double qm, double th) {
  const double q = qm * std::sin(th);
  const double sa = std::sqrt(q * q + 0.25), sb = std::sqrt(qm * qm + 0.25);
  return sa * sb * (sa + sb);
}

}  // namespace detail

/// T(h) = 4 int_0^{q_max} dq / sqrt(2 (h + 1/sqrt(q^2 + 1/4))), with
/// q = q_max sin(theta); the integrand becomes sqrt(denominator / 2).
inline double period_by_quadrature(double h) {
  const double qm = q_max(h);
  auto f = [&](double th) { return std::sqrt(detail::kinetic_denominator(qm, th) / 2); };
  return 4 * integrate(f, 0.0, std::numbers::pi / 2);
}

/// J(h) = (2 sqrt2 / pi) int_0^{q_max} sqrt(h + 1/sqrt(q^2 + 1/4)) dq.
inline double action_by_quadrature(double h) {
  const double qm = q_max(h);
  auto f = [&](double th) {
    const double c = std::cos(th);
    return qm * qm * c * c / std::sqrt(detail::kinetic_denominator(qm, th));
  };
  return 2 * std::numbers::sqrt2 / std::numbers::pi * integrate(f, 0.0, std::numbers::pi / 2);
}

}  // namespace sitnikov::quadrature
