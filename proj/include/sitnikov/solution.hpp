#pragma once
// Closed-form solution of one Sitnikov oscillator and of the uncoupled pair:
// modulus/energy map, period T(h), action J(h), the time map t(nu) and its
// inverse, the angle variable and the analytic state sigma(t).
//
// For an energy h in (-2, 0) the modulus is k = sqrt(2 + h) / 2, so
// 2k^2 = (2 + h)/2 < 1 and 1 - 2k^2 = -h/2; the latter is formed directly
// from h wherever h is known, never as a difference.

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "sitnikov/dynamics.hpp"
#include "sitnikov/elliptic.hpp"
#include "sitnikov/error.hpp"

namespace sitnikov {

/// Partial energies of the two decoupled oscillators; h = h3 + h4.
template <typename Scalar = double>
struct EnergyPair {
  Scalar h3 = -1;
  Scalar h4 = -1;
  Scalar total() const { return h3 + h4; }
};

/// Per-body orbit description: modulus, angle offset and elliptic argument at t = 0.
template <typename Scalar = double>
struct OrbitParams {
  Scalar k = 0;
  Scalar theta0 = 0;
  Scalar nu0 = 0;
};

/// Initial elliptic arguments nu_i(0) of the two bodies.
template <typename Scalar = double>
struct PhaseOffsets {
  Scalar nu3 = 0;
  Scalar nu4 = 0;
};

namespace detail {

template <typename Scalar>
void require_bound_energy(Scalar h, const char* who) {
  if (!(h > -2 && h < 0)) {
    throw DomainError(std::string(who) + ": energy h must lie in (-2, 0), got " + std::to_string(double(h)));
  }
}

template <typename Scalar>
void require_orbit_modulus(Scalar k, const char* who) {
  using std::sqrt;
  if (!(k >= 0 && 2 * k * k < 1)) {
    throw DomainError(std::string(who) + ": modulus k must lie in [0, sqrt(2)/2), got " + std::to_string(double(k)));
  }
}

// 1 - 2k^2 without cancellation for k given.
template <typename Scalar>
Scalar one_minus_two_k2(Scalar k) {
  const Scalar r = std::numbers::sqrt2_v<Scalar> * k;
  return (1 - r) * (1 + r);
}

// 2E(k) - K(k) + Pi(2k^2, k), the bracket shared by T, Omega and theta.
template <typename Scalar>
Scalar period_bracket(Scalar k, Scalar one_minus_n) {
  using elliptic::complete_E;
  using elliptic::complete_K;
  return 2 * complete_E(k) - complete_K(k) + elliptic::detail::complete_Pi_split(2 * k * k, one_minus_n, k);
}

// 2E(am r) - r + Pi(2k^2, am r) - 4k^2 sn cn dn / (1 - 2k^2 sn^2) for |r| <= K.
template <typename Scalar>
Scalar time_bracket_reduced(Scalar r, Scalar k) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const Scalar n = 2 * k * k;
  const Scalar phi = elliptic::jacobi_amplitude(r, k);
  const Scalar sn = sin(phi), cn = cos(phi);
  const Scalar dn = sqrt(1 - k * k * sn * sn);
  return 2 * elliptic::incomplete_E(phi, k) - r + elliptic::incomplete_Pi(n, phi, k) -
         2 * n * sn * cn * dn / (1 - n * sn * sn);
}

}  // namespace detail

/// k = sqrt(2 + h) / 2 for h in [-2, 0).
template <typename Scalar>
Scalar modulus_from_energy(Scalar h) {
  using std::sqrt;
  if (!(h >= -2 && h < 0)) {
    throw DomainError("modulus_from_energy: h must lie in [-2, 0), got " + std::to_string(double(h)));
  }
  return sqrt(2 + h) / 2;
}

/// h = 4k^2 - 2, the inverse map.
template <typename Scalar>
Scalar energy_from_modulus(Scalar k) {
  detail::require_orbit_modulus(k, "energy_from_modulus");
  return 4 * k * k - 2;
}

/// Turning point sqrt(1/h^2 - 1/4) where p = 0.
template <typename Scalar>
Scalar q_max(Scalar h) {
  using std::sqrt;
  if (!(h >= -2 && h < 0)) throw DomainError("q_max: energy h must lie in [-2, 0), got " + std::to_string(double(h)));
  return sqrt((2 + h) * (2 - h)) / (-2 * h);
}

/// Period of one secondary, T(h) = sqrt2 / (2(1 - 2k^2)) [2E - K + Pi(2k^2, k)].
template <typename Scalar>
Scalar period_T(Scalar h) {
  detail::require_bound_energy(h, "period_T");
  const Scalar k = modulus_from_energy(h);
  return std::numbers::sqrt2_v<Scalar> / (-h) * detail::period_bracket(k, -h / 2);
}

/// Near-zero energy precision flag once -h < 1e-8 (the period diverges like |h|^{-3/2}).
template <typename Scalar>
elliptic::Flagged<Scalar> period_T_checked(Scalar h) {
  return {period_T(h), -h < Scalar(1e-8)};
}

/// Period in the elliptic argument, 4K(k).
template <typename Scalar>
Scalar nu_period(Scalar k) {
  detail::require_orbit_modulus(k, "nu_period");
  return 4 * elliptic::complete_K(k);
}

/// Period as a function of the modulus.
template <typename Scalar>
Scalar period_of_modulus(Scalar k) {
  detail::require_orbit_modulus(k, "period_of_modulus");
  const Scalar omn = detail::one_minus_two_k2(k);
  return std::numbers::sqrt2_v<Scalar> / (2 * omn) * detail::period_bracket(k, omn);
}

/// Action of the closed orbit, J(h) = sqrt2/pi (K + Pi(2k^2, k) - 2E).
/// In Carlson form the bracket is (2k^2/3)(R_J(0, k'^2, 1, 1 - 2k^2) + R_D(0, k'^2, 1)),
/// which stays accurate as k -> 0 where the Legendre terms cancel.
template <typename Scalar>
Scalar action_J(Scalar h) {
  detail::require_bound_energy(h, "action_J");
  const Scalar k = modulus_from_energy(h);
  const Scalar kc2 = (2 - h) / 4;
  const Scalar rj = elliptic::carlson_rj(Scalar(0), kc2, Scalar(1), -h / 2);
  const Scalar rd = elliptic::carlson_rd(Scalar(0), kc2, Scalar(1));
  return std::numbers::sqrt2_v<Scalar> / std::numbers::pi_v<Scalar> * (2 * k * k / 3) * (rj + rd);
}

/// Frequency-like quantity Omega = dJ/dh = T / (2 pi).
template <typename Scalar>
Scalar omega_of_energy(Scalar h) {
  return period_T(h) / (2 * std::numbers::pi_v<Scalar>);
}

namespace detail {

// Bracket of the time map for any real nu, using t(nu + 2K) = t(nu) + T/2.
template <typename Scalar>
Scalar time_bracket(Scalar nu, Scalar k) {
  using std::round;
  const Scalar half = 2 * elliptic::complete_K(k);
  const Scalar j = round(nu / half);
  Scalar value = time_bracket_reduced(nu - j * half, k);
  if (j != 0) value += 2 * j * period_bracket(k, one_minus_two_k2(k));
  return value;
}

}  // namespace detail

/// Physical time along an orbit as a function of the elliptic argument,
/// normalized to t(0) = 0.
template <typename Scalar>
Scalar time_of_nu(Scalar nu, Scalar k) {
  detail::require_orbit_modulus(k, "time_of_nu");
  const Scalar prefactor = std::numbers::sqrt2_v<Scalar> / (8 * detail::one_minus_two_k2(k));
  return prefactor * detail::time_bracket(nu, k);
}

/// dt/dnu = sqrt2 / (4 (1 - 2k^2 sn^2)^2).
template <typename Scalar>
Scalar time_of_nu_derivative(Scalar nu, Scalar k) {
  const Scalar sn = elliptic::jacobi(nu, k).sn;
  const Scalar d = 1 - 2 * k * k * sn * sn;
  return std::numbers::sqrt2_v<Scalar> / (4 * d * d);
}

/// Inverse of time_of_nu (safeguarded Newton on a bracket of length 2K).
template <typename Scalar>
Scalar nu_of_time(Scalar t, Scalar k) {
  using std::abs;
  using std::round;
  detail::require_orbit_modulus(k, "nu_of_time");
  if (!std::isfinite(t)) throw DomainError("nu_of_time: time must be finite");
  const Scalar big_k = elliptic::complete_K(k);
  const Scalar half_period = period_of_modulus(k) / 2;
  const Scalar j = round(t / half_period);
  const Scalar target = t - j * half_period;

  Scalar lo = -big_k, hi = big_k;
  Scalar nu = target / (half_period / 2) * big_k;
  const Scalar step_tol = 4 * std::numeric_limits<Scalar>::epsilon() * big_k;
  for (int it = 0; it < 100; ++it) {
    const Scalar f = time_of_nu(nu, k) - target;
    if (f == 0) return nu + j * 2 * big_k;
    if (f > 0) {
      hi = nu;
    } else {
      lo = nu;
    }
    Scalar next = nu - f / time_of_nu_derivative(nu, k);
    if (!(next > lo && next < hi)) next = (lo + hi) / 2;
    const Scalar delta = abs(next - nu);
    nu = next;
    if (delta <= step_tol || hi - lo <= step_tol) return nu + j * 2 * big_k;
  }
  throw NonConvergenceError("nu_of_time: root polisher did not converge");
}

/// Position and velocity of one oscillator at elliptic argument nu.
template <typename Scalar>
std::pair<Scalar, Scalar> oscillator_state_at_nu(Scalar nu, Scalar k) {
  const auto j = elliptic::jacobi(nu, k);
  const Scalar q = k * j.sn * j.dn / (1 - 2 * k * k * j.sn * j.sn);
  const Scalar p = 2 * std::numbers::sqrt2_v<Scalar> * k * j.cn;
  return {q, p};
}

/// Elliptic argument of an oscillator at time t given its argument at t = 0.
template <typename Scalar>
Scalar nu_at_time(Scalar t, Scalar k, Scalar nu0) {
  if (nu0 == 0) return nu_of_time(t, k);
  return nu_of_time(t + time_of_nu(nu0, k), k);
}

/// Analytic solution sigma(t) of the uncoupled pair; momenta are velocities.
template <typename Scalar>
State<Scalar> analytic_state(Scalar t, const EnergyPair<Scalar>& ep, const PhaseOffsets<Scalar>& phases = {}) {
  detail::require_bound_energy(ep.h3, "analytic_state");
  detail::require_bound_energy(ep.h4, "analytic_state");
  const Scalar k3 = modulus_from_energy(ep.h3);
  const Scalar k4 = modulus_from_energy(ep.h4);
  const auto [q3, p3] = oscillator_state_at_nu(nu_at_time(t, k3, phases.nu3), k3);
  const auto [q4, p4] = oscillator_state_at_nu(nu_at_time(t, k4, phases.nu4), k4);
  return {q3, q4, p3, p4};
}

/// Angle variable theta(nu) = theta0 + (pi/2) bracket(nu) / (2E - K + Pi(2k^2, k)).
template <typename Scalar>
Scalar angle_theta(Scalar nu, Scalar h, Scalar theta0) {
  detail::require_bound_energy(h, "angle_theta");
  const Scalar k = modulus_from_energy(h);
  return theta0 + std::numbers::pi_v<Scalar> / 2 * detail::time_bracket(nu, k) / detail::period_bracket(k, -h / 2);
}

/// X(k) such that Pi(2k^2, k) = K(k) X(k) - 2k^2 E(k), evaluated from first-
/// and second-kind integrals only through Heuman's Lambda:
///   Pi(n, k) = K + (pi/2) delta (1 - Lambda0(eps, k)),  k^2 < n < 1,
///   delta = sqrt(n / ((1 - n)(n - k^2))),  sin^2 eps = (1 - n) / (1 - k^2).
template <typename Scalar>
Scalar second_kind_reduction_term(Scalar h) {
  using std::asin;
  using std::sqrt;
  detail::require_bound_energy(h, "second_kind_reduction_term");
  const Scalar k = modulus_from_energy(h);
  const Scalar big_k = elliptic::complete_K(k);
  const Scalar one_minus_n = -h / 2;
  if (k == 0) return Scalar(1);
  const Scalar delta = sqrt(Scalar(2) / one_minus_n);
  const Scalar eps = asin(sqrt(one_minus_n / (1 - k * k)));
  const Scalar lambda0 = elliptic::heuman_lambda(eps, k);
  const Scalar pi_term = big_k + std::numbers::pi_v<Scalar> / 2 * delta * (1 - lambda0);
  return (pi_term + 2 * k * k * elliptic::complete_E(k)) / big_k;
}

/// T / 2pi written with first- and second-kind integrals only:
///   T/2pi = [2k'^2 E(k) - (1 - X(k)) K(k)] / (pi sqrt2 (-h)).
template <typename Scalar>
Scalar period_over_2pi_reduced_form(Scalar h) {
  detail::require_bound_energy(h, "period_over_2pi_reduced_form");
  const Scalar k = modulus_from_energy(h);
  const Scalar x = second_kind_reduction_term(h);
  const Scalar kc2 = 1 - k * k;
  const Scalar bracket = 2 * kc2 * elliptic::complete_E(k) - (1 - x) * elliptic::complete_K(k);
  return bracket / (std::numbers::pi_v<Scalar> * std::numbers::sqrt2_v<Scalar> * (-h));
}

/// Relative disagreement between the reduced form and period_T / 2pi.
template <typename Scalar>
Scalar rationality_form_discrepancy(Scalar h) {
  using std::abs;
  const Scalar direct = period_T(h) / (2 * std::numbers::pi_v<Scalar>);
  return abs(period_over_2pi_reduced_form(h) - direct) / direct;
}

/// T(h)/2pi - p/q with T/2pi taken from the first/second-kind form; throws
/// NumericalError when that form disagrees with period_T by more than 1e-10.
template <typename Scalar>
Scalar period_ratio_rationality_residual(Scalar h, long p, long q) {
  if (q < 1) throw DomainError("period_ratio_rationality_residual: q must be >= 1");
  const Scalar value = period_over_2pi_reduced_form(h);
  if (rationality_form_discrepancy(h) > Scalar(1e-10)) {
    throw NumericalError("period_ratio_rationality_residual: reduced form disagrees with period_T beyond 1e-10");
  }
  return value - Scalar(p) / Scalar(q);
}

}  // namespace sitnikov
