#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "sitnikov/elliptic.hpp"

using namespace sitnikov::elliptic;
using sitnikov::DomainError;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("complete first kind") {
  CHECK(complete_K(0.0) == doctest::Approx(kPi / 2).epsilon(1e-16));
  // frozen from the quadrature oracle
  CHECK(rel(complete_K(0.5), 1.6857503548125960) < 1e-15);
  for (double k : {0.05, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    CHECK(rel(complete_K(k), double(oracle::complete_K(k))) < 1e-13);
  }
  CHECK_THROWS_AS(complete_K(1.0), DomainError);
  CHECK_THROWS_AS(complete_K(-0.1), DomainError);
  CHECK_THROWS_AS(complete_K(std::nan("")), DomainError);
}

TEST_CASE("complete first kind near k = 1 stays finite and logarithmic") {
  for (double kc : {1e-4, 1e-6, 1e-7}) {
    const double k = std::sqrt(1 - kc * kc);
    const double kc_exact = std::sqrt((1 - k) * (1 + k));
    const double value = complete_K(k);
    CHECK(std::isfinite(value));
    CHECK(std::abs(value - std::log(4 / kc_exact)) < 1e-6);
  }
  const double k = std::nextafter(1.0, 0.0);
  CHECK(std::isfinite(complete_K(k)));
}

TEST_CASE("precision flag below k' = 1e-8") {
  CHECK_FALSE(complete_K_checked(0.5).precision_warning);
  // doubles cannot get k' below 1.49e-8, long double can
  const long double k = 1 - 1e-18L;
  const auto flagged = complete_K_checked(k);
  CHECK(flagged.precision_warning);
  CHECK(std::isfinite(flagged.value));
  CHECK(complete_E_checked(k).precision_warning);
  CHECK_FALSE(complete_E_checked(1.0L).precision_warning);
}

TEST_CASE("complete second kind") {
  CHECK(complete_E(0.0) == doctest::Approx(kPi / 2).epsilon(1e-16));
  CHECK(complete_E(1.0) == 1.0);
  CHECK(rel(complete_E(0.5), 1.4674622093394272) < 1e-15);
  for (double k : {0.05, 0.3, 0.5, 0.7, 0.9, 0.99}) {
    CHECK(rel(complete_E(k), double(oracle::complete_E(k))) < 1e-13);
  }
  CHECK_THROWS_AS(complete_E(1.01), DomainError);
  CHECK_THROWS_AS(complete_E(-1e-9), DomainError);
}

TEST_CASE("incomplete first and second kind") {
  for (double phi : {-2.0, 0.0, 0.3, 1.1, 2.9, 7.0}) {
    CHECK(incomplete_F(phi, 0.0) == doctest::Approx(phi).epsilon(1e-15));
    CHECK(incomplete_E(phi, 0.0) == doctest::Approx(phi).epsilon(1e-15));
  }
  CHECK(rel(incomplete_F(kPi / 2, 0.3), complete_K(0.3)) < 1e-13);
  CHECK(rel(incomplete_E(kPi / 3, 0.7), 0.966723133094528163) < 1e-14);
  CHECK(rel(incomplete_F(kPi / 3, 0.7), 1.140044752769331833) < 1e-14);
  for (double k : {0.1, 0.45, 0.69, 0.95}) {
    for (double phi : {0.2, 1.0, 1.5, 2.5, 4.0}) {
      CHECK(rel(incomplete_F(phi, k), double(oracle::incomplete_F(phi, k))) < 1e-13);
      CHECK(rel(incomplete_E(phi, k), double(oracle::incomplete_E(phi, k))) < 1e-13);
    }
  }
  CHECK(incomplete_F(-0.8, 0.4) == doctest::Approx(-incomplete_F(0.8, 0.4)).epsilon(1e-15));
  CHECK_THROWS_AS(incomplete_F(0.5, 1.0), DomainError);
}

TEST_CASE("sine-of-amplitude companions") {
  for (double phi : {0.1, 0.7, 1.3}) {
    const double s = std::sin(phi);
    CHECK(rel(incomplete_F_sine(s, 0.6), incomplete_F(phi, 0.6)) < 1e-14);
    CHECK(rel(incomplete_E_sine(s, 0.6), incomplete_E(phi, 0.6)) < 1e-14);
    CHECK(rel(incomplete_Pi_sine(0.3, s, 0.6), incomplete_Pi(0.3, phi, 0.6)) < 1e-14);
  }
  CHECK_THROWS_AS(incomplete_F_sine(1.5, 0.3), DomainError);
}

TEST_CASE("third kind") {
  for (double k : {0.0, 0.2, 0.6}) CHECK(rel(complete_Pi(0.0, k), complete_K(k)) < 1e-14);
  CHECK(rel(complete_Pi(0.5, 0.0), kPi / std::sqrt(2.0)) < 1e-14);
  CHECK(rel(complete_Pi(0.5, 0.5), 2.4136715042011946) < 1e-14);
  CHECK(rel(incomplete_Pi(0.4, kPi / 3, 0.7), 1.318138033898024793) < 1e-13);
  for (double n : {-3.0, -0.5, 0.1, 0.5, 0.9}) {
    for (double k : {0.1, 0.5, 0.69}) {
      CHECK(rel(complete_Pi(n, k), double(oracle::complete_Pi(n, k))) < 1e-12);
      CHECK(rel(incomplete_Pi(n, 1.2, k), double(oracle::incomplete_Pi(n, 1.2, k))) < 1e-12);
    }
  }
  CHECK_THROWS_AS(complete_Pi(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(complete_Pi(1.5, 0.5), DomainError);
}

TEST_CASE("complete integrals equal incomplete ones at phi = pi/2") {
  for (double k = 0.0; k < 0.99; k += 0.07) {
    CHECK(rel(incomplete_F(kPi / 2, k), complete_K(k)) < 1e-13);
    CHECK(rel(incomplete_E(kPi / 2, k), complete_E(k)) < 1e-13);
    CHECK(rel(incomplete_Pi(0.35, kPi / 2, k), complete_Pi(0.35, k)) < 1e-13);
  }
}

TEST_CASE("Legendre relation") {
  for (int i = 1; i <= 69; ++i) {
    const double k = 0.01 * i;
    const double kc = std::sqrt(1 - k * k);
    const double lhs =
        complete_E(k) * complete_K(kc) + complete_E(kc) * complete_K(k) - complete_K(k) * complete_K(kc);
    CHECK(std::abs(lhs - kPi / 2) < 1e-12);
  }
}

TEST_CASE("circular third kind through Heuman's Lambda") {
  // Pi(n, k) = K + (pi/2) delta (1 - Lambda0(eps, k)), k^2 < n < 1
  for (double k = 0.05; k < 0.7; k += 0.05) {
    const double n = 2 * k * k;
    const double delta = std::sqrt(n / ((1 - n) * (n - k * k)));
    const double eps = std::asin(std::sqrt((1 - n) / (1 - k * k)));
    const double via_lambda = complete_K(k) + kPi / 2 * delta * (1 - heuman_lambda(eps, k));
    CHECK(rel(via_lambda, complete_Pi(n, k)) < 1e-11);
  }
  CHECK(heuman_lambda(0.4, 0.0) == doctest::Approx(std::sin(0.4)));
  CHECK(heuman_lambda(kPi / 2, 0.6) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("Jacobi functions: special values") {
  const auto at0 = jacobi(0.0, 0.5);
  CHECK(at0.sn == 0.0);
  CHECK(at0.cn == 1.0);
  CHECK(at0.dn == 1.0);
  for (double u : {-1.0, 0.4, 2.0, 9.0}) {
    const auto j = jacobi(u, 0.0);
    CHECK(j.sn == doctest::Approx(std::sin(u)).epsilon(1e-15));
    CHECK(j.cn == doctest::Approx(std::cos(u)).epsilon(1e-15));
    CHECK(j.dn == 1.0);
  }
  const double k = 0.4;
  const auto q = jacobi(complete_K(k), k);
  CHECK(std::abs(q.sn - 1) < 1e-15);
  CHECK(std::abs(q.cn) < 1e-14);
  CHECK(std::abs(q.dn - std::sqrt(1 - k * k)) < 1e-15);
  const auto j = jacobi(1.0, 0.3);
  CHECK(std::abs(j.sn - 0.8347860656584245) < 1e-15);
  CHECK(std::abs(j.cn - 0.55057444962741275) < 1e-15);
  CHECK(std::abs(j.dn - 0.96813320375474554) < 1e-15);
  CHECK_THROWS_AS(jacobi(1.0, 1.0), DomainError);
}

TEST_CASE("Jacobi amplitude against inversion of F by quadrature") {
  for (double k : {0.2, 0.5, 0.69}) {
    for (double u : {0.3, 1.0, 2.2, 5.0}) {
      CHECK(std::abs(jacobi_amplitude(u, k) - double(oracle::amplitude(u, k))) < 1e-13);
    }
  }
}

TEST_CASE("Jacobi identities on [0, 4K] x [0, 0.7]") {
  for (int ik = 0; ik <= 14; ++ik) {
    const double k = 0.05 * ik;
    const double period = 4 * complete_K(k);
    for (int iu = 0; iu <= 40; ++iu) {
      const double u = period * iu / 40;
      const auto j = jacobi(u, k);
      CHECK(std::abs(j.sn * j.sn + j.cn * j.cn - 1) < 1e-12);
      CHECK(std::abs(j.dn * j.dn + k * k * j.sn * j.sn - 1) < 1e-12);
    }
  }
}

TEST_CASE("d sn / du = cn dn") {
  const double step = 1e-5;
  for (double k : {0.1, 0.5, 0.7}) {
    for (double u : {0.2, 1.3, 3.0, 6.5}) {
      const double fd = (jacobi(u + step, k).sn - jacobi(u - step, k).sn) / (2 * step);
      const auto j = jacobi(u, k);
      CHECK(std::abs(fd - j.cn * j.dn) < 1e-8);
    }
  }
}

TEST_CASE("quarter-period symmetries") {
  const double k = 0.6, K = complete_K(k);
  for (double u : {0.1, 0.8}) {
    CHECK(std::abs(jacobi(u + 2 * K, k).sn + jacobi(u, k).sn) < 1e-14);
    CHECK(std::abs(jacobi(u + 4 * K, k).cn - jacobi(u, k).cn) < 1e-14);
    CHECK(std::abs(jacobi(-u, k).sn + jacobi(u, k).sn) < 1e-15);
  }
}

TEST_CASE("Carlson forms: closed-form special cases") {
  CHECK(carlson_rf(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(carlson_rd(1.0, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(carlson_rj(2.0, 2.0, 2.0, 2.0) == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-15));
  // R_C(x, y) = arctan(sqrt((y - x)/x)) / sqrt(y - x), y > x
  CHECK(carlson_rc(1.0, 2.0) == doctest::Approx(std::atan(1.0)).epsilon(1e-15));
  CHECK(carlson_rf(0.0, 1.0, 1.0) == doctest::Approx(kPi / 2).epsilon(1e-15));
}
