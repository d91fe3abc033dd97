#pragma once
// Resonance triples, inversion of the period function, the resonant-energy
// atlas and topological classification of energy surfaces and fibers.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sitnikov/elliptic.hpp"

namespace sitnikov {

/// (p, q, n) with q T(h3) = n T(h4) = 2 pi p.
struct ResonanceTriple {
  long p = 1;
  long q = 1;
  long n = 1;

  friend bool operator==(const ResonanceTriple&, const ResonanceTriple&) = default;
};

struct ResonantSurface {
  ResonanceTriple triple;
  double h3 = 0;
  double h4 = 0;
  double h_star = 0;  ///< h3 + h4
  double tau = 0;     ///< common period 2 pi p
};

struct Rational {
  long num = 0;
  long den = 1;
};

long totient(long p);

/// gcd(p, q, n) = 1.
bool coprime_triple(const ResonanceTriple& t);

/// Coprime and p > q/(2 sqrt2), p > n/(2 sqrt2).
bool is_admissible(const ResonanceTriple& t);

/// Largest integer m with m < 2 sqrt2 p.
long max_partner(long p);

/// All admissible (p, q, n) for fixed p, ordered by (q, n).
std::vector<ResonanceTriple> enumerate_triples(long p);

/// 8 p phi(p) + sum over q < 2 sqrt2 p with gcd(p, q) != 1 of phi(q).
long counting_bound(long p);

/// Unique h in (-2, 0) with T(h) = 2 pi p / q. Bisection on
/// [-2 + 1e-12, -1e-12] followed by a safeguarded secant polish.
double energy_for_period_ratio(long p, long q);

/// Same, flagging results with -h < 1e-8 where T(h) loses relative accuracy.
elliptic::Flagged<double> energy_for_period_ratio_checked(long p, long q);

ResonantSurface resonant_surface(const ResonanceTriple& t);

/// Resonant surfaces for all triples with p <= p_max, sorted by h_star, with
/// h_star values closer than 1e-12 merged (the first triple is kept).
std::vector<ResonantSurface> atlas(long p_max);

/// Largest gap between consecutive h_star values inside (lo, hi), with the
/// window endpoints as anchors.
double max_gap(const std::vector<ResonantSurface>& surfaces, double lo = -3.9, double hi = -0.1);

/// Simplest rational in [x - tol, x + tol] (smallest denominator), if its
/// denominator does not exceed max_den.
std::optional<Rational> simplest_rational(double x, double tol, long max_den);

/// Reads (T(h3)/2pi, T(h4)/2pi) as (r/s, u/v) and returns
/// (ru/g, su/g, rv/g) with g = gcd(ru, su, rv), or nothing when either ratio
/// has no rational form with denominator <= q_max within tol.
std::optional<ResonanceTriple> rational_point_check(double h3, double h4, long q_max, double tol = 1e-9);

/// True when h is the total energy of the surface built from t (within tol).
bool surface_accepts(double h, const ResonanceTriple& t, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Topology

enum class SurfaceTopology {
  sphere_foliated_by_tori,      ///< -4 < h < -2
  sphere_minus_four_points,     ///< h = -2
  sphere_with_four_disc_boundaries,  ///< -2 < h < 0
  two_cylinders_four_planes,    ///< h = 0
  cylinders_and_planes,         ///< h > 0
};

enum class FiberType { torus, cylinder, plane, isotropic, empty };

/// Throws NonexistentLevelError for h <= -4.
SurfaceTopology classify_surface(double h);
std::string label(SurfaceTopology t);

/// Quadrant of the momentum map value; boundary values h_i in {-2, 0} give
/// isotropic fibers, h_i < -2 is outside the image.
FiberType classify_fiber(double h3, double h4);
std::string label(FiberType f);

/// The level line h3 + h4 = h inside the image [-2, inf)^2.
struct MomentumLine {
  std::array<double, 2> start{};  ///< (-2, h + 2)
  std::array<double, 2> end{};    ///< (h + 2, -2)
  bool degenerate = false;        ///< single point (h = -4)
  bool nonexistent = false;       ///< level absent in the real problem
};

/// Throws NonexistentLevelError for h < -4; h = -4 returns the flagged point.
MomentumLine momentum_line(double h);

}  // namespace sitnikov
