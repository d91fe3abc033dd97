#include "sitnikov/resonance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "sitnikov/error.hpp"
#include "sitnikov/solution.hpp"

namespace sitnikov {

namespace {

constexpr double kBracketLow = -2 + 1e-12;
constexpr double kBracketHigh = -1e-12;

double period_target(long p, long q) { return 2 * std::numbers::pi * double(p) / double(q); }

// Root of T(h) = target on the bracket, T strictly increasing.
double invert_period(double target) {
  double lo = kBracketLow, hi = kBracketHigh;
  double flo = period_T(lo) - target;
  if (flo >= 0) return lo;
  double fhi = period_T(hi) - target;
  if (fhi < 0) {
    throw OutOfRangeError("energy_for_period_ratio: period " + std::to_string(target) +
                          " exceeds T(-1e-12); the energy would be indistinguishable from 0");
  }
  while (hi - lo > 1e-6 * std::abs(hi)) {
    const double mid = 0.5 * (lo + hi);
    const double f = period_T(mid) - target;
    if (f < 0) {
      lo = mid;
      flo = f;
    } else {
      hi = mid;
      fhi = f;
    }
  }
  // Illinois-safeguarded secant on the remaining bracket.
  int side = 0;
  for (int it = 0; it < 100; ++it) {
    double x = hi - fhi * (hi - lo) / (fhi - flo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double f = period_T(x) - target;
    if (f == 0) return x;
    if (f < 0) {
      lo = x;
      flo = f;
      if (side == -1) fhi /= 2;
      side = -1;
    } else {
      hi = x;
      fhi = f;
      if (side == 1) flo /= 2;
      side = 1;
    }
    if (hi - lo <= 4 * std::numeric_limits<double>::epsilon() * std::abs(hi)) break;
  }
  const double t_lo = std::abs(period_T(lo) - target);
  const double t_hi = std::abs(period_T(hi) - target);
  return t_lo <= t_hi ? lo : hi;
}

long gcd3(long a, long b, long c) { return std::gcd(std::gcd(a, b), c); }

}  // namespace

long totient(long p) {
  if (p < 1) throw DomainError("totient: p must be >= 1");
  long result = p;
  long m = p;
  for (long f = 2; f * f <= m; ++f) {
    if (m % f != 0) continue;
    while (m % f == 0) m /= f;
    result -= result / f;
  }
  if (m > 1) result -= result / m;
  return result;
}

bool coprime_triple(const ResonanceTriple& t) { return gcd3(t.p, t.q, t.n) == 1; }

namespace {

// m^2 < 8 p^2 without overflow.
bool below_partner_limit(long m, long p) {
  using wide = __int128;
  return wide(m) * m < 8 * wide(p) * p;
}

}  // namespace

long max_partner(long p) {
  if (p < 1) throw DomainError("max_partner: p must be >= 1");
  // largest m with m^2 < 8 p^2
  long m = long(std::floor(2 * std::numbers::sqrt2 * double(p)));
  while (!below_partner_limit(m, p)) --m;
  while (below_partner_limit(m + 1, p)) ++m;
  return m;
}

bool is_admissible(const ResonanceTriple& t) {
  if (t.p < 1 || t.q < 1 || t.n < 1) return false;
  return coprime_triple(t) && below_partner_limit(t.q, t.p) && below_partner_limit(t.n, t.p);
}

std::vector<ResonanceTriple> enumerate_triples(long p) {
  if (p < 1) throw DomainError("enumerate_triples: p must be >= 1");
  const long top = max_partner(p);
  std::vector<ResonanceTriple> out;
  for (long q = 1; q <= top; ++q) {
    for (long n = 1; n <= top; ++n) {
      if (gcd3(p, q, n) == 1) out.push_back({p, q, n});
    }
  }
  return out;
}

long counting_bound(long p) {
  long bound = 8 * p * totient(p);
  const long top = max_partner(p);
  for (long q = 1; q <= top; ++q) {
    if (std::gcd(p, q) != 1) bound += totient(q);
  }
  return bound;
}

double energy_for_period_ratio(long p, long q) {
  if (p < 1 || q < 1) throw DomainError("energy_for_period_ratio: p and q must be >= 1");
  if (!below_partner_limit(q, p)) {
    throw OutOfRangeError("energy_for_period_ratio: p/q = " + std::to_string(p) + "/" + std::to_string(q) +
                          " must exceed 1/(2 sqrt2), the lower limit of T/2pi");
  }
  return invert_period(period_target(p, q));
}

elliptic::Flagged<double> energy_for_period_ratio_checked(long p, long q) {
  const double h = energy_for_period_ratio(p, q);
  return {h, -h < 1e-8};
}

ResonantSurface resonant_surface(const ResonanceTriple& t) {
  if (!is_admissible(t)) {
    throw DomainError("resonant_surface: triple (" + std::to_string(t.p) + "," + std::to_string(t.q) + "," +
                      std::to_string(t.n) + ") is not coprime or violates p > q/(2 sqrt2), p > n/(2 sqrt2)");
  }
  ResonantSurface s;
  s.triple = t;
  s.h3 = energy_for_period_ratio(t.p, t.q);
  s.h4 = energy_for_period_ratio(t.p, t.n);
  s.h_star = s.h3 + s.h4;
  s.tau = 2 * std::numbers::pi * double(t.p);
  return s;
}

std::vector<ResonantSurface> atlas(long p_max) {
  if (p_max < 1) throw DomainError("atlas: p_max must be >= 1");
  std::map<std::pair<long, long>, double> cache;
  auto energy = [&](long p, long q) {
    const long g = std::gcd(p, q);
    const auto key = std::make_pair(p / g, q / g);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const double h = energy_for_period_ratio(key.first, key.second);
    cache.emplace(key, h);
    return h;
  };

  std::vector<ResonantSurface> all;
  for (long p = 1; p <= p_max; ++p) {
    for (const auto& t : enumerate_triples(p)) {
      if (t.n < t.q) continue;  // (p, n, q) gives the same surface
      ResonantSurface s;
      s.triple = t;
      s.h3 = energy(t.p, t.q);
      s.h4 = energy(t.p, t.n);
      s.h_star = s.h3 + s.h4;
      s.tau = 2 * std::numbers::pi * double(t.p);
      all.push_back(s);
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const ResonantSurface& a, const ResonantSurface& b) { return a.h_star < b.h_star; });
  std::vector<ResonantSurface> out;
  for (const auto& s : all) {
    if (!out.empty() && std::abs(s.h_star - out.back().h_star) <= 1e-12) {
      if (s.triple.p < out.back().triple.p) out.back() = s;
      continue;
    }
    out.push_back(s);
  }
  return out;
}

double max_gap(const std::vector<ResonantSurface>& surfaces, double lo, double hi) {
  std::vector<double> pts{lo, hi};
  for (const auto& s : surfaces) {
    if (s.h_star > lo && s.h_star < hi) pts.push_back(s.h_star);
  }
  std::sort(pts.begin(), pts.end());
  double gap = 0;
  for (std::size_t i = 1; i < pts.size(); ++i) gap = std::max(gap, pts[i] - pts[i - 1]);
  return gap;
}

std::optional<Rational> simplest_rational(double x, double tol, long max_den) {
  if (!(tol >= 0) || !std::isfinite(x)) throw DomainError("simplest_rational: need finite x and tol >= 0");
  if (max_den < 1) throw DomainError("simplest_rational: max_den must be >= 1");
  long double a = (long double)x - tol, b = (long double)x + tol;
  const bool negate = b < 0;
  if (negate) {
    const long double lower = -b;
    b = -a;
    a = lower;
  }
  if (a <= 0) return Rational{0, 1};

  // Continued-fraction expansion shared by the two interval ends; the
  // convergents h/k accumulate the common prefix.
  long double h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int depth = 0; depth < 64; ++depth) {
    const long double fa = std::floor(a);
    long double digit;
    bool done = false;
    if (fa == a) {
      digit = fa;
      done = true;
    } else if (fa + 1 <= b) {
      digit = fa + 1;
      done = true;
    } else {
      digit = fa;
    }
    const long double h2 = digit * h1 + h0, k2 = digit * k1 + k0;
    if (k2 > (long double)max_den) return std::nullopt;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (done) {
      const long num = long(h1);
      return Rational{negate ? -num : num, long(k1)};
    }
    const long double na = 1 / (b - fa), nb = 1 / (a - fa);
    a = na;
    b = nb;
  }
  return std::nullopt;
}

std::optional<ResonanceTriple> rational_point_check(double h3, double h4, long q_max, double tol) {
  const double x3 = period_T(h3) / (2 * std::numbers::pi);
  const double x4 = period_T(h4) / (2 * std::numbers::pi);
  const auto rs = simplest_rational(x3, tol, q_max);
  const auto uv = simplest_rational(x4, tol, q_max);
  if (!rs || !uv) return std::nullopt;
  const long r = rs->num, s = rs->den, u = uv->num, v = uv->den;
  const long g = gcd3(r * u, s * u, r * v);
  return ResonanceTriple{r * u / g, s * u / g, r * v / g};
}

bool surface_accepts(double h, const ResonanceTriple& t, double tol) {
  if (!is_admissible(t)) return false;
  return std::abs(resonant_surface(t).h_star - h) <= tol;
}

SurfaceTopology classify_surface(double h) {
  if (!(h > -4)) throw NonexistentLevelError("classify_surface: the level h <= -4 does not exist");
  if (h < -2) return SurfaceTopology::sphere_foliated_by_tori;
  if (h == -2) return SurfaceTopology::sphere_minus_four_points;
  if (h < 0) return SurfaceTopology::sphere_with_four_disc_boundaries;
  if (h == 0) return SurfaceTopology::two_cylinders_four_planes;
  return SurfaceTopology::cylinders_and_planes;
}

std::string label(SurfaceTopology t) {
  switch (t) {
    case SurfaceTopology::sphere_foliated_by_tori: return "S³-foliated-by-tori";
    case SurfaceTopology::sphere_minus_four_points: return "S³-minus-4-points";
    case SurfaceTopology::sphere_with_four_disc_boundaries: return "S³-with-4-disc-boundaries";
    case SurfaceTopology::two_cylinders_four_planes: return "two-cylinders-plus-four-planes";
    case SurfaceTopology::cylinders_and_planes: return "cylinders-and-planes";
  }
  return "?";
}

FiberType classify_fiber(double h3, double h4) {
  if (h3 < -2 || h4 < -2) return FiberType::empty;
  auto boundary = [](double x) { return x == -2 || x == 0; };
  if (boundary(h3) || boundary(h4)) return FiberType::isotropic;
  const int negatives = (h3 < 0) + (h4 < 0);
  if (negatives == 2) return FiberType::torus;
  if (negatives == 1) return FiberType::cylinder;
  return FiberType::plane;
}

std::string label(FiberType f) {
  switch (f) {
    case FiberType::torus: return "torus";
    case FiberType::cylinder: return "cylinder";
    case FiberType::plane: return "plane";
    case FiberType::isotropic: return "isotropic";
    case FiberType::empty: return "empty";
  }
  return "?";
}

MomentumLine momentum_line(double h) {
  if (!(h >= -4)) throw NonexistentLevelError("momentum_line: no level line for h < -4");
  MomentumLine line;
  line.start = {-2, h + 2};
  line.end = {h + 2, -2};
  line.degenerate = h == -4;
  line.nonexistent = h == -4;
  return line;
}

}  // namespace sitnikov
