#pragma once
//
// Dense-vector lp norms, Hoelder duality, top-(k,q) norms, lp normal-cone
// membership, and a randomized falsifier for orthant-strict monotonicity.
//
// Conventions used throughout the library:
//   * vectors are small dense arrays of finite doubles (dimension >= 1),
//   * the norm exponent p lives in [1, +inf]; +inf is an IEEE infinity,
//   * extended-real values are plain doubles where +inf is a legal result,
//   * comparisons are relative: |lhs - rhs| <= tol * max(1, |rhs|).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace capra {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Default tolerance for the relative comparisons below.
inline constexpr double kDefaultTol = 1e-9;

// Default cap on exhaustive lattice sizes (points per grid).
inline constexpr std::size_t kDefaultGridBudget = std::size_t{1} << 25;

// Thrown when a requested exhaustive computation exceeds its lattice budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// tolerant comparisons
// ---------------------------------------------------------------------------

// |lhs - rhs| <= tol * max(1, |rhs|); infinities match only exactly.
inline bool nearly_equal(double lhs, double rhs, double tol = kDefaultTol) {
  if (std::isinf(lhs) || std::isinf(rhs)) return lhs == rhs;
  return std::abs(lhs - rhs) <= tol * std::max(1.0, std::abs(rhs));
}

// lhs <= rhs, where landing within tolerance of the boundary still passes.
inline bool leq_tol(double lhs, double rhs, double tol = kDefaultTol) {
  if (std::isinf(lhs) || std::isinf(rhs)) return lhs <= rhs;
  return lhs <= rhs + tol * std::max(1.0, std::abs(rhs));
}

// lhs >= rhs with the same boundary slack as leq_tol.
inline bool geq_tol(double lhs, double rhs, double tol = kDefaultTol) {
  if (std::isinf(lhs) || std::isinf(rhs)) return lhs >= rhs;
  return lhs >= rhs - tol * std::max(1.0, std::abs(rhs));
}

inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// ---------------------------------------------------------------------------
// lattices
// ---------------------------------------------------------------------------

// The integer indices k with lo <= k*step <= hi.  Coordinates are exact
// multiples of step, so lattice points on the axes carry exact zeros (which
// support-counting depends on).  Window endpoints within 1e-9 (relative) of
// a lattice point count as on it.
struct LatticeAxis {
  long long k0;
  long long k1;
  std::size_t n;  // = k1 - k0 + 1
};

inline LatticeAxis lattice_axis(double lo, double hi, double step) {
  if (!(step > 0.0) || !std::isfinite(step))
    throw std::invalid_argument("lattice: step must be positive and finite");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
    throw std::invalid_argument("lattice: window must satisfy lo < hi");
  const double r0 = lo / step;
  const double r1 = hi / step;
  if (std::abs(r0) > 9.0e15 || std::abs(r1) > 9.0e15)
    throw std::invalid_argument("lattice: window/step ratio too large");
  LatticeAxis ax;
  ax.k0 = static_cast<long long>(
      std::ceil(r0 - 1e-9 * std::max(1.0, std::abs(r0))));
  ax.k1 = static_cast<long long>(
      std::floor(r1 + 1e-9 * std::max(1.0, std::abs(r1))));
  if (ax.k1 < ax.k0)
    throw std::invalid_argument("lattice: window contains no lattice points");
  ax.n = static_cast<std::size_t>(ax.k1 - ax.k0) + 1;
  return ax;
}

// (s+1)^q - s^q for s >= 0, q >= 1, evaluated so overflow yields +inf
// rather than a NaN from inf - inf.
inline double pow_gap(double s, double q) {
  const double hi = std::pow(s + 1.0, q);
  if (std::isinf(hi)) return kInf;  // q >= 1 makes the gap diverge with s
  return hi - std::pow(s, q);
}

// ---------------------------------------------------------------------------
// norm exponent
// ---------------------------------------------------------------------------

// A norm exponent p in [1, +inf], with its Hoelder conjugate q
// (1/p + 1/q = 1).
class PExponent {
 public:
  explicit PExponent(double p) : p_(p) {
    if (!(p >= 1.0))  // also rejects NaN
      throw std::invalid_argument("norm exponent must satisfy p >= 1");
  }

  static PExponent one() { return PExponent(1.0); }
  static PExponent infinity() { return PExponent(kInf); }

  // Accepts the literal "inf" or a decimal value >= 1.
  static PExponent parse(std::string_view text) {
    if (text == "inf") return infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(std::string(text), &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("unparseable norm exponent: '" +
                                  std::string(text) + "'");
    }
    if (used != text.size())
      throw std::invalid_argument("unparseable norm exponent: '" +
                                  std::string(text) + "'");
    return PExponent(v);
  }

  double value() const noexcept { return p_; }

  double conjugate_value() const noexcept {
    if (p_ == 1.0) return kInf;
    if (std::isinf(p_)) return 1.0;
    return p_ / (p_ - 1.0);
  }
  PExponent conjugate() const { return PExponent(conjugate_value()); }

  bool is_one() const noexcept { return p_ == 1.0; }
  bool is_infinite() const noexcept { return std::isinf(p_); }
  // strictly between 1 and infinity
  bool is_intermediate() const noexcept { return !is_one() && !is_infinite(); }

  friend bool operator==(const PExponent&, const PExponent&) = default;

 private:
  double p_;
};

// ---------------------------------------------------------------------------
// vectors
// ---------------------------------------------------------------------------

// A nonempty dense vector of finite doubles.
class Vec {
 public:
  Vec(std::initializer_list<double> entries)
      : e_(entries) {
    validate();
  }
  explicit Vec(std::vector<double> entries) : e_(std::move(entries)) {
    validate();
  }

  static Vec zeros(std::size_t dim) {
    return Vec(std::vector<double>(dim, 0.0));
  }

  std::size_t dim() const noexcept { return e_.size(); }
  double operator[](std::size_t i) const { return e_.at(i); }
  const std::vector<double>& entries() const noexcept { return e_; }

  auto begin() const noexcept { return e_.begin(); }
  auto end() const noexcept { return e_.end(); }

  // exact component-wise equality (used by serialization round-trip checks)
  friend bool operator==(const Vec&, const Vec&) = default;

 private:
  void validate() const {
    if (e_.empty()) throw std::invalid_argument("vector must be nonempty");
    for (double v : e_)
      if (!std::isfinite(v))
        throw std::invalid_argument("vector entries must be finite");
  }

  std::vector<double> e_;
};

inline bool is_zero(const Vec& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0; });
}

inline double dot(const Vec& x, const Vec& y) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) s += x[i] * y[i];
  return s;
}

inline Vec scale(const Vec& x, double a) {
  std::vector<double> e(x.begin(), x.end());
  for (double& v : e) v *= a;
  return Vec(std::move(e));
}

// ---------------------------------------------------------------------------
// norms
// ---------------------------------------------------------------------------

inline double linf_norm(const Vec& y) {
  double m = 0.0;
  for (double v : y) m = std::max(m, std::abs(v));
  return m;
}

inline double lp_norm(const Vec& y, const PExponent& p) {
  if (p.is_infinite()) return linf_norm(y);
  if (p.is_one()) {
    double s = 0.0;
    for (double v : y) s += std::abs(v);
    return s;
  }
  if (p.value() == 2.0) {
    double s = 0.0;
    for (double v : y) s += v * v;
    return std::sqrt(s);
  }
  double s = 0.0;
  for (double v : y) s += std::pow(std::abs(v), p.value());
  return std::pow(s, 1.0 / p.value());
}

// Indices ordered by decreasing magnitude; ties broken by ascending index,
// so the permutation is deterministic.
struct SortPermutation {
  std::vector<std::size_t> indices;
};

inline SortPermutation sort_abs(const Vec& y) {
  SortPermutation perm;
  perm.indices.resize(y.dim());
  for (std::size_t i = 0; i < y.dim(); ++i) perm.indices[i] = i;
  std::stable_sort(perm.indices.begin(), perm.indices.end(),
                   [&y](std::size_t a, std::size_t b) {
                     return std::abs(y[a]) > std::abs(y[b]);
                   });
  return perm;
}

// magnitudes |y_i| in decreasing order
inline std::vector<double> abs_sorted_desc(const Vec& y) {
  std::vector<double> m(y.dim());
  for (std::size_t i = 0; i < y.dim(); ++i) m[i] = std::abs(y[i]);
  std::sort(m.begin(), m.end(), std::greater<double>());
  return m;
}

// Top-(k,q) norm: the lq norm of the k largest magnitudes.  k = 0 gives 0;
// q = +inf gives the plain sup norm for any k >= 1.  The k magnitudes are
// accumulated in decreasing order so callers summing prefixes themselves
// reproduce these exact values.
inline double top_norm(const Vec& y, int k, const PExponent& q) {
  const int d = static_cast<int>(y.dim());
  if (k < 0 || k > d)
    throw std::invalid_argument("top_norm: k must lie in [0, dim]");
  if (k == 0) return 0.0;
  if (q.is_infinite()) return linf_norm(y);
  const std::vector<double> mags = abs_sorted_desc(y);
  double s = 0.0;
  for (int i = 0; i < k; ++i) s += std::pow(mags[i], q.value());
  return std::pow(s, 1.0 / q.value());
}

// ---------------------------------------------------------------------------
// normal cone of the lp unit ball
// ---------------------------------------------------------------------------

// Whether y lies in the normal cone of the lp unit ball at base point u
// (u != 0; the point is used through its direction only).  Equivalent to the
// duality equality <u, y> = |u|_p * |y|_q, tested relatively.
inline bool normal_cone_member_lp(const Vec& u, const Vec& y,
                                  const PExponent& p,
                                  double tol = kDefaultTol) {
  if (u.dim() != y.dim())
    throw std::invalid_argument("normal_cone_member_lp: dimension mismatch");
  if (is_zero(u))
    throw std::invalid_argument(
        "normal_cone_member_lp: base point must be nonzero");
  const double lhs = dot(u, y);
  const double rhs = lp_norm(u, p) * lp_norm(y, p.conjugate());
  return nearly_equal(lhs, rhs, tol);
}

// ---------------------------------------------------------------------------
// orthant-strict monotonicity falsifier
// ---------------------------------------------------------------------------

// A pair violating strictness: |x_j| < |x'_j| on one coordinate, x = x'
// elsewhere, yet the norms fail to be strictly ordered.
struct OsmCounterexample {
  Vec x;
  Vec x_prime;
  double norm_x;
  double norm_x_prime;
};

// Randomized search for a strict-monotonicity violation of |.|_p: draw a
// Gaussian x', shrink one coordinate, and test whether the norm strictly
// decreased.  Draws whose perturbation would vanish below double granularity
// (shrunk magnitude < 1e-2 or shrink factor > 0.99) are discarded so that a
// reported violation is a genuine tie, not rounding.  Returns the first
// counterexample found, or nullopt after `trials` draws.
inline std::optional<OsmCounterexample> osm_falsify(const PExponent& p,
                                                    std::size_t dim,
                                                    std::size_t trials,
                                                    std::uint64_t seed) {
  if (dim < 2)
    throw std::invalid_argument("osm_falsify: dimension must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, dim - 1);

  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<double> xp(dim);
    for (double& v : xp) v = gauss(rng);
    const std::size_t j = pick(rng);
    const double f = unit(rng);
    if (std::abs(xp[j]) < 1e-2 || f > 0.99) continue;

    std::vector<double> x = xp;
    x[j] *= f;
    Vec vx(std::move(x));
    Vec vxp(std::move(xp));
    const double nx = lp_norm(vx, p);
    const double nxp = lp_norm(vxp, p);
    if (!(nx < nxp))
      return OsmCounterexample{std::move(vx), std::move(vxp), nx, nxp};
  }
  return std::nullopt;
}

}  // namespace capra
