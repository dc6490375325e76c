#pragma once
//
// The constant-along-primal-rays coupling c(x, y) = <x, y> / |x|_p (with
// c(0, y) = 0), the support count l0, the closed-form conjugate and
// biconjugate of l0 under that coupling, and the admissible-dual index sets
// that the conjugate's inner maximization partitions dual space into.

#include <cassert>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "capra/norms.hpp"

namespace capra {

// number of nonzero entries (exact zeros only; callers wanting thresholding
// must pre-round)
inline int l0(const Vec& x) {
  int n = 0;
  for (double v : x)
    if (v != 0.0) ++n;
  return n;
}

// ascending indices of the nonzero entries
inline std::vector<std::size_t> support(const Vec& x) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (x[i] != 0.0) idx.push_back(i);
  return idx;
}

// c(x, y) = <x, y> / |x|_p for x != 0, and 0 at x = 0.  Constant along open
// primal rays by construction.
inline double capra_coupling(const Vec& x, const Vec& y, const PExponent& p) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("capra_coupling: dimension mismatch");
  if (is_zero(x)) return 0.0;
  return dot(x, y) / lp_norm(x, p);
}

// ---------------------------------------------------------------------------
// conjugate of l0 under the coupling
// ---------------------------------------------------------------------------

// Closed form: max over j in [1, d] of (top-(j,q) norm of y minus j), clamped
// at 0 (q the Hoelder conjugate of p).  Specializes to (|y|_inf - 1)^+ at
// p = 1 and to sum_k (|y_k| - 1)^+ over |y_k| >= 1 at p = inf; asserts
// cross-check those collapsed forms and a literal per-j evaluation.
inline double capra_conjugate(const Vec& y, const PExponent& p) {
  const std::size_t d = y.dim();
  const PExponent q = p.conjugate();
  double best = 0.0;
  if (q.is_infinite()) {
    // every top-(j, inf) norm equals the sup norm, so j = 1 dominates
    best = std::max(0.0, linf_norm(y) - 1.0);
  } else {
    // one descending sort with a running power sum; arithmetic matches
    // repeated top_norm calls exactly (same accumulation order)
    const std::vector<double> mags = abs_sorted_desc(y);
    double s = 0.0;
    for (std::size_t j = 1; j <= d; ++j) {
      s += std::pow(mags[j - 1], q.value());
      best = std::max(best, std::pow(s, 1.0 / q.value()) -
                                static_cast<double>(j));
    }
    best = std::max(best, 0.0);
  }
#ifndef NDEBUG
  // sampled so grid oracles that call this millions of times stay fast
  static thread_local std::uint64_t conj_calls = 0;
  if (++conj_calls <= 4096 || (conj_calls & 1023) == 0) {
    double lit = 0.0;
    for (int j = 1; j <= static_cast<int>(d); ++j)
      lit = std::max(lit, top_norm(y, j, q) - static_cast<double>(j));
    lit = std::max(lit, 0.0);
    assert(nearly_equal(best, lit, 1e-12));
    if (p.is_one())
      assert(nearly_equal(best, std::max(0.0, linf_norm(y) - 1.0), 1e-12));
    if (p.is_infinite()) {
      double s1 = 0.0;
      for (double v : y)
        if (std::abs(v) >= 1.0) s1 += std::abs(v) - 1.0;
      assert(nearly_equal(best, s1, 1e-12));
    }
  }
#endif
  return best;
}

// ---------------------------------------------------------------------------
// biconjugate of l0 under the coupling
// ---------------------------------------------------------------------------

// Closed form of the biconjugate, i.e. the tightest lower envelope of l0 by
// functions affine in the coupling:
//   p = 1       : 0 at x = 0, else 1
//   p in (1,inf): l0 itself
//   p = inf     : 0 at x = 0, else |x|_1 / |x|_inf
inline double capra_biconjugate(const Vec& x, const PExponent& p) {
  if (is_zero(x)) return 0.0;
  if (p.is_one()) return 1.0;
  if (p.is_infinite()) return lp_norm(x, PExponent::one()) / linf_norm(x);
  return static_cast<double>(l0(x));
}

// ---------------------------------------------------------------------------
// admissible-dual index sets
// ---------------------------------------------------------------------------

// Whether index l attains the maximum defining capra_conjugate(y), described
// by closed inequality systems rather than by evaluating the maximum:
//   p = 1       : l = 0 iff |y|_inf <= 1; l = 1 iff |y|_inf >= 1; l >= 2 never
//   p in (1,inf]: the k-th magnitude's q-th power dominates the gap
//                 (top_k + 1)^q - top_k^q for all k < l, and is dominated by
//                 it at k = l (skipped when l = d)
inline bool in_admissible_dual(const Vec& y, int l, const PExponent& p,
                               double tol = kDefaultTol) {
  const int d = static_cast<int>(y.dim());
  if (l < 0 || l > d)
    throw std::invalid_argument("in_admissible_dual: l must lie in [0, dim]");
  if (p.is_one()) {
    const double m = linf_norm(y);
    if (l == 0) return leq_tol(m, 1.0, tol);
    if (l == 1) return geq_tol(m, 1.0, tol);
    return false;
  }
  const double q = p.conjugate_value();  // finite since p > 1
  const std::vector<double> mags = abs_sorted_desc(y);
  std::vector<double> mq(d);       // q-th powers of the sorted magnitudes
  std::vector<double> tops(d + 1); // tops[k] = top-(k,q) norm of y
  tops[0] = 0.0;
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    mq[i] = std::pow(mags[i], q);
    s += mq[i];
    tops[i + 1] = std::pow(s, 1.0 / q);
  }
  for (int k = 0; k < l; ++k)
    if (!geq_tol(mq[k], pow_gap(tops[k], q), tol)) return false;
  if (l != d && !leq_tol(mq[l], pow_gap(tops[l], q), tol)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// classical comparisons
// ---------------------------------------------------------------------------

// The ordinary (Fenchel) subdifferential of l0 collapses to {0} at the
// origin and is empty elsewhere.
enum class SetDescriptor { singleton_zero, empty_set };

inline SetDescriptor classical_subdiff(const Vec& x) {
  return is_zero(x) ? SetDescriptor::singleton_zero : SetDescriptor::empty_set;
}

inline std::string to_string(SetDescriptor s) {
  return s == SetDescriptor::singleton_zero ? "{0}" : "{}";
}

// Membership in the local-analysis subdifferential family of l0 at x, which
// for every member of the family is {y : y vanishes on supp(x)}.
inline bool frechet_family_subdiff_member(const Vec& x, const Vec& y) {
  if (x.dim() != y.dim())
    throw std::invalid_argument(
        "frechet_family_subdiff_member: dimension mismatch");
  for (std::size_t i = 0; i < x.dim(); ++i)
    if (x[i] != 0.0 && y[i] != 0.0) return false;
  return true;
}

}  // namespace capra
