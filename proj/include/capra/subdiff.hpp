#pragma once
//
// Exact membership tests for the subdifferential of l0 under the
// ray-constant coupling, per-regime witness construction, and 2-d region
// sweeps over dual lattices.
//
// Membership at x with l = l0(x) reduces to a finite inequality system in y
// (q denotes the Hoelder conjugate of p, nu a decreasing-magnitude sort):
//   x = 0        : |y|_inf <= 1
//   p = 1        : empty for l >= 2; for l = 1, <x,y> = |x|_1 |y|_inf and
//                  |y|_inf >= 1
//   p in (1,inf) : y restricted to supp(x) lies in the normal cone of the
//                  lp ball at x/|x|_p, off-support magnitudes stay below
//                  on-support ones, |y_nu(k+1)|^q >= (top_k+1)^q - top_k^q
//                  for k < l, and the reverse bound at k = l (when l < dim)
//   p = inf      : same system with q = 1, on the domain where all nonzero
//                  |x_k| coincide; empty elsewhere
// Every evaluated condition is reported, so negative verdicts carry the
// failing rows.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "capra/capra.hpp"
#include "capra/norms.hpp"

namespace capra {

struct SubdiffCondition {
  std::string id;
  bool satisfied;
  double lhs;
  double rhs;
};

struct SubdiffVerdict {
  bool member = false;
  std::vector<SubdiffCondition> conditions;
};

// Whether the subdifferential at x can be nonempty for this p: l0(x) <= 1
// when p = 1, equal nonzero magnitudes when p = inf, everywhere otherwise.
inline bool in_subdiff_domain(const Vec& x, const PExponent& p,
                              double tol = kDefaultTol) {
  if (p.is_one()) return l0(x) <= 1;
  if (!p.is_infinite()) return true;
  double mn = kInf, mx = 0.0;
  for (double v : x)
    if (v != 0.0) {
      mn = std::min(mn, std::abs(v));
      mx = std::max(mx, std::abs(v));
    }
  if (mx == 0.0) return true;  // x = 0
  return nearly_equal(mx, mn, tol);
}

inline SubdiffVerdict subdiff_member(const Vec& x, const Vec& y,
                                     const PExponent& p,
                                     double tol = kDefaultTol) {
  if (x.dim() != y.dim())
    throw std::invalid_argument("subdiff_member: dimension mismatch");
  SubdiffVerdict v;
  auto add = [&v](std::string id, bool ok, double lhs, double rhs) {
    v.conditions.push_back(SubdiffCondition{std::move(id), ok, lhs, rhs});
  };

  const int d = static_cast<int>(x.dim());
  const int l = l0(x);
  if (l == 0) {
    const double m = linf_norm(y);
    add("zero-ball", leq_tol(m, 1.0, tol), m, 1.0);
  } else if (p.is_one()) {
    if (l >= 2) {
      add("domain", false, static_cast<double>(l), 1.0);
    } else {
      const double lhs = dot(x, y);
      const double rhs = lp_norm(x, PExponent::one()) * linf_norm(y);
      add("normal-cone", nearly_equal(lhs, rhs, tol), lhs, rhs);
      const double m = linf_norm(y);
      add("dual-floor", geq_tol(m, 1.0, tol), m, 1.0);
    }
  } else if (p.is_infinite() && !in_subdiff_domain(x, p, tol)) {
    double mn = kInf, mx = 0.0;
    for (double t : x)
      if (t != 0.0) {
        mn = std::min(mn, std::abs(t));
        mx = std::max(mx, std::abs(t));
      }
    add("domain", false, mx, mn);
  } else {
    // p in (1, inf), or p = inf restricted to its domain (then q = 1)
    const double q = p.conjugate_value();
    double lhs = 0.0;     // <x, y> restricted to supp(x)
    double nq = 0.0;      // sum over supp(x) of |y_i|^q
    double onmin = kInf;  // smallest on-support |y_i|
    double offmax = 0.0;  // largest off-support |y_j|
    for (int i = 0; i < d; ++i) {
      const double yi = y[static_cast<std::size_t>(i)];
      if (x[static_cast<std::size_t>(i)] != 0.0) {
        lhs += x[static_cast<std::size_t>(i)] * yi;
        nq += std::pow(std::abs(yi), q);
        onmin = std::min(onmin, std::abs(yi));
      } else {
        offmax = std::max(offmax, std::abs(yi));
      }
    }
    const double rhs = lp_norm(x, p) * std::pow(nq, 1.0 / q);
    add("normal-cone", nearly_equal(lhs, rhs, tol), lhs, rhs);
    if (l < d) add("off-support", leq_tol(offmax, onmin, tol), offmax, onmin);

    const std::vector<double> mags = abs_sorted_desc(y);
    std::vector<double> mq(d), tops(d + 1);
    tops[0] = 0.0;
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
      mq[i] = std::pow(mags[i], q);
      s += mq[i];
      tops[i + 1] = std::pow(s, 1.0 / q);
    }
    for (int k = 0; k < l; ++k) {
      const double gap = pow_gap(tops[k], q);
      add("lower-chain k=" + std::to_string(k), geq_tol(mq[k], gap, tol),
          mq[k], gap);
    }
    if (l != d) {
      const double gap = pow_gap(tops[l], q);
      add("upper-chain", leq_tol(mq[l], gap, tol), mq[l], gap);
    }
  }

  v.member = true;
  for (const auto& c : v.conditions) v.member = v.member && c.satisfied;
  return v;
}

// A subgradient at x, built per regime: 0 at the origin; the signed basis
// direction for p = 1; the sign pattern of the support for p = inf; for
// p in (1, inf) the norm-duality direction on the support scaled by the
// smallest power of two satisfying the dominance rows.  Throws domain_error
// outside the membership domain.
inline Vec subdiff_witness(const Vec& x, const PExponent& p) {
  if (!in_subdiff_domain(x, p))
    throw std::domain_error(
        "subdiff_witness: subdifferential is empty at this x for this p");
  const std::vector<std::size_t> L = support(x);
  const std::size_t d = x.dim();
  std::vector<double> y(d, 0.0);
  if (L.empty()) return Vec(std::move(y));
  if (p.is_one()) {
    const std::size_t k = L.front();  // the domain gives l0(x) <= 1
    y[k] = sign(x[k]);
    return Vec(std::move(y));
  }
  if (p.is_infinite()) {
    for (std::size_t i : L) y[i] = sign(x[i]);
    return Vec(std::move(y));
  }

  const double pn = lp_norm(x, p);
  const double q = p.conjugate_value();
  // magnitudes of the duality direction g, g_i = sign(x_i)(|x_i|/|x|_p)^(p-1),
  // which satisfies |g|_q = 1 and <x, g> = |x|_p
  std::vector<double> gmag;
  gmag.reserve(L.size());
  for (std::size_t i : L)
    gmag.push_back(std::pow(std::abs(x[i]) / pn, p.value() - 1.0));
  std::sort(gmag.begin(), gmag.end(), std::greater<double>());

  double lambda = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    bool ok = true;
    double s = 0.0;  // running power sum of the scaled sorted magnitudes
    for (std::size_t k = 0; k < gmag.size() && ok; ++k) {
      const double topk = (k == 0) ? 0.0 : std::pow(s, 1.0 / q);
      const double mkq = std::pow(lambda * gmag[k], q);
      if (!(mkq >= pow_gap(topk, q))) ok = false;
      s += mkq;
    }
    if (ok) {
      for (std::size_t i : L)
        y[i] = lambda * sign(x[i]) *
               std::pow(std::abs(x[i]) / pn, p.value() - 1.0);
      return Vec(std::move(y));
    }
    lambda *= 2.0;
  }
  throw std::runtime_error(
      "subdiff_witness: scaling search failed to converge");
}

// ---------------------------------------------------------------------------
// 2-d region sweeps
// ---------------------------------------------------------------------------

// Closed window [lo, hi], applied to both dual axes.
struct Window {
  double lo;
  double hi;
};

// A square lattice of dual points whose coordinates are exact integer
// multiples of `step` (so axis points carry exact zeros), with one
// membership flag per cell; `classes` additionally carries, per cell, a
// bitmask of the support counts l whose class admits the cell.
struct RegionGrid {
  double step = 0.0;
  long long k0 = 0;
  long long k1 = 0;
  std::size_t n = 0;  // lattice points per axis
  std::vector<std::uint8_t> member;
  std::vector<std::uint8_t> classes;

  double coord(std::size_t i) const {
    return static_cast<double>(k0 + static_cast<long long>(i)) * step;
  }
  std::size_t index(std::size_t i1, std::size_t i2) const {
    return i1 * n + i2;
  }
};

inline RegionGrid make_region_grid(const Window& w, double step) {
  const LatticeAxis ax = lattice_axis(w.lo, w.hi, step);
  if (ax.n > (1ull << 20) || ax.n * ax.n > kDefaultGridBudget)
    throw BudgetExceeded("region grid exceeds the lattice budget");
  RegionGrid g;
  g.step = step;
  g.k0 = ax.k0;
  g.k1 = ax.k1;
  g.n = ax.n;
  return g;
}

inline unsigned resolve_threads(unsigned requested, std::size_t jobs) {
  unsigned t = requested != 0
                   ? requested
                   : std::max(1u, std::thread::hardware_concurrency());
  if (jobs == 0) jobs = 1;
  return static_cast<unsigned>(
      std::min<std::size_t>(t, jobs));
}

// Runs fn(0), ..., fn(rows - 1), possibly across threads.  Rows must be
// independent; the result is schedule-invariant because each row writes only
// its own cells.
template <typename RowFn>
inline void run_rows(std::size_t rows, unsigned threads, RowFn&& fn) {
  const unsigned t = resolve_threads(threads, rows);
  if (t <= 1) {
    for (std::size_t i = 0; i < rows; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(t);
  for (unsigned w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < rows;
           i = next.fetch_add(1))
        fn(i);
    });
  for (auto& th : pool) th.join();
}

// Membership of every lattice point in the subdifferential at a fixed
// 2-d primal point x.  threads = 0 picks the hardware count; CAPRA_THREADS
// handling is the caller's concern.
inline RegionGrid region_sweep(const Vec& x, const PExponent& p,
                               const Window& w, double step,
                               double tol = kDefaultTol,
                               unsigned threads = 0) {
  if (x.dim() != 2)
    throw std::invalid_argument("region_sweep: x must be 2-dimensional");
  RegionGrid g = make_region_grid(w, step);
  g.member.assign(g.n * g.n, 0);
  run_rows(g.n, threads, [&](std::size_t i1) {
    const double y1 = g.coord(i1);
    for (std::size_t i2 = 0; i2 < g.n; ++i2) {
      const Vec y{y1, g.coord(i2)};
      g.member[g.index(i1, i2)] =
          subdiff_member(x, y, p, tol).member ? 1 : 0;
    }
  });
  return g;
}

// Union sweep across support classes in 2-d.  Bit l of `classes` marks that
// some primal point with l0(x) = l admits the cell.  Classes 0 and 1 are
// exact (the origin, and the four signed axis directions, which cover their
// rays by ray invariance); class 2 is sampled over `directions` unit
// directions at angles offset by half a step so none degenerates to an axis.
inline RegionGrid region_sweep_classes(const PExponent& p, const Window& w,
                                       double step, std::size_t directions,
                                       double tol = kDefaultTol,
                                       unsigned threads = 0) {
  if (directions < 1)
    throw std::invalid_argument("region_sweep_classes: directions must be >= 1");
  RegionGrid g = make_region_grid(w, step);
  g.member.assign(g.n * g.n, 0);
  g.classes.assign(g.n * g.n, 0);

  std::vector<Vec> reps1 = {Vec{1.0, 0.0}, Vec{-1.0, 0.0}, Vec{0.0, 1.0},
                            Vec{0.0, -1.0}};
  std::vector<Vec> reps2;
  reps2.reserve(directions);
  const double pi = std::acos(-1.0);
  for (std::size_t k = 0; k < directions; ++k) {
    const double th = 2.0 * pi * (static_cast<double>(k) + 0.5) /
                      static_cast<double>(directions);
    reps2.push_back(Vec{std::cos(th), std::sin(th)});
  }

  run_rows(g.n, threads, [&](std::size_t i1) {
    const double y1 = g.coord(i1);
    for (std::size_t i2 = 0; i2 < g.n; ++i2) {
      const Vec y{y1, g.coord(i2)};
      std::uint8_t bits = 0;
      if (leq_tol(linf_norm(y), 1.0, tol)) bits |= 1u;  // x = 0
      for (const Vec& x : reps1)
        if (subdiff_member(x, y, p, tol).member) {
          bits |= 2u;
          break;
        }
      for (const Vec& x : reps2)
        if (subdiff_member(x, y, p, tol).member) {
          bits |= 4u;
          break;
        }
      g.classes[g.index(i1, i2)] = bits;
      g.member[g.index(i1, i2)] = bits != 0 ? 1 : 0;
    }
  });
  return g;
}

}  // namespace capra
