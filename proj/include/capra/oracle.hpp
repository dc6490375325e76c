#pragma once
//
// Brute-force cross-checks for the closed forms: grid suprema for the
// conjugate and biconjugate, the exact argmax realization of the
// admissible-dual sets, and subset enumeration for top-(k,q) norms.  These
// are deliberately naive; tests freeze their outputs against the closed
// forms.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "capra/capra.hpp"
#include "capra/norms.hpp"

namespace capra {

// A cubic lattice [lo, hi]^dim with coordinates at exact integer multiples
// of step, capped at max_points total points.
struct GridSpec {
  double lo;
  double hi;
  double step;
  std::size_t dim;
  std::size_t max_points = kDefaultGridBudget;
};

inline LatticeAxis grid_axis(const GridSpec& g) {
  if (g.dim < 1)
    throw std::invalid_argument("grid: dimension must be >= 1");
  return lattice_axis(g.lo, g.hi, g.step);
}

inline std::size_t grid_total_points(const GridSpec& g) {
  const LatticeAxis ax = grid_axis(g);
  unsigned long long total = 1;
  for (std::size_t i = 0; i < g.dim; ++i) {
    if (total > static_cast<unsigned long long>(g.max_points) / ax.n)
      throw BudgetExceeded("grid exceeds its lattice budget");
    total *= ax.n;
  }
  return static_cast<std::size_t>(total);
}

namespace detail {

// Calls fn(point) for every lattice point of the grid, odometer order.
template <typename Fn>
inline void for_each_grid_point(const GridSpec& g, Fn&& fn) {
  const LatticeAxis ax = grid_axis(g);
  grid_total_points(g);  // budget check
  std::vector<long long> k(g.dim, ax.k0);
  std::vector<double> pt(g.dim);
  for (;;) {
    for (std::size_t i = 0; i < g.dim; ++i)
      pt[i] = static_cast<double>(k[i]) * g.step;
    fn(pt);
    std::size_t i = 0;
    while (i < g.dim && ++k[i] > ax.k1) {
      k[i] = ax.k0;
      ++i;
    }
    if (i == g.dim) break;
  }
}

}  // namespace detail

// Grid estimate of the conjugate: the maximum of c(x, y) - l0(x) over the
// lattice points x (the origin always participates, contributing 0).  Always
// a lower bound on the closed form; approaches it as the lattice refines.
inline double conjugate_by_sup(const Vec& y, const PExponent& p,
                               const GridSpec& grid) {
  if (grid.dim != y.dim())
    throw std::invalid_argument("conjugate_by_sup: grid/y dimension mismatch");
  double best = 0.0;
  detail::for_each_grid_point(grid, [&](const std::vector<double>& x) {
    int nz = 0;
    double dp = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] != 0.0) ++nz;
      dp += x[i] * y[i];
    }
    if (nz == 0) return;
    const double np = lp_norm(Vec(x), p);
    const double val = dp / np - static_cast<double>(nz);
    if (val > best) best = val;
  });
  return best;
}

// Grid estimate of the biconjugate: the maximum of c(x, y) - conjugate(y)
// over lattice points y (again the origin contributes 0).  A lower bound on
// the closed form.
inline double biconjugate_by_sup(const Vec& x, const PExponent& p,
                                 const GridSpec& grid) {
  if (grid.dim != x.dim())
    throw std::invalid_argument(
        "biconjugate_by_sup: grid/x dimension mismatch");
  double best = 0.0;
  detail::for_each_grid_point(grid, [&](const std::vector<double>& ypt) {
    bool zero = true;
    for (double v : ypt)
      if (v != 0.0) {
        zero = false;
        break;
      }
    if (zero) return;
    const Vec y(ypt);
    const double val = capra_coupling(x, y, p) - capra_conjugate(y, p);
    if (val > best) best = val;
  });
  return best;
}

// The support counts attaining the conjugate's inner maximum
// max_j (top-(j,q) norm - j), collected by exact float comparison.  The
// closed inequality systems of in_admissible_dual must reproduce this set.
inline std::vector<int> admissible_dual_by_argmax(const Vec& y,
                                                  const PExponent& p) {
  const int d = static_cast<int>(y.dim());
  const PExponent q = p.conjugate();
  std::vector<double> vals(d + 1);
  vals[0] = 0.0;
  double best = 0.0;
  for (int j = 1; j <= d; ++j) {
    vals[j] = top_norm(y, j, q) - static_cast<double>(j);
    if (vals[j] > best) best = vals[j];
  }
  std::vector<int> arg;
  for (int j = 0; j <= d; ++j)
    if (vals[j] == best) arg.push_back(j);
  return arg;
}

// Top-(k,q) norm by enumerating all coordinate subsets of size <= k and
// taking the largest lq norm.  Exponential; limited to dimension <= 20.
inline double coordinate_dual_norm_by_subsets(const Vec& y, int k,
                                              const PExponent& p) {
  const int d = static_cast<int>(y.dim());
  if (k < 0 || k > d)
    throw std::invalid_argument(
        "coordinate_dual_norm_by_subsets: k must lie in [0, dim]");
  if (d > 20)
    throw BudgetExceeded(
        "coordinate_dual_norm_by_subsets: dimension capped at 20");
  if (k == 0) return 0.0;
  const PExponent q = p.conjugate();
  double best = 0.0;
  if (q.is_infinite()) {
    // any singleton realizes the sup norm once k >= 1
    return linf_norm(y);
  }
  std::vector<double> pw(d);
  for (int i = 0; i < d; ++i)
    pw[i] = std::pow(std::abs(y[static_cast<std::size_t>(i)]), q.value());
  for (std::uint32_t mask = 1; mask < (1u << d); ++mask) {
    if (std::popcount(mask) > k) continue;
    double s = 0.0;
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) s += pw[i];
    best = std::max(best, std::pow(s, 1.0 / q.value()));
  }
  return best;
}

}  // namespace capra
