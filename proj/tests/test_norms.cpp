#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "capra/norms.hpp"
#include "capra/oracle.hpp"

using namespace capra;

namespace {

Vec rand_box(std::mt19937_64& rng, std::size_t d, double r) {
  std::uniform_real_distribution<double> u(-r, r);
  std::vector<double> v(d);
  for (double& c : v) c = u(rng);
  return Vec(std::move(v));
}

const std::vector<PExponent> kAllP = {PExponent(1.0), PExponent(1.5),
                                      PExponent(2.0), PExponent(3.0),
                                      PExponent::infinity()};

}  // namespace

TEST_CASE("exponent validation and Hoelder conjugates") {
  CHECK(PExponent(1.0).conjugate_value() == kInf);
  CHECK(PExponent::infinity().conjugate_value() == 1.0);
  CHECK(PExponent(2.0).conjugate_value() == 2.0);
  CHECK(PExponent(1.5).conjugate_value() == Catch::Approx(3.0));
  CHECK(PExponent(4.0).conjugate_value() ==
        Catch::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(PExponent(2.0).is_intermediate());
  CHECK_FALSE(PExponent(1.0).is_intermediate());
  CHECK_FALSE(PExponent::infinity().is_intermediate());
  CHECK_THROWS_AS(PExponent(0.5), std::invalid_argument);
  CHECK_THROWS_AS(PExponent(0.999999), std::invalid_argument);
  CHECK_THROWS_AS(PExponent(std::nan("")), std::invalid_argument);
}

TEST_CASE("exponent parsing") {
  CHECK(PExponent::parse("inf").is_infinite());
  CHECK(PExponent::parse("2").value() == 2.0);
  CHECK(PExponent::parse("1.5").value() == 1.5);
  CHECK_THROWS_AS(PExponent::parse("abc"), std::invalid_argument);
  CHECK_THROWS_AS(PExponent::parse("2x"), std::invalid_argument);
  CHECK_THROWS_AS(PExponent::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(PExponent::parse("0.5"), std::invalid_argument);
}

TEST_CASE("vector validation") {
  CHECK_THROWS_AS(Vec(std::vector<double>{}), std::invalid_argument);
  CHECK_THROWS_AS(Vec{std::nan("")}, std::invalid_argument);
  CHECK_THROWS_AS((Vec{1.0, kInf}), std::invalid_argument);
  const Vec z = Vec::zeros(3);
  CHECK(z.dim() == 3);
  CHECK(is_zero(z));
  CHECK_FALSE(is_zero(Vec{0.0, 1e-300}));
  CHECK(Vec{1.0, 2.0} == Vec{1.0, 2.0});
  CHECK_FALSE(Vec{1.0, 2.0} == Vec{2.0, 1.0});
  CHECK_THROWS_AS(dot(Vec{1.0}, Vec{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("tolerant comparisons") {
  CHECK(nearly_equal(1.0, 1.0 + 5e-10));
  CHECK_FALSE(nearly_equal(1.0, 1.0 + 5e-9));
  CHECK(nearly_equal(1e6, 1e6 * (1.0 + 5e-10)));  // relative in rhs scale
  CHECK(leq_tol(1.0 + 5e-10, 1.0));
  CHECK_FALSE(leq_tol(1.0 + 5e-9, 1.0));
  CHECK(geq_tol(1.0 - 5e-10, 1.0));
  CHECK_FALSE(geq_tol(1.0 - 5e-9, 1.0));
  CHECK(leq_tol(1e300, kInf));
  CHECK_FALSE(leq_tol(kInf, 1e300));
  CHECK(nearly_equal(kInf, kInf));
  CHECK_FALSE(nearly_equal(kInf, 1e300));
  CHECK(geq_tol(kInf, 1.0));
}

TEST_CASE("power gap values") {
  CHECK(pow_gap(0.0, 2.0) == 1.0);
  CHECK(pow_gap(1.0, 1.0) == 1.0);
  CHECK(pow_gap(3.0, 2.0) == 7.0);
  CHECK(pow_gap(1e200, 2.0) == kInf);  // overflow maps to +inf, not NaN
  // nondecreasing in s for q >= 1 (convexity of s -> s^q)
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 50.0);
  for (int t = 0; t < 2000; ++t) {
    const double a = u(rng), b = u(rng), q = 1.0 + u(rng) / 10.0;
    const double lo = std::min(a, b), hi = std::max(a, b);
    CHECK(leq_tol(pow_gap(lo, q), pow_gap(hi, q), 1e-12));
  }
}

TEST_CASE("lp norms at hand values") {
  const Vec v{3.0, 4.0};
  CHECK(lp_norm(v, PExponent(2.0)) == 5.0);
  CHECK(lp_norm(v, PExponent::one()) == 7.0);
  CHECK(lp_norm(v, PExponent::infinity()) == 4.0);
  CHECK(lp_norm(v, PExponent(3.0)) ==
        Catch::Approx(std::cbrt(91.0)).epsilon(1e-15));
  CHECK(lp_norm(Vec{-1.0, 1.0, -1.0}, PExponent::one()) == 3.0);
  CHECK(lp_norm(Vec::zeros(4), PExponent(2.0)) == 0.0);
}

TEST_CASE("magnitude sort is deterministic") {
  CHECK(sort_abs(Vec{3.0, -1.0, 2.0}).indices ==
        std::vector<std::size_t>{0, 2, 1});
  CHECK(sort_abs(Vec{0.0, 0.0}).indices == std::vector<std::size_t>{0, 1});
  CHECK(sort_abs(Vec{-5.0, 5.0}).indices == std::vector<std::size_t>{0, 1});
  CHECK(abs_sorted_desc(Vec{3.0, -1.0, 2.0}) ==
        std::vector<double>{3.0, 2.0, 1.0});
}

TEST_CASE("top-(k,q) norms at hand values") {
  const Vec y{3.0, -1.0, 2.0};
  const PExponent p2(2.0);  // q = 2
  CHECK(top_norm(y, 0, p2.conjugate()) == 0.0);
  CHECK(top_norm(y, 1, p2.conjugate()) == 3.0);
  CHECK(top_norm(y, 2, p2.conjugate()) ==
        Catch::Approx(3.605551275463989).epsilon(1e-15));  // sqrt(13)
  CHECK(top_norm(y, 3, p2.conjugate()) ==
        Catch::Approx(std::sqrt(14.0)).epsilon(1e-15));
  CHECK(top_norm(y, 2, PExponent::infinity()) == 3.0);
  CHECK(top_norm(y, 2, PExponent::one()) == 5.0);
  CHECK_THROWS_AS(top_norm(y, 4, p2), std::invalid_argument);
  CHECK_THROWS_AS(top_norm(y, -1, p2), std::invalid_argument);
}

TEST_CASE("top-(k,q) norm equals subset enumeration") {
  std::mt19937_64 rng(101);
  const double qs[] = {1.25, 2.0, 4.0};
  for (int t = 0; t < 600; ++t) {
    const std::size_t d = 1 + rng() % 8;
    const Vec y = rand_box(rng, d, 4.0);
    for (double qv : qs) {
      const PExponent p = PExponent(qv).conjugate();  // so q = qv
      for (int k = 0; k <= static_cast<int>(d); ++k) {
        CHECK(nearly_equal(top_norm(y, k, PExponent(qv)),
                           coordinate_dual_norm_by_subsets(y, k, p), 1e-12));
      }
    }
  }
}

TEST_CASE("top-(k,q) norm is monotone in k and caps at the lq norm") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 500; ++t) {
    const std::size_t d = 1 + rng() % 6;
    const Vec y = rand_box(rng, d, 5.0);
    const PExponent q(1.0 + (rng() % 30) / 7.0);
    double prev = 0.0;
    for (int k = 0; k <= static_cast<int>(d); ++k) {
      const double cur = top_norm(y, k, q);
      CHECK(geq_tol(cur, prev, 1e-12));
      prev = cur;
    }
    CHECK(nearly_equal(prev, lp_norm(y, q), 1e-12));
  }
}

TEST_CASE("Hoelder inequality") {
  std::mt19937_64 rng(13);
  for (const PExponent& p : kAllP) {
    for (int t = 0; t < 1000; ++t) {
      const std::size_t d = 1 + rng() % 6;
      const Vec x = rand_box(rng, d, 3.0);
      const Vec y = rand_box(rng, d, 3.0);
      CHECK(leq_tol(std::abs(dot(x, y)),
                    lp_norm(x, p) * lp_norm(y, p.conjugate()), 1e-9));
    }
  }
}

TEST_CASE("normal cone membership at hand values") {
  const PExponent p2(2.0);
  CHECK(normal_cone_member_lp(Vec{1.0, 0.0}, Vec{2.0, 0.0}, p2));
  CHECK(normal_cone_member_lp(Vec{1.0, 1.0}, Vec{1.0, 1.0}, p2));
  CHECK_FALSE(normal_cone_member_lp(Vec{1.0, 0.0}, Vec{1.0, 1.0}, p2));
  CHECK_THROWS_AS(
      normal_cone_member_lp(Vec{0.0, 0.0}, Vec{1.0, 0.0}, p2),
      std::invalid_argument);
  CHECK_THROWS_AS(normal_cone_member_lp(Vec{1.0}, Vec{1.0, 0.0}, p2),
                  std::invalid_argument);
}

TEST_CASE("normal cone membership is scale invariant and duality-attained") {
  std::mt19937_64 rng(17);
  const PExponent ps[] = {PExponent(1.5), PExponent(2.0), PExponent(3.0)};
  std::uniform_real_distribution<double> lam(0.1, 10.0);
  for (const PExponent& p : ps) {
    for (int t = 0; t < 500; ++t) {
      const std::size_t d = 2 + rng() % 4;
      Vec u = rand_box(rng, d, 3.0);
      if (is_zero(u)) continue;
      // the duality direction of u always lies in the cone, at any scale
      const double n = lp_norm(u, p);
      std::vector<double> g(d);
      for (std::size_t i = 0; i < d; ++i)
        g[i] = sign(u[i]) * std::pow(std::abs(u[i]) / n, p.value() - 1.0);
      const Vec y = scale(Vec(std::move(g)), lam(rng));
      CHECK(normal_cone_member_lp(u, y, p));
      CHECK(normal_cone_member_lp(scale(u, lam(rng)), y, p));
    }
  }
}

TEST_CASE("dominance threshold equivalence for adjacent top norms") {
  // top_(k+1) >= top_k + 1 holds exactly when the (k+1)-th magnitude's q-th
  // power clears the gap (top_k + 1)^q - top_k^q; checked in both
  // directions away from float knife edges
  std::mt19937_64 rng(23);
  const double qs[] = {1.25, 1.5, 2.0, 3.0};
  int decided = 0;
  for (int t = 0; t < 4000; ++t) {
    const std::size_t d = 2 + rng() % 5;
    const Vec y = rand_box(rng, d, 3.0);
    for (double qv : qs) {
      const PExponent q(qv);
      for (int k = 0; k + 1 <= static_cast<int>(d); ++k) {
        const double topk = top_norm(y, k, q);
        const double topk1 = top_norm(y, k + 1, q);
        const double mk1 = abs_sorted_desc(y)[static_cast<std::size_t>(k)];
        const double lhs = std::pow(mk1, qv);
        const double gap = pow_gap(topk, qv);
        const double a = topk1 - (topk + 1.0);
        const double b = lhs - gap;
        if (std::abs(a) < 1e-9 || std::abs(b) < 1e-9) continue;
        CHECK((a > 0.0) == (b > 0.0));
        ++decided;
      }
    }
  }
  CHECK(decided > 10000);  // the skip guard must not eat the sample
}

TEST_CASE("dominance rows propagate down the chain") {
  // whenever the first l dominance rows hold, the margins top_j - j are
  // nondecreasing for j <= l
  std::mt19937_64 rng(29);
  for (int t = 0; t < 3000; ++t) {
    const std::size_t d = 2 + rng() % 5;
    const Vec y = rand_box(rng, d, 4.0);
    const double qv = 1.0 + (rng() % 40) / 10.0;
    const PExponent q(qv);
    const std::vector<double> mags = abs_sorted_desc(y);
    for (int l = 1; l <= static_cast<int>(d); ++l) {
      bool rows = true;
      for (int k = 0; k < l && rows; ++k)
        rows = std::pow(mags[static_cast<std::size_t>(k)], qv) >=
               pow_gap(top_norm(y, k, q), qv);
      if (!rows) continue;
      for (int j = 1; j <= l; ++j)
        CHECK(geq_tol(top_norm(y, j, q) - j,
                      top_norm(y, j - 1, q) - (j - 1), 1e-9));
    }
  }
}

TEST_CASE("lattice axes hit exact multiples") {
  const LatticeAxis ax = lattice_axis(-12.0, 12.0, 0.05);
  CHECK(ax.k0 == -240);
  CHECK(ax.k1 == 240);
  CHECK(ax.n == 481);
  const LatticeAxis ax2 = lattice_axis(-1.0, 1.0, 0.3);
  CHECK(ax2.k0 == -3);
  CHECK(ax2.k1 == 3);
  CHECK_THROWS_AS(lattice_axis(1.0, -1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lattice_axis(-1.0, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(lattice_axis(-1.0, 1.0, -0.5), std::invalid_argument);
  CHECK_THROWS_AS(lattice_axis(-1.0, 1.0, 1e-300), std::invalid_argument);
}

TEST_CASE("strict monotonicity falsifier") {
  SECTION("sup norm ties are found quickly") {
    const auto ce = osm_falsify(PExponent::infinity(), 2, 1000, 42);
    REQUIRE(ce.has_value());
    CHECK(ce->norm_x >= ce->norm_x_prime);
    // the pair is a genuine one-coordinate shrink
    int changed = 0;
    for (std::size_t i = 0; i < 2; ++i) {
      if (ce->x[i] != ce->x_prime[i]) {
        ++changed;
        CHECK(std::abs(ce->x[i]) < std::abs(ce->x_prime[i]));
      }
    }
    CHECK(changed == 1);
  }
  SECTION("strictly monotone exponents survive many trials") {
    CHECK_FALSE(osm_falsify(PExponent(1.0), 3, 10000, 7).has_value());
    CHECK_FALSE(osm_falsify(PExponent(2.0), 3, 10000, 7).has_value());
    CHECK_FALSE(osm_falsify(PExponent(4.0), 2, 10000, 7).has_value());
  }
  SECTION("degenerate dimensions are rejected") {
    CHECK_THROWS_AS(osm_falsify(PExponent(2.0), 1, 10, 0),
                    std::invalid_argument);
  }
}
