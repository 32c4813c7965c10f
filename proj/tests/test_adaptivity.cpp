#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "awstokes/adaptivity.hpp"

using namespace awstokes;

namespace {

double subset_sum(const std::vector<double>& v, const std::set<int>& s) {
  double a = 0.0;
  for (int i : s) a += v[static_cast<std::size_t>(i)];
  return a;
}

}  // namespace

TEST(Doerfler, PaperLikeExample) {
  const std::vector<double> ind{4, 3, 2, 1};
  EXPECT_EQ(mark_doerfler(ind, 0.5), (std::set<int>{0, 1}));
  // Brute force: no single element reaches half of the total.
  for (int i = 0; i < 4; ++i) EXPECT_LT(ind[static_cast<std::size_t>(i)], 5.0);
}

TEST(Doerfler, ThetaOneMarksAllNonzero) {
  const std::vector<double> ind{0.1, 0.0, 0.3, 0.2, 0.0, 1e-20};
  EXPECT_EQ(mark_doerfler(ind, 1.0), (std::set<int>{0, 2, 3, 5}));
}

TEST(Doerfler, EqualIndicatorsMarkHalf) {
  for (int t : {1, 2, 7, 10, 33}) {
    const std::vector<double> ind(static_cast<std::size_t>(t), 0.37);
    const std::set<int> m = mark_doerfler(ind, 0.5);
    EXPECT_EQ(static_cast<int>(m.size()), (t + 1) / 2);
    // Ties break by index.
    EXPECT_EQ(*m.begin(), 0);
    EXPECT_EQ(*m.rbegin(), static_cast<int>(m.size()) - 1);
  }
}

TEST(Doerfler, MinimalCardinalityAgainstBruteForce) {
  std::mt19937_64 rng(71);
  std::exponential_distribution<double> e(1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 10;
    std::vector<double> ind(static_cast<std::size_t>(n));
    for (double& v : ind) v = e(rng);
    const double total = std::accumulate(ind.begin(), ind.end(), 0.0);
    for (double theta : {0.2, 0.5, 0.9}) {
      const std::set<int> m = mark_doerfler(ind, theta);
      EXPECT_GE(subset_sum(ind, m), theta * total * (1 - 1e-14));
      std::size_t best = static_cast<std::size_t>(n);
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          if (mask & (1u << i)) s += ind[static_cast<std::size_t>(i)];
        if (s >= theta * total) best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
      }
      EXPECT_EQ(m.size(), best);
      // Removing the smallest marked element breaks the threshold.
      int smallest = *m.begin();
      for (int i : m)
        if (ind[static_cast<std::size_t>(i)] < ind[static_cast<std::size_t>(smallest)]) smallest = i;
      std::set<int> reduced = m;
      reduced.erase(smallest);
      EXPECT_LT(subset_sum(ind, reduced), theta * total);
    }
  }
}

TEST(Doerfler, InvalidInput) {
  const std::vector<double> ind{1.0, 2.0};
  EXPECT_THROW(mark_doerfler(ind, 0.0), InvalidArgument);
  EXPECT_THROW(mark_doerfler(ind, 1.5), InvalidArgument);
  const std::vector<double> neg{1.0, -2.0};
  EXPECT_THROW(mark_doerfler(neg, 0.5), InvalidArgument);
  EXPECT_TRUE(mark_doerfler(std::vector<double>{0.0, 0.0}, 0.5).empty());
}

TEST(AdaptiveLoop, UniformSquare) {
  AdaptiveConfig cfg;
  cfg.domain = Domain::Square;
  cfg.mode = RefinementMode::Uniform;
  cfg.max_levels = 4;
  cfg.lambda_ref = 52.344691168;
  const AdaptiveResult r = adaptive_loop(cfg);
  ASSERT_TRUE(r.failure.empty());
  ASSERT_EQ(r.table.rows.size(), 4u);
  for (std::size_t i = 1; i < r.table.rows.size(); ++i) {
    const auto& a = r.table.rows[i - 1];
    const auto& b = r.table.rows[i];
    EXPECT_GT(b.ndof, 3.5 * a.ndof);
    EXPECT_LT(b.ndof, 4.5 * a.ndof);
    EXPECT_LT(b.err_h, a.err_h);
    EXPECT_EQ(b.level, a.level + 1);
  }
  EXPECT_EQ(r.final_mesh.num_triangles(), 8 * 64);
}

TEST(AdaptiveLoop, NdofBudgetStopsBeforeLargerMesh) {
  AdaptiveConfig cfg;
  cfg.domain = Domain::LShape;
  cfg.max_levels = 0;
  cfg.max_ndof = 3000;
  const AdaptiveResult r = adaptive_loop(cfg);
  ASSERT_FALSE(r.table.rows.empty());
  for (const auto& row : r.table.rows) EXPECT_LE(row.ndof, 3000);
  for (std::size_t i = 1; i < r.table.rows.size(); ++i) EXPECT_GT(r.table.rows[i].ndof, r.table.rows[i - 1].ndof);
  EXPECT_TRUE(std::isnan(r.table.rows[0].err_h));
}

TEST(AdaptiveLoop, InvalidConfig) {
  AdaptiveConfig cfg;
  cfg.max_levels = 0;
  cfg.max_ndof = 0;
  EXPECT_THROW(adaptive_loop(cfg), InvalidArgument);
  cfg.max_levels = 2;
  cfg.theta = 0.0;
  EXPECT_THROW(adaptive_loop(cfg), InvalidArgument);
  cfg.theta = 0.5;
  cfg.nu = -1.0;
  EXPECT_THROW(adaptive_loop(cfg), InvalidArgument);
  EXPECT_THROW(parse_mode("random"), InvalidArgument);
  EXPECT_THROW(parse_estimator("zeta"), InvalidArgument);
}

namespace {

double smallest_element_distance(Domain d, const Point& target, int levels) {
  AdaptiveConfig cfg;
  cfg.domain = d;
  cfg.max_levels = levels;
  const AdaptiveResult r = adaptive_loop(cfg);
  EXPECT_TRUE(r.failure.empty());
  const Mesh& m = r.final_mesh;
  int best = 0;
  for (int t = 1; t < m.num_triangles(); ++t)
    if (m.diameter(t) < m.diameter(best)) best = t;
  double dist = 1e300;
  for (const Point& p : m.geometry(best).p) dist = std::min(dist, (p - target).norm());
  return dist;
}

}  // namespace

TEST(AdaptiveLoop, LShapeRefinesTowardReentrantCorner) {
  EXPECT_LT(smallest_element_distance(Domain::LShape, Point(0, 0), 8), 0.1);
}

TEST(AdaptiveLoop, SlitRefinesTowardTip) {
  EXPECT_LT(smallest_element_distance(Domain::Slit, Point(0, 0), 8), 0.1);
}

TEST(AdaptiveLoop, MuDrivenMarkingRuns) {
  AdaptiveConfig cfg;
  cfg.domain = Domain::LShape;
  cfg.max_levels = 4;
  cfg.marking = EstimatorKind::Mu;
  const AdaptiveResult r = adaptive_loop(cfg);
  EXPECT_TRUE(r.failure.empty());
  EXPECT_EQ(r.table.rows.size(), 4u);
}
