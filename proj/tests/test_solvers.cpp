#include <cmath>
#include <random>
#include <string>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vicert/error.hpp"
#include "vicert/solvers.hpp"
#include "vicert/verification.hpp"

using namespace vicert;
using testing_support::affine;
using testing_support::vec;

namespace {

IterationConfig config(double step, std::int64_t max_iters = 10000, double tol = 1e-8) {
  IterationConfig cfg;
  cfg.step = step;
  cfg.max_iters = max_iters;
  cfg.residual_tol = tol;
  return cfg;
}

// Minimizer of the quadratic 0.5 x'Mx + q'x over a grid of the unit square.
Vector quadratic_grid_minimum(const AffineOperator& op, double h) {
  const auto steps = static_cast<int>(std::lround(1.0 / h));
  double best = INFINITY;
  Vector arg(2);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      const Vector x = vec({i * h, j * h});
      const double f = 0.5 * x.dot(op.matrix() * x) + op.offset().dot(x);
      if (f < best) { best = f; arg = x; }
    }
  }
  return arg;
}

}  // namespace

TEST(ProjectedGradient, IdentityOneStep) {
  const auto op = affine({{1, 0}, {0, 1}}, {-0.5, -0.5});
  const auto trace = solve_projected_gradient(op, ConvexSet::unit_box(2), config(1.0), vec({0, 0}));
  EXPECT_EQ(trace.status, TraceStatus::kConverged);
  EXPECT_EQ(trace.iterations, 1);
  EXPECT_EQ(trace.final_x, vec({0.5, 0.5}));
}

TEST(ProjectedGradient, ExteriorCenterIsProjected) {
  const auto op = affine({{1, 0}, {0, 1}}, {-2, -0.5});
  const auto trace = solve_projected_gradient(op, ConvexSet::unit_box(2), config(1.0), vec({0, 0}));
  EXPECT_EQ(trace.final_x, vec({1, 0.5}));
}

TEST(ProjectedGradient, DiagonalBoxAgainstQuadraticGrid) {
  const auto op = affine({{2, 0}, {0, 1}}, {-2, 1});
  const auto set = ConvexSet::unit_box(2);
  const auto trace = solve_projected_gradient(op, set, config(0.4), vec({0.2, 0.8}));
  ASSERT_EQ(trace.status, TraceStatus::kConverged);
  EXPECT_LE((trace.final_x - vec({1, 0})).norm(), 1e-8);
  const Vector grid = quadratic_grid_minimum(op, 1e-3);
  EXPECT_LE((trace.final_x - grid).norm(), 1e-3 * std::sqrt(2.0));
  EXPECT_TRUE(contains(set, trace.final_x, 1e-6));
}

TEST(ProjectedGradient, StepOutsideStableRange) {
  const auto op = affine({{2, 0}, {0, 1}}, {-2, 1});  // alpha = 0.25
  const auto set = ConvexSet::unit_box(2);
  EXPECT_THROW(solve_projected_gradient(op, set, config(0.5), vec({0, 0})), ConfigError);
  EXPECT_THROW(solve_projected_gradient(op, set, config(0.75), vec({0, 0})), ConfigError);
  EXPECT_THROW(solve_projected_gradient(op, set, config(0.0), vec({0, 0})), ConfigError);
  EXPECT_THROW(solve_projected_gradient(op, set, config(-0.1), vec({0, 0})), ConfigError);
  // No certified ISM modulus.
  EXPECT_THROW(solve_projected_gradient(affine({{1, 0}, {0, -1}}, {0, 0}), set, config(0.1),
                                        vec({0, 0})),
               ConfigError);
}

TEST(ProjectedGradient, BadConfigFields) {
  const auto op = affine({{1}}, {0});
  const auto set = ConvexSet::unit_box(1);
  EXPECT_THROW(solve_projected_gradient(op, set, config(1.0, 0), vec({0})), ConfigError);
  EXPECT_THROW(solve_projected_gradient(op, set, config(1.0, 10, 0.0), vec({0})), ConfigError);
  EXPECT_THROW(solve_projected_gradient(op, set, config(1.0), vec({0, 0})), DimensionError);
}

TEST(ProjectedGradient, DivergenceNamesIteration) {
  const auto op = affine({{1}}, {1e308});
  const auto set = ConvexSet::halfspace(vec({1}), 0.0);
  try {
    solve_projected_gradient(op, set, config(1.0), vec({1e308}));
    FAIL() << "expected DivergenceError";
  } catch (const DivergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("iteration 0"), std::string::npos) << e.what();
  }
}

TEST(ProjectedGradient, MaxItersStatus) {
  const auto op = affine({{2, 0}, {0, 1}}, {-2, 1});
  const auto trace = solve_projected_gradient(op, ConvexSet::unit_box(2), config(0.01, 3),
                                              vec({0.2, 0.8}));
  EXPECT_EQ(trace.status, TraceStatus::kMaxIters);
  EXPECT_EQ(trace.iterations, 3);
  EXPECT_EQ(trace.records.size(), 4u);
}

TEST(ProjectedGradient, RecordStrideKeepsLast) {
  const auto op = affine({{2, 0}, {0, 1}}, {-2, 1});
  auto cfg = config(0.01, 25);
  cfg.record_stride = 10;
  const auto trace = solve_projected_gradient(op, ConvexSet::unit_box(2), cfg, vec({0.2, 0.8}));
  ASSERT_EQ(trace.records.size(), 4u);
  EXPECT_EQ(trace.records[2].n, 20);
  EXPECT_EQ(trace.records.back().n, 25);
}

TEST(ProjectedGradient, ResidualMonotoneOnSymmetricInstances) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> frac(0.05, 1.95);
  for (int trial = 0; trial < 40; ++trial) {
    const auto n = testing_support::random_dim(rng, 1, 6);
    const Matrix b = testing_support::random_matrix(n, rng);
    const Matrix m = b.transpose() * b + 0.05 * Matrix::Identity(n, n);
    const AffineOperator op(m, testing_support::random_matrix(n, rng).col(0) * 3.0);
    const double alpha = *certify_moduli(op).ism_alpha;
    const auto set = trial % 2 ? ConvexSet::unit_box(n) : ConvexSet::ball(Vector::Zero(n), 0.7);
    const auto trace =
        solve_projected_gradient(op, set, config(frac(rng) * alpha, 2000), Vector::Ones(n) * 2.0);
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
      EXPECT_LE(trace.records[k].natural_residual, trace.records[k - 1].natural_residual + 1e-12)
          << "trial " << trial << " n " << k;
    }
  }
}

TEST(ProjectedGradient, ShortcutBoundIsSound) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = testing_support::random_dim(rng, 1, 8);
    const auto op = testing_support::random_strongly_monotone(n, rng);
    const auto set = ConvexSet::box(Vector::Constant(n, -0.5), Vector::Constant(n, 0.5));
    const double alpha = *certify_moduli(op).ism_alpha;
    const auto ref = solve_projected_gradient(op, set, config(alpha, 1000000, 1e-14),
                                              Vector::Zero(n));
    ASSERT_EQ(ref.status, TraceStatus::kConverged);
    const auto trace =
        solve_projected_gradient(op, set, config(alpha, 5000), Vector::Ones(n), ref.final_x);
    for (const auto& rec : trace.records) {
      ASSERT_TRUE(rec.shortcut_bound && rec.distance);
      EXPECT_LE(*rec.distance, *rec.shortcut_bound + 1e-9) << "trial " << trial << " n " << rec.n;
      EXPECT_GE(*rec.operator_residual, 0.0);
    }
  }
}

TEST(ProjectedGradient, SampledVariationalOptimality) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const auto n = testing_support::random_dim(rng, 1, 6);
    const auto op = testing_support::random_strongly_monotone(n, rng);
    const ConvexSet sets[] = {ConvexSet::unit_box(n), ConvexSet::simplex(n),
                              ConvexSet::ball(Vector::Zero(n), 0.3),
                              ConvexSet::halfspace(Vector::Ones(n), -1.0)};
    const auto& set = sets[trial % 4];
    const double alpha = *certify_moduli(op).ism_alpha;
    const auto trace = solve_projected_gradient(op, set, config(alpha, 100000), Vector::Zero(n));
    ASSERT_EQ(trace.status, TraceStatus::kConverged);
    EXPECT_LE(trace.records.back().natural_residual, 1e-8);
    EXPECT_TRUE(contains(set, trace.final_x, 1e-6));
    EXPECT_GE(sampled_vi_gap(op, set, trace.final_x, 1000, 300 + trial), -1e-6) << set.kind();
  }
}

TEST(Halpern, IdentityMapAnchorOrigin) {
  const auto op = affine({{1, 0}, {0, 1}}, {-0.5, -0.5});
  auto cfg = config(1.0, 2000000, 1e-6);
  cfg.record_stride = 1000;
  const auto trace = solve_halpern(op, ConvexSet::unit_box(2), NonexpansiveMap::identity(), cfg,
                                   vec({0, 0}), vec({0, 0}));
  EXPECT_EQ(trace.status, TraceStatus::kConverged);
  EXPECT_LE((trace.final_x - vec({0.5, 0.5})).norm(), 1e-5);
}

TEST(Halpern, AgreesWithProjectedGradient) {
  const auto op = affine({{2, 0}, {0, 1}}, {-2, 1});
  const auto set = ConvexSet::unit_box(2);
  const auto pg = solve_projected_gradient(op, set, config(0.4, 1000, 1e-12), vec({0.2, 0.8}));
  auto cfg = config(0.4, 5000000, 2.5e-7);
  cfg.record_stride = 10000;
  const auto h = solve_halpern(op, set, NonexpansiveMap::identity(), cfg, vec({0.2, 0.8}),
                               vec({0.2, 0.8}));
  EXPECT_EQ(h.status, TraceStatus::kConverged);
  EXPECT_LE((h.final_x - pg.final_x).norm(), 1e-6);
}

TEST(Halpern, CommonPointOfMapAndInequality) {
  const Vector c = vec({0.25, 0.25});
  const Matrix m = (Matrix(2, 2) << 2, 0.5, -0.5, 1).finished();
  const AffineOperator op(m, -m * c);
  const auto set = ConvexSet::unit_box(2);
  const auto s = NonexpansiveMap::affine_average(0.5, c);
  const double step = 0.5 * *certify_moduli(op).ism_alpha;
  auto cfg = config(step, 5000000, 1e-6);
  cfg.record_stride = 1000;
  const auto trace = solve_halpern(op, set, s, cfg, vec({1, 0}), vec({1, 0}));
  EXPECT_EQ(trace.status, TraceStatus::kConverged);
  EXPECT_LE((s(trace.final_x) - trace.final_x).norm(), 1e-5);
  EXPECT_LE(natural_residual(op, set, step, trace.final_x), 1e-5);
}

TEST(Halpern, PowerScheduleConverges) {
  const auto op = affine({{1, 0}, {0, 1}}, {-0.5, -0.5});
  auto cfg = config(0.5, 1000000, 1e-4);
  cfg.anchor_schedule.rule = AnchorSchedule::Rule::kPower;
  cfg.anchor_schedule.exponent = 0.9;
  cfg.record_stride = 1000;
  const auto trace = solve_halpern(op, ConvexSet::unit_box(2), NonexpansiveMap::identity(), cfg,
                                   vec({0, 0}), vec({1, 1}));
  EXPECT_EQ(trace.status, TraceStatus::kConverged);
}

TEST(NonexpansiveMap, SampledNonexpansiveness) {
  const NonexpansiveMap maps[] = {NonexpansiveMap::identity(),
                                  NonexpansiveMap::projection(ConvexSet::ball(vec({0, 1, 0}), 1.0)),
                                  NonexpansiveMap::affine_average(0.3, vec({1, 2, 3}))};
  for (const auto& s : maps) {
    for (const auto& [x, y] : sample_pairs(3, 10000, 12)) {
      EXPECT_LE((s(x) - s(y)).norm(), (x - y).norm() + 1e-12);
    }
  }
  EXPECT_THROW(NonexpansiveMap::affine_average(1.5, vec({0})), ValidationError);
}

TEST(AnchorSchedule, Weights) {
  AnchorSchedule a;
  EXPECT_EQ(a.weight(0), 1.0);
  EXPECT_EQ(a.weight(3), 0.25);
  a.rule = AnchorSchedule::Rule::kPower;
  a.exponent = 0.5;
  EXPECT_DOUBLE_EQ(a.weight(3), 0.5);
}

TEST(ShortcutBound, Examples) {
  EXPECT_DOUBLE_EQ(shortcut_distance_bound(0.5, 1e-3), 2e-3);
  EXPECT_EQ(shortcut_distance_bound(1.0, 0.0), 0.0);
  EXPECT_THROW(shortcut_distance_bound(0.0, 1.0), ConfigError);
  EXPECT_THROW(shortcut_distance_bound(-1.0, 1.0), ConfigError);
}

TEST(CompareStopping, IdentityInstanceFiresTogether) {
  const auto op = affine({{1, 0}, {0, 1}}, {-0.5, -0.5});
  // With lambda = 1 and an interior solution r_n = s_n = ||x_n - c||.
  const auto cmp = compare_stopping(op, ConvexSet::unit_box(2), config(1.0), vec({0.1, 0.9}),
                                    vec({0.5, 0.5}));
  ASSERT_TRUE(cmp.shortcut_n && cmp.natural_n);
  EXPECT_EQ(*cmp.shortcut_n, *cmp.natural_n);
}

TEST(CompareStopping, DiagonalBoxInstance) {
  const auto op = affine({{2, 0}, {0, 1}}, {-2, 1});
  const auto cmp = compare_stopping(op, ConvexSet::unit_box(2), config(0.4), vec({0.2, 0.8}),
                                    vec({1, 0}), 1e-6);
  ASSERT_TRUE(cmp.shortcut_n && cmp.natural_n);
  EXPECT_LE(*cmp.shortcut_n, *cmp.natural_n + 5);
  // Observed values, also stored in fixtures/golden/box_diag.json.
  EXPECT_EQ(*cmp.shortcut_n, 9);
  EXPECT_EQ(*cmp.natural_n, 9);
  EXPECT_LE((cmp.trace.final_x - vec({1, 0})).norm(), 1e-6);
}

TEST(CompareStopping, RefusesSingularOperator) {
  const auto op = affine({{1, 0}, {0, 0}}, {0, 0});
  try {
    compare_stopping(op, ConvexSet::unit_box(2), config(0.5), vec({0, 0}), vec({0, 0}));
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("non-expansive operator"), std::string::npos);
  }
}

TEST(TraceCsv, HeaderAndEmptyFields) {
  const auto op = affine({{1, 0}, {0, 1}}, {-0.5, -0.5});
  const auto set = ConvexSet::unit_box(2);
  const auto plain = solve_projected_gradient(op, set, config(1.0), vec({0, 0}));
  EXPECT_EQ(trace_to_csv(plain), "n,r_n,s_n,bound_n\n0,0.70710678118654757,,\n1,0,,\n");
  const auto ref = solve_projected_gradient(op, set, config(1.0), vec({0, 0}), vec({0.5, 0.5}));
  const std::string csv = trace_to_csv(ref);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,r_n,s_n,bound_n,dist_n");
  EXPECT_NE(csv.find("\n1,0,0,0,0\n"), std::string::npos) << csv;
}
