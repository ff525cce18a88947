#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "vicert/error.hpp"
#include "vicert/geometry.hpp"

using namespace vicert;
using testing_support::vec;

namespace {

// Simplex projection by bisection on the threshold tau of max(x - tau, 0).
Vector simplex_bisection(const Vector& x) {
  double lo = x.minCoeff() - 1.0, hi = x.maxCoeff();
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((x.array() - mid).max(0.0).sum() > 1.0) lo = mid; else hi = mid;
  }
  return (x.array() - 0.5 * (lo + hi)).max(0.0).matrix();
}

Vector random_vector(Eigen::Index n, std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

std::vector<Vector> orthonormal_basis(Eigen::Index n, int k, std::mt19937_64& rng) {
  const Eigen::HouseholderQR<Matrix> qr(testing_support::random_matrix(n, rng));
  const Matrix q = qr.householderQ();
  std::vector<Vector> basis;
  for (int i = 0; i < k; ++i) basis.emplace_back(q.col(i));
  return basis;
}

struct Variant {
  std::string label;
  ConvexSet set;
};

std::vector<Variant> variants() {
  std::mt19937_64 rng(31);
  return {
      {"box", ConvexSet::box(vec({-1, 0, 2}), vec({1, 0.5, 5}))},
      {"unit_box", ConvexSet::unit_box(2)},
      {"ball", ConvexSet::ball(vec({1, -2, 0.5}), 2.5)},
      {"halfspace", ConvexSet::halfspace(vec({1, 2, -1}), 0.7)},
      {"simplex", ConvexSet::simplex(4)},
      {"affine_line", ConvexSet::affine(vec({1, 1, 1}), orthonormal_basis(3, 1, rng))},
      {"affine_plane", ConvexSet::affine(vec({0, 2, -1, 3}), orthonormal_basis(4, 2, rng))},
      {"affine_point", ConvexSet::affine(vec({0.5, -0.5}), {})},
  };
}

}  // namespace

TEST(Project, Examples) {
  EXPECT_EQ(project(ConvexSet::unit_box(2), vec({0.5, 0.5})), vec({0.5, 0.5}));
  EXPECT_TRUE(project(ConvexSet::ball(vec({0, 0}), 1.0), vec({3, 4})).isApprox(vec({0.6, 0.8}), 1e-15));
  const Vector p = project(ConvexSet::simplex(2), vec({1, 1}));
  EXPECT_NEAR((p - vec({0.5, 0.5})).norm(), 0.0, 1e-15);
  EXPECT_NEAR((p - simplex_bisection(vec({1, 1}))).norm(), 0.0, 1e-12);
}

TEST(Project, SimplexExampleAgainstGrid) {
  // Nearest grid point of the 2-simplex to (1, 1) at spacing 1e-3.
  const Vector x = vec({1, 1});
  double best = INFINITY;
  Vector arg;
  for (int k = 0; k <= 1000; ++k) {
    const Vector y = vec({k / 1000.0, 1.0 - k / 1000.0});
    if ((x - y).norm() < best) { best = (x - y).norm(); arg = y; }
  }
  EXPECT_NEAR((project(ConvexSet::simplex(2), x) - arg).norm(), 0.0, 1e-3);
}

TEST(Project, SimplexMatchesBisection) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = testing_support::random_dim(rng, 1, 8);
    const Vector x = random_vector(n, rng, 3.0);
    EXPECT_LE((project(ConvexSet::simplex(n), x) - simplex_bisection(x)).norm(), 1e-10);
  }
}

TEST(Project, HalfspaceAndAffine) {
  const auto h = ConvexSet::halfspace(vec({1, 0}), 1.0);
  EXPECT_EQ(project(h, vec({2, 3})), vec({1, 3}));
  EXPECT_EQ(project(h, vec({-2, 3})), vec({-2, 3}));
  const auto line = ConvexSet::affine(vec({0, 1}), {vec({1, 0})});
  EXPECT_TRUE(project(line, vec({4, -2})).isApprox(vec({4, 1})));
}

TEST(Contains, Examples) {
  EXPECT_TRUE(contains(ConvexSet::unit_box(2), vec({0.5, 0.5}), 0.0));
  EXPECT_FALSE(contains(ConvexSet::ball(vec({0, 0}), 1.0), vec({1.1, 0}), 0.05));
  EXPECT_TRUE(contains(ConvexSet::halfspace(vec({1, 0}), 1.0), vec({2, 0}), 1.0));
}

TEST(ConvexSetFactories, Validation) {
  EXPECT_THROW(ConvexSet::halfspace(vec({0, 0}), 1.0), ValidationError);
  EXPECT_THROW(ConvexSet::box(vec({1, 0}), vec({0, 1})), ValidationError);
  EXPECT_THROW(ConvexSet::box(vec({0}), vec({0, 1})), Error);
  EXPECT_THROW(ConvexSet::ball(vec({0, 0}), -1.0), ValidationError);
  EXPECT_THROW(ConvexSet::simplex(0), Error);
  EXPECT_THROW(ConvexSet::affine(vec({0, 0}), {vec({1, 0}), vec({1, 1e-6})}), ValidationError);
  EXPECT_THROW(ConvexSet::affine(vec({0, 0}), {vec({2, 0})}), ValidationError);
}

TEST(Project, DimensionMismatch) {
  EXPECT_THROW(project(ConvexSet::unit_box(2), vec({1, 2, 3})), DimensionError);
  EXPECT_THROW(contains(ConvexSet::simplex(3), vec({1}), 0.0), DimensionError);
}

class ProjectionProperties : public ::testing::TestWithParam<std::size_t> {};

TEST_P(ProjectionProperties, IdempotentNonexpansiveCharacterized) {
  const Variant v = variants()[GetParam()];
  const auto n = v.set.dim();
  std::mt19937_64 rng(100 + GetParam());
  int idem = 0, expand = 0, charac = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const Vector x = random_vector(n, rng, 10.0);
    const Vector y = random_vector(n, rng, 10.0);
    const Vector px = project(v.set, x);
    const Vector py = project(v.set, y);
    if ((project(v.set, px) - px).lpNorm<Eigen::Infinity>() > 1e-12) ++idem;
    if ((px - py).norm() > (x - y).norm() + 1e-12) ++expand;
    const Vector z = sample_point(v.set, rng);
    if ((x - px).dot(z - px) > 1e-9) ++charac;
    EXPECT_TRUE(contains(v.set, z, 1e-9));
  }
  EXPECT_EQ(idem, 0) << v.label;
  EXPECT_EQ(expand, 0) << v.label;
  EXPECT_EQ(charac, 0) << v.label;
}

INSTANTIATE_TEST_SUITE_P(Variants, ProjectionProperties, ::testing::Range<std::size_t>(0, 8),
                         [](const auto& info) { return variants()[info.param].label; });
