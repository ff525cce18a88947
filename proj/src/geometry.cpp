#include "vicert/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "vicert/error.hpp"

namespace vicert {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) throw ValidationError(std::string(what) + " has non-finite entries");
}

void require_dim(Eigen::Index dim, const char* what) {
  if (dim < 1) throw ValidationError(std::string(what) + ": dimension must be positive");
}

Vector project_simplex(const Vector& x) {
  const Eigen::Index n = x.size();
  std::vector<double> sorted(x.data(), x.data() + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  // Largest support k with sorted[k-1] - (prefix_k - 1) / k > 0.
  double prefix = 0.0;
  double threshold = 0.0;
  for (Eigen::Index k = 1; k <= n; ++k) {
    prefix += sorted[k - 1];
    const double candidate = (prefix - 1.0) / static_cast<double>(k);
    if (sorted[k - 1] - candidate > 0.0) threshold = candidate;
  }
  return (x.array() - threshold).max(0.0).matrix();
}

}  // namespace

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  require_dim(lower.size(), "box");
  if (lower.size() != upper.size()) {
    throw DimensionError("box bounds", lower.size(), upper.size());
  }
  require_finite(lower, "box lower bound");
  require_finite(upper, "box upper bound");
  if ((lower.array() > upper.array()).any()) {
    throw ValidationError("box: lower bound exceeds upper bound");
  }
  return ConvexSet(Box{std::move(lower), std::move(upper)});
}

ConvexSet ConvexSet::unit_box(Eigen::Index dim) {
  return box(Vector::Zero(dim), Vector::Ones(dim));
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  require_dim(center.size(), "ball");
  require_finite(center, "ball center");
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("ball: radius must be positive and finite");
  }
  return ConvexSet(Ball{std::move(center), radius});
}

ConvexSet ConvexSet::halfspace(Vector normal, double offset) {
  require_dim(normal.size(), "halfspace");
  require_finite(normal, "halfspace normal");
  if (!std::isfinite(offset)) throw ValidationError("halfspace: offset must be finite");
  if (normal.norm() == 0.0) throw ValidationError("halfspace: degenerate zero normal");
  return ConvexSet(Halfspace{std::move(normal), offset});
}

ConvexSet ConvexSet::simplex(Eigen::Index dim) {
  require_dim(dim, "simplex");
  return ConvexSet(Simplex{dim});
}

ConvexSet ConvexSet::affine(Vector basepoint, std::vector<Vector> basis) {
  require_dim(basepoint.size(), "affine subspace");
  require_finite(basepoint, "affine basepoint");
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != basepoint.size()) {
      throw DimensionError("affine basis vector", basepoint.size(), basis[i].size());
    }
    require_finite(basis[i], "affine basis vector");
    for (std::size_t j = 0; j <= i; ++j) {
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(basis[i].dot(basis[j]) - expected) > 1e-12) {
        throw ValidationError("affine subspace: basis is not orthonormal");
      }
    }
  }
  return ConvexSet(AffineSubspace{std::move(basepoint), std::move(basis)});
}

Eigen::Index ConvexSet::dim() const {
  return std::visit(Overloaded{
                        [](const Box& b) { return b.lower.size(); },
                        [](const Ball& b) { return b.center.size(); },
                        [](const Halfspace& h) { return h.normal.size(); },
                        [](const Simplex& s) { return s.dim; },
                        [](const AffineSubspace& a) { return a.basepoint.size(); },
                    },
                    shape_);
}

const char* ConvexSet::kind() const {
  return std::visit(Overloaded{
                        [](const Box&) { return "box"; },
                        [](const Ball&) { return "ball"; },
                        [](const Halfspace&) { return "halfspace"; },
                        [](const Simplex&) { return "simplex"; },
                        [](const AffineSubspace&) { return "affine"; },
                    },
                    shape_);
}

Vector project(const ConvexSet& set, const Vector& x) {
  if (x.size() != set.dim()) throw DimensionError("project", set.dim(), x.size());
  return std::visit(
      Overloaded{
          [&](const Box& b) -> Vector {
            return x.cwiseMax(b.lower).cwiseMin(b.upper);
          },
          [&](const Ball& b) -> Vector {
            const Vector d = x - b.center;
            const double r = d.norm();
            if (r <= b.radius) return x;
            return b.center + (b.radius / r) * d;
          },
          [&](const Halfspace& h) -> Vector {
            const double excess = h.normal.dot(x) - h.offset;
            if (excess <= 0.0) return x;
            return x - (excess / h.normal.squaredNorm()) * h.normal;
          },
          [&](const Simplex&) -> Vector { return project_simplex(x); },
          [&](const AffineSubspace& a) -> Vector {
            const Vector d = x - a.basepoint;
            Vector p = a.basepoint;
            for (const auto& e : a.basis) p += e.dot(d) * e;
            return p;
          },
      },
      set.shape());
}

bool contains(const ConvexSet& set, const Vector& x, double tol) {
  if (!(tol >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "contains: tol must be >= 0");
  return (x - project(set, x)).norm() <= tol;
}

Vector sample_point(const ConvexSet& set, std::mt19937_64& rng) {
  const Eigen::Index n = set.dim();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> cube(-kSampleHalfWidth, kSampleHalfWidth);
  std::normal_distribution<double> normal(0.0, 1.0);
  return std::visit(
      Overloaded{
          [&](const Box& b) -> Vector {
            Vector p(n);
            for (Eigen::Index i = 0; i < n; ++i) {
              p[i] = b.lower[i] + unit(rng) * (b.upper[i] - b.lower[i]);
            }
            return p;
          },
          [&](const Ball& b) -> Vector {
            Vector dir(n);
            do {
              for (Eigen::Index i = 0; i < n; ++i) dir[i] = normal(rng);
            } while (dir.norm() == 0.0);
            const double r = b.radius * std::pow(unit(rng), 1.0 / static_cast<double>(n));
            return b.center + (r / dir.norm()) * dir;
          },
          [&](const Halfspace& h) -> Vector {
            Vector p(n);
            for (Eigen::Index i = 0; i < n; ++i) p[i] = cube(rng);
            const double excess = h.normal.dot(p) - h.offset;
            // Reflect through the boundary hyperplane.
            if (excess > 0.0) p -= (2.0 * excess / h.normal.squaredNorm()) * h.normal;
            return p;
          },
          [&](const Simplex&) -> Vector {
            std::exponential_distribution<double> expo(1.0);
            Vector p(n);
            for (Eigen::Index i = 0; i < n; ++i) p[i] = expo(rng);
            return p / p.sum();
          },
          [&](const AffineSubspace& a) -> Vector {
            Vector p = a.basepoint;
            for (const auto& e : a.basis) p += cube(rng) * e;
            return p;
          },
      },
      set.shape());
}

}  // namespace vicert
