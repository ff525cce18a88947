#pragma once

#include <random>
#include <variant>
#include <vector>

#include "vicert/types.hpp"

namespace vicert {

/// {x : lower <= x <= upper}
struct Box {
  Vector lower;
  Vector upper;
};

struct Ball {
  Vector center;
  double radius = 1.0;
};

/// {x : <normal, x> <= offset}
struct Halfspace {
  Vector normal;
  double offset = 0.0;
};

/// Probability simplex {x >= 0, sum x = 1} in R^dim.
struct Simplex {
  Eigen::Index dim = 1;
};

/// basepoint + span(basis); the basis is orthonormal and may be empty.
struct AffineSubspace {
  Vector basepoint;
  std::vector<Vector> basis;
};

/// Closed convex set with an exact metric projection. Construct through the
/// factory functions, which validate the variant invariants.
class ConvexSet {
 public:
  using Variant = std::variant<Box, Ball, Halfspace, Simplex, AffineSubspace>;

  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet unit_box(Eigen::Index dim);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet halfspace(Vector normal, double offset);
  static ConvexSet simplex(Eigen::Index dim);
  static ConvexSet affine(Vector basepoint, std::vector<Vector> basis);

  const Variant& shape() const { return shape_; }
  Eigen::Index dim() const;
  const char* kind() const;

 private:
  explicit ConvexSet(Variant shape) : shape_(std::move(shape)) {}
  Variant shape_;
};

/// Nearest point of the set. Throws DimensionError on a length mismatch.
Vector project(const ConvexSet& set, const Vector& x);

/// True iff dist(x, set) <= tol.
bool contains(const ConvexSet& set, const Vector& x, double tol);

/// A random point of the set. Unbounded variants draw from their
/// intersection with the sampling cube [-10, 10]^n (projected).
Vector sample_point(const ConvexSet& set, std::mt19937_64& rng);

}  // namespace vicert
