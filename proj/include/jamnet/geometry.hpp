#ifndef JAMNET_GEOMETRY_HPP
#define JAMNET_GEOMETRY_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace jamnet {

struct Point2D {
  double x{0.0};
  double y{0.0};
};

inline double dist2(const Point2D& a, const Point2D& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double dist(const Point2D& a, const Point2D& b);

/// Simple polygon, stored counter-clockwise. Boundary points count as inside.
class PolygonalRegion {
 public:
  explicit PolygonalRegion(std::vector<Point2D> vertices);

  const std::vector<Point2D>& vertices() const { return verts_; }
  double perimeter() const;
  double area() const;

  bool contains(const Point2D& p) const;
  bool on_boundary(const Point2D& p, double tol = kBoundaryTol) const;

  // Points along the boundary at arc-length intervals <= spacing, every
  // vertex included, no duplicated closing point.
  std::vector<Point2D> boundary_samples(double spacing) const;

  // Closest boundary point to p; p must lie outside the region.
  // Ties broken by smallest (x, then y).
  Point2D nearest_boundary_point(const Point2D& p) const;

  // Exact Euclidean distance from an arbitrary point to the boundary.
  double boundary_distance(const Point2D& p) const;

  static constexpr double kBoundaryTol = 1e-9;

 private:
  std::vector<Point2D> verts_;
};

// (min, max) of the distance from fence-boundary samples to the storage
// boundary. The fence side is discretized at `spacing`; the storage side is
// evaluated exactly per edge, so rectangle scenarios come out exact.
std::pair<double, double> region_gap(const PolygonalRegion& storage,
                                     const PolygonalRegion& fence,
                                     double spacing = 1.0);

struct ScenarioGeometry {
  PolygonalRegion storage;
  PolygonalRegion fence;
  PolygonalRegion allowable;
  double grid_spacing{1.0};

  // Throws std::invalid_argument when containment is violated.
  void validate() const;

  static ScenarioGeometry from_json_text(const std::string& text);
  std::string to_json_text() const;
};

// Axis-aligned rectangle helper used all over the harness and tests.
PolygonalRegion make_rectangle(double cx, double cy, double width, double height);

}  // namespace jamnet

#endif  // JAMNET_GEOMETRY_HPP
