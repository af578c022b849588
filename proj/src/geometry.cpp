#include "jamnet/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

namespace jamnet {

namespace {

bool finite(const Point2D& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

double cross(const Point2D& o, const Point2D& a, const Point2D& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Closest point on segment [a,b] to p.
Point2D project_to_segment(const Point2D& a, const Point2D& b, const Point2D& p) {
  const double vx = b.x - a.x;
  const double vy = b.y - a.y;
  const double len2 = vx * vx + vy * vy;
  if (len2 == 0.0) return a;
  double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return Point2D{a.x + t * vx, a.y + t * vy};
}

bool lex_less(const Point2D& a, const Point2D& b) {
  if (a.x != b.x) return a.x < b.x;
  return a.y < b.y;
}

// Proper crossing test for the self-intersection check; shared endpoints of
// adjacent edges are excluded by the caller.
bool segments_properly_intersect(const Point2D& a, const Point2D& b,
                                 const Point2D& c, const Point2D& d) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 &&
         d3 != 0 && d4 != 0;
}

}  // namespace

double dist(const Point2D& a, const Point2D& b) { return std::sqrt(dist2(a, b)); }

PolygonalRegion::PolygonalRegion(std::vector<Point2D> vertices)
    : verts_(std::move(vertices)) {
  if (verts_.size() < 3) throw std::invalid_argument("polygon needs >= 3 vertices");
  for (const auto& v : verts_) {
    if (!finite(v)) throw std::invalid_argument("polygon vertex not finite");
  }
  double a2 = 0.0;  // twice the signed area
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = verts_[i];
    const auto& q = verts_[(i + 1) % n];
    a2 += p.x * q.y - q.x * p.y;
  }
  if (a2 == 0.0) throw std::invalid_argument("degenerate polygon");
  if (a2 < 0.0) std::reverse(verts_.begin(), verts_.end());  // normalize to CCW
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;  // adjacent edges
      if (segments_properly_intersect(verts_[i], verts_[(i + 1) % n], verts_[j],
                                      verts_[(j + 1) % n])) {
        throw std::invalid_argument("polygon self-intersects");
      }
    }
  }
}

double PolygonalRegion::perimeter() const {
  double s = 0.0;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) s += dist(verts_[i], verts_[(i + 1) % n]);
  return s;
}

double PolygonalRegion::area() const {
  double a2 = 0.0;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& p = verts_[i];
    const auto& q = verts_[(i + 1) % n];
    a2 += p.x * q.y - q.x * p.y;
  }
  return 0.5 * a2;
}

bool PolygonalRegion::on_boundary(const Point2D& p, double tol) const {
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D q = project_to_segment(verts_[i], verts_[(i + 1) % n], p);
    if (dist2(p, q) <= tol * tol) return true;
  }
  return false;
}

bool PolygonalRegion::contains(const Point2D& p) const {
  if (!finite(p)) throw std::invalid_argument("point not finite");
  if (on_boundary(p)) return true;
  // Even-odd ray cast.
  bool inside = false;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& vi = verts_[i];
    const auto& vj = verts_[j];
    if ((vi.y > p.y) != (vj.y > p.y) &&
        p.x < (vj.x - vi.x) * (p.y - vi.y) / (vj.y - vi.y) + vi.x) {
      inside = !inside;
    }
  }
  return inside;
}

std::vector<Point2D> PolygonalRegion::boundary_samples(double spacing) const {
  if (!(spacing > 0.0)) throw std::invalid_argument("spacing must be > 0");
  std::vector<Point2D> pts;
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = verts_[i];
    const auto& b = verts_[(i + 1) % n];
    const double len = dist(a, b);
    const auto nseg = static_cast<std::size_t>(
        std::max(1.0, std::ceil(len / spacing - 1e-12)));
    for (std::size_t s = 0; s < nseg; ++s) {
      const double t = static_cast<double>(s) / static_cast<double>(nseg);
      pts.push_back(Point2D{a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
    }
  }
  return pts;
}

double PolygonalRegion::boundary_distance(const Point2D& p) const {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D q = project_to_segment(verts_[i], verts_[(i + 1) % n], p);
    best = std::min(best, dist2(p, q));
  }
  return std::sqrt(best);
}

Point2D PolygonalRegion::nearest_boundary_point(const Point2D& p) const {
  if (contains(p)) {
    throw std::invalid_argument("nearest_boundary_point requires a point outside the region");
  }
  double best = std::numeric_limits<double>::infinity();
  Point2D best_pt{};
  const std::size_t n = verts_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Point2D q = project_to_segment(verts_[i], verts_[(i + 1) % n], p);
    const double d2 = dist2(p, q);
    const double rel = 1e-12 * std::max(1.0, best);
    if (d2 < best - rel || (std::abs(d2 - best) <= rel && lex_less(q, best_pt))) {
      best = d2;
      best_pt = q;
    }
  }
  return best_pt;
}

std::pair<double, double> region_gap(const PolygonalRegion& storage,
                                     const PolygonalRegion& fence, double spacing) {
  for (const auto& v : storage.vertices()) {
    if (!fence.contains(v) || fence.on_boundary(v)) {
      throw std::invalid_argument("storage not strictly inside fence");
    }
  }
  for (const auto& v : fence.vertices()) {
    if (storage.contains(v)) throw std::invalid_argument("fence vertex inside storage");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const auto& q : fence.boundary_samples(spacing)) {
    if (storage.contains(q)) throw std::invalid_argument("regions intersect");
    const double d = storage.boundary_distance(q);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  if (!(lo > 0.0)) throw std::invalid_argument("regions touch");
  return {lo, hi};
}

void ScenarioGeometry::validate() const {
  if (!(grid_spacing > 0.0)) throw std::invalid_argument("grid_spacing must be > 0");
  (void)region_gap(storage, fence, grid_spacing);  // throws on bad containment
  for (const auto& p : allowable.boundary_samples(grid_spacing)) {
    if (!fence.contains(p)) {
      throw std::invalid_argument("allowable region leaves the fence interior");
    }
    if (storage.contains(p)) {
      throw std::invalid_argument("allowable region overlaps the storage");
    }
  }
}

namespace {

PolygonalRegion polygon_from_json(const nlohmann::json& arr, const char* name) {
  if (!arr.is_array() || arr.size() < 3) {
    throw std::invalid_argument(std::string(name) + ": expected array of >= 3 [x,y] pairs");
  }
  std::vector<Point2D> pts;
  pts.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_array() || v.size() != 2) {
      throw std::invalid_argument(std::string(name) + ": vertex must be [x,y]");
    }
    pts.push_back(Point2D{v[0].get<double>(), v[1].get<double>()});
  }
  return PolygonalRegion(std::move(pts));
}

nlohmann::json polygon_to_json(const PolygonalRegion& r) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : r.vertices()) arr.push_back({p.x, p.y});
  return arr;
}

}  // namespace

ScenarioGeometry ScenarioGeometry::from_json_text(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  ScenarioGeometry g{polygon_from_json(j.at("storage"), "storage"),
                     polygon_from_json(j.at("fence"), "fence"),
                     polygon_from_json(j.at("allowable"), "allowable"),
                     j.value("grid_spacing", 1.0)};
  g.validate();
  return g;
}

std::string ScenarioGeometry::to_json_text() const {
  nlohmann::json j;
  j["storage"] = polygon_to_json(storage);
  j["fence"] = polygon_to_json(fence);
  j["allowable"] = polygon_to_json(allowable);
  j["grid_spacing"] = grid_spacing;
  return j.dump(2);
}

PolygonalRegion make_rectangle(double cx, double cy, double width, double height) {
  const double hw = width / 2.0;
  const double hh = height / 2.0;
  return PolygonalRegion({{cx - hw, cy - hh},
                          {cx + hw, cy - hh},
                          {cx + hw, cy + hh},
                          {cx - hw, cy + hh}});
}

}  // namespace jamnet
