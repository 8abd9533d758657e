#include "bpm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bpm/errors.hpp"

namespace bpm {

void BoxDomain::validate() const {
  if (lo.empty() || lo.size() != hi.size())
    throw dimension_error("box bounds must be nonempty and of equal length");
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i]))
      throw dimension_error("box must have nonempty interior (lo_i < hi_i)");
}

bool BoxDomain::contains(const vec& x, double slack) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] - slack || x[i] > hi[i] + slack) return false;
  return true;
}

bool BoxDomain::strictly_inside(const vec& x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (!(lo[i] < x[i] && x[i] < hi[i])) return false;
  return true;
}

vec BoxDomain::center() const {
  vec c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

void BallDomain::validate() const {
  space.validate();
  if (static_cast<int>(center.size()) != space.dim)
    throw dimension_error("ball center dimension mismatch");
  if (!(radius > 0.0)) throw dimension_error("ball radius must be positive");
}

bool BallDomain::contains(const vec& x, double slack) const {
  return norm(space, sub(x, center)) <= radius + slack;
}

bool BallDomain::strictly_inside(const vec& x) const {
  return norm(space, sub(x, center)) < radius;
}

void HilbertCubeDomain::validate() const {
  if (truncation < 1) throw dimension_error("truncation must be >= 1");
}

bool HilbertCubeDomain::contains(const vec& x, double slack) const {
  for (int k = 0; k < truncation; ++k)
    if (std::abs(x[k]) > bound(k) + slack) return false;
  return true;
}

bool HilbertCubeDomain::strictly_inside(const vec& x) const {
  for (int k = 0; k < truncation; ++k)
    if (!(std::abs(x[k]) < bound(k))) return false;
  return true;
}

BoxDomain HilbertCubeDomain::as_box() const {
  BoxDomain b;
  b.lo.resize(truncation);
  b.hi.resize(truncation);
  for (int k = 0; k < truncation; ++k) {
    b.lo[k] = -bound(k);
    b.hi[k] = bound(k);
  }
  return b;
}

int domain_dim(const Domain& d) {
  return std::visit([](const auto& v) { return v.dim(); }, d);
}

bool domain_contains(const Domain& d, const vec& x, double slack) {
  return std::visit([&](const auto& v) { return v.contains(x, slack); }, d);
}

bool domain_strictly_inside(const Domain& d, const vec& x) {
  return std::visit([&](const auto& v) { return v.strictly_inside(x); }, d);
}

vec domain_center(const Domain& d) {
  if (const auto* b = std::get_if<BoxDomain>(&d)) return b->center();
  if (const auto* s = std::get_if<BallDomain>(&d)) return s->center;
  return vec(std::get<HilbertCubeDomain>(d).truncation, 0.0);
}

double domain_diameter(const Domain& d, const Space& s) {
  if (const auto* b = std::get_if<BoxDomain>(&d))
    return norm(s, sub(b->hi, b->lo));
  if (const auto* ball = std::get_if<BallDomain>(&d)) return 2.0 * ball->radius;
  return norm(s, sub(std::get<HilbertCubeDomain>(d).as_box().hi,
                     std::get<HilbertCubeDomain>(d).as_box().lo));
}

std::vector<FaceId> faces(const BoxDomain& box) {
  std::vector<FaceId> out;
  out.reserve(2 * box.dim());
  for (int i = 0; i < box.dim(); ++i) {
    out.push_back({i, -1});
    out.push_back({i, +1});
  }
  return out;
}

vec outward_normal(const BoxDomain& box, FaceId face) {
  vec v(box.dim(), 0.0);
  v[face.axis] = static_cast<double>(face.side);
  return v;
}

vec project(const BoxDomain& d, const vec& x) {
  vec r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    r[i] = std::min(std::max(x[i], d.lo[i]), d.hi[i]);
  return r;
}

vec project(const BallDomain& d, const vec& x) {
  if (d.space.norm != Norm::L2)
    throw unsupported_error("ball projection is only available in l2");
  const vec delta = sub(x, d.center);
  const double dist = norm2(delta);
  // The relative slack keeps the map exactly idempotent: a rescaled point
  // re-measures within a few ulp of the radius and must not move again.
  if (dist <= d.radius * (1.0 + 1e-13)) return x;
  return axpy(d.center, d.radius / dist, delta);
}

vec project(const HilbertCubeDomain& d, const vec& x) {
  vec r(x.size());
  for (int k = 0; k < d.truncation; ++k) {
    const double b = d.bound(k);
    if (std::abs(x[k]) < b)
      r[k] = x[k];
    else if (x[k] >= b)
      r[k] = b;
    else
      r[k] = -b;
  }
  return r;
}

vec project(const Domain& d, const vec& x) {
  return std::visit([&](const auto& v) { return project(v, x); }, d);
}

std::vector<vec> face_grid(const BoxDomain& box, FaceId face, int density) {
  const int n = box.dim();
  std::vector<vec> pts;
  vec point(n, 0.0);
  point[face.axis] = face.side < 0 ? box.lo[face.axis] : box.hi[face.axis];

  std::vector<int> free_axes;
  for (int i = 0; i < n; ++i)
    if (i != face.axis) free_axes.push_back(i);

  if (free_axes.empty()) {
    pts.push_back(point);
    return pts;
  }

  std::vector<int> idx(free_axes.size(), 0);
  while (true) {
    for (std::size_t k = 0; k < free_axes.size(); ++k) {
      const int a = free_axes[k];
      if (density == 1)
        point[a] = 0.5 * (box.lo[a] + box.hi[a]);
      else if (idx[k] == density - 1)
        point[a] = box.hi[a];  // corners land exactly on the bound
      else
        point[a] = box.lo[a] +
                   (box.hi[a] - box.lo[a]) * idx[k] / (density - 1);
    }
    pts.push_back(point);
    int k = static_cast<int>(free_axes.size()) - 1;
    while (k >= 0 && ++idx[k] == density) idx[k--] = 0;
    if (k < 0) break;
  }
  return pts;
}

namespace {

std::vector<BoundarySample> box_boundary_grid(const BoxDomain& box, int density) {
  std::vector<BoundarySample> out;
  for (FaceId f : faces(box))
    for (vec& p : face_grid(box, f, density))
      out.push_back({std::move(p), f});
  return out;
}

std::vector<BoundarySample> ball_boundary_grid(const BallDomain& ball,
                                               int density) {
  std::vector<BoundarySample> out;
  const int n = ball.dim();
  const double r = ball.radius;
  if (n == 1) {
    out.push_back({{ball.center[0] - r}, std::nullopt});
    out.push_back({{ball.center[0] + r}, std::nullopt});
    return out;
  }
  if (n == 2 && ball.space.norm == Norm::L2) {
    // Angular lattice: exactly `density` points with |x - c|_2 = r.
    for (int k = 0; k < density; ++k) {
      const double th = 2.0 * M_PI * k / density;
      out.push_back(
          {{ball.center[0] + r * std::cos(th), ball.center[1] + r * std::sin(th)},
           std::nullopt});
    }
    return out;
  }
  // Directions from the unit-cube surface, normalized in the ball's norm.
  // Corner directions repeat across facets; exact duplicates are dropped.
  BoxDomain cube{vec(n, -1.0), vec(n, 1.0)};
  std::set<vec> seen;
  for (const BoundarySample& s : box_boundary_grid(cube, density)) {
    const double len = norm(ball.space, s.point);
    vec dir = scale(1.0 / len, s.point);
    if (!seen.insert(dir).second) continue;
    out.push_back({axpy(ball.center, r, dir), std::nullopt});
  }
  return out;
}

}  // namespace

std::vector<BoundarySample> boundary_grid(const Domain& d, int density) {
  if (density < 1) throw precondition_error("grid density must be >= 1");
  if (domain_dim(d) > kGridDimLimit)
    throw unsupported_error(
        "grid-mode boundary sampling is limited to dimension <= " +
        std::to_string(kGridDimLimit) +
        "; use lipschitz subdivision or the hilbert-cube sampler");
  if (const auto* b = std::get_if<BoxDomain>(&d))
    return box_boundary_grid(*b, density);
  if (const auto* s = std::get_if<BallDomain>(&d))
    return ball_boundary_grid(*s, density);
  return box_boundary_grid(std::get<HilbertCubeDomain>(d).as_box(), density);
}

namespace {

double cell_radius(const vec& lo, const vec& hi, const Space& cert_space) {
  vec half(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) half[i] = 0.5 * (hi[i] - lo[i]);
  return norm(cert_space, half);
}

vec cell_center(const vec& lo, const vec& hi) {
  vec c(lo.size());
  for (std::size_t i = 0; i < lo.size(); ++i) c[i] = 0.5 * (lo[i] + hi[i]);
  return c;
}

}  // namespace

std::vector<FacetCell> subdivide(const BoxDomain& box, FaceId face, int k,
                                 const Space& cert_space) {
  if (k < 1) throw precondition_error("subdivision count must be >= 1");
  const int n = box.dim();
  const double fixed = face.side < 0 ? box.lo[face.axis] : box.hi[face.axis];

  std::vector<int> free_axes;
  for (int i = 0; i < n; ++i)
    if (i != face.axis) free_axes.push_back(i);

  std::vector<FacetCell> cells;
  std::vector<int> idx(free_axes.size(), 0);
  while (true) {
    vec lo(n), hi(n);
    lo[face.axis] = hi[face.axis] = fixed;
    for (std::size_t j = 0; j < free_axes.size(); ++j) {
      const int a = free_axes[j];
      const double w = (box.hi[a] - box.lo[a]) / k;
      lo[a] = idx[j] == 0 ? box.lo[a] : box.lo[a] + idx[j] * w;
      hi[a] = idx[j] + 1 == k ? box.hi[a] : box.lo[a] + (idx[j] + 1) * w;
    }
    cells.push_back({cell_center(lo, hi), cell_radius(lo, hi, cert_space),
                     std::move(lo), std::move(hi)});
    if (free_axes.empty()) return cells;
    int j = static_cast<int>(free_axes.size()) - 1;
    while (j >= 0 && ++idx[j] == k) idx[j--] = 0;
    if (j < 0) return cells;
  }
}

std::vector<FacetCell> split_cell(const FacetCell& cell, int axis,
                                  const Space& cert_space) {
  const int n = static_cast<int>(cell.lo.size());
  std::vector<FacetCell> out;
  std::vector<int> free_axes;
  for (int i = 0; i < n; ++i)
    if (i != axis && cell.hi[i] > cell.lo[i]) free_axes.push_back(i);
  const std::size_t children = free_axes.empty() ? 0 : (1u << free_axes.size());
  for (std::size_t mask = 0; mask < children; ++mask) {
    vec lo = cell.lo, hi = cell.hi;
    for (std::size_t j = 0; j < free_axes.size(); ++j) {
      const int a = free_axes[j];
      const double mid = 0.5 * (cell.lo[a] + cell.hi[a]);
      if (mask & (1u << j))
        lo[a] = mid;
      else
        hi[a] = mid;
    }
    out.push_back({cell_center(lo, hi), cell_radius(lo, hi, cert_space),
                   std::move(lo), std::move(hi)});
  }
  return out;
}

}  // namespace bpm
