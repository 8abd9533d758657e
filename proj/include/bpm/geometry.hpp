#pragma once

// Domains with boundary structure: axis-aligned boxes, norm balls, and the
// truncated Hilbert cube {x : |x_k| <= 1/k}. Provides outward normals,
// metric projection, deterministic boundary sampling and facet subdivision.

#include <optional>
#include <variant>
#include <vector>

#include "bpm/linalg.hpp"
#include "bpm/pairing.hpp"

namespace bpm {

struct BoxDomain {
  vec lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }
  void validate() const;  // lo_i < hi_i for all i
  bool contains(const vec& x, double slack = 0.0) const;
  bool strictly_inside(const vec& x) const;
  vec center() const;
};

struct BallDomain {
  vec center;
  double radius = 0.0;
  Space space;

  int dim() const { return static_cast<int>(center.size()); }
  void validate() const;
  bool contains(const vec& x, double slack = 0.0) const;
  bool strictly_inside(const vec& x) const;
};

// Coordinate k (0-based) is bounded by 1/(k+1); lives in l2.
struct HilbertCubeDomain {
  int truncation = 0;

  int dim() const { return truncation; }
  void validate() const;
  double bound(int k) const { return 1.0 / (k + 1); }
  bool contains(const vec& x, double slack = 0.0) const;
  bool strictly_inside(const vec& x) const;
  BoxDomain as_box() const;
};

using Domain = std::variant<BoxDomain, BallDomain, HilbertCubeDomain>;

int domain_dim(const Domain& d);
bool domain_contains(const Domain& d, const vec& x, double slack = 0.0);
bool domain_strictly_inside(const Domain& d, const vec& x);
vec domain_center(const Domain& d);
// Diameter in the given norm (for balls, exact in the ball's own norm).
double domain_diameter(const Domain& d, const Space& s);

// One facet of a box: {x : x_axis = (side < 0 ? lo : hi)_axis}.
struct FaceId {
  int axis = 0;   // 0-based
  int side = -1;  // -1 or +1
  bool operator==(const FaceId&) const = default;
};

// 2n faces, axis ascending, side -1 before +1.
std::vector<FaceId> faces(const BoxDomain& box);

// side * e_axis.
vec outward_normal(const BoxDomain& box, FaceId face);

// Metric projection. Boxes and the Hilbert cube clamp coordinatewise;
// balls project radially and are supported in l2 only.
vec project(const Domain& d, const vec& x);
vec project(const BoxDomain& d, const vec& x);
vec project(const BallDomain& d, const vec& x);
vec project(const HilbertCubeDomain& d, const vec& x);

struct BoundarySample {
  vec point;
  std::optional<FaceId> face;  // empty for sphere samples
};

// Deterministic boundary sampling. Boxes: per-face lattice with density
// points per free axis (facet corners included for density >= 2); balls:
// a mesh of exactly-unit-norm directions scaled to the radius. Dimension
// above kGridDimLimit is rejected (lattice size is density^(n-1)).
inline constexpr int kGridDimLimit = 8;
std::vector<BoundarySample> boundary_grid(const Domain& d, int density);

// Deterministic lattice on one box facet (the helper behind boundary_grid).
std::vector<vec> face_grid(const BoxDomain& box, FaceId face, int density);

struct FacetCell {
  vec center;
  double radius;  // circumscribed radius in the certification norm
  vec lo, hi;     // cell bounds (fixed coordinate collapsed: lo=hi on axis)
};

// Partition a facet into k^(n-1) congruent cells.
std::vector<FacetCell> subdivide(const BoxDomain& box, FaceId face, int k,
                                 const Space& cert_space);
// Split one cell in half along every free axis (2^(n-1) children).
std::vector<FacetCell> split_cell(const FacetCell& cell, int axis,
                                  const Space& cert_space);

}  // namespace bpm
