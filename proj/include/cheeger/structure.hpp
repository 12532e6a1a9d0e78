#pragma once

// Geometry of computed clusters: interfaces traced along pixel edges,
// circle / line fits, predicted curvature constants and triple points.

#include <optional>
#include <string>
#include <vector>

#include "cheeger/cheeger_cluster.hpp"

namespace cheeger {

// Interface between labels j < k (0 = exterior chamber) traced on the dual
// grid: vertices are pixel corners, consecutive vertices one edge apart.
struct InterfacePolyline {
  int j = 0;
  int k = 0;
  std::vector<Point> vertices;  // closed loops repeat the first vertex at the end
  double length = 0.0;
  bool j_on_left = true;        // side of chamber j when walking the vertex list
  bool closed = false;
};

// Polylines split at every pixel corner whose 2×2 window holds three or more
// labels (outside-Ω counts as a label) or a checkerboard pair. Edges next to
// outside-Ω are not traced. Ordered by first edge in scan order.
std::vector<InterfacePolyline> extract_interfaces(const Labeling& labeling);

enum class ArcKind { kCircle, kLine };

struct ArcFit {
  ArcKind kind = ArcKind::kLine;
  Point center;          // circle
  double radius = 0.0;   // circle
  Point point;           // line: centroid
  Point direction;       // line: unit vector
  double signed_curvature = 0.0;  // > 0 iff the centre is on chamber j's side
  double rms_residual = 0.0;
};

// Pratt algebraic circle fit (Newton on the characteristic polynomial); a
// line by total least squares when the radius exceeds 50× the polyline
// length. Throws TooShort below five distinct vertices.
ArcFit fit_arc(const InterfacePolyline& polyline);
ArcFit fit_arc(const std::vector<Point>& vertices, bool j_on_left);

// C_{j,k} = (|E_k| h_j − |E_j| h_k) / (|E_j| + |E_k|), C_{j,0} = h_j.
// stats[i − 1] describes chamber i. Throws InvalidArgument for j < 1.
double expected_curvature(int j, int k, const std::vector<ChamberStat>& stats);

struct TriplePoint {
  Point position;
  std::vector<int> labels;  // ascending, at least three
};

// Pixel corners whose 2×2 window has ≥ 3 distinct labels, none outside Ω;
// corners that touch each other (8-neighbours on the dual grid) merge into
// one point at their mean position.
std::vector<TriplePoint> triple_points(const Labeling& labeling);

struct InterfaceCheck {
  int j = 0;
  int k = 0;
  double length = 0.0;
  std::optional<ArcFit> fit;  // absent below the length threshold or on contact
  bool contact = false;       // exterior-chamber sliver hugging the boundary of Ω
  double expected = 0.0;      // C for the chamber side (label 0 uses C_{k,0})
  double relative_error = 0.0;
  bool pass = true;
};

struct StructureReport {
  std::vector<InterfaceCheck> interfaces;
  std::vector<TriplePoint> triples;
  double diameter = 0.0;
  double tolerance = 0.10;
  bool curvature_pass = true;
  bool triple_count_pass = true;  // count ≤ 4N
  bool all_pass() const { return curvature_pass && triple_count_pass; }
};

// Fits every interface of length ≥ 10 pixels and compares |κ| with |C|
// relative to max(|C|, 1/diam Ω).
StructureReport structure_report(const ClusterResult& result, const DomainMask& domain, double tolerance = 0.10);

// Largest distance between in-domain pixel centres.
double domain_diameter(const DomainMask& domain);

}  // namespace cheeger
