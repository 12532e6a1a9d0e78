#pragma once

// Domain files, JSON reports and SVG rendering.

#include <optional>
#include <string>

#include "cheeger/bounds.hpp"
#include "cheeger/spectral.hpp"
#include "cheeger/structure.hpp"
#include "json.hpp"

namespace cheeger {

using Json = nlohmann::ordered_json;

// Domain file:
//   {"grid": {"h": 0.01, "align": "cell"|"vertex", "margin": 4}
//        or {"nx": .., "ny": .., "h": .., "origin": [x, y]},
//    "shape": primitive | {"op": "union"|"intersection"|"difference", "args": [...]}}
// primitives: {"type": "disk", "center": [x, y], "radius": r}
//             {"type": "rect", "corner": [x, y], "width": w, "height": h}
//             {"type": "regular_polygon", "sides": n, "center": [x, y], "circumradius": r, "rotation": a}
struct DomainSpec {
  ShapeExpr shape;
  GridSpec grid;
};

// Throws ParseError with "<source>:<line>:<col>: ..." for syntax errors and
// "<source>:<line>: ..." for schema errors.
DomainSpec parse_domain(const std::string& text, const std::string& source = "<domain>");
DomainSpec load_domain(const std::string& path);
DomainMask rasterize(const DomainSpec& spec);

// Any JSON file; syntax errors as "<path>:<line>:<col>: ...".
Json load_json(const std::string& path);

Json to_json(const GridSpec& g);
Json shape_to_json(const ShapeExpr& shape);

// Rows of "label*count" runs, bottom row first.
Json labeling_to_json(const Labeling& labeling);
Labeling labeling_from_json(const Json& j, const GridSpec& grid);

Json to_json(const CheegerResult& r);
Json to_json(const ChamberStat& s);
Json to_json(const ClusterResult& r);
Json to_json(const CheckVerdict& v);
Json to_json(const ValidationReport& v);
Json to_json(const ArcFit& f);
Json to_json(const StructureReport& r);
Json to_json(const HexPlacement& p);
Json to_json(const BoundReport& r);
Json to_json(const EigResult& r);
Json to_json(const EigCheck& c);
Json to_json(const ChainCheck& c);

// Reads back the labeling stored in a cluster report; stats and energy are
// recomputed from it. Throws ParseError.
ClusterResult cluster_from_report(const Json& report, const DomainMask& domain);

std::string render_svg(const Labeling& labeling, const std::vector<InterfacePolyline>& interfaces,
                       const std::vector<std::optional<ArcFit>>& fits, const std::vector<TriplePoint>& triples,
                       double pixel_size = 2.0);

}  // namespace cheeger
