#include "cheeger/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <map>
#include <sstream>

namespace cheeger {

namespace {

// Forward iterator over the text that counts lines as the parser consumes
// characters; SAX events then know roughly where they are.
struct CountingIter {
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;
  using iterator_category = std::forward_iterator_tag;

  const char* p = nullptr;
  int* line = nullptr;

  reference operator*() const { return *p; }
  CountingIter& operator++() {
    if (*p == '\n') ++*line;
    ++p;
    return *this;
  }
  CountingIter operator++(int) {
    CountingIter old = *this;
    ++*this;
    return old;
  }
  bool operator==(const CountingIter& o) const { return p == o.p; }
  bool operator!=(const CountingIter& o) const { return p != o.p; }
};

std::string escape_token(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

// Records the line of every value (by JSON pointer) in a document.
class LineMap : public nlohmann::json_sax<Json> {
 public:
  explicit LineMap(const int* line) : line_(line) {}

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }
  bool start_object(std::size_t) override { return open(false); }
  bool start_array(std::size_t) override { return open(true); }
  bool end_object() override { return close(); }
  bool end_array() override { return close(); }
  bool key(string_t& k) override {
    stack_.back().key = k;
    lines_.emplace(stack_.back().ptr + "/" + escape_token(k), *line_);
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception&) override { return false; }

  // Line of the value at `ptr`, or of its closest recorded ancestor.
  int line_of(std::string ptr) const {
    while (true) {
      const auto it = lines_.find(ptr);
      if (it != lines_.end()) return it->second;
      const auto cut = ptr.rfind('/');
      if (cut == std::string::npos) return 1;
      ptr.resize(cut);
    }
  }

 private:
  struct Frame {
    bool array;
    std::size_t index;
    std::string key;
    std::string ptr;
  };

  std::string next_ptr() {
    if (stack_.empty()) return "";
    Frame& top = stack_.back();
    if (top.array) return top.ptr + "/" + std::to_string(top.index++);
    return top.ptr + "/" + escape_token(top.key);
  }
  bool scalar() {
    lines_.emplace(next_ptr(), *line_);
    return true;
  }
  bool open(bool array) {
    std::string ptr = next_ptr();
    lines_.emplace(ptr, *line_);
    stack_.push_back({array, 0, {}, std::move(ptr)});
    return true;
  }
  bool close() {
    stack_.pop_back();
    return true;
  }

  const int* line_;
  std::vector<Frame> stack_;
  std::map<std::string, int> lines_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ":0: cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    int line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": malformed JSON (" + e.what() +
                     ")");
  }
}

class DomainReader {
 public:
  DomainReader(const std::string& text, std::string source) : source_(std::move(source)), line_(1), lines_(&line_) {
    doc_ = parse_text(text, source_);
    CountingIter first{text.data(), &line_};
    CountingIter last{text.data() + text.size(), &line_};
    Json::sax_parse(first, last, &lines_);
  }

  DomainSpec read() {
    if (!doc_.is_object()) fail("", "domain file must hold a JSON object");
    DomainSpec spec{shape(need(doc_, "shape", ""), "/shape"), {}};
    spec.grid = grid(need(doc_, "grid", ""), "/grid", spec.shape);
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw ParseError(source_ + ":" + std::to_string(lines_.line_of(ptr)) + ": " + msg +
                     (ptr.empty() ? "" : " (at " + ptr + ")"));
  }

  const Json& need(const Json& obj, const std::string& key, const std::string& ptr) const {
    if (!obj.is_object()) fail(ptr, "expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) fail(ptr, "missing field \"" + key + "\"");
    return *it;
  }

  double number(const Json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(ptr, "expected a finite number");
    return v;
  }

  double positive(const Json& j, const std::string& ptr) const {
    const double v = number(j, ptr);
    if (!(v > 0.0)) fail(ptr, "expected a positive number");
    return v;
  }

  int integer(const Json& j, const std::string& ptr) const {
    if (!j.is_number_integer()) fail(ptr, "expected an integer");
    const auto v = j.get<long long>();
    if (v < -1000000000LL || v > 1000000000LL) fail(ptr, "integer out of range");
    return static_cast<int>(v);
  }

  Point point(const Json& j, const std::string& ptr) const {
    if (!j.is_array() || j.size() != 2) fail(ptr, "expected a point [x, y]");
    return {number(j[0], ptr + "/0"), number(j[1], ptr + "/1")};
  }

  double field(const Json& obj, const std::string& key, const std::string& ptr, bool must_be_positive) const {
    const Json& v = need(obj, key, ptr);
    return must_be_positive ? positive(v, ptr + "/" + key) : number(v, ptr + "/" + key);
  }

  ShapeExpr shape(const Json& j, const std::string& ptr) const {
    if (!j.is_object()) fail(ptr, "a shape must be an object");
    try {
      if (j.contains("op")) {
        const Json& op = j["op"];
        if (!op.is_string()) fail(ptr + "/op", "expected a string");
        const Json& args = need(j, "args", ptr);
        if (!args.is_array() || args.empty()) fail(ptr + "/args", "expected a nonempty array of shapes");
        std::vector<ShapeExpr> children;
        for (std::size_t i = 0; i < args.size(); ++i) children.push_back(shape(args[i], ptr + "/args/" + std::to_string(i)));
        const std::string name = op.get<std::string>();
        if (name == "union") return ShapeExpr::make_union(std::move(children));
        if (name == "intersection") return ShapeExpr::make_intersection(std::move(children));
        if (name == "difference") return ShapeExpr::make_difference(std::move(children));
        fail(ptr + "/op", "unknown operation \"" + name + "\"");
      }
      const Json& type = need(j, "type", ptr);
      if (!type.is_string()) fail(ptr + "/type", "expected a string");
      const std::string name = type.get<std::string>();
      if (name == "disk") return ShapeExpr::disk(point(need(j, "center", ptr), ptr + "/center"), field(j, "radius", ptr, true));
      if (name == "rect")
        return ShapeExpr::rect(point(need(j, "corner", ptr), ptr + "/corner"), field(j, "width", ptr, true),
                               field(j, "height", ptr, true));
      if (name == "regular_polygon") {
        const int sides = integer(need(j, "sides", ptr), ptr + "/sides");
        if (sides < 3) fail(ptr + "/sides", "a polygon needs at least 3 sides");
        const double rotation = j.contains("rotation") ? number(j["rotation"], ptr + "/rotation") : 0.0;
        return ShapeExpr::regular_polygon(sides, point(need(j, "center", ptr), ptr + "/center"),
                                          field(j, "circumradius", ptr, true), rotation);
      }
      fail(ptr + "/type", "unknown shape type \"" + name + "\"");
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(ptr, e.what());
    }
  }

  GridSpec grid(const Json& j, const std::string& ptr, const ShapeExpr& s) const {
    if (!j.is_object()) fail(ptr, "grid must be an object");
    const double h = field(j, "h", ptr, true);
    if (j.contains("nx") || j.contains("ny") || j.contains("origin")) {
      GridSpec g;
      g.nx = integer(need(j, "nx", ptr), ptr + "/nx");
      g.ny = integer(need(j, "ny", ptr), ptr + "/ny");
      g.spacing = h;
      g.origin = point(need(j, "origin", ptr), ptr + "/origin");
      try {
        check_margin(s, g);
      } catch (const Error& e) {
        fail(ptr, e.what());
      }
      return g;
    }
    GridAlignment align = GridAlignment::kCellCentred;
    if (j.contains("align")) {
      const Json& a = j["align"];
      if (a == "vertex") align = GridAlignment::kVertexCentred;
      else if (a != "cell") fail(ptr + "/align", "align must be \"cell\" or \"vertex\"");
    }
    int margin = 4;
    if (j.contains("margin")) {
      margin = integer(j["margin"], ptr + "/margin");
      if (margin < 2) fail(ptr + "/margin", "margin must be at least 2 pixels");
    }
    const GridSpec g = grid_for(s, h, margin, align);
    if (static_cast<double>(g.nx) * g.ny > 1e8) fail(ptr + "/h", "grid would exceed 1e8 pixels");
    return g;
  }

  std::string source_;
  int line_;
  LineMap lines_;
  Json doc_;
};

const char* op_name(CsgOp op) {
  switch (op) {
    case CsgOp::kUnion: return "union";
    case CsgOp::kIntersection: return "intersection";
    case CsgOp::kDifference: return "difference";
  }
  return "union";
}

Json point_json(Point p) { return Json::array({p.x, p.y}); }

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace

DomainSpec parse_domain(const std::string& text, const std::string& source) {
  return DomainReader(text, source).read();
}

DomainSpec load_domain(const std::string& path) { return parse_domain(read_file(path), path); }

Json load_json(const std::string& path) { return parse_text(read_file(path), path); }

DomainMask rasterize(const DomainSpec& spec) { return rasterize(spec.shape, spec.grid); }

Json to_json(const GridSpec& g) {
  return Json{{"nx", g.nx}, {"ny", g.ny}, {"h", g.spacing}, {"origin", point_json(g.origin)}};
}

Json shape_to_json(const ShapeExpr& shape) {
  return std::visit(
      [](const auto& n) -> Json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Disk>) {
          return Json{{"type", "disk"}, {"center", point_json(n.center)}, {"radius", n.radius}};
        } else if constexpr (std::is_same_v<T, Rect>) {
          return Json{{"type", "rect"}, {"corner", point_json(n.corner)}, {"width", n.width}, {"height", n.height}};
        } else if constexpr (std::is_same_v<T, RegularPolygon>) {
          return Json{{"type", "regular_polygon"},
                      {"sides", n.sides},
                      {"center", point_json(n.center)},
                      {"circumradius", n.circumradius},
                      {"rotation", n.rotation}};
        } else {
          Json args = Json::array();
          for (const ShapeExpr& c : n.children) args.push_back(shape_to_json(c));
          return Json{{"op", op_name(n.op)}, {"args", args}};
        }
      },
      shape.node());
}

Json labeling_to_json(const Labeling& labeling) {
  const GridSpec& g = labeling.grid();
  Json rows = Json::array();
  for (int y = 0; y < g.ny; ++y) {
    std::string row;
    int x = 0;
    while (x < g.nx) {
      const int l = labeling.at(x, y);
      int run = 1;
      while (x + run < g.nx && labeling.at(x + run, y) == l) ++run;
      if (!row.empty()) row += ' ';
      row += std::to_string(l) + "*" + std::to_string(run);
      x += run;
    }
    rows.push_back(row);
  }
  return Json{{"nx", g.nx}, {"ny", g.ny}, {"chambers", labeling.chambers()}, {"rows", rows}};
}

Labeling labeling_from_json(const Json& j, const GridSpec& grid) {
  try {
    if (j.at("nx").get<int>() != grid.nx || j.at("ny").get<int>() != grid.ny)
      throw ParseError("labeling size does not match the domain grid");
    const int chambers = j.at("chambers").get<int>();
    const Json& rows = j.at("rows");
    if (!rows.is_array() || rows.size() != static_cast<std::size_t>(grid.ny))
      throw ParseError("labeling needs one row per grid row");
    std::vector<int> labels;
    labels.reserve(grid.size());
    for (std::size_t y = 0; y < rows.size(); ++y) {
      std::istringstream in(rows[y].get<std::string>());
      std::string run;
      std::size_t width = 0;
      while (in >> run) {
        const auto star = run.find('*');
        if (star == std::string::npos) throw ParseError("row " + std::to_string(y) + ": bad run \"" + run + "\"");
        const int label = std::stoi(run.substr(0, star));
        const int count = std::stoi(run.substr(star + 1));
        if (count < 1) throw ParseError("row " + std::to_string(y) + ": run length must be positive");
        labels.insert(labels.end(), static_cast<std::size_t>(count), label);
        width += static_cast<std::size_t>(count);
      }
      if (width != static_cast<std::size_t>(grid.nx))
        throw ParseError("row " + std::to_string(y) + " does not cover the grid width");
    }
    return Labeling(grid, chambers, std::move(labels));
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("bad labeling: ") + e.what());
  }
}

Json to_json(const CheegerResult& r) {
  Json trace = Json::array();
  for (const auto& s : r.trace) trace.push_back(Json{{"lambda", s.lambda}, {"subproblem_min", s.subproblem_min}});
  return Json{{"h", r.ratio},
              {"area", area(r.set)},
              {"perimeter", perimeter(r.set)},
              {"iterations", r.iterations},
              {"eps_dinkelbach", r.eps_used},
              {"trace", trace}};
}

Json to_json(const ChamberStat& s) {
  return Json{{"area", s.area},
              {"perimeter", s.perimeter},
              {"ratio", s.ratio},
              {"components", s.components},
              {"compactly_contained", s.compactly_contained}};
}

Json to_json(const ClusterResult& r) {
  Json stats = Json::array();
  for (const auto& s : r.stats) stats.push_back(to_json(s));
  return Json{{"energy", r.energy},
              {"sweeps", r.sweeps},
              {"restart_index", r.restart_index},
              {"trace", r.trace},
              {"chambers", stats},
              {"labeling", labeling_to_json(r.labeling)}};
}

Json to_json(const CheckVerdict& v) {
  Json j{{"verdict", v.pass ? "PASS" : "FLAG"}, {"residual", v.residual}, {"tolerance", v.tolerance}};
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

Json to_json(const ValidationReport& v) {
  return Json{{"self_cheeger", to_json(v.self_cheeger)},
              {"volume_bound", to_json(v.volume_bound)},
              {"indecomposable_interior", to_json(v.indecomposable_interior)},
              {"exterior_component_rule", to_json(v.exterior_component_rule)},
              {"disjointness", to_json(v.disjointness)}};
}

Json to_json(const ArcFit& f) {
  Json j{{"kind", f.kind == ArcKind::kCircle ? "circle" : "line"}};
  if (f.kind == ArcKind::kCircle) {
    j["center"] = point_json(f.center);
    j["radius"] = f.radius;
  } else {
    j["point"] = point_json(f.point);
    j["direction"] = point_json(f.direction);
  }
  j["signed_curvature"] = f.signed_curvature;
  j["rms_residual"] = f.rms_residual;
  return j;
}

Json to_json(const StructureReport& r) {
  Json interfaces = Json::array();
  for (const auto& c : r.interfaces) {
    Json j{{"pair", Json::array({c.j, c.k})}, {"length", c.length}, {"expected_curvature", c.expected}};
    if (c.contact) {
      j["fit"] = nullptr;
      j["contact"] = true;
    } else if (c.fit) {
      j["fit"] = to_json(*c.fit);
      j["relative_error"] = c.relative_error;
      j["verdict"] = c.pass ? "PASS" : "FLAG";
    } else {
      j["fit"] = nullptr;
    }
    interfaces.push_back(j);
  }
  Json triples = Json::array();
  for (const auto& t : r.triples) triples.push_back(Json{{"position", point_json(t.position)}, {"labels", t.labels}});
  return Json{{"tolerance", r.tolerance},
              {"diameter", r.diameter},
              {"curvature", r.curvature_pass ? "PASS" : "FLAG"},
              {"triple_count", r.triple_count_pass ? "PASS" : "FLAG"},
              {"interfaces", interfaces},
              {"triple_points", triples}};
}

Json to_json(const HexPlacement& p) {
  Json centres = Json::array();
  for (const Point& c : p.centres) centres.push_back(point_json(c));
  return Json{{"delta", p.delta}, {"offset", point_json(p.offset)}, {"k", p.k}, {"rotation", p.rotation}, {"centres", centres}};
}

Json to_json(const BoundReport& r) {
  return Json{{"N", r.n},
              {"lower_direct", r.lower_direct},
              {"lower_recursive", r.lower_recursive},
              {"lower", r.lower},
              {"upper_hex", optional_json(r.upper_hex)},
              {"H_hat", optional_json(r.h_hat)},
              {"lower_verdict", r.lower_ok ? "PASS" : "FLAG"},
              {"upper_verdict", r.upper_ok ? "PASS" : "FLAG"}};
}

Json to_json(const EigResult& r) {
  return Json{{"lambda1", r.lambda1}, {"iterations", r.iterations}, {"residual", r.residual}};
}

Json to_json(const EigCheck& c) {
  return Json{{"lambda1", c.lambda1}, {"h", c.cheeger}, {"bound", c.bound}, {"verdict", c.pass ? "PASS" : "FLAG"}};
}

Json to_json(const ChainCheck& c) {
  Json chambers = Json::array();
  for (const auto& e : c.chambers) chambers.push_back(to_json(e));
  return Json{{"sum_lambda1", c.sum_lambda},
              {"sum_cheeger_bound", c.sum_cheeger},
              {"jensen_bound", c.jensen},
              {"eigen_verdict", c.eig_pass ? "PASS" : "FLAG"},
              {"jensen_verdict", c.jensen_pass ? "PASS" : "FLAG"},
              {"chambers", chambers}};
}

ClusterResult cluster_from_report(const Json& report, const DomainMask& domain) {
  const Json* cluster = &report;
  if (report.contains("cluster")) cluster = &report["cluster"];
  if (!cluster->is_object() || !cluster->contains("labeling")) throw ParseError("report holds no cluster labeling");
  ClusterResult r{labeling_from_json((*cluster)["labeling"], domain.grid()), {}, 0.0, 0, {}, 0};
  try {
    r.labeling.check(domain);
  } catch (const Error& e) {
    throw ParseError(std::string("labeling does not fit the domain: ") + e.what());
  }
  r.stats = chamber_stats(r.labeling, domain);
  r.energy = cluster_energy(r.labeling);
  if (cluster->contains("sweeps") && (*cluster)["sweeps"].is_number_integer()) r.sweeps = (*cluster)["sweeps"].get<int>();
  if (cluster->contains("restart_index") && (*cluster)["restart_index"].is_number_integer())
    r.restart_index = (*cluster)["restart_index"].get<int>();
  r.trace = {r.energy};
  return r;
}

namespace {

std::string colour(int label) {
  if (label == 0) return "#dddddd";
  // Golden-angle hues keep neighbouring labels apart.
  const double hue = std::fmod(label * 137.50776, 360.0);
  const double s = 0.55, l = 0.6;
  const double c = (1.0 - std::abs(2.0 * l - 1.0)) * s;
  const double hp = hue / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) r = c, g = x;
  else if (hp < 2) r = x, g = c;
  else if (hp < 3) g = c, b = x;
  else if (hp < 4) g = x, b = c;
  else if (hp < 5) r = x, b = c;
  else r = c, b = x;
  const double m = l - c / 2.0;
  std::ostringstream os;
  os << '#' << std::hex << std::setfill('0');
  for (double v : {r, g, b}) os << std::setw(2) << static_cast<int>(std::lround((v + m) * 255.0));
  return os.str();
}

}  // namespace

std::string render_svg(const Labeling& labeling, const std::vector<InterfacePolyline>& interfaces,
                       const std::vector<std::optional<ArcFit>>& fits, const std::vector<TriplePoint>& triples,
                       double pixel_size) {
  const GridSpec& g = labeling.grid();
  const double s = pixel_size;
  const double width = g.nx * s;
  const double height = g.ny * s;
  // Plane point to SVG coordinates (y flipped).
  auto sx = [&](double x) { return (x - g.origin.x) / g.spacing * s + 0.5 * s; };
  auto sy = [&](double y) { return height - ((y - g.origin.y) / g.spacing * s + 0.5 * s); };

  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
     << width << ' ' << height << "\">\n";
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (int y = 0; y < g.ny; ++y) {
    int x = 0;
    while (x < g.nx) {
      const int l = labeling.at(x, y);
      int run = 1;
      while (x + run < g.nx && labeling.at(x + run, y) == l) ++run;
      if (l != Labeling::kOutside)
        os << "<rect x=\"" << x * s << "\" y=\"" << height - (y + 1) * s << "\" width=\"" << run * s << "\" height=\"" << s
           << "\" fill=\"" << colour(l) << "\"/>\n";
      x += run;
    }
  }
  os << "</g>\n<g fill=\"none\" stroke-width=\"" << std::max(1.0, s / 2.0) << "\">\n";
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    const auto& p = interfaces[i];
    os << "<polyline stroke=\"" << (p.j == 0 ? "#333333" : "#000000") << "\" points=\"";
    for (const Point& v : p.vertices) os << sx(v.x) << ',' << sy(v.y) << ' ';
    os << "\"/>\n";
    if (i < fits.size() && fits[i]) {
      // Fitted curve sampled at the projections of the polyline vertices.
      const ArcFit& f = *fits[i];
      os << "<polyline stroke=\"#d62728\" stroke-dasharray=\"" << 2 * s << ',' << s << "\" points=\"";
      for (const Point& v : p.vertices) {
        Point q = v;
        if (f.kind == ArcKind::kCircle) {
          const double d = std::hypot(v.x - f.center.x, v.y - f.center.y);
          if (d > 0) q = {f.center.x + (v.x - f.center.x) * f.radius / d, f.center.y + (v.y - f.center.y) * f.radius / d};
        } else {
          const double t = (v.x - f.point.x) * f.direction.x + (v.y - f.point.y) * f.direction.y;
          q = {f.point.x + t * f.direction.x, f.point.y + t * f.direction.y};
        }
        os << sx(q.x) << ',' << sy(q.y) << ' ';
      }
      os << "\"/>\n";
    }
  }
  os << "</g>\n<g fill=\"#1f77b4\" stroke=\"#ffffff\">\n";
  for (const auto& t : triples)
    os << "<circle cx=\"" << sx(t.position.x) << "\" cy=\"" << sy(t.position.y) << "\" r=\"" << 2.5 * s << "\"/>\n";
  os << "</g>\n</svg>\n";
  return os.str();
}

}  // namespace cheeger
