// Command-line driver: ingests a domain file, runs one pipeline, writes a
// JSON report (or CSV / SVG). Exit 0 ok, 1 finished with FLAG verdicts, 2 error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cheeger/io.hpp"

using namespace cheeger;

namespace {

struct Options {
  std::string domain;
  std::string n = "1";
  int restarts = 8;
  std::uint64_t seed = 0;
  std::string out;
  std::string svg;
  std::string labeling;
  double tol_dink = 0.0;  // 0: 1e-7 times the area
  double tol_energy = 1e-9;
  int threads = 0;
};

// Outputs are staged and only written once the whole pipeline succeeded.
struct Output {
  std::string path;  // empty: stdout
  std::string text;
};

std::vector<int> parse_n(const std::string& s) {
  auto to_int = [&](const std::string& t) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw InvalidArgument("--n: cannot read \"" + s + "\"");
    if (v < 1) throw InvalidArgument("--n: N must be at least 1");
    return v;
  };
  std::vector<int> out;
  if (const auto dots = s.find(".."); dots != std::string::npos) {
    const int a = to_int(s.substr(0, dots));
    const int b = to_int(s.substr(dots + 2));
    if (b < a) throw InvalidArgument("--n: empty range " + s);
    for (int v = a; v <= b; ++v) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(to_int(part));
  if (out.empty()) throw InvalidArgument("--n: no values");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] <= out[i - 1]) throw InvalidArgument("--n: values must increase");
  return out;
}

int single_n(const Options& o) {
  const auto v = parse_n(o.n);
  if (v.size() != 1) throw InvalidArgument("--n: this command takes a single N");
  return v.front();
}

SolverTolerances solver_tol(const Options& o) {
  if (o.tol_dink < 0.0) throw InvalidArgument("--tol-dink must be nonnegative");
  SolverTolerances t;
  t.eps_dinkelbach = o.tol_dink;
  return t;
}

ClusterConfig cluster_config(const Options& o, int n) {
  ClusterConfig cfg;
  cfg.chambers = n;
  cfg.restarts = o.restarts;
  cfg.rng_seed = o.seed;
  cfg.eps_energy = o.tol_energy;
  cfg.threads = o.threads;
  cfg.tol = solver_tol(o);
  cfg.check();
  return cfg;
}

Json provenance(const std::string& command, const Options& o, const DomainSpec& spec) {
  Json tol{{"eps_dinkelbach", o.tol_dink > 0.0 ? Json(o.tol_dink) : Json("1e-7*area")},
           {"eps_energy", o.tol_energy},
           {"max_iter", SolverTolerances{}.max_iter},
           {"max_sweeps", ClusterConfig{}.max_sweeps}};
  return Json{{"command", command},
              {"domain_file", o.domain},
              {"grid", to_json(spec.grid)},
              {"shape", shape_to_json(spec.shape)},
              {"N", o.n},
              {"restarts", o.restarts},
              {"seed", o.seed},
              {"tolerances", tol},
              {"engine", "push-relabel"},
              {"stencil", "calibrated 16-neighbour"}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

const char* verdict(bool pass) { return pass ? "PASS" : "FLAG"; }

struct Run {
  std::vector<Output> outputs;
  bool flagged = false;
};

Json structure_json(const ClusterResult& r, const DomainMask& d, bool& flagged) {
  const StructureReport s = structure_report(r, d);
  flagged |= !s.all_pass();
  return to_json(s);
}

Run cmd_single(const Options& o) {
  const DomainSpec spec = load_domain(o.domain);
  const DomainMask d = rasterize(spec);
  const CheegerResult r = cheeger_solve(d.inside(), solver_tol(o));
  Json report{{"provenance", provenance("single", o, spec)},
              {"domain", Json{{"area", d.area()}, {"perimeter", perimeter(d.inside())}}},
              {"single", to_json(r)}};
  try {
    const double oracle = inner_cheeger_convex(spec.shape);
    report["oracle"] = Json{{"h", oracle}, {"relative_error", (r.ratio - oracle) / oracle}};
  } catch (const NotConvex&) {
    report["oracle"] = nullptr;
  }
  return {{{o.out, dump(report)}}, false};
}

Run cmd_cluster(const Options& o) {
  const DomainSpec spec = load_domain(o.domain);
  const DomainMask d = rasterize(spec);
  const ClusterResult r = solve(d, cluster_config(o, single_n(o)));
  const ValidationReport v = validate(r, d, solver_tol(o));
  Run run;
  run.flagged = !v.all_pass();
  Json report{{"provenance", provenance("cluster", o, spec)},
              {"cluster", to_json(r)},
              {"validation", to_json(v)},
              {"structure", structure_json(r, d, run.flagged)}};
  report["verdict"] = verdict(!run.flagged);
  run.outputs.push_back({o.out, dump(report)});
  if (!o.svg.empty()) {
    const auto polys = extract_interfaces(r.labeling);
    std::vector<std::optional<ArcFit>> fits;
    for (const auto& p : polys) {
      try {
        fits.push_back(fit_arc(p));
      } catch (const TooShort&) {
        fits.push_back(std::nullopt);
      }
    }
    run.outputs.push_back({o.svg, render_svg(r.labeling, polys, fits, triple_points(r.labeling))});
  }
  return run;
}

Run cmd_bounds(const Options& o) {
  const DomainSpec spec = load_domain(o.domain);
  const DomainMask d = rasterize(spec);
  const int n = single_n(o);
  const BracketSweep s = bracket_sweep(d, {n}, cluster_config(o, n));
  const HexUpperBound hex = hex_upper_bound(d, n);
  Json report{{"provenance", provenance("bounds", o, spec)},
              {"bounds", to_json(s.reports.front())},
              {"hex_placement", hex.value ? to_json(hex.placement) : Json(nullptr)},
              {"cluster", to_json(s.clusters.front())}};
  report["verdict"] = verdict(s.all_ok());
  return {{{o.out, dump(report)}}, !s.all_ok()};
}

ClusterResult read_labeling(const Options& o, const DomainMask& d) {
  if (o.labeling.empty()) throw InvalidArgument("--labeling is required");
  const Json report = load_json(o.labeling);
  try {
    return cluster_from_report(report, d);
  } catch (const ParseError& e) {
    throw ParseError(o.labeling + ": " + e.what());
  }
}

Run cmd_verify(const Options& o) {
  const DomainSpec spec = load_domain(o.domain);
  const DomainMask d = rasterize(spec);
  const ClusterResult r = read_labeling(o, d);
  const ValidationReport v = validate(r, d, solver_tol(o));
  Run run;
  run.flagged = !v.all_pass();
  Json report{{"provenance", provenance("verify", o, spec)},
              {"labeling_file", o.labeling},
              {"cluster", to_json(r)},
              {"validation", to_json(v)},
              {"structure", structure_json(r, d, run.flagged)}};
  report["verdict"] = verdict(!run.flagged);
  run.outputs.push_back({o.out, dump(report)});
  return run;
}

Run cmd_spectral(const Options& o) {
  const DomainSpec spec = load_domain(o.domain);
  const DomainMask d = rasterize(spec);
  const EigCheck c = cheeger_eig_check(d.inside());
  Run run;
  run.flagged = !c.pass;
  Json report{{"provenance", provenance("spectral", o, spec)},
              {"domain", to_json(c)},
              {"j01", bessel_j0_first_zero()}};
  if (!o.labeling.empty()) {
    const ChainCheck chain = partition_chain_check(read_labeling(o, d), 0.02, {}, o.threads);
    run.flagged |= !chain.pass();
    report["partition"] = to_json(chain);
  }
  report["verdict"] = verdict(!run.flagged);
  run.outputs.push_back({o.out, dump(report)});
  return run;
}

Run cmd_sweep(const Options& o) {
  const DomainSpec spec = load_domain(o.domain);
  const DomainMask d = rasterize(spec);
  const auto ns = parse_n(o.n);
  const BracketSweep s = bracket_sweep(d, ns, cluster_config(o, ns.front()));
  return {{{o.out, bracket_csv(s)}}, !s.all_ok()};
}

Run cmd_render(const Options& o) {
  const DomainSpec spec = load_domain(o.domain);
  const DomainMask d = rasterize(spec);
  const ClusterResult r = read_labeling(o, d);
  const auto polys = extract_interfaces(r.labeling);
  std::vector<std::optional<ArcFit>> fits;
  for (const auto& p : polys) {
    try {
      fits.push_back(fit_arc(p));
    } catch (const TooShort&) {
      fits.push_back(std::nullopt);
    }
  }
  return {{{o.out, render_svg(r.labeling, polys, fits, triple_points(r.labeling))}}, false};
}

void write_outputs(const std::vector<Output>& outputs) {
  namespace fs = std::filesystem;
  // Stage everything first so a failed write leaves no partial set behind.
  std::vector<std::pair<fs::path, fs::path>> staged;
  try {
    for (const Output& out : outputs) {
      if (out.path.empty()) continue;
      const fs::path target(out.path);
      fs::path tmp = target;
      tmp += ".partial";
      std::ofstream f(tmp, std::ios::binary);
      if (!f) throw InvalidArgument("cannot write " + out.path);
      f << out.text;
      f.close();
      if (!f) throw InvalidArgument("cannot write " + out.path);
      staged.emplace_back(tmp, target);
    }
  } catch (...) {
    for (const auto& s : staged) fs::remove(s.first);
    throw;
  }
  for (const auto& s : staged) fs::rename(s.first, s.second);
  for (const Output& out : outputs)
    if (out.path.empty()) std::cout << out.text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cheeger constants and N-Cheeger clusters of planar domains on pixel grids"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_n) {
    sub->add_option("--domain", o.domain, "domain JSON file")->required();
    if (needs_n) sub->add_option("--n", o.n, "number of chambers N (sweep: a..b or a,b,c)");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--tol-dink", o.tol_dink, "Dinkelbach stopping tolerance (0 = 1e-7 * area)");
    sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  };
  auto clustering = [&](CLI::App* sub) {
    sub->add_option("--restarts", o.restarts, "seeded restarts")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "random seed");
    sub->add_option("--tol-energy", o.tol_energy, "sweep stopping tolerance on the energy decrease");
  };

  auto* single = app.add_subcommand("single", "Cheeger set of the domain");
  common(single, false);
  auto* cluster = app.add_subcommand("cluster", "N-Cheeger cluster with validation and structure report");
  common(cluster, true);
  clustering(cluster);
  cluster->add_option("--svg", o.svg, "also render the cluster to this SVG file");
  auto* bounds = app.add_subcommand("bounds", "lower and hexagonal upper bounds around the computed H_N");
  common(bounds, true);
  clustering(bounds);
  auto* verify = app.add_subcommand("verify", "recompute verdicts for a labeling from a cluster report");
  common(verify, false);
  verify->add_option("--labeling", o.labeling, "cluster report JSON")->required();
  auto* spectral = app.add_subcommand("spectral", "first Dirichlet eigenvalue checks");
  common(spectral, false);
  spectral->add_option("--labeling", o.labeling, "cluster report JSON for the partition chain");
  auto* sweep = app.add_subcommand("sweep", "bounds over a range of N as CSV");
  common(sweep, true);
  clustering(sweep);
  auto* render = app.add_subcommand("render", "SVG of a labeling with interfaces and triple points");
  common(render, false);
  render->add_option("--labeling", o.labeling, "cluster report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Run run;
    if (*single) run = cmd_single(o);
    else if (*cluster) run = cmd_cluster(o);
    else if (*bounds) run = cmd_bounds(o);
    else if (*verify) run = cmd_verify(o);
    else if (*spectral) run = cmd_spectral(o);
    else if (*sweep) run = cmd_sweep(o);
    else run = cmd_render(o);
    write_outputs(run.outputs);
    if (run.flagged) std::cerr << "finished with FLAG verdicts\n";
    return run.flagged ? 1 : 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
