#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <random>

#include "softwall/dislocation.hpp"
#include "softwall/edge.hpp"
#include "softwall/errors.hpp"
#include "softwall/parallel.hpp"
#include "softwall/specflow.hpp"

namespace softwall::cli {

using nlohmann::json;

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::ofstream open_out(const Context& ctx, const std::string& name) {
  std::filesystem::create_directories(ctx.out_dir);
  const auto path = std::filesystem::path(ctx.out_dir) / name;
  std::ofstream os(path);
  if (!os) throw Error(ErrorCode::Config, "cannot write " + path.string());
  if (ctx.log) *ctx.log << "wrote " << path.string() << "\n";
  return os;
}

void write_json(const Context& ctx, const std::string& name, const json& j) {
  auto os = open_out(ctx, name);
  os << j.dump(2) << "\n";
}

json gap_json(const Gap& g) { return {{"lo", g.lo}, {"hi", g.hi}, {"bands_below", g.bands_below}}; }

json catalog_json(const GapCatalog& c) {
  json bands = json::array(), gaps = json::array();
  for (const auto& b : c.bands) bands.push_back({b.lo, b.hi});
  for (const auto& g : c.gaps) gaps.push_back(gap_json(g));
  return {{"grid_error", c.grid_error}, {"bands", bands}, {"gaps", gaps}};
}

json crossings_json(const SpectralFlowResult& r) {
  json out = json::array();
  for (const auto& c : r.crossings) out.push_back({{"t_lo", c.t_lo}, {"t_hi", c.t_hi}, {"count", c.signed_count}});
  return out;
}

std::vector<double> k2_points(const RunConfig& cfg) {
  return cfg.is_2d() ? cfg.k2 : std::vector<double>{0.0};
}

json flow_verdict(const RunConfig& cfg, double k2, double E) {
  json v{{"check", "theorem_flow"}, {"model", cfg.model_name}, {"E", E}};
  if (cfg.is_2d()) v["k2"] = k2;
  try {
    TheoremFlowOptions opts;
    opts.t_points = cfg.t_points;
    opts.k_count = cfg.k_count;
    const auto r = verify_theorem_flow(kernel_at(cfg, k2), wall_at(cfg, E), E, cfg.L, opts);
    v["N_of_E"] = r.n_of_e;
    v["flow_counting"] = r.counting.flow;
    v["flow_partition"] = r.partition.flow;
    v["nudged"] = r.counting.nudged;
    v["crossings"] = crossings_json(r.counting);
    v["pass"] = r.pass;
    if (!r.pass) v["reason"] = "flows differ from -N(E)";
  } catch (const Error& e) {
    v["pass"] = false;
    v["reason"] = e.what();
  }
  return v;
}

json density_verdict(const RunConfig& cfg, double E, double t0) {
  json v{{"check", "density"}, {"model", cfg.model_name}, {"E", E}, {"t0", t0}};
  try {
    DensityOptions opts;
    opts.length = cfg.density_length;
    opts.k_count = cfg.k_count;
    const auto r = verify_density(kernel_at(cfg), wall_at(cfg, E), E, t0, cfg.L, opts);
    v["gap"] = gap_json(r.gap);
    v["length"] = r.length;
    v["required"] = r.required;
    v["vacuous"] = r.vacuous;
    v["min_count"] = r.min_count;
    v["worst_lo"] = r.worst_lo;
    v["pass"] = r.pass;
    if (!r.pass) v["reason"] = "an interval holds fewer than the required eigenvalues";
  } catch (const Error& e) {
    v["pass"] = false;
    v["reason"] = e.what();
  }
  return v;
}

json ring_verdict(const RunConfig& cfg, double E, int ell) {
  json v{{"check", "ring"}, {"model", cfg.model_name}, {"E", E}, {"ell", ell}};
  try {
    const auto r = ring_flow_check(*jacobi_of(cfg), E, ell, cfg.wall.sigma, cfg.k_count);
    v["sigma"] = r.sigma;
    v["N_of_E"] = r.n_of_e;
    v["count_t0"] = r.count_t0;
    v["count_t1"] = r.count_t1;
    v["implied_flow"] = r.implied_flow;
    v["pass"] = r.pass;
    if (!r.pass) v["reason"] = "endpoint counts differ from l N(E) and (l-1) N(E)";
  } catch (const Error& e) {
    v["pass"] = false;
    v["reason"] = e.what();
  }
  return v;
}

json fold_verdict(const RunConfig& cfg, std::uint64_t seed) {
  const auto [n, m] = *cfg.cut;
  json v{{"check", "folding"}, {"model", cfg.model_name}, {"samples", cfg.fold_samples}};
  const auto base = presets::wallace();
  const auto cut = presets::wallace_cut(n, m);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  bool pass = true;
  for (int s = 0; s < cfg.fold_samples; ++s) {
    const Vec2 k = u(rng) * base.lattice().a1_star() + u(rng) * base.lattice().a2_star();
    const auto r = folded_fiber_check(base, cut, k);
    worst = std::max(worst, r.max_deviation);
    pass = pass && r.pass;
  }
  v["max_deviation"] = worst;
  v["pass"] = pass;
  if (!pass) v["reason"] = "supercell spectrum differs from the folded spectra";
  return v;
}

int exit_for(const json& verdicts) {
  for (const auto& v : verdicts)
    if (!v.value("pass", false)) return kExitFail;
  return kExitOk;
}

void report(const Context& ctx, const json& verdicts) {
  if (!ctx.log) return;
  for (const auto& v : verdicts) {
    *ctx.log << (v.value("pass", false) ? "PASS " : "FAIL ") << v["check"].get<std::string>() << " "
             << v["model"].get<std::string>();
    if (v.contains("k2")) *ctx.log << " k2=" << v["k2"].get<double>();
    if (v.contains("E")) *ctx.log << " E=" << v["E"].get<double>();
    if (v.contains("t0")) *ctx.log << " t0=" << v["t0"].get<double>();
    if (v.contains("ell")) *ctx.log << " ell=" << v["ell"].get<int>();
    if (v.contains("reason")) *ctx.log << " (" << v["reason"].get<std::string>() << ")";
    *ctx.log << "\n";
  }
}

}  // namespace

int cmd_bands(const RunConfig& cfg, const Context& ctx) {
  if (!cfg.is_2d()) {
    const auto bs = band_structure(*cfg.kernel, cfg.k_count);
    auto os = open_out(ctx, "bands.csv");
    os << "k,band_index,eigenvalue\n";
    for (std::size_t i = 0; i < bs.k_grid.size(); ++i)
      for (std::size_t b = 0; b < bs.curves[i].size(); ++b)
        os << g17(bs.k_grid[i]) << "," << b << "," << g17(bs.curves[i][b]) << "\n";
    json j = catalog_json(gap_catalog(bs));
    j["model"] = cfg.model_name;
    write_json(ctx, "gaps.json", j);
    return kExitOk;
  }
  const auto& k2 = cfg.k2;
  std::vector<GapCatalog> cats(k2.size());
  parallel_for(k2.size(), [&](std::size_t i) { cats[i] = gap_catalog(band_structure(kernel_at(cfg, k2[i]), cfg.k_count)); });
  auto os = open_out(ctx, "bands.csv");
  os << "k2,band_index,lo,hi\n";
  json per_k2 = json::array();
  for (std::size_t i = 0; i < k2.size(); ++i) {
    for (std::size_t b = 0; b < cats[i].bands.size(); ++b)
      os << g17(k2[i]) << "," << b << "," << g17(cats[i].bands[b].lo) << "," << g17(cats[i].bands[b].hi) << "\n";
    json c = catalog_json(cats[i]);
    c["k2"] = k2[i];
    per_k2.push_back(c);
  }
  const int lower = cfg.model2d->orbitals() / 2 - 1;
  const auto scan = scan_fiber_gap(*cfg.model2d, k2, lower);
  write_json(ctx, "gaps.json",
             {{"model", cfg.model_name},
              {"k2", per_k2},
              {"fiber_gap", {{"lower_band", lower}, {"min_gap", scan.min_gap}, {"argmin", scan.argmin}}}});
  return kExitOk;
}

int cmd_edge_sweep(const RunConfig& cfg, const Context& ctx) {
  const auto grid = uniform_grid(cfg.t_lo, cfg.t_hi, cfg.t_points);
  const double E = cfg.energies.front();
  if (!cfg.is_2d()) {
    const auto sweep = edge_sweep_t(*cfg.kernel, wall_at(cfg, E), cfg.L, grid);
    auto os = open_out(ctx, "edge.csv");
    write_edge_csv(os, sweep);
    return kExitOk;
  }
  const SoftWallProfile wall = wall_at(cfg, E);
  auto index = open_out(ctx, "edge_index.csv");
  index << "file,k2\n";
  for (std::size_t i = 0; i < cfg.k2.size(); ++i) {
    char name[40];
    std::snprintf(name, sizeof name, "edge_k2_%04zu.csv", i);
    const auto sweep = edge_sweep_t(kernel_at(cfg, cfg.k2[i]), wall, cfg.L, grid);
    auto os = open_out(ctx, name);
    write_edge_csv(os, sweep);
    index << name << "," << g17(cfg.k2[i]) << "\n";
  }
  return kExitOk;
}

int cmd_flow(const RunConfig& cfg, const Context& ctx) {
  json out = json::array();
  for (double k2 : k2_points(cfg))
    for (double E : cfg.energies) out.push_back(flow_verdict(cfg, k2, E));
  write_json(ctx, "flow.json", out);
  report(ctx, out);
  return exit_for(out);
}

int cmd_ring(const RunConfig& cfg, const Context& ctx) {
  const auto jac = jacobi_of(cfg);
  if (!jac) throw Error(ErrorCode::Config, "/model: rings need a 1D Jacobi model");
  json out = json::array();
  const std::vector<int> ells = cfg.rings.empty() ? std::vector<int>{20} : cfg.rings;
  for (double E : cfg.energies)
    for (int ell : ells) out.push_back(ring_verdict(cfg, E, ell));
  json doc{{"rings", out}};
  if (cfg.rank) {
    const double E = cfg.energies.front();
    const double sigma = cfg.wall.sigma.value_or(E + 4.0 * jac->c_ab() + 1.0);
    const auto conv = projector_rank_convergence(*jac, sigma, E, cfg.rank->window, cfg.rank->t, cfg.rank->ells);
    auto os = open_out(ctx, "rank.csv");
    write_rank_csv(os, conv);
    doc["rank"] = {{"E", E}, {"sigma", sigma}, {"window", {cfg.rank->window.lo, cfg.rank->window.hi}},
                   {"t", cfg.rank->t}, {"reference_count", conv.reference.count_in_window},
                   {"ell_star", conv.ell_star ? json(*conv.ell_star) : json(nullptr)}};
  }
  write_json(ctx, "ring.json", doc);
  report(ctx, out);
  return exit_for(out);
}

json verify_checks(const RunConfig& cfg, std::uint64_t seed) {
  json out = json::array();
  for (double k2 : k2_points(cfg))
    for (double E : cfg.energies) out.push_back(flow_verdict(cfg, k2, E));
  if (!cfg.is_2d()) {
    for (double E : cfg.energies)
      for (double t0 : cfg.density_t0) out.push_back(density_verdict(cfg, E, t0));
    if (jacobi_of(cfg))
      for (double E : cfg.energies)
        for (int ell : cfg.rings) out.push_back(ring_verdict(cfg, E, ell));
  }
  if (cfg.cut) out.push_back(fold_verdict(cfg, seed));
  return out;
}

int cmd_verify(const RunConfig& cfg, const Context& ctx) {
  const json out = verify_checks(cfg, ctx.seed);
  write_json(ctx, "verify.json", {{"checks", out}});
  report(ctx, out);
  return exit_for(out);
}

int cmd_verify_default(const Context& ctx) {
  const json suite = json::array({
      {{"model", "ssh"}, {"wall", {{"nu", 1.0}}}, {"energies", {0.0, 2.5}}, {"box", {{"L", 100}}},
       {"ring", {{"ell", {5, 20, 64}}}}},
      {{"model", "ssh"}, {"wall", {{"nu", 0.5}}}, {"energies", {0.0}}, {"box", {{"L", 200}}},
       {"density", {{"t0", {0.0, 0.3, 0.7}}, {"length", 0.5}}}},
      {{"model", "wallace"}, {"sweep", {{"k2", {0.3}}}}, {"energies", {0.0}}, {"box", {{"L", 150}}}},
      {{"model", "wallace_armchair"}, {"sweep", {{"k2", {1.0 / 6.0}}}}, {"energies", {0.0}}, {"box", {{"L", 150}}}},
      {{"model", "wallace_cut_-1_2"}, {"sweep", {{"k2", {1.0 / 6.0}}}}, {"energies", {0.0}}, {"box", {{"L", 150}}}},
  });
  json out = json::array();
  for (const auto& j : suite)
    for (const auto& v : verify_checks(parse_config(j), ctx.seed)) out.push_back(v);
  write_json(ctx, "verify.json", {{"checks", out}});
  report(ctx, out);
  return exit_for(out);
}

}  // namespace softwall::cli
