#include "run_config.hpp"

#include <cstdio>
#include <filesystem>
#include <set>

#include "softwall/errors.hpp"
#include "softwall/model_io.hpp"

namespace softwall::cli {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
  throw Error(ErrorCode::Config, where + ": " + msg);
}

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(where, "expected an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) fail(where + "/" + k, "unknown key");
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::vector<double> numbers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], where + "/" + std::to_string(i)));
  return out;
}

std::vector<int> integers(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer(j[i], where + "/" + std::to_string(i)));
  return out;
}

cplx complex_value(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], where + "/0"), number(j[1], where + "/1")};
  fail(where, "expected a number or a [re, im] pair");
}

std::vector<double> inclusive_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  for (int j = 0; j < count; ++j) g[j] = count == 1 ? lo : lo + (hi - lo) * j / (count - 1);
  return g;
}

void parse_model(const json& j, const std::string& base_dir, RunConfig& cfg) {
  const std::string where = "/model";
  json spec = j;
  if (spec.is_string()) spec = json{{"preset", spec}};
  if (!spec.is_object()) fail(where, "expected a preset name or an object");

  if (spec.contains("file")) {
    only_keys(spec, where, {"file"});
    if (!spec["file"].is_string()) fail(where + "/file", "expected a path");
    std::filesystem::path p = spec["file"].get<std::string>();
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    spec = read_json_file(p.string());
    cfg.model_name = p.stem().string();
  }

  if (spec.contains("preset")) {
    if (!spec["preset"].is_string()) fail(where + "/preset", "expected a string");
    const std::string name = spec["preset"].get<std::string>();
    cfg.model_name = name;
    if (name == "ssh") {
      only_keys(spec, where, {"preset", "J1", "J2"});
      const cplx j1 = spec.contains("J1") ? complex_value(spec["J1"], where + "/J1") : cplx(1.5, 0.0);
      const cplx j2 = spec.contains("J2") ? complex_value(spec["J2"], where + "/J2") : cplx(0.5, 0.0);
      cfg.kernel = presets::ssh(j1, j2).to_kernel();
      return;
    }
    only_keys(spec, where, {"preset"});
    if (name == "wallace") {
      cfg.model2d = presets::wallace();
      return;
    }
    if (name == "wallace_armchair") {
      cfg.model2d = presets::wallace_armchair().model;
      cfg.cut = {{-1, 1}};
      return;
    }
    int n = 0, m = 0;
    char tail = 0;
    if (std::sscanf(name.c_str(), "wallace_cut_%d_%d%c", &n, &m, &tail) == 2) {
      try {
        cfg.model2d = presets::wallace_cut(n, m).model;
      } catch (const Error& e) {
        fail(where + "/preset", e.what());
      }
      cfg.cut = {{n, m}};
      return;
    }
    fail(where + "/preset", "unknown preset \"" + name + "\"");
  }

  try {
    if (spec.contains("M")) {
      cfg.model2d = model2d_from_json(spec);
      if (cfg.model_name.empty()) cfg.model_name = "model2d";
    } else {
      cfg.kernel = kernel_from_json(spec);
      if (cfg.model_name.empty()) cfg.model_name = "model";
    }
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

void parse_wall(const json& j, RunConfig& cfg) {
  const std::string where = "/wall";
  only_keys(j, where, {"type", "nu", "offsets", "x", "w", "steep", "sigma"});
  WallConfig& w = cfg.wall;
  if (j.contains("type")) {
    if (!j["type"].is_string()) fail(where + "/type", "expected a string");
    w.type = j["type"].get<std::string>();
  }
  if (w.type != "linear_ramp" && w.type != "smooth_sqrt" && w.type != "custom_table" && w.type != "zero")
    fail(where + "/type", "unknown wall \"" + w.type + "\"");
  if (j.contains("nu")) w.nu = number(j["nu"], where + "/nu");
  if (!(w.nu > 0.0)) fail(where + "/nu", "must be positive");
  if (j.contains("offsets")) w.offsets = numbers(j["offsets"], where + "/offsets");
  if (j.contains("x")) w.table_x = numbers(j["x"], where + "/x");
  if (j.contains("w")) w.table_w = numbers(j["w"], where + "/w");
  if (w.type == "custom_table" && (w.table_x.size() < 2 || w.table_x.size() != w.table_w.size()))
    fail(where, "custom_table needs matching x and w arrays of length >= 2");
  if (j.contains("steep")) {
    if (!j["steep"].is_boolean()) fail(where + "/steep", "expected a boolean");
    w.steep = j["steep"].get<bool>();
  }
  if (j.contains("sigma")) w.sigma = number(j["sigma"], where + "/sigma");
}

}  // namespace

RunConfig parse_config(const json& j, const std::string& base_dir) {
  only_keys(j, "", {"model", "wall", "sweep", "box", "energies", "ring", "rank", "density", "fold", "output"});
  RunConfig cfg;
  if (!j.contains("model")) fail("/model", "missing");
  parse_model(j["model"], base_dir, cfg);

  const bool ssh_defaults = cfg.model_name == "ssh";
  if (j.contains("wall")) parse_wall(j["wall"], cfg);
  if (cfg.wall.type == "linear_ramp" && cfg.wall.offsets.empty()) {
    if (ssh_defaults) {
      cfg.wall.offsets = {0.0, 0.25};
    } else {
      cfg.wall.offsets.assign(cfg.is_2d() ? 1 : cfg.kernel->block_dim(), 0.0);
    }
  }
  if (cfg.wall.type == "linear_ramp" && !cfg.is_2d() &&
      static_cast<int>(cfg.wall.offsets.size()) != cfg.kernel->block_dim())
    fail("/wall/offsets", "needs one offset per orbital");
  if (cfg.wall.type == "linear_ramp" && cfg.is_2d() && cfg.wall.offsets.size() != 1)
    fail("/wall/offsets", "2D walls are scalar and take a single offset");
  if (cfg.wall.steep && !jacobi_of(cfg)) fail("/wall/steep", "steep walls need a 1D Jacobi model");

  if (j.contains("sweep")) {
    const json& s = j["sweep"];
    only_keys(s, "/sweep", {"t_points", "t_range", "k2", "k2_points", "k_count"});
    if (s.contains("t_points")) cfg.t_points = integer(s["t_points"], "/sweep/t_points");
    if (s.contains("t_range")) {
      const auto r = numbers(s["t_range"], "/sweep/t_range");
      if (r.size() != 2 || !(r[0] < r[1])) fail("/sweep/t_range", "expected [lo, hi] with lo < hi");
      cfg.t_lo = r[0];
      cfg.t_hi = r[1];
    }
    if (s.contains("k2") && s.contains("k2_points")) fail("/sweep", "give either k2 or k2_points");
    if (s.contains("k2")) cfg.k2 = numbers(s["k2"], "/sweep/k2");
    if (s.contains("k2_points")) {
      const int n = integer(s["k2_points"], "/sweep/k2_points");
      if (n < 1) fail("/sweep/k2_points", "must be >= 1");
      cfg.k2 = inclusive_grid(-0.5, 0.5, n);
    }
    if (s.contains("k_count")) cfg.k_count = integer(s["k_count"], "/sweep/k_count");
  }
  if (cfg.t_points < 2) fail("/sweep/t_points", "must be >= 2");
  if (cfg.k_count < 8) fail("/sweep/k_count", "must be >= 8");
  if (cfg.is_2d() && cfg.k2.empty()) cfg.k2 = inclusive_grid(-0.5, 0.5, 201);

  if (j.contains("box")) {
    only_keys(j["box"], "/box", {"L"});
    if (j["box"].contains("L")) cfg.L = integer(j["box"]["L"], "/box/L");
  }
  const int range = cfg.is_2d() ? kernel_at(cfg, 0.0).range() : cfg.kernel->range();
  if (cfg.L < range + 2) fail("/box/L", "must be >= model range + 2 = " + std::to_string(range + 2));

  if (j.contains("energies")) cfg.energies = numbers(j["energies"], "/energies");
  if (cfg.energies.empty()) fail("/energies", "needs at least one energy");

  if (j.contains("ring")) {
    only_keys(j["ring"], "/ring", {"ell"});
    cfg.rings = integers(j["ring"].value("ell", json::array()), "/ring/ell");
    for (int ell : cfg.rings)
      if (ell < 5) fail("/ring/ell", "ring sizes must be >= 5");
  }
  if (j.contains("rank")) {
    only_keys(j["rank"], "/rank", {"window", "t", "ell"});
    RankConfig r;
    if (j["rank"].contains("window")) {
      const auto w = numbers(j["rank"]["window"], "/rank/window");
      if (w.size() != 2 || !(w[0] < w[1])) fail("/rank/window", "expected [lo, hi] with lo < hi");
      r.window = {w[0], w[1]};
    }
    if (j["rank"].contains("t")) r.t = number(j["rank"]["t"], "/rank/t");
    if (j["rank"].contains("ell")) r.ells = integers(j["rank"]["ell"], "/rank/ell");
    for (int ell : r.ells)
      if (ell < 5) fail("/rank/ell", "ring sizes must be >= 5");
    cfg.rank = r;
  }
  if ((!cfg.rings.empty() || cfg.rank) && !jacobi_of(cfg)) fail("/ring", "rings need a 1D Jacobi model");

  if (j.contains("density")) {
    only_keys(j["density"], "/density", {"t0", "length"});
    cfg.density_t0 = numbers(j["density"].value("t0", json::array()), "/density/t0");
    if (j["density"].contains("length")) cfg.density_length = number(j["density"]["length"], "/density/length");
  }
  if (j.contains("fold")) {
    only_keys(j["fold"], "/fold", {"samples"});
    cfg.fold_samples = integer(j["fold"].value("samples", json(100)), "/fold/samples");
  }
  if (j.contains("output")) {
    if (!j["output"].is_string()) fail("/output", "expected a path");
    cfg.output = j["output"].get<std::string>();
  }
  return cfg;
}

SoftWallProfile base_wall(const RunConfig& cfg, int block_dim) {
  const WallConfig& w = cfg.wall;
  if (w.type == "linear_ramp") return walls::linear_ramp(w.nu, w.offsets);
  if (w.type == "zero") return walls::zero(block_dim);
  SoftWallProfile scalar = walls::smooth_sqrt();
  if (w.type == "custom_table") {
    std::vector<CMatrix> ws;
    for (double v : w.table_w) ws.push_back(CMatrix::Constant(1, 1, cplx(v, 0.0)));
    scalar = walls::custom_table(w.table_x, ws);
  }
  return block_dim == 1 ? scalar : walls::broadcast(scalar, block_dim);
}

ConvolutionKernel kernel_at(const RunConfig& cfg, double k2) {
  if (cfg.kernel) return *cfg.kernel;
  return reduce_to_1d(*cfg.model2d, k2);
}

SoftWallProfile wall_at(const RunConfig& cfg, double E) {
  if (cfg.is_2d()) return wall2d_profile(base_wall(cfg, 1), cfg.model2d->lattice());
  SoftWallProfile w = base_wall(cfg, cfg.kernel->block_dim());
  if (!cfg.wall.steep) return w;
  return steep_wall(w, *jacobi_of(cfg), E, cfg.wall.sigma).profile;
}

std::optional<PeriodicJacobi> jacobi_of(const RunConfig& cfg) {
  if (!cfg.kernel || cfg.kernel->range() > 1) return std::nullopt;
  return PeriodicJacobi::from_kernel(*cfg.kernel);
}

}  // namespace softwall::cli
