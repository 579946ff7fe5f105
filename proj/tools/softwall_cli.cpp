#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "softwall/errors.hpp"
#include "softwall/model_io.hpp"
#include "softwall/parallel.hpp"

using namespace softwall;
using namespace softwall::cli;

int main(int argc, char** argv) {
  CLI::App app{"Soft-wall edge spectra, spectral flow and verification"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  std::uint64_t seed = 1;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--threads", threads, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", seed, "seed for randomized checks");
  auto* bands = app.add_subcommand("bands", "band CSV and gap catalog");
  auto* edge = app.add_subcommand("edge-sweep", "edge spectra against t");
  auto* flow = app.add_subcommand("flow", "spectral flow by counting and by partition");
  auto* verify = app.add_subcommand("verify", "consolidated verdicts; default suite without --config");
  auto* ring = app.add_subcommand("ring", "dislocated ring counts and projector-rank table");
  for (auto* sub : {bands, edge, flow, verify, ring}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  set_thread_count(threads);
  Context ctx{out_dir, seed, &std::cerr};
  try {
    if (config_path.empty()) {
      if (!verify->parsed()) {
        std::cerr << "error: --config is required for this subcommand\n";
        return kExitUsage;
      }
      if (ctx.out_dir.empty()) ctx.out_dir = ".";
      return cmd_verify_default(ctx);
    }
    const auto base = std::filesystem::path(config_path).parent_path().string();
    const RunConfig cfg = parse_config(read_json_file(config_path), base.empty() ? "." : base);
    if (ctx.out_dir.empty()) ctx.out_dir = cfg.output;
    if (bands->parsed()) return cmd_bands(cfg, ctx);
    if (edge->parsed()) return cmd_edge_sweep(cfg, ctx);
    if (flow->parsed()) return cmd_flow(cfg, ctx);
    if (ring->parsed()) return cmd_ring(cfg, ctx);
    return cmd_verify(cfg, ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Config ? kExitUsage : kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
