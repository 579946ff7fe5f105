#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "json.hpp"
#include "run_config.hpp"

namespace softwall::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct Context {
  std::string out_dir;
  std::uint64_t seed = 1;
  std::ostream* log = nullptr;
};

int cmd_bands(const RunConfig& cfg, const Context& ctx);
int cmd_edge_sweep(const RunConfig& cfg, const Context& ctx);
int cmd_flow(const RunConfig& cfg, const Context& ctx);
int cmd_ring(const RunConfig& cfg, const Context& ctx);
int cmd_verify(const RunConfig& cfg, const Context& ctx);

/// SSH and Wallace presets exercised by `verify` without a config.
int cmd_verify_default(const Context& ctx);

/// One verdict object per check; shared by cmd_verify and the default suite.
nlohmann::json verify_checks(const RunConfig& cfg, std::uint64_t seed);

}  // namespace softwall::cli
