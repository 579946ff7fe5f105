#pragma once

// JSON model files.
//   1D: {"N": int, "blocks": [{"n": int, "re": [[..]], "im": [[..]]}]}
//   2D: {"a1": [..], "a2": [..], "atoms": [[..]], "M": int,
//        "blocks": [{"R": [i, j], "re": [[..]], "im": [[..]]}]}
// Matrices are row-major; "im" may be omitted. Malformed input throws Error(Config).

#include <string>

#include "json.hpp"

#include "softwall/lattice2d.hpp"
#include "softwall/tb_core.hpp"

namespace softwall {

ConvolutionKernel kernel_from_json(const nlohmann::json& j);
nlohmann::json kernel_to_json(const ConvolutionKernel& kernel);

TightBinding2D model2d_from_json(const nlohmann::json& j);
nlohmann::json model2d_to_json(const TightBinding2D& tb);

/// Parses the file; syntax errors are reported as "path:line:col: message".
nlohmann::json read_json_file(const std::string& path);

}  // namespace softwall
