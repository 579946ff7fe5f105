#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "softwall/errors.hpp"
#include "softwall/model_io.hpp"

using namespace softwall;
using nlohmann::json;

TEST_SUITE("model_io") {

TEST_CASE("1D kernel round trip") {
  const auto k = presets::ssh(cplx(1.5, 0.25), 0.5).to_kernel();
  const auto back = kernel_from_json(kernel_to_json(k));
  CHECK(back.block_dim() == 2);
  for (int n : {-1, 0, 1}) CHECK(max_abs(back.block(n) - k.block(n)) == 0.0);
}

TEST_CASE("1D kernel from text, imaginary part optional") {
  const auto j = json::parse(R"({"N": 1, "blocks": [{"n": 0, "re": [[0.5]]},
                                                   {"n": 1, "re": [[1.0]]}, {"n": -1, "re": [[1.0]]}]})");
  const auto k = kernel_from_json(j);
  CHECK(k.range() == 1);
  CHECK(k.block(0)(0, 0) == cplx(0.5, 0.0));
}

TEST_CASE("malformed 1D models") {
  auto config_error = [](const char* text) {
    try {
      kernel_from_json(json::parse(text));
    } catch (const Error& e) {
      return e.code() == ErrorCode::Config;
    }
    return false;
  };
  CHECK(config_error(R"({"blocks": []})"));
  CHECK(config_error(R"({"N": 2, "blocks": [{"n": 0, "re": [[1]]}]})"));
  CHECK(config_error(R"({"N": 1, "blocks": [{"n": 1, "re": [[1]]}]})"));
  CHECK(config_error(R"({"N": 1, "blocks": [{"n": 0, "re": [[1]]}, {"n": 0, "re": [[1]]}]})"));
  CHECK(config_error(R"({"N": 0, "blocks": []})"));
}

TEST_CASE("2D model round trip") {
  const auto tb = presets::wallace();
  const auto back = model2d_from_json(model2d_to_json(tb));
  CHECK(back.orbitals() == 2);
  CHECK((back.lattice().a1() - tb.lattice().a1()).norm() == 0.0);
  CHECK(back.blocks().size() == tb.blocks().size());
  for (const auto& [r, m] : tb.blocks()) CHECK(max_abs(back.block(r) - m) == 0.0);
}

TEST_CASE("syntax errors carry line and column") {
  const auto dir = std::filesystem::temp_directory_path() / "softwall_io_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "bad.json").string();
  {
    std::ofstream os(path);
    os << "{\n  \"N\": 1,\n  \"blocks\": [,]\n}\n";
  }
  try {
    read_json_file(path);
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    CHECK(std::string(e.what()).find("bad.json:3:14") != std::string::npos);
  }
  CHECK_THROWS_AS(read_json_file((dir / "missing.json").string()), Error);
}

}  // TEST_SUITE
