#include "softwall/model_io.hpp"

#include <fstream>
#include <sstream>

#include "softwall/errors.hpp"

namespace softwall {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::Config, msg); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::vector<std::vector<double>> real_rows(const json& j, const char* what) {
  if (!j.is_array()) fail(std::string(what) + " must be an array of rows");
  std::vector<std::vector<double>> rows;
  for (const auto& r : j) {
    if (!r.is_array()) fail(std::string(what) + " must be an array of rows");
    std::vector<double> row;
    for (const auto& x : r) {
      if (!x.is_number()) fail(std::string(what) + " entries must be numbers");
      row.push_back(x.get<double>());
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix block_from_json(const json& j, int dim) {
  const auto re = real_rows(field(j, "re"), "re");
  const auto im = j.contains("im") ? real_rows(j.at("im"), "im")
                                   : std::vector<std::vector<double>>(dim, std::vector<double>(dim, 0.0));
  auto check = [&](const std::vector<std::vector<double>>& m, const char* what) {
    if (static_cast<int>(m.size()) != dim) fail(std::string(what) + " has wrong row count");
    for (const auto& r : m)
      if (static_cast<int>(r.size()) != dim) fail(std::string(what) + " has wrong column count");
  };
  check(re, "re");
  check(im, "im");
  CMatrix out(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) out(r, c) = cplx(re[r][c], im[r][c]);
  return out;
}

json block_to_json(const CMatrix& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json rr = json::array(), ii = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

int positive_int(const json& j, const char* key) {
  const auto& v = field(j, key);
  if (!v.is_number_integer() || v.get<int>() < 1) fail(std::string("\"") + key + "\" must be a positive integer");
  return v.get<int>();
}

Vec2 vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(std::string(what) + " must be a 2-vector");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

ConvolutionKernel kernel_from_json(const json& j) {
  const int dim = positive_int(j, "N");
  const auto& blocks = field(j, "blocks");
  if (!blocks.is_array()) fail("\"blocks\" must be an array");
  std::map<int, CMatrix> map;
  for (const auto& b : blocks) {
    const auto& n = field(b, "n");
    if (!n.is_number_integer()) fail("block index \"n\" must be an integer");
    if (!map.emplace(n.get<int>(), block_from_json(b, dim)).second)
      fail("duplicate block n = " + std::to_string(n.get<int>()));
  }
  try {
    return ConvolutionKernel(dim, std::move(map));
  } catch (const Error& e) {
    fail(e.what());
  }
}

json kernel_to_json(const ConvolutionKernel& kernel) {
  json blocks = json::array();
  for (const auto& [n, m] : kernel.blocks()) {
    json b = block_to_json(m);
    b["n"] = n;
    blocks.push_back(b);
  }
  return {{"N", kernel.block_dim()}, {"blocks", blocks}};
}

TightBinding2D model2d_from_json(const json& j) {
  const int dim = positive_int(j, "M");
  const Vec2 a1 = vec2(field(j, "a1"), "a1");
  const Vec2 a2 = vec2(field(j, "a2"), "a2");
  const auto& atoms_j = field(j, "atoms");
  if (!atoms_j.is_array() || static_cast<int>(atoms_j.size()) != dim) fail("\"atoms\" must list M positions");
  std::vector<Vec2> atoms;
  for (const auto& a : atoms_j) atoms.push_back(vec2(a, "atom"));
  std::map<LatticeVector, CMatrix> map;
  const auto& blocks = field(j, "blocks");
  if (!blocks.is_array()) fail("\"blocks\" must be an array");
  for (const auto& b : blocks) {
    const auto& r = field(b, "R");
    if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
      fail("\"R\" must be an integer pair");
    const LatticeVector R{r[0].get<int>(), r[1].get<int>()};
    if (!map.emplace(R, block_from_json(b, dim)).second) fail("duplicate block R");
  }
  try {
    return TightBinding2D(BravaisLattice2D(a1, a2, std::move(atoms)), std::move(map));
  } catch (const Error& e) {
    fail(e.what());
  }
}

json model2d_to_json(const TightBinding2D& tb) {
  const auto& lat = tb.lattice();
  json atoms = json::array();
  for (const auto& a : lat.atoms()) atoms.push_back({a.x(), a.y()});
  json blocks = json::array();
  for (const auto& [R, m] : tb.blocks()) {
    json b = block_to_json(m);
    b["R"] = {R.i, R.j};
    blocks.push_back(b);
  }
  return {{"a1", {lat.a1().x(), lat.a1().y()}},
          {"a2", {lat.a2().x(), lat.a2().y()}},
          {"atoms", atoms},
          {"M", tb.orbitals()},
          {"blocks", blocks}};
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

}  // namespace softwall
