#include "softwall/lattice2d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "softwall/errors.hpp"
#include "softwall/parallel.hpp"

namespace softwall {

BravaisLattice2D::BravaisLattice2D(Vec2 a1, Vec2 a2, std::vector<Vec2> atoms)
    : a1_(std::move(a1)), a2_(std::move(a2)), atoms_(std::move(atoms)) {
  Eigen::Matrix2d A;
  A.col(0) = a1_;
  A.col(1) = a2_;
  if (std::abs(A.determinant()) <= 1e-12) {
    throw Error(ErrorCode::InvalidModel, "lattice vectors are degenerate (|det| <= 1e-12)");
  }
  if (atoms_.empty()) throw Error(ErrorCode::InvalidModel, "lattice needs at least one atom");
  const Eigen::Matrix2d B = 2.0 * std::numbers::pi * A.inverse().transpose();
  b1_ = B.col(0);
  b2_ = B.col(1);
}

double BravaisLattice2D::cell_area() const { return std::abs(a1_.x() * a2_.y() - a1_.y() * a2_.x()); }

TightBinding2D::TightBinding2D(BravaisLattice2D lattice, std::map<LatticeVector, CMatrix> blocks)
    : lattice_(std::move(lattice)), blocks_(std::move(blocks)) {
  const int m = lattice_.atom_count();
  for (const auto& [r, h] : blocks_) {
    const std::string where = "h(" + std::to_string(r.i) + ", " + std::to_string(r.j) + ")";
    if (h.rows() != m || h.cols() != m) throw Error(ErrorCode::InvalidModel, where + " must be M x M");
    const auto partner = blocks_.find(-r);
    if (partner == blocks_.end()) throw Error(ErrorCode::InvalidModel, where + " has no partner h(-R)");
    if (max_abs(partner->second - h.adjoint()) >= kHermitianTol) {
      throw Error(ErrorCode::InvalidModel, "h(-R) != h(R)^* at " + where);
    }
  }
}

CMatrix TightBinding2D::block(LatticeVector r) const {
  const auto it = blocks_.find(r);
  if (it == blocks_.end()) return CMatrix::Zero(orbitals(), orbitals());
  return it->second;
}

CMatrix bloch2d(const TightBinding2D& tb, const Vec2& k) {
  const int m = tb.orbitals();
  CMatrix hk = CMatrix::Zero(m, m);
  for (const auto& [r, h] : tb.blocks()) {
    hk += std::polar(1.0, -k.dot(tb.lattice().point(r))) * h;
  }
  return hk;
}

ConvolutionKernel reduce_to_1d(const TightBinding2D& tb, double k2_fraction) {
  const int m = tb.orbitals();
  std::map<int, CMatrix> blocks;
  for (const auto& [r, h] : tb.blocks()) {
    auto it = blocks.try_emplace(r.i, CMatrix::Zero(m, m)).first;
    it->second += std::polar(1.0, -2.0 * std::numbers::pi * k2_fraction * r.j) * h;
  }
  return ConvolutionKernel(m, std::move(blocks));
}

Vec2 momentum(const BravaisLattice2D& lat, double k1, double k2_fraction) {
  return (k1 / (2.0 * std::numbers::pi)) * lat.a1_star() + k2_fraction * lat.a2_star();
}

LatticeVector to_cut_coordinates(int n, int m, LatticeVector r) {
  const int q = r.j / m;
  const int p = r.i / n - q;
  return {p, q};
}

CommensurateCut supercell_cut(const TightBinding2D& tb, int n, int m) {
  if (n == 0 || m == 0) throw Error(ErrorCode::ZeroIndex, "cut indices must be nonzero");
  if (std::gcd(std::abs(n), std::abs(m)) != 1) {
    throw Error(ErrorCode::NotCoprime, "gcd(" + std::to_string(n) + ", " + std::to_string(m) + ") != 1");
  }
  const auto& lat = tb.lattice();
  const int an = std::abs(n);
  const int am = std::abs(m);
  const int L = an * am;
  std::vector<LatticeVector> sites;
  for (int i = 0; i < an; ++i) {
    for (int j = 0; j < am; ++j) sites.push_back({i, j});
  }
  const int M = tb.orbitals();
  std::vector<Vec2> atoms;
  for (int a = 0; a < M; ++a) {
    for (const auto& y : sites) atoms.push_back(lat.atoms()[static_cast<std::size_t>(a)] + lat.point(y));
  }
  BravaisLattice2D super(n * lat.a1(), n * lat.a1() + m * lat.a2(), std::move(atoms));

  std::map<LatticeVector, CMatrix> blocks;
  for (int p = 0; p < L; ++p) {
    for (int q = 0; q < L; ++q) {
      const auto& yp = sites[static_cast<std::size_t>(p)];
      const auto& yq = sites[static_cast<std::size_t>(q)];
      for (const auto& [r, h] : tb.blocks()) {
        const LatticeVector rp = r + yp - yq;
        if (rp.i % n != 0 || rp.j % m != 0) continue;
        auto it = blocks.try_emplace(to_cut_coordinates(n, m, rp), CMatrix::Zero(L * M, L * M)).first;
        for (int a = 0; a < M; ++a) {
          for (int b = 0; b < M; ++b) it->second(a * L + p, b * L + q) += h(a, b);
        }
      }
    }
  }
  return CommensurateCut{n, m, std::move(sites), TightBinding2D(std::move(super), std::move(blocks))};
}

FoldCheck folded_fiber_check(const TightBinding2D& tb, const CommensurateCut& cut, const Vec2& k) {
  FoldCheck r;
  r.supercell = eigvalsh_dense(bloch2d(cut.model, k));
  const auto& lat = tb.lattice();
  const int an = std::abs(cut.n);
  const int am = std::abs(cut.m);
  for (int alpha = 0; alpha < an; ++alpha) {
    for (int beta = 0; beta < am; ++beta) {
      const Vec2 K = (static_cast<double>(alpha) / an) * lat.a1_star() + (static_cast<double>(beta) / am) * lat.a2_star();
      const auto ev = eigvalsh_dense(bloch2d(tb, k + K));
      r.folded.insert(r.folded.end(), ev.begin(), ev.end());
    }
  }
  std::sort(r.folded.begin(), r.folded.end());
  if (r.folded.size() != r.supercell.size()) {
    r.max_deviation = std::numeric_limits<double>::infinity();
    return r;
  }
  for (std::size_t i = 0; i < r.folded.size(); ++i) {
    r.max_deviation = std::max(r.max_deviation, std::abs(r.folded[i] - r.supercell[i]));
  }
  r.pass = r.max_deviation <= kFoldTol;
  return r;
}

CMatrix wall2d_block(const SoftWallProfile& v, const BravaisLattice2D& lat, LatticeVector r, double t) {
  if (v.block_dim() != 1) throw Error(ErrorCode::InvalidModel, "2D walls need a scalar profile");
  const int m = lat.atom_count();
  const Vec2 perp = lat.a2_perp();
  const Vec2 base = lat.point(r) - t * lat.a1();
  CMatrix w = CMatrix::Zero(m, m);
  for (int a = 0; a < m; ++a) w(a, a) = v(perp.dot(base + lat.atoms()[static_cast<std::size_t>(a)]))(0, 0);
  return w;
}

SoftWallProfile wall2d_profile(const SoftWallProfile& v, const BravaisLattice2D& lat) {
  if (v.block_dim() != 1) throw Error(ErrorCode::InvalidModel, "2D walls need a scalar profile");
  const Vec2 perp = lat.a2_perp();
  const double s = perp.dot(lat.a1());
  std::vector<double> offsets;
  for (const auto& x : lat.atoms()) offsets.push_back(perp.dot(x));
  const double omax = *std::max_element(offsets.begin(), offsets.end());
  const int m = lat.atom_count();
  auto eval = [v, s, offsets, m](double x) -> CMatrix {
    CMatrix w = CMatrix::Zero(m, m);
    for (int a = 0; a < m; ++a) w(a, a) = v(s * x + offsets[static_cast<std::size_t>(a)])(0, 0);
    return w;
  };
  auto sat = [v, s, omax](double level) -> std::optional<double> {
    const auto xv = v.saturation_point(level);
    if (!xv) return std::nullopt;
    return (*xv - omax) / s;
  };
  return SoftWallProfile(m, eval, v.lipschitz() * std::abs(s), "2d(" + v.name() + ")", sat);
}

CMatrix chain_truncation(const HoppingChain& chain, int sites) {
  if (chain.hops.empty() || chain.onsite.size() != chain.hops.size()) {
    throw Error(ErrorCode::InvalidModel, "chain needs matching, non-empty onsite and hop lists");
  }
  const auto K = chain.hops.size();
  CMatrix h = CMatrix::Zero(sites, sites);
  for (int j = 0; j < sites; ++j) {
    h(j, j) = chain.onsite[static_cast<std::size_t>(j) % K];
    if (j + 1 < sites) {
      const cplx J = chain.hops[static_cast<std::size_t>(j) % K];
      h(j, j + 1) = J;
      h(j + 1, j) = std::conj(J);
    }
  }
  return h;
}

GaugeTransform gauge_transform(const HoppingChain& chain, int sites) {
  GaugeTransform g;
  g.stripped = chain;
  for (auto& J : g.stripped.hops) J = std::abs(J);
  g.phases.assign(static_cast<std::size_t>(std::max(sites, 0)), 0.0);
  const auto K = chain.hops.size();
  for (int j = 0; j + 1 < sites; ++j) {
    g.phases[static_cast<std::size_t>(j) + 1] =
        g.phases[static_cast<std::size_t>(j)] + std::arg(chain.hops[static_cast<std::size_t>(j) % K]);
  }
  return g;
}

namespace presets {

TightBinding2D wallace() {
  const double r3 = std::sqrt(3.0);
  const Vec2 a1(0.5, -0.5 * r3);
  const Vec2 a2(0.5, 0.5 * r3);
  BravaisLattice2D lat(a1, a2, {(a1 + 2.0 * a2) / 3.0, (2.0 * a1 + a2) / 3.0});
  CMatrix h0 = CMatrix::Zero(2, 2);
  h0(0, 1) = 1.0;
  h0(1, 0) = 1.0;
  CMatrix up = CMatrix::Zero(2, 2);
  up(0, 1) = 1.0;
  CMatrix down = CMatrix::Zero(2, 2);
  down(1, 0) = 1.0;
  std::map<LatticeVector, CMatrix> blocks{
      {{0, 0}, h0}, {{1, 0}, up}, {{0, -1}, up}, {{-1, 0}, down}, {{0, 1}, down}};
  return TightBinding2D(std::move(lat), std::move(blocks));
}

CommensurateCut wallace_armchair() { return supercell_cut(wallace(), -1, 1); }

CommensurateCut wallace_cut(int n, int m) { return supercell_cut(wallace(), n, m); }

}  // namespace presets

namespace {

/// Golden-section search for the extreme of f on [a, b]; sign = +1 maximises, -1 minimises.
double golden_extreme(const std::function<double(double)>& f, double a, double b, double sign) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = sign * f(c);
  double fd = sign * f(d);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = sign * f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = sign * f(d);
    }
  }
  return sign * std::max(fc, fd);
}

}  // namespace

double fiber_gap(const TightBinding2D& tb, double k2_fraction, int lower_band, int k1_count) {
  const int m = tb.orbitals();
  if (lower_band < 0 || lower_band + 1 >= m) {
    throw Error(ErrorCode::InvalidModel, "band index out of range for the fiber gap");
  }
  const auto kernel = reduce_to_1d(tb, k2_fraction);
  auto band = [&](int j) {
    return [&, j](double k) { return eigvalsh_dense(bloch_fiber(kernel, k))[static_cast<std::size_t>(j)]; };
  };
  const auto lower = band(lower_band);
  const auto upper = band(lower_band + 1);
  const double pi = std::numbers::pi;
  const double h = 2.0 * pi / k1_count;
  double best_lo = -std::numeric_limits<double>::infinity();
  double best_up = std::numeric_limits<double>::infinity();
  double k_lo = 0.0;
  double k_up = 0.0;
  for (int i = 0; i < k1_count; ++i) {
    const double k = -pi + h * (i + 1);
    const auto ev = eigvalsh_dense(bloch_fiber(kernel, k));
    if (ev[static_cast<std::size_t>(lower_band)] > best_lo) {
      best_lo = ev[static_cast<std::size_t>(lower_band)];
      k_lo = k;
    }
    if (ev[static_cast<std::size_t>(lower_band) + 1] < best_up) {
      best_up = ev[static_cast<std::size_t>(lower_band) + 1];
      k_up = k;
    }
  }
  best_lo = std::max(best_lo, golden_extreme(lower, k_lo - h, k_lo + h, 1.0));
  best_up = std::min(best_up, golden_extreme(upper, k_up - h, k_up + h, -1.0));
  return best_up - best_lo;
}

FiberGapScan scan_fiber_gap(const TightBinding2D& tb, const std::vector<double>& k2_fractions,
                            int lower_band, int k1_count) {
  FiberGapScan scan;
  scan.points.resize(k2_fractions.size());
  parallel_for(k2_fractions.size(), [&](std::size_t i) {
    scan.points[i] = FiberGapPoint{k2_fractions[i], fiber_gap(tb, k2_fractions[i], lower_band, k1_count)};
  });
  scan.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& p : scan.points) {
    if (p.gap < scan.min_gap) {
      scan.min_gap = p.gap;
      scan.argmin = p.k2_fraction;
    }
  }
  return scan;
}

}  // namespace softwall
