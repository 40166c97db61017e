#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "jws/topology.hpp"
#include "support/oracles.hpp"

using namespace jws;

namespace {

constexpr std::uint8_t kUndet = 2, kBasin = 3;

GridField grid_of(int w, int h, const std::function<std::uint8_t(int, int)>& code, Region region = {-1, 1, -1, 1}) {
  std::vector<std::uint8_t> codes(static_cast<std::size_t>(w) * h);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) codes[static_cast<std::size_t>(j) * w + i] = code(i, j);
  return GridField(region, w, h, codes, {"sin", {}, 0, 0, 1.0});
}

GridField grid_of_mask(const Mask& m, Region region = {-1, 1, -1, 1}) {
  return grid_of(m.width(), m.height(), [&](int i, int j) { return m(i, j) ? kUndet : kBasin; }, region);
}

Mask random_mask(std::mt19937_64& rng, int w, int h) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double p = 0.25 + 0.5 * u(rng);
  Mask m(w, h);
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) m.set(i, j, u(rng) < p);
  return m;
}

Mask square_ring(int w, int h, int ci, int cj, int r, Mask m = {}) {
  if (m.size() == 0) m = Mask(w, h);
  for (int j = cj - r; j <= cj + r; ++j)
    for (int i = ci - r; i <= ci + r; ++i)
      if (std::max(std::abs(i - ci), std::abs(j - cj)) == r) m.set(i, j);
  return m;
}

}  // namespace

TEST_CASE("all masked 4x4") {
  const GridField g = grid_of(4, 4, [](int, int) { return kUndet; });
  const auto cs = label_components(g, Mask(4, 4, true), Connectivity::Four);
  REQUIRE(cs.components.size() == 1);
  CHECK(cs.components[0].touches_border);
  CHECK(cs.components[0].cell_count == 16);
  CHECK(cs.components[0].spherical_diameter <= 2.0);
}

TEST_CASE("checkerboard") {
  Mask m(6, 6);
  for (int j = 0; j < 6; ++j)
    for (int i = 0; i < 6; ++i) m.set(i, j, (i + j) % 2 == 0);
  const GridField g = grid_of_mask(m);
  CHECK(label_components(g, m, Connectivity::Four).components.size() == 18);
  CHECK(label_components(g, m, Connectivity::Eight).components.size() == 1);
}

TEST_CASE("predicate and split by code") {
  const GridField g = grid_of(6, 1, [](int i, int) { return static_cast<std::uint8_t>(i < 3 ? 3 : 4); });
  const auto pred = [](Label l) { return l.tag == Tag::Attracted; };
  CHECK(label_components(g, pred, Connectivity::Four).components.size() == 1);
  const auto split = label_components(g, pred, Connectivity::Four, {true, true});
  REQUIRE(split.components.size() == 2);
  CHECK(split.components[0].code == 3);
  CHECK(split.components[1].code == 4);
  const Mask iface = interface_cells(g);
  CHECK(iface.count() == 2);
  CHECK(iface(2, 0));
  CHECK(iface(3, 0));
  CHECK(julia_mask(g).count() == 2);
  CHECK(julia_mask(g, JuliaMaskMode::UndeterminedOnly).count() == 0);
}

TEST_CASE("annulus fills to a disc and filling is idempotent") {
  Mask annulus(21, 21), disc(21, 21);
  for (int j = 0; j < 21; ++j)
    for (int i = 0; i < 21; ++i) {
      const double r = std::hypot(i - 10, j - 10);
      annulus.set(i, j, r >= 5 && r <= 8);
      disc.set(i, j, r <= 8);
    }
  const Mask filled = fill_holes(annulus);
  CHECK(filled == disc);
  CHECK(fill_holes(filled) == filled);
  CHECK(fill_holes(disc) == disc);
}

TEST_CASE("random masks agree with flood-fill oracles") {
  std::mt19937_64 rng(0x5eed);
  for (int t = 0; t < 60; ++t) {
    const Mask m = random_mask(rng, 64, 64);
    const GridField g = grid_of_mask(m);
    for (Connectivity c : {Connectivity::Four, Connectivity::Eight}) {
      int n = 0;
      const auto want = oracle::bfs_labels(m, true, c, &n);
      const auto cs = label_components(g, m, c, {false, false});
      REQUIRE(cs.components.size() == static_cast<std::size_t>(n));
      CHECK(oracle::same_partition(cs.ids, want));
      CHECK(fill_holes(m, c) == oracle::fill(m, c));
    }
  }
}

TEST_CASE("connectivity duality") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const Mask m = random_mask(rng, 32, 32);
    const GridField g = grid_of_mask(m);
    const int ci = 16, cj = 16;
    if (m(ci, cj)) continue;
    Mask basin(32, 32);
    for (std::size_t k = 0; k < m.size(); ++k) basin.set(k, !m[k]);
    const auto bc = label_components(g, basin, Connectivity::Four, {false, false});
    const bool bounded = !bc.components[bc.id_at(ci, cj) - 1].touches_border;

    const auto jc = label_components(g, m, Connectivity::Eight, {false, false});
    bool surrounded = false;
    for (const auto& cells : jc.cells()) {
      Mask one(32, 32);
      for (auto k : cells) one.set(k);
      surrounded |= fill_holes(one, Connectivity::Four)(ci, cj);
    }
    CHECK(bounded == surrounded);
    CHECK(surrounds(m, ci, cj) == bounded);
  }
}

TEST_CASE("diameters against pairwise brute force") {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 12; ++t) {
    const int side = t < 8 ? 64 : 128;
    const Mask m = random_mask(rng, side, side);
    const GridField g = grid_of_mask(m, {-3, 5, -2, 6});
    const auto cs = label_components(g, m, Connectivity::Eight);
    const auto cells = cs.cells();
    for (std::size_t c = 0; c < cells.size(); c += std::max<std::size_t>(1, cells.size() / 25)) {
      double e = 0, s = 0;
      for (auto a : cells[c])
        for (auto b : cells[c]) {
          const Complex za = g.cell_center(a % side, a / side), zb = g.cell_center(b % side, b / side);
          e = std::max(e, std::abs(za - zb));
          s = std::max(s, chordal_distance(za, zb));
        }
      CHECK(cs.components[c].euclidean_diameter == doctest::Approx(e).epsilon(1e-12));
      CHECK(cs.components[c].spherical_diameter == doctest::Approx(s).epsilon(1e-12));
    }
  }
}

TEST_CASE("diameter census") {
  std::mt19937_64 rng(5);
  const Mask m = random_mask(rng, 96, 96);
  const GridField g = grid_of_mask(m, {-10, 10, -10, 10});
  const auto cs = label_components(g, m, Connectivity::Four);
  const std::vector<double> th{0.0, 0.01, 0.05, 0.1, 0.5, 1.0, 2.0, 2.5};
  const auto census = diameter_census(cs, th);
  for (std::size_t k = 0; k < th.size(); ++k) {
    const auto want = std::count_if(cs.components.begin(), cs.components.end(),
                                    [&](const Component& c) { return c.spherical_diameter > th[k]; });
    CHECK(census.counts[k] == static_cast<std::size_t>(want));
    if (k) CHECK(census.counts[k] <= census.counts[k - 1]);
  }
  CHECK(census.counts.back() == 0);
  double max_e = 0;
  std::size_t interior = 0;
  for (const auto& c : cs.components)
    if (!c.touches_border) max_e = std::max(max_e, c.euclidean_diameter), ++interior;
  CHECK(census.max_interior_euclidean == max_e);
  CHECK(census.interior_components == interior);
}

TEST_CASE("polyline helpers") {
  const std::vector<LatticePoint> square{{0, 0}, {4, 0}, {4, 4}, {0, 4}};
  const std::vector<LatticePoint> bowtie{{0, 0}, {4, 4}, {4, 0}, {0, 4}};
  const std::vector<LatticePoint> repeat{{0, 0}, {2, 0}, {2, 2}, {0, 0}, {-2, 0}, {-2, -2}};
  CHECK(is_simple_polyline(square));
  CHECK_FALSE(is_simple_polyline(bowtie));
  CHECK_FALSE(is_simple_polyline(repeat));
  const std::vector<Complex> sq{{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
  CHECK(winding_number(sq, 0.0) == 1);
  CHECK(winding_number({sq.rbegin(), sq.rend()}, 0.0) == -1);
  CHECK(winding_number(sq, {3, 0}) == 0);
}

TEST_CASE("square annulus traces to a rectangle") {
  Mask ring(20, 20);
  for (int r = 5; r <= 7; ++r) ring = square_ring(20, 20, 10, 10, r, ring);
  const GridField g = grid_of_mask(ring);
  const JordanLoop loop = extract_jordan_loop(g, ring, g.cell_center(10, 10));
  CHECK(loop.simple);
  CHECK(loop.vertices.size() == 4);
  CHECK(std::abs(loop.winding) == 1);
  std::vector<long long> is, js;
  for (const auto& v : loop.vertices) is.push_back(v.i), js.push_back(v.j);
  CHECK(*std::min_element(is.begin(), is.end()) == 3);
  CHECK(*std::max_element(is.begin(), is.end()) == 18);
}

TEST_CASE("figure eight is not simple") {
  const Mask a = square_ring(16, 16, 4, 4, 2);
  const Mask eight = square_ring(16, 16, 9, 9, 2, a);
  const GridField g = grid_of_mask(eight);
  const JordanLoop loop = extract_jordan_loop(g, eight, {0.0, 0.0});
  CHECK_FALSE(loop.simple);
}

TEST_CASE("three concentric rings give exactly three loops") {
  const int n = 64, c = 32;
  Mask m(n, n);
  for (int r : {6, 16, 28}) m = square_ring(n, n, c, c, r, m);
  const GridField g = grid_of_mask(m, {-1, 1, -1, 1});
  const auto chain = detect_spider_web(g, g.cell_center(c, c), 3);
  REQUIRE(chain.loops.size() == 3);
  CHECK(chain.spans_grid);
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& cell : chain.loops[k]) CHECK(m(cell.i, cell.j));
    if (k) {
      CHECK(chain.domains[k - 1].subset_of(chain.domains[k]));
      CHECK(chain.domains[k - 1].cell_count() < chain.domains[k].cell_count());
      CHECK(chain.nested[k - 1]);
    }
    Mask barrier(n, n);
    for (const auto& cell : chain.loops[k]) barrier.set(cell.i, cell.j);
    CHECK(surrounds(barrier, c, c));
    const JordanLoop jl = extract_jordan_loop(g, chain.domains[k].to_mask(n, n), g.cell_center(c, c), Connectivity::Four);
    CHECK(jl.simple);
    CHECK(std::abs(jl.winding) == 1);
  }
}

TEST_CASE("empty julia mask gives insufficient loops") {
  const GridField g = grid_of(32, 32, [](int, int) { return kBasin; });
  try {
    detect_spider_web(g, 0.0, 3);
    FAIL("expected InsufficientLoops");
  } catch (const InsufficientLoops& e) {
    CHECK(e.achieved() == 0);
    CHECK(std::string(e.what()).find("insufficient loops") != std::string::npos);
  }
}

TEST_CASE("a single buried ring structure") {
  const int n = 49, c = 24;
  Mask m(n, n);
  for (int j = c - 1; j <= c + 1; ++j)
    for (int i = c - 1; i <= c + 1; ++i) m.set(i, j);
  for (int r : {4, 8, 16}) m = square_ring(n, n, c, c, r, m);
  const GridField g = grid_of_mask(m);
  const double dx = g.dx();
  BuriedScanParams p;
  p.scales = {18 * dx, 10 * dx, 6 * dx, 2 * dx};
  p.resolution_floor_cells = 5;
  p.threads = 2;
  const BuriedScan scan = buried_point_scan(g, julia_mask(g), p);
  CHECK(scan.eligible_cells == 1);
  CHECK(scan.sampled == 1);
  REQUIRE(scan.candidates.size() == 1);
  const auto& cand = scan.candidates[0];
  CHECK(cand.cell == CellIndex{c, c});
  CHECK(scan.resolved_scales.size() == 3);
  CHECK(scan.unresolved_scales == std::vector<double>{2 * dx});
  REQUIRE(cand.scales_witnessed.size() == 3);
  CHECK(std::is_sorted(cand.scales_witnessed.rbegin(), cand.scales_witnessed.rend()));
  CHECK(std::adjacent_find(cand.scales_witnessed.begin(), cand.scales_witnessed.end()) == cand.scales_witnessed.end());
  for (const auto& loop : cand.witness_loops) {
    Mask barrier(n, n);
    for (const auto& cell : loop) {
      CHECK(m(cell.i, cell.j));
      barrier.set(cell.i, cell.j);
    }
    CHECK(surrounds(barrier, c, c));
  }
}

TEST_CASE("domain helpers") {
  BoundingBox b;
  b.include(2, 3);
  b.include(4, 5);
  CHECK(b.width() == 3);
  CHECK(b.height() == 3);
  std::vector<std::uint8_t> bits(9, 1);
  const Domain d(b, bits);
  CHECK(d.cell_count() == 9);
  CHECK(d.contains(3, 4));
  CHECK_FALSE(d.contains(1, 4));
  const Mask m = d.to_mask(8, 8);
  CHECK(m.count() == 9);
  bits[4] = 0;
  const Domain inner(b, bits);
  CHECK(inner.subset_of(d));
  CHECK_FALSE(d.subset_of(inner));
}
