#include "jws/topology.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace jws {

namespace {

constexpr std::array<int, 8> kDi{1, -1, 0, 0, 1, 1, -1, -1};
constexpr std::array<int, 8> kDj{0, 0, 1, -1, 1, -1, 1, -1};

int neighbour_count(Connectivity c) { return c == Connectivity::Four ? 4 : 8; }

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::size_t> parent_;
};

// Max pairwise distance by branch and bound over square tiles of cells. Tile
// radii are exact maxima over members, so the triangle inequality bound is
// rigorous and the result equals the brute-force maximum.
template <class Dist>
double max_pairwise(const std::vector<Complex>& pts, const std::vector<std::pair<int, int>>& cell_ij, Dist dist) {
  const std::size_t n = pts.size();
  if (n < 2) return 0.0;
  if (n <= 64) {
    double best = 0.0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b) best = std::max(best, dist(pts[a], pts[b]));
    return best;
  }

  int side = 8;
  std::vector<std::size_t> order(n);
  std::vector<long long> keys(n);
  std::size_t tiles = 0;
  for (;;) {
    for (std::size_t k = 0; k < n; ++k)
      keys[k] = (static_cast<long long>(cell_ij[k].second / side) << 32) + cell_ij[k].first / side;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    tiles = 1;
    for (std::size_t k = 1; k < n; ++k)
      if (keys[order[k]] != keys[order[k - 1]]) ++tiles;
    if (tiles <= 1500) break;
    side *= 2;
  }

  struct Tile {
    std::size_t begin, end;
    Complex centre;
    double radius;
  };
  std::vector<Tile> tile;
  for (std::size_t k = 0; k < n;) {
    std::size_t e = k;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    while (e < n && keys[order[e]] == keys[order[k]]) {
      const Complex p = pts[order[e]];
      x0 = std::min(x0, p.real());
      x1 = std::max(x1, p.real());
      y0 = std::min(y0, p.imag());
      y1 = std::max(y1, p.imag());
      ++e;
    }
    const Complex c{0.5 * (x0 + x1), 0.5 * (y0 + y1)};
    double r = 0.0;
    for (std::size_t m = k; m < e; ++m) r = std::max(r, dist(c, pts[order[m]]));
    tile.push_back({k, e, c, r});
    k = e;
  }

  double best = 0.0;
  struct Pair {
    double bound;
    std::size_t a, b;
  };
  std::vector<Pair> pairs;
  for (std::size_t a = 0; a < tile.size(); ++a) {
    for (std::size_t b = a; b < tile.size(); ++b) {
      const double d = dist(tile[a].centre, tile[b].centre);
      pairs.push_back({d + tile[a].radius + tile[b].radius, a, b});
      best = std::max(best, dist(pts[order[tile[a].begin]], pts[order[tile[b].begin]]));
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& x, const Pair& y) { return x.bound > y.bound; });
  for (const Pair& p : pairs) {
    if (p.bound <= best) break;
    const Tile& ta = tile[p.a];
    const Tile& tb = tile[p.b];
    for (std::size_t u = ta.begin; u < ta.end; ++u)
      for (std::size_t v = (p.a == p.b ? u + 1 : tb.begin); v < tb.end; ++v)
        best = std::max(best, dist(pts[order[u]], pts[order[v]]));
  }
  return best;
}

// Flood the complement of `mask` from the border.
std::vector<std::uint8_t> outside_reach(const Mask& mask, Connectivity c) {
  const int w = mask.width(), h = mask.height();
  std::vector<std::uint8_t> reached(mask.size(), 0);
  std::vector<std::size_t> stack;
  auto seed = [&](int i, int j) {
    const std::size_t k = mask.index(i, j);
    if (!mask[k] && !reached[k]) {
      reached[k] = 1;
      stack.push_back(k);
    }
  };
  for (int i = 0; i < w; ++i) {
    seed(i, 0);
    seed(i, h - 1);
  }
  for (int j = 0; j < h; ++j) {
    seed(0, j);
    seed(w - 1, j);
  }
  const int nn = neighbour_count(c);
  while (!stack.empty()) {
    const std::size_t k = stack.back();
    stack.pop_back();
    const int i = static_cast<int>(k % w), j = static_cast<int>(k / w);
    for (int d = 0; d < nn; ++d) {
      const int a = i + kDi[d], b = j + kDj[d];
      if (mask.inside(a, b)) seed(a, b);
    }
  }
  return reached;
}

// Grows a bounded domain inside a window. Non-Julia cells of the window are
// grouped into 4-connected components; the domain is the seed cells joined
// with every component they meet or touch, closed under hole filling and
// diagonal-pinch removal. The cells 4-adjacent to the domain are then all
// Julia cells.
class Growth {
 public:
  Growth(const Mask& julia, BoundingBox window)
      : julia_(julia), win_(window), lw_(window.width()), lh_(window.height()) {
    const std::size_t n = static_cast<std::size_t>(lw_) * lh_;
    UnionFind uf(n);
    for (int b = 0; b < lh_; ++b) {
      for (int a = 0; a < lw_; ++a) {
        if (is_julia(a, b)) continue;
        if (a > 0 && !is_julia(a - 1, b)) uf.unite(local(a, b), local(a - 1, b));
        if (b > 0 && !is_julia(a, b - 1)) uf.unite(local(a, b), local(a, b - 1));
      }
    }
    fid_.assign(n, 0);
    std::vector<int> root_id(n, 0);
    int next = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const int a = static_cast<int>(k % lw_), b = static_cast<int>(k / lw_);
      if (is_julia(a, b)) continue;
      const std::size_t r = uf.find(k);
      if (!root_id[r]) root_id[r] = ++next;
      fid_[k] = root_id[r];
    }
    std::vector<std::size_t> counts(next + 1, 0);
    border_.assign(next + 1, 0);
    box_.assign(next + 1, BoundingBox{});
    for (std::size_t k = 0; k < n; ++k) {
      if (!fid_[k]) continue;
      const int a = static_cast<int>(k % lw_), b = static_cast<int>(k / lw_);
      ++counts[fid_[k]];
      box_[fid_[k]].include(a, b);
      if (a == 0 || b == 0 || a == lw_ - 1 || b == lh_ - 1) border_[fid_[k]] = 1;
    }
    offsets_.assign(next + 2, 0);
    for (int c = 1; c <= next; ++c) offsets_[c + 1] = offsets_[c] + counts[c];
    members_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t k = 0; k < n; ++k)
      if (fid_[k]) members_[fill[fid_[k]]++] = k;
    stamp_.assign(next + 1, 0);
    x_.assign(n, 0);
  }

  /// Seeds are window-local indices. Returns false when the domain reaches
  /// the window border.
  bool grow(const std::vector<std::size_t>& seeds, Domain& domain, std::vector<CellIndex>& ring) {
    clear();
    ++generation_;
    reached_ = false;
    for (std::size_t s : seeds) add_with_neighbours(s);
    if (reached_) return false;

    for (;;) {
      fill_holes_in_box();
      if (reached_) return false;
      std::vector<std::size_t> pinch;
      for (int b = box_x_.j_min - 1; b <= box_x_.j_max; ++b) {
        for (int a = box_x_.i_min - 1; a <= box_x_.i_max; ++a) {
          const bool p = x_[local(a, b)], q = x_[local(a + 1, b)];
          const bool r = x_[local(a, b + 1)], s = x_[local(a + 1, b + 1)];
          if (p && s && !q && !r) {
            pinch.push_back(local(a + 1, b));
            pinch.push_back(local(a, b + 1));
          } else if (q && r && !p && !s) {
            pinch.push_back(local(a, b));
            pinch.push_back(local(a + 1, b + 1));
          }
        }
      }
      if (pinch.empty()) break;
      for (std::size_t k : pinch) add_with_neighbours(k);
      if (reached_) return false;
    }

    BoundingBox gbox{box_x_.i_min + win_.i_min, box_x_.i_max + win_.i_min, box_x_.j_min + win_.j_min,
                     box_x_.j_max + win_.j_min};
    std::vector<std::uint8_t> bits(static_cast<std::size_t>(gbox.width()) * gbox.height());
    for (int b = box_x_.j_min; b <= box_x_.j_max; ++b)
      for (int a = box_x_.i_min; a <= box_x_.i_max; ++a)
        bits[static_cast<std::size_t>(b - box_x_.j_min) * gbox.width() + (a - box_x_.i_min)] = x_[local(a, b)];
    domain = Domain(gbox, std::move(bits));

    ring.clear();
    for (int b = box_x_.j_min - 1; b <= box_x_.j_max + 1; ++b) {
      for (int a = box_x_.i_min - 1; a <= box_x_.i_max + 1; ++a) {
        if (x_[local(a, b)]) continue;
        bool adjacent = false;
        for (int d = 0; d < 4 && !adjacent; ++d) {
          const int u = a + kDi[d], v = b + kDj[d];
          adjacent = u >= 0 && v >= 0 && u < lw_ && v < lh_ && x_[local(u, v)];
        }
        if (!adjacent) continue;
        if (!is_julia(a, b)) throw Error("loop construction: boundary cell outside the Julia mask");
        ring.push_back({a + win_.i_min, b + win_.j_min});
      }
    }
    return true;
  }

  std::size_t local_index(int gi, int gj) const { return local(gi - win_.i_min, gj - win_.j_min); }

 private:
  std::size_t local(int a, int b) const { return static_cast<std::size_t>(b) * lw_ + a; }
  bool is_julia(int a, int b) const { return julia_(a + win_.i_min, b + win_.j_min); }

  void clear() {
    if (box_x_.empty()) return;
    for (int b = box_x_.j_min; b <= box_x_.j_max; ++b)
      std::fill_n(x_.begin() + local(box_x_.i_min, b), box_x_.width(), 0);
    box_x_ = BoundingBox{};
  }

  void add_cell(std::size_t k) {
    if (x_[k]) return;
    x_[k] = 1;
    const int a = static_cast<int>(k % lw_), b = static_cast<int>(k / lw_);
    box_x_.include(a, b);
    if (a == 0 || b == 0 || a == lw_ - 1 || b == lh_ - 1) reached_ = true;
  }

  void add_component(int id) {
    if (!id || stamp_[id] == generation_) return;
    stamp_[id] = generation_;
    if (border_[id]) {
      reached_ = true;
      return;
    }
    for (std::size_t m = offsets_[id]; m < offsets_[id + 1]; ++m) add_cell(members_[m]);
  }

  void add_with_neighbours(std::size_t k) {
    add_cell(k);
    add_component(fid_[k]);
    const int a = static_cast<int>(k % lw_), b = static_cast<int>(k / lw_);
    for (int d = 0; d < 4; ++d) {
      const int u = a + kDi[d], v = b + kDj[d];
      if (u < 0 || v < 0 || u >= lw_ || v >= lh_) {
        reached_ = true;
        continue;
      }
      add_component(fid_[local(u, v)]);
    }
  }

  // Holes of X inside its bounding box, with an 8-connected complement.
  void fill_holes_in_box() {
    const BoundingBox r{box_x_.i_min - 1, box_x_.i_max + 1, box_x_.j_min - 1, box_x_.j_max + 1};
    const int rw = r.width(), rh = r.height();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(rw) * rh, 0);
    std::vector<std::pair<int, int>> stack;
    auto push = [&](int a, int b) {
      const std::size_t s = static_cast<std::size_t>(b - r.j_min) * rw + (a - r.i_min);
      if (seen[s] || x_[local(a, b)]) return;
      seen[s] = 1;
      stack.emplace_back(a, b);
    };
    for (int a = r.i_min; a <= r.i_max; ++a) {
      push(a, r.j_min);
      push(a, r.j_max);
    }
    for (int b = r.j_min; b <= r.j_max; ++b) {
      push(r.i_min, b);
      push(r.i_max, b);
    }
    while (!stack.empty()) {
      const auto [a, b] = stack.back();
      stack.pop_back();
      for (int d = 0; d < 8; ++d) {
        const int u = a + kDi[d], v = b + kDj[d];
        if (u >= r.i_min && u <= r.i_max && v >= r.j_min && v <= r.j_max) push(u, v);
      }
    }
    for (int b = r.j_min + 1; b < r.j_max; ++b) {
      for (int a = r.i_min + 1; a < r.i_max; ++a) {
        const std::size_t k = local(a, b);
        if (!x_[k] && !seen[static_cast<std::size_t>(b - r.j_min) * rw + (a - r.i_min)]) {
          add_cell(k);
          add_component(fid_[k]);
        }
      }
    }
  }

  const Mask& julia_;
  BoundingBox win_;
  int lw_, lh_;
  std::vector<int> fid_;
  std::vector<std::uint8_t> border_;
  std::vector<BoundingBox> box_;
  std::vector<std::size_t> offsets_, members_;
  std::vector<int> stamp_;
  int generation_ = 0;
  std::vector<std::uint8_t> x_;
  BoundingBox box_x_;
  bool reached_ = false;
};

// Cells whose centres lie within rho of c, together with every cell whose
// closure contains c, clipped to the window; window-local indices.
std::vector<std::size_t> disc_cells(const GridField& grid, const BoundingBox& win, Complex c, double rho,
                                    const Growth& g) {
  std::vector<std::size_t> out;
  const CellIndex c0 = grid.cell_of(c);
  for (int b = c0.j - 1; b <= c0.j + 1; ++b) {
    for (int a = c0.i - 1; a <= c0.i + 1; ++a) {
      if (a < win.i_min || a > win.i_max || b < win.j_min || b > win.j_max) continue;
      const Complex d = grid.cell_center(a, b) - c;
      if (std::abs(d.real()) <= 0.5 * grid.dx() && std::abs(d.imag()) <= 0.5 * grid.dy())
        out.push_back(g.local_index(a, b));
    }
  }
  const Region& reg = grid.region();
  const int i0 = std::max(win.i_min, static_cast<int>(std::floor((c.real() - rho - reg.x_min) / grid.dx())) - 1);
  const int i1 = std::min(win.i_max, static_cast<int>(std::ceil((c.real() + rho - reg.x_min) / grid.dx())) + 1);
  const int j0 = std::max(win.j_min, static_cast<int>(std::floor((reg.y_max - c.imag() - rho) / grid.dy())) - 1);
  const int j1 = std::min(win.j_max, static_cast<int>(std::ceil((reg.y_max - c.imag() + rho) / grid.dy())) + 1);
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (std::abs(grid.cell_center(i, j) - c) <= rho) out.push_back(g.local_index(i, j));
  return out;
}

}  // namespace

std::size_t Mask::count() const { return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1)); }

void BoundingBox::include(int i, int j) {
  if (empty()) {
    i_min = i_max = i;
    j_min = j_max = j;
    return;
  }
  i_min = std::min(i_min, i);
  i_max = std::max(i_max, i);
  j_min = std::min(j_min, j);
  j_max = std::max(j_max, j);
}

Mask make_mask(const GridField& grid, const std::function<bool(Label)>& predicate) {
  Mask m(static_cast<int>(grid.width()), static_cast<int>(grid.height()));
  for (std::size_t k = 0; k < grid.size(); ++k) m.set(k, predicate(Label::from_code(grid.codes()[k])));
  return m;
}

Mask interface_cells(const GridField& grid) {
  const int w = static_cast<int>(grid.width()), h = static_cast<int>(grid.height());
  Mask m(w, h);
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const std::uint8_t c = grid.code(i, j);
      if (c < 3) continue;
      for (int d = 0; d < 4; ++d) {
        const int a = i + kDi[d], b = j + kDj[d];
        if (a < 0 || b < 0 || a >= w || b >= h) continue;
        const std::uint8_t o = grid.code(a, b);
        if (o >= 3 && o != c) {
          m.set(i, j);
          break;
        }
      }
    }
  }
  return m;
}

Mask julia_mask(const GridField& grid, JuliaMaskMode mode) {
  if (mode == JuliaMaskMode::UndeterminedOnly)
    return make_mask(grid, [](Label l) { return l.tag == Tag::Undetermined; });
  Mask m = interface_cells(grid);
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (grid.codes()[k] < 3) m.set(k);
  return m;
}

std::vector<std::vector<std::size_t>> ComponentSet::cells() const {
  std::vector<std::vector<std::size_t>> out(components.size());
  for (std::size_t c = 0; c < components.size(); ++c) out[c].reserve(components[c].cell_count);
  for (std::size_t k = 0; k < ids.size(); ++k)
    if (ids[k]) out[ids[k] - 1].push_back(k);
  return out;
}

Diameters cell_set_diameters(const GridField& grid, const std::vector<std::size_t>& cells) {
  std::vector<Complex> pts;
  std::vector<std::pair<int, int>> ij;
  pts.reserve(cells.size());
  ij.reserve(cells.size());
  for (std::size_t k : cells) {
    const int i = static_cast<int>(k % grid.width()), j = static_cast<int>(k / grid.width());
    pts.push_back(grid.cell_center(i, j));
    ij.emplace_back(i, j);
  }
  Diameters d;
  d.euclidean = max_pairwise(pts, ij, [](Complex a, Complex b) { return std::abs(a - b); });
  d.spherical = max_pairwise(pts, ij, [](Complex a, Complex b) { return chordal_distance(a, b); });
  return d;
}

ComponentSet label_components(const GridField& grid, const Mask& mask, Connectivity connectivity,
                              LabelOptions options) {
  const int w = static_cast<int>(grid.width()), h = static_cast<int>(grid.height());
  if (mask.width() != w || mask.height() != h) throw Error("label_components: mask and grid sizes differ");
  UnionFind uf(mask.size());
  const auto& codes = grid.codes();
  auto joinable = [&](std::size_t a, std::size_t b) {
    return mask[b] && (!options.split_by_code || codes[a] == codes[b]);
  };
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      const std::size_t k = mask.index(i, j);
      if (!mask[k]) continue;
      if (i > 0 && joinable(k, k - 1)) uf.unite(k, k - 1);
      if (j > 0 && joinable(k, k - w)) uf.unite(k, k - w);
      if (connectivity == Connectivity::Eight && j > 0) {
        if (i > 0 && joinable(k, k - w - 1)) uf.unite(k, k - w - 1);
        if (i + 1 < w && joinable(k, k - w + 1)) uf.unite(k, k - w + 1);
      }
    }
  }

  ComponentSet out;
  out.width = w;
  out.height = h;
  out.ids.assign(mask.size(), 0);
  std::vector<int> root_id(mask.size(), 0);
  for (std::size_t k = 0; k < mask.size(); ++k) {
    if (!mask[k]) continue;
    const std::size_t r = uf.find(k);
    if (!root_id[r]) {
      out.components.push_back({});
      root_id[r] = static_cast<int>(out.components.size());
      out.components.back().code = codes[k];
    }
    out.ids[k] = root_id[r];
    Component& c = out.components[root_id[r] - 1];
    const int i = static_cast<int>(k % w), j = static_cast<int>(k / w);
    ++c.cell_count;
    c.bbox.include(i, j);
    const Complex z = grid.cell_center(i, j);
    c.centroid_x += z.real();
    c.centroid_y += z.imag();
    if (i == 0 || j == 0 || i == w - 1 || j == h - 1) c.touches_border = true;
  }
  for (Component& c : out.components) {
    c.centroid_x /= static_cast<double>(c.cell_count);
    c.centroid_y /= static_cast<double>(c.cell_count);
  }
  if (options.diameters) {
    const auto cells = out.cells();
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Diameters d = cell_set_diameters(grid, cells[c]);
      out.components[c].euclidean_diameter = d.euclidean;
      out.components[c].spherical_diameter = d.spherical;
    }
  }
  return out;
}

ComponentSet label_components(const GridField& grid, const std::function<bool(Label)>& predicate,
                              Connectivity connectivity, LabelOptions options) {
  return label_components(grid, make_mask(grid, predicate), connectivity, options);
}

Mask fill_holes(const Mask& mask, Connectivity complement) {
  const auto reached = outside_reach(mask, complement);
  Mask out = mask;
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (!mask[k] && !reached[k]) out.set(k);
  return out;
}

bool surrounds(const Mask& barrier, int start_i, int start_j, Connectivity path) {
  if (!barrier.inside(start_i, start_j) || barrier(start_i, start_j)) return false;
  const int w = barrier.width(), h = barrier.height();
  std::vector<std::uint8_t> seen(barrier.size(), 0);
  std::vector<std::pair<int, int>> stack{{start_i, start_j}};
  seen[barrier.index(start_i, start_j)] = 1;
  const int nn = neighbour_count(path);
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    if (i == 0 || j == 0 || i == w - 1 || j == h - 1) return false;
    for (int d = 0; d < nn; ++d) {
      const int a = i + kDi[d], b = j + kDj[d];
      const std::size_t k = barrier.index(a, b);
      if (!seen[k] && !barrier[k]) {
        seen[k] = 1;
        stack.emplace_back(a, b);
      }
    }
  }
  return true;
}

bool is_simple_polyline(const std::vector<LatticePoint>& closed) {
  const std::size_t n = closed.size();
  if (n < 3) return false;
  {
    std::vector<std::pair<long long, long long>> v;
    for (const auto& p : closed) v.emplace_back(p.i, p.j);
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end()) return false;
  }
  auto orient = [](const LatticePoint& a, const LatticePoint& b, const LatticePoint& c) {
    const long long x = (b.i - a.i) * (c.j - a.j) - (b.j - a.j) * (c.i - a.i);
    return (x > 0) - (x < 0);
  };
  auto on_segment = [](const LatticePoint& a, const LatticePoint& b, const LatticePoint& p) {
    return std::min(a.i, b.i) <= p.i && p.i <= std::max(a.i, b.i) && std::min(a.j, b.j) <= p.j &&
           p.j <= std::max(a.j, b.j);
  };
  auto intersect = [&](std::size_t s, std::size_t t) {
    const LatticePoint &a = closed[s], &b = closed[(s + 1) % n], &c = closed[t], &d = closed[(t + 1) % n];
    const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
           (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
  };

  // consecutive segments may only share their common vertex
  for (std::size_t s = 0; s < n; ++s) {
    const LatticePoint &a = closed[s], &b = closed[(s + 1) % n], &c = closed[(s + 2) % n];
    if (orient(a, b, c) == 0 && (a.i - b.i) * (c.i - b.i) + (a.j - b.j) * (c.j - b.j) > 0) return false;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto xlo = [&](std::size_t s) { return std::min(closed[s].i, closed[(s + 1) % n].i); };
  auto xhi = [&](std::size_t s) { return std::max(closed[s].i, closed[(s + 1) % n].i); };
  auto ylo = [&](std::size_t s) { return std::min(closed[s].j, closed[(s + 1) % n].j); };
  auto yhi = [&](std::size_t s) { return std::max(closed[s].j, closed[(s + 1) % n].j); };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xlo(a) < xlo(b); });
  std::vector<std::size_t> active;
  for (std::size_t s : order) {
    std::erase_if(active, [&](std::size_t t) { return xhi(t) < xlo(s); });
    for (std::size_t t : active) {
      if (yhi(t) < ylo(s) || yhi(s) < ylo(t)) continue;
      const bool adjacent = (s + 1) % n == t || (t + 1) % n == s;
      if (!adjacent && intersect(s, t)) return false;
    }
    active.push_back(s);
  }
  return true;
}

int winding_number(const std::vector<Complex>& closed, Complex p) {
  double total = 0.0;
  for (std::size_t k = 0; k < closed.size(); ++k) {
    const Complex a = closed[k] - p, b = closed[(k + 1) % closed.size()] - p;
    total += std::arg(b / a);
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

JordanLoop extract_jordan_loop(const GridField& grid, const Mask& component, Complex center,
                               Connectivity component_connectivity) {
  const int w = component.width(), h = component.height();
  const Mask filled = fill_holes(component, dual(component_connectivity));
  const int vw = w + 1;
  auto vid = [&](int i, int j) { return static_cast<std::size_t>(j) * vw + i; };
  // out-edge directions per vertex: 0 = +i, 1 = +j, 2 = -i, 3 = -j
  constexpr std::uint8_t kNone = 255;
  std::vector<std::array<std::uint8_t, 2>> out(static_cast<std::size_t>(vw) * (h + 1), {kNone, kNone});
  auto add_edge = [&](int i, int j, std::uint8_t dir) {
    auto& slot = out[vid(i, j)];
    (slot[0] == kNone ? slot[0] : slot[1]) = dir;
  };
  auto fg = [&](int i, int j) { return component.inside(i, j) && filled(i, j); };
  std::size_t edges = 0;
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (!filled(i, j)) continue;
      if (!fg(i, j - 1)) add_edge(i, j, 0), ++edges;
      if (!fg(i + 1, j)) add_edge(i + 1, j, 1), ++edges;
      if (!fg(i, j + 1)) add_edge(i + 1, j + 1, 2), ++edges;
      if (!fg(i - 1, j)) add_edge(i, j + 1, 3), ++edges;
    }
  }
  constexpr std::array<int, 4> di{1, 0, -1, 0};
  constexpr std::array<int, 4> dj{0, 1, 0, -1};
  auto to_plane = [&](const LatticePoint& p) {
    return Complex{grid.region().x_min + static_cast<double>(p.i) * grid.dx(),
                   grid.region().y_max - static_cast<double>(p.j) * grid.dy()};
  };

  JordanLoop best;
  double best_area = -1.0;
  bool best_winds = false;
  std::vector<std::array<std::uint8_t, 2>> used(out.size(), {0, 0});
  for (std::size_t start = 0; start < out.size(); ++start) {
    for (int slot = 0; slot < 2; ++slot) {
      if (out[start][slot] == kNone || used[start][slot]) continue;
      std::vector<LatticePoint> raw;
      int i = static_cast<int>(start % vw), j = static_cast<int>(start / vw);
      std::size_t v = start;
      int s = slot;
      for (;;) {
        used[v][s] = 1;
        raw.push_back({i, j});
        const std::uint8_t d = out[v][s];
        i += di[d];
        j += dj[d];
        v = vid(i, j);
        // choose the next edge; at a saddle turn right for 8-connected
        // foreground and left for 4-connected foreground
        int next = out[v][0] == kNone ? -1 : 0;
        if (out[v][1] != kNone) {
          const std::uint8_t e = out[v][1];
          const long long cross = static_cast<long long>(di[d]) * dj[e] - static_cast<long long>(dj[d]) * di[e];
          if ((component_connectivity == Connectivity::Eight) == (cross < 0)) next = 1;
        }
        if (next < 0 || used[v][next]) break;
        s = next;
      }
      const std::size_t raw_n = raw.size();
      std::vector<LatticePoint> simplified;
      for (std::size_t k = 0; k < raw_n; ++k) {
        const LatticePoint& a = raw[(k + raw_n - 1) % raw_n];
        const LatticePoint& b = raw[k];
        const LatticePoint& c = raw[(k + 1) % raw_n];
        if ((b.i - a.i) * (c.j - b.j) - (b.j - a.j) * (c.i - b.i) != 0) simplified.push_back(b);
      }
      std::vector<Complex> plane;
      for (const auto& p : simplified) plane.push_back(to_plane(p));
      const int wind = plane.size() >= 3 ? winding_number(plane, center) : 0;
      double area = 0.0;
      for (std::size_t k = 0; k < simplified.size(); ++k) {
        const auto& a = simplified[k];
        const auto& b = simplified[(k + 1) % simplified.size()];
        area += static_cast<double>(a.i * b.j - b.i * a.j);
      }
      area = std::abs(area) / 2.0;
      const bool winds = wind != 0;
      if ((winds && !best_winds) || (winds == best_winds && area > best_area)) {
        bool repeated = false;
        {
          std::vector<std::pair<long long, long long>> sorted;
          for (const auto& p : raw) sorted.emplace_back(p.i, p.j);
          std::sort(sorted.begin(), sorted.end());
          repeated = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
        }
        best = JordanLoop{};
        best.vertices = std::move(simplified);
        best.polyline = std::move(plane);
        best.winding = wind;
        best.simple = !repeated && is_simple_polyline(best.vertices);
        if (repeated) best.note = "boundary passes through a one-vertex pinch";
        best_area = area;
        best_winds = winds;
      }
    }
  }
  if (edges == 0) best.note = "empty component";
  else if (!best_winds) best.note = best.note.empty() ? "component does not surround the centre" : best.note;
  return best;
}

Domain::Domain(BoundingBox box, std::vector<std::uint8_t> bits) : box_(box), bits_(std::move(bits)) {
  count_ = static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
}

bool Domain::contains(int i, int j) const {
  if (box_.empty() || i < box_.i_min || i > box_.i_max || j < box_.j_min || j > box_.j_max) return false;
  return bits_[static_cast<std::size_t>(j - box_.j_min) * box_.width() + (i - box_.i_min)] != 0;
}

bool Domain::subset_of(const Domain& outer) const {
  for (int j = box_.j_min; j <= box_.j_max; ++j)
    for (int i = box_.i_min; i <= box_.i_max; ++i)
      if (contains(i, j) && !outer.contains(i, j)) return false;
  return true;
}

Mask Domain::to_mask(int width, int height) const {
  Mask m(width, height);
  for (int j = box_.j_min; j <= box_.j_max; ++j)
    for (int i = box_.i_min; i <= box_.i_max; ++i)
      if (contains(i, j)) m.set(i, j);
  return m;
}

namespace {

std::string insufficient_message(std::size_t achieved, std::size_t required, const LoopChain& chain) {
  std::ostringstream msg;
  msg << "insufficient loops: found " << achieved << ", required " << required;
  if (achieved >= required && !chain.spans_grid) msg << " (outermost domain spans less than 80% of the grid)";
  return msg.str();
}

}  // namespace

InsufficientLoops::InsufficientLoops(std::size_t achieved, std::size_t required, LoopChain partial)
    : Error(insufficient_message(achieved, required, partial)), achieved_(achieved), partial_(std::move(partial)) {}

LoopChain find_loop_chain(const GridField& grid, const Mask& julia, Complex center) {
  if (!grid.region().contains(center)) throw DomainError("find_loop_chain: centre lies outside the region");
  const int w = static_cast<int>(grid.width()), h = static_cast<int>(grid.height());
  const BoundingBox window{0, w - 1, 0, h - 1};
  Growth growth(julia, window);
  LoopChain chain;
  chain.center = center;

  auto accept = [&](Domain domain, std::vector<CellIndex> ring, double radius) {
    if (!chain.domains.empty()) {
      const Domain& inner = chain.domains.back();
      chain.nested.push_back(inner.subset_of(domain) && inner.cell_count() < domain.cell_count());
    }
    chain.domains.push_back(std::move(domain));
    chain.radii.push_back(radius);
    chain.loops.push_back(std::move(ring));
  };

  double rho = 0.0;
  for (;;) {
    Domain domain;
    std::vector<CellIndex> ring;
    if (!growth.grow(disc_cells(grid, window, center, rho, growth), domain, ring)) break;
    double far = 0.0;
    for (const CellIndex& c : ring) far = std::max(far, std::abs(grid.cell_center(c.i, c.j) - center));
    accept(std::move(domain), std::move(ring), rho);
    rho = far + std::max(grid.dx(), grid.dy());
  }

  // Discs stop at the first direction that meets a border-touching
  // component. Stretch a box seed along one axis at a time, keeping the last
  // domain, and keep the largest bounded result found by bisection.
  for (int axis = 1; axis >= 0 && !chain.domains.empty(); --axis) {
    const Domain last = chain.domains.back();
    const BoundingBox& b = last.bbox();
    std::vector<std::size_t> base;
    for (int j = b.j_min; j <= b.j_max; ++j)
      for (int i = b.i_min; i <= b.i_max; ++i)
        if (last.contains(i, j)) base.push_back(growth.local_index(i, j));
    int lo = axis ? b.j_max - b.j_min : b.i_max - b.i_min;
    int hi = axis ? h : w;
    std::optional<std::pair<Domain, std::vector<CellIndex>>> best;
    int best_extent = 0;
    while (hi - lo > 1) {
      const int mid = (lo + hi) / 2;
      // box of extent `mid` cells along the axis, centred on the last domain
      const int centre2 = axis ? b.j_min + b.j_max : b.i_min + b.i_max;
      const int from = std::max(0, (centre2 - mid) / 2), to = std::min((axis ? h : w) - 1, (centre2 + mid) / 2);
      std::vector<std::size_t> seed = base;
      // only rows (columns) beyond the last domain's box, so that the seed
      // does not cover its loop
      if (axis) {
        for (int j = from; j <= to; ++j)
          if (j < b.j_min || j > b.j_max)
            for (int i = b.i_min; i <= b.i_max; ++i) seed.push_back(growth.local_index(i, j));
      } else {
        for (int j = b.j_min; j <= b.j_max; ++j)
          for (int i = from; i <= to; ++i)
            if (i < b.i_min || i > b.i_max) seed.push_back(growth.local_index(i, j));
      }
      Domain domain;
      std::vector<CellIndex> ring;
      if (growth.grow(seed, domain, ring)) {
        lo = mid;
        if (domain.cell_count() > last.cell_count()) {
          best.emplace(std::move(domain), std::move(ring));
          best_extent = mid;
        }
      } else {
        hi = mid;
      }
    }
    if (best) accept(std::move(best->first), std::move(best->second), 0.5 * best_extent * (axis ? grid.dy() : grid.dx()));
  }

  if (!chain.domains.empty()) {
    const BoundingBox& b = chain.domains.back().bbox();
    chain.spans_grid = b.width() >= 0.8 * w && b.height() >= 0.8 * h;
  }
  return chain;
}

LoopChain detect_spider_web(const GridField& grid, Complex center, std::size_t min_loops, JuliaMaskMode mode) {
  LoopChain chain = find_loop_chain(grid, julia_mask(grid, mode), center);
  const std::size_t achieved = chain.loops.size();
  if (achieved < min_loops || !chain.spans_grid) throw InsufficientLoops(achieved, min_loops, std::move(chain));
  return chain;
}

BuriedScan buried_point_scan(const GridField& grid, const Mask& julia, const BuriedScanParams& params) {
  if (params.sample_count < 1) throw Error("buried_point_scan: sample_count must be at least 1");
  for (std::size_t k = 1; k < params.scales.size(); ++k)
    if (!(params.scales[k] < params.scales[k - 1]))
      throw Error("buried_point_scan: scales must be strictly decreasing");
  const int w = static_cast<int>(grid.width()), h = static_cast<int>(grid.height());

  BuriedScan scan;
  const double cell = std::max(grid.dx(), grid.dy());
  for (double eps : params.scales)
    (eps / cell >= params.resolution_floor_cells ? scan.resolved_scales : scan.unresolved_scales).push_back(eps);

  std::vector<std::size_t> eligible;
  for (int j = 0; j < h; ++j) {
    for (int i = 0; i < w; ++i) {
      if (!julia(i, j)) continue;
      bool near_basin = false;
      for (int d = 0; d < 8 && !near_basin; ++d) {
        const int a = i + kDi[d], b = j + kDj[d];
        near_basin = a >= 0 && b >= 0 && a < w && b < h && grid.code(a, b) >= 3;
      }
      if (!near_basin && grid.code(i, j) < 3) eligible.push_back(julia.index(i, j));
    }
  }
  scan.eligible_cells = eligible.size();
  std::vector<std::size_t> samples;
  if (params.sample_count >= eligible.size()) {
    samples = eligible;
  } else {
    std::mt19937_64 rng(params.seed);
    std::sample(eligible.begin(), eligible.end(), std::back_inserter(samples), params.sample_count, rng);
  }
  scan.sampled = samples.size();
  if (scan.resolved_scales.empty()) return scan;

  std::vector<std::optional<BuriedCandidate>> results(samples.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t s = first; s < samples.size(); s += stride) {
      const int ci = static_cast<int>(samples[s] % w), cj = static_cast<int>(samples[s] / w);
      BuriedCandidate cand;
      cand.cell = {ci, cj};
      cand.point = grid.cell_center(ci, cj);
      bool ok = true;
      for (double eps : scan.resolved_scales) {
        const int hx = static_cast<int>(std::floor(eps / grid.dx()));
        const int hy = static_cast<int>(std::floor(eps / grid.dy()));
        const BoundingBox win{ci - hx, ci + hx, cj - hy, cj + hy};
        if (win.i_min < 0 || win.j_min < 0 || win.i_max >= w || win.j_max >= h) {
          ok = false;
          break;
        }
        Growth g(julia, win);
        Domain domain;
        std::vector<CellIndex> ring;
        if (!g.grow(disc_cells(grid, win, cand.point, 0.5 * eps, g), domain, ring)) {
          ok = false;
          break;
        }
        cand.scales_witnessed.push_back(eps);
        cand.witness_loops.push_back(std::move(ring));
      }
      if (ok) results[s] = std::move(cand);
    }
  };
  unsigned workers = params.threads ? params.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, samples.size())));
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t, workers);
  }
  for (auto& r : results)
    if (r) scan.candidates.push_back(std::move(*r));
  return scan;
}

DiameterCensus diameter_census(const ComponentSet& components, const std::vector<double>& thresholds) {
  DiameterCensus census;
  census.thresholds = thresholds;
  for (double eps : thresholds) {
    std::size_t n = 0;
    for (const Component& c : components.components)
      if (c.spherical_diameter > eps) ++n;
    census.counts.push_back(n);
  }
  for (const Component& c : components.components) {
    if (c.touches_border) continue;
    ++census.interior_components;
    census.max_interior_euclidean = std::max(census.max_interior_euclidean, c.euclidean_diameter);
  }
  return census;
}

}  // namespace jws
