#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jws/gridfield.hpp"

namespace jws {

enum class Connectivity { Four = 4, Eight = 8 };

inline Connectivity dual(Connectivity c) { return c == Connectivity::Four ? Connectivity::Eight : Connectivity::Four; }

/// Boolean raster with the same row-major layout as GridField.
class Mask {
 public:
  Mask() = default;
  Mask(int width, int height, bool value = false)
      : width_(width), height_(height), bits_(static_cast<std::size_t>(width) * height, value ? 1 : 0) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * width_ + i; }
  bool inside(int i, int j) const { return i >= 0 && j >= 0 && i < width_ && j < height_; }

  bool operator()(int i, int j) const { return bits_[index(i, j)] != 0; }
  bool operator[](std::size_t k) const { return bits_[k] != 0; }
  void set(int i, int j, bool v = true) { bits_[index(i, j)] = v ? 1 : 0; }
  void set(std::size_t k, bool v = true) { bits_[k] = v ? 1 : 0; }

  std::size_t count() const;
  bool operator==(const Mask&) const = default;

 private:
  int width_ = 0, height_ = 0;
  std::vector<std::uint8_t> bits_;
};

Mask make_mask(const GridField& grid, const std::function<bool(Label)>& predicate);

enum class JuliaMaskMode {
  // every cell that is not a basin interior cell: non-Attracted cells plus
  // Attracted cells 4-adjacent to a cell attracted to a different target
  BasinComplement,
  // Undetermined cells only
  UndeterminedOnly,
};

Mask julia_mask(const GridField& grid, JuliaMaskMode mode = JuliaMaskMode::BasinComplement);

/// Attracted cells with a 4-neighbour attracted to a different target.
Mask interface_cells(const GridField& grid);

struct BoundingBox {
  int i_min = 0, i_max = -1, j_min = 0, j_max = -1;

  int width() const { return i_max - i_min + 1; }
  int height() const { return j_max - j_min + 1; }
  bool empty() const { return i_max < i_min; }
  void include(int i, int j);
  bool operator==(const BoundingBox&) const = default;
};

struct Component {
  std::size_t cell_count = 0;
  BoundingBox bbox;
  double euclidean_diameter = 0.0;
  double spherical_diameter = 0.0;
  bool touches_border = false;
  std::uint8_t code = 0;  // label code of the first cell
  double centroid_x = 0.0, centroid_y = 0.0;
};

struct ComponentSet {
  int width = 0, height = 0;
  std::vector<int> ids;  // per cell; 0 = not in the mask, k = components[k - 1]
  std::vector<Component> components;

  int id_at(int i, int j) const { return ids[static_cast<std::size_t>(j) * width + i]; }
  /// Cell indices of each component, in raster order.
  std::vector<std::vector<std::size_t>> cells() const;
};

struct LabelOptions {
  bool split_by_code = false;  // adjacent cells join only when their label codes agree
  bool diameters = true;
};

/// Union-find labelling of the mask.
ComponentSet label_components(const GridField& grid, const Mask& mask, Connectivity connectivity,
                              LabelOptions options = {});
ComponentSet label_components(const GridField& grid, const std::function<bool(Label)>& predicate,
                              Connectivity connectivity, LabelOptions options = {});

/// Maximum pairwise distance over cell centres, euclidean and chordal.
struct Diameters {
  double euclidean = 0.0;
  double spherical = 0.0;
};
Diameters cell_set_diameters(const GridField& grid, const std::vector<std::size_t>& cells);

/// The mask united with every complementary component that does not touch the
/// grid border. `complement` is the connectivity used for the complement.
Mask fill_holes(const Mask& mask, Connectivity complement = Connectivity::Four);

/// Whether every path from the start cell that avoids `barrier` stays off the
/// grid border. Flood-fill oracle for loops and witnesses.
bool surrounds(const Mask& barrier, int start_i, int start_j, Connectivity path = Connectivity::Four);

struct LatticePoint {
  long long i = 0, j = 0;  // cell-corner coordinates
  bool operator==(const LatticePoint&) const = default;
};

struct JordanLoop {
  std::vector<LatticePoint> vertices;  // closed; the first vertex is not repeated
  std::vector<Complex> polyline;       // the same vertices in the plane
  bool simple = false;
  int winding = 0;  // around the centre
  std::string note;
};

/// Traces the outer boundary of fill_holes(component) on cell corners.
/// Diagonal contacts are kept connected, so a boundary through a one-vertex
/// pinch repeats that vertex and is reported as not simple.
JordanLoop extract_jordan_loop(const GridField& grid, const Mask& component, Complex center,
                               Connectivity component_connectivity = Connectivity::Eight);

/// Closed-polyline simplicity: no repeated vertex and no crossing or touching
/// pair of non-adjacent segments (sweep over x-extents).
bool is_simple_polyline(const std::vector<LatticePoint>& closed);

/// Winding number of a closed polyline around p, by angle summation.
int winding_number(const std::vector<Complex>& closed, Complex p);

/// Bounded subset of the grid stored over its bounding box.
class Domain {
 public:
  Domain() = default;
  Domain(BoundingBox box, std::vector<std::uint8_t> bits);

  const BoundingBox& bbox() const { return box_; }
  std::size_t cell_count() const { return count_; }
  bool contains(int i, int j) const;
  /// Whether every cell of this domain is a cell of `outer`.
  bool subset_of(const Domain& outer) const;
  Mask to_mask(int width, int height) const;

 private:
  BoundingBox box_;
  std::vector<std::uint8_t> bits_;
  std::size_t count_ = 0;
};

struct LoopChain {
  Complex center;
  std::vector<std::vector<CellIndex>> loops;  // loop k is the outer 4-boundary of domains[k]
  std::vector<Domain> domains;                // G_1 within G_2 within ...
  std::vector<double> radii;                  // seed radius of each domain (box half-extent for the last ones)
  std::vector<bool> nested;                   // certificate for k -> k + 1
  bool spans_grid = false;                    // outermost bbox covers 80% of the grid in both axes
};

class InsufficientLoops : public Error {
 public:
  InsufficientLoops(std::size_t achieved, std::size_t required, LoopChain partial);
  std::size_t achieved() const { return achieved_; }
  const LoopChain& partial() const { return partial_; }

 private:
  std::size_t achieved_;
  LoopChain partial_;
};

/// Grows nested bounded domains around `center` whose outer boundaries are
/// made of Julia-mask cells. Domain k+1 is seeded by a disc containing loop k,
/// joined with every non-Julia component it meets, with holes and diagonal
/// pinches closed. When the next disc reaches the grid border, box seeds
/// stretched along one axis at a time give at most two further domains.
LoopChain find_loop_chain(const GridField& grid, const Mask& julia, Complex center);

/// find_loop_chain plus the acceptance rule: at least min_loops loops and an
/// outermost domain spanning 80% of the grid. Throws InsufficientLoops.
LoopChain detect_spider_web(const GridField& grid, Complex center, std::size_t min_loops,
                            JuliaMaskMode mode = JuliaMaskMode::BasinComplement);

struct BuriedCandidate {
  CellIndex cell;
  Complex point;
  std::vector<double> scales_witnessed;               // strictly decreasing
  std::vector<std::vector<CellIndex>> witness_loops;  // one per scale
};

struct BuriedScan {
  std::vector<BuriedCandidate> candidates;
  std::size_t eligible_cells = 0;  // Julia cells with no 8-adjacent Attracted cell
  std::size_t sampled = 0;
  std::vector<double> resolved_scales;    // scales at or above the resolution floor
  std::vector<double> unresolved_scales;  // below the floor, not tested
};

struct BuriedScanParams {
  std::size_t sample_count = 200;
  std::vector<double> scales{2.0, 1.0, 0.5};
  double resolution_floor_cells = 10.0;
  std::uint64_t seed = 0x5eed;
  unsigned threads = 0;
};

/// For sampled Julia cells z, looks for a loop of Julia cells surrounding z
/// inside the square of half-width eps about z, for every eps in scales that
/// spans at least the resolution floor.
BuriedScan buried_point_scan(const GridField& grid, const Mask& julia, const BuriedScanParams& params = {});

struct DiameterCensus {
  std::vector<double> thresholds;
  std::vector<std::size_t> counts;  // components with spherical diameter > threshold
  double max_interior_euclidean = 0.0;
  std::size_t interior_components = 0;
};

DiameterCensus diameter_census(const ComponentSet& components, const std::vector<double>& thresholds);

}  // namespace jws
