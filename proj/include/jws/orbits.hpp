#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jws/complex_core.hpp"
#include "jws/maxmod.hpp"

namespace jws {

enum class Tag : std::uint8_t { FastEscaping = 0, Escaping = 1, Undetermined = 2, Attracted = 3 };

/// Per-point dynamical label. Undetermined is the raster stand-in for points
/// that are neither captured by a basin nor seen to escape.
struct Label {
  Tag tag = Tag::Undetermined;
  int cycle = -1;  // capture target id when tag == Attracted

  static Label fast_escaping() { return {Tag::FastEscaping, -1}; }
  static Label escaping() { return {Tag::Escaping, -1}; }
  static Label undetermined() { return {Tag::Undetermined, -1}; }
  static Label attracted(int id) { return {Tag::Attracted, id}; }

  /// Byte code used by the grid file: 0, 1, 2, then 3 + cycle id.
  std::uint8_t code() const;
  static Label from_code(std::uint8_t code);

  bool operator==(const Label&) const = default;
};

std::string to_string(const Label& label);

/// Attracting direction of a parabolic cycle point q, for the cycle's p-th
/// iterate written as F(q + w) = q + w + leading * w^(order + 1) + ...
/// A point is captured when Re(-1 / (order * leading * w^order)) > threshold
/// and w lies in the lobe of `direction`.
struct Petal {
  Complex direction;
  int order = 0;
  Complex leading;
  double threshold = 0.0;
  double radius = 0.0;  // every captured w satisfies |w| < radius
};

/// A capture target: an attracting cycle, or one attracting petal of a
/// parabolic cycle (a parabolic point with k petals yields k records).
struct CycleRecord {
  int id = 0;
  std::vector<Complex> points;
  int period = 0;
  double multiplier_modulus = 0.0;
  bool parabolic = false;
  std::optional<Petal> petal;          // parabolic records only
  std::vector<double> capture_radii;   // attracting records: disc radius per point

  /// Whether z lies in this record's capture region.
  bool captures(Complex z) const;
};

struct Orbit {
  enum class Terminal { Overflowed, Converged, Exhausted };

  std::vector<Complex> points;
  Terminal terminal = Terminal::Exhausted;
  std::size_t step = 0;  // step of overflow or capture
  int cycle_id = -1;
};

Orbit iterate_orbit(const FunctionSpec& spec, Complex z0, std::size_t max_iter,
                    std::span<const CycleRecord> cycles);

struct SeedOutcome {
  Complex seed;
  std::optional<int> cycle_id;
  std::string note;  // why no cycle was recorded, when cycle_id is empty
};

struct CycleSearch {
  std::vector<CycleRecord> cycles;
  std::vector<SeedOutcome> seeds;
};

/// Iterates each seed 10^4 steps, detects a repetition of period <= max_period,
/// refines it by Newton's method on f^p(z) - z and keeps attracting or
/// parabolic cycles. Seeds absorbed by the same target share a record.
CycleSearch find_attracting_cycles(const FunctionSpec& spec, std::span<const Complex> seeds,
                                   int max_period);

/// |(f^p)'(z)| along p steps, by the chain rule with central differences.
double iterate_derivative_modulus(const FunctionSpec& spec, Complex z, int p);

struct ClassifyParams {
  std::size_t max_iter = 10000;
};

/// Precomputed per-function state for the renderer's inner loop.
class Classifier {
 public:
  Classifier(FunctionSpec spec, std::vector<CycleRecord> cycles, const MaxModulusTable& table,
             ClassifyParams params = {});

  Label operator()(Complex z) const;

  const FunctionSpec& spec() const { return spec_; }
  std::span<const CycleRecord> cycles() const { return cycles_; }

 private:
  std::optional<int> capture(Complex z) const;

  FunctionSpec spec_;
  std::vector<CycleRecord> cycles_;
  std::vector<double> level_moduli_;  // M^n(R, f), or +inf when saturated
  ClassifyParams params_;
};

Label classify_point(const FunctionSpec& spec, Complex z, std::span<const CycleRecord> cycles,
                     const MaxModulusTable& table, ClassifyParams params = {});

/// Finite-horizon A_R(f) test: |f^n(z)| >= M^n(R, f) for n = 0..horizon.
/// An orbit that overflows after passing every earlier check is taken to
/// satisfy the remaining levels.
bool in_A_R(const FunctionSpec& spec, Complex z, const MaxModulusTable& table, std::size_t horizon);

/// Escape radius, level table and capture targets for one catalog entry.
struct Dynamics {
  FunctionSpec spec;
  MaxModulusTable table;
  std::vector<CycleRecord> cycles;
  ClassifyParams params;

  Classifier classifier() const { return Classifier(spec, cycles, table, params); }
};

Dynamics prepare_dynamics(const FunctionSpec& spec, std::size_t depth = 24,
                          ClassifyParams params = {}, int max_period = 8);

struct LambdaSinSearch {
  Complex lambda;
  std::vector<CycleRecord> cycles;
  std::size_t candidates_tried = 0;
};

/// Scans Re lambda in [pi/2, 3], Im lambda in [0, 1] on a grid x grid lattice
/// and returns the first lambda whose critical values +-lambda are absorbed by
/// two distinct attracting cycles with multiplier below max_multiplier.
std::optional<LambdaSinSearch> search_lambda_sin(int grid = 100, double max_multiplier = 0.9);

}  // namespace jws
