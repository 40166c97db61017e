#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "jws/complex_core.hpp"

namespace jws {

// Levels whose natural log exceeds this are treated as saturated (> 1e300).
inline constexpr double kSaturationLog = 690.0;

/// Escape radius R and the iterated maximum modulus log M^n(R, f), n = 0, 1, ...
struct MaxModulusTable {
  FunctionSpec spec;
  double radius = 0.0;
  std::vector<double> log_levels;
  std::optional<std::size_t> saturated_at;

  std::size_t depth() const { return log_levels.empty() ? 0 : log_levels.size() - 1; }
};

/// log max_{|z| = r} |f(z)|: n_samples equispaced points on the circle, then a
/// ternary search on the arc around the best sample. Radii beyond the direct
/// evaluation range use the catalog's asymptotic log-form.
double log_max_modulus(const FunctionSpec& spec, double r, int n_samples = 1024);

/// Closed-form (or upper-envelope) log M(r, f) used for large r; r = exp(log_r).
double asymptotic_log_max_modulus(const FunctionSpec& spec, double log_r);

/// Smallest radius on the grid r = 2^(k/8), k >= -32, above which log M(r) > log r
/// at every scanned radius up to 1e6. Throws Error when none exists.
double find_escape_radius(const FunctionSpec& spec);

MaxModulusTable build_table(const FunctionSpec& spec, double radius, std::size_t depth);

}  // namespace jws
