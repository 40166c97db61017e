#include "jws/maxmod.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace jws {

namespace {

constexpr double kDirectRangeLog = 600.0;
constexpr int kTernarySteps = 40;
constexpr double kEscapeScanMax = 1e6;

double modulus_on_circle(const FunctionSpec& spec, double r, double theta) {
  const auto w = eval(spec, std::polar(r, theta));
  return w ? std::abs(*w) : std::numeric_limits<double>::infinity();
}

double log_cosh(double s) { return s + std::log1p(std::exp(-2.0 * s)) - std::log(2.0); }

}  // namespace

double asymptotic_log_max_modulus(const FunctionSpec& spec, double log_r) {
  const double r = std::exp(log_r);
  switch (spec.kind()) {
    case FunctionKind::Sin:
      return r - std::log(2.0) + std::log(-std::expm1(-2.0 * r));
    case FunctionKind::LambdaSin:
      return std::log(std::abs(spec.lambda())) + r - std::log(2.0) + std::log(-std::expm1(-2.0 * r));
    case FunctionKind::LambdaZExp:
      return std::log(std::abs(spec.lambda())) + log_r + r;
    case FunctionKind::MorosawaG: {
      const double a = spec.a();
      return std::log(a) + a + std::log(r + a - 1.0) + r;
    }
    case FunctionKind::BergweilerMorosawaCos:
      // value at z = -r, where |cos sqrt z| = cosh sqrt r peaks; the rational
      // factor a r / (4r + pi^2) tends to the circle maximum as r grows
      return std::log(spec.a()) + log_r - std::log(4.0 * r + kPi * kPi) + log_cosh(std::sqrt(r));
  }
  return 0.0;
}

double log_max_modulus(const FunctionSpec& spec, double r, int n_samples) {
  if (!(r > 0.0)) throw Error("log_max_modulus: radius must be positive");
  if (n_samples < 64) throw Error("log_max_modulus: need at least 64 samples");
  const double log_r = std::log(r);
  if (asymptotic_log_max_modulus(spec, log_r) > kDirectRangeLog)
    return asymptotic_log_max_modulus(spec, log_r);

  const double step = 2.0 * kPi / n_samples;
  int best = 0;
  double best_value = -1.0;
  for (int k = 0; k < n_samples; ++k) {
    const double v = modulus_on_circle(spec, r, k * step);
    if (v > best_value) {
      best_value = v;
      best = k;
    }
  }
  if (!std::isfinite(best_value)) return asymptotic_log_max_modulus(spec, log_r);

  double lo = (best - 1) * step, hi = (best + 1) * step;
  for (int it = 0; it < kTernarySteps; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (modulus_on_circle(spec, r, m1) < modulus_on_circle(spec, r, m2))
      lo = m1;
    else
      hi = m2;
  }
  best_value = std::max(best_value, modulus_on_circle(spec, r, 0.5 * (lo + hi)));
  return std::log(best_value);
}

double find_escape_radius(const FunctionSpec& spec) {
  constexpr int k_min = -32;
  const int k_max = static_cast<int>(std::ceil(8.0 * std::log2(kEscapeScanMax)));
  auto admissible = [&](double r) { return log_max_modulus(spec, r) > std::log(r); };

  int k0 = k_max + 1;
  for (int k = k_max; k >= k_min; --k) {
    if (!admissible(std::exp2(k / 8.0))) break;
    k0 = k;
  }
  if (k0 > k_max)
    throw Error("find_escape_radius(" + spec.name() + "): no radius below 1e6 with M(r) > r");
  const double radius = std::exp2(k0 / 8.0);

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> log_uniform(std::log(radius), std::log(kEscapeScanMax));
  for (int i = 0; i < 100; ++i) {
    const double r = std::exp(log_uniform(rng));
    if (!admissible(r)) {
      std::ostringstream msg;
      msg << "find_escape_radius(" << spec.name() << "): verification failed at r = " << r;
      throw Error(msg.str());
    }
  }
  return radius;
}

MaxModulusTable build_table(const FunctionSpec& spec, double radius, std::size_t depth) {
  if (!(radius > 0.0)) throw Error("build_table: radius must be positive");
  if (depth < 1) throw Error("build_table: depth must be at least 1");
  MaxModulusTable table{spec, radius, {std::log(radius)}, std::nullopt};
  for (std::size_t n = 1; n <= depth; ++n) {
    const double log_r = table.log_levels.back();
    const double next = asymptotic_log_max_modulus(spec, log_r) > kDirectRangeLog
                            ? asymptotic_log_max_modulus(spec, log_r)
                            : log_max_modulus(spec, std::exp(log_r));
    if (!(next > log_r))
      throw Error("build_table(" + spec.name() + "): M(r) <= r at level " + std::to_string(n) +
                  "; radius is not an escape radius");
    table.log_levels.push_back(next);
    if (next > kSaturationLog) {
      table.saturated_at = n;
      break;
    }
  }
  return table;
}

}  // namespace jws
