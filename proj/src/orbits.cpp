#include "jws/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace jws {

namespace {

constexpr std::size_t kSeedIterations = 10000;
constexpr double kRepetitionTolerance = 1e-8;
constexpr double kParabolicTolerance = 1e-6;
constexpr double kNewtonReach = 0.05;
constexpr int kCauchyPoints = 64;
constexpr double kCauchyRadius = 1e-2;

std::optional<Complex> iterate_n(const FunctionSpec& spec, Complex z, int n) {
  for (int i = 0; i < n; ++i) {
    auto w = eval(spec, z);
    if (!w) return std::nullopt;
    z = *w;
  }
  return z;
}

std::optional<Complex> derivative(const FunctionSpec& spec, Complex z) {
  const double h = 1e-6 * std::max(1.0, std::abs(z));
  const auto fp = eval(spec, z + h), fm = eval(spec, z - h);
  if (!fp || !fm) return std::nullopt;
  return (*fp - *fm) / (2.0 * h);
}

// F(z) and F'(z) for F = f^p.
std::optional<std::pair<Complex, Complex>> iterate_with_derivative(const FunctionSpec& spec, Complex z,
                                                                   int p) {
  Complex d = 1.0;
  for (int i = 0; i < p; ++i) {
    const auto df = derivative(spec, z);
    const auto w = eval(spec, z);
    if (!df || !w) return std::nullopt;
    d *= *df;
    z = *w;
  }
  return std::pair{z, d};
}

std::optional<Complex> newton_cycle(const FunctionSpec& spec, Complex z, int p) {
  for (int it = 0; it < 200; ++it) {
    const auto fd = iterate_with_derivative(spec, z, p);
    if (!fd) return std::nullopt;
    const Complex g = fd->first - z;
    const Complex slope = fd->second - 1.0;
    if (g == 0.0 || slope == 0.0) break;
    const Complex step = g / slope;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return std::nullopt;
    z -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(z))) break;
  }
  const auto fz = iterate_n(spec, z, p);
  if (!fz || std::abs(*fz - z) > 1e-10 * std::max(1.0, std::abs(z))) return std::nullopt;
  return z;
}

// Taylor coefficients c_0..c_count of F(q + w) - q - w, F = f^p, via Cauchy
// integrals on |w| = kCauchyRadius.
std::vector<Complex> displacement_coefficients(const FunctionSpec& spec, Complex q, int p,
                                               int count) {
  std::vector<Complex> values(kCauchyPoints);
  for (int n = 0; n < kCauchyPoints; ++n) {
    const Complex w = std::polar(kCauchyRadius, 2.0 * kPi * n / kCauchyPoints);
    values[n] = iterate_n(spec, q + w, p).value_or(q + w) - q - w;
  }
  std::vector<Complex> c(count + 1);
  for (int j = 0; j <= count; ++j) {
    Complex sum = 0.0;
    for (int n = 0; n < kCauchyPoints; ++n)
      sum += values[n] * std::polar(1.0, -2.0 * kPi * j * n / kCauchyPoints);
    c[j] = sum / (kCauchyPoints * std::pow(kCauchyRadius, j));
  }
  return c;
}

int dominant_index(const std::vector<Complex>& c) {
  int best = 1;
  double best_value = -1.0;
  for (int j = 1; j < static_cast<int>(c.size()); ++j) {
    const double v = std::abs(c[j]) * std::pow(kCauchyRadius, j);
    if (v > best_value) {
      best_value = v;
      best = j;
    }
  }
  return best;
}

struct ParabolicData {
  Complex point;
  int period = 0;  // iterate whose multiplier is exactly 1
  int order = 0;
  Complex leading;
  std::vector<Complex> coefficients;
};

// Recenter a multiple root of F(z) - z on the centroid of its root cluster and
// read off the leading displacement term.
std::optional<ParabolicData> resolve_parabolic(const FunctionSpec& spec, Complex q, int p) {
  for (int mult = 1; mult <= 6; ++mult) {
    const int period = p * mult;
    auto c = displacement_coefficients(spec, q, period, 8);
    if (std::abs(c[1]) > 1e-4) continue;  // multiplier of this iterate is not 1
    Complex centre = q;
    for (int it = 0; it < 4; ++it) {
      const int mu = dominant_index(c);
      if (mu < 2) return std::nullopt;
      centre -= c[mu - 1] / (static_cast<double>(mu) * c[mu]);
      c = displacement_coefficients(spec, centre, period, 8);
    }
    const int mu = dominant_index(c);
    if (mu < 2) return std::nullopt;
    return ParabolicData{centre, period, mu - 1, c[mu], c};
  }
  return std::nullopt;
}

std::vector<Complex> petal_directions(const Complex& leading, int order) {
  // a v^k real negative: v^k = -conj(a)/|a|
  const double base = (kPi - std::arg(leading)) / order;
  std::vector<Complex> out;
  for (int j = 0; j < order; ++j) out.push_back(std::polar(1.0, base + 2.0 * kPi * j / order));
  return out;
}

bool in_lobe(Complex w, Complex direction, int order) {
  const double own = (w * std::conj(direction)).real();
  for (int j = 1; j < order; ++j) {
    const Complex v = direction * std::polar(1.0, 2.0 * kPi * j / order);
    if ((w * std::conj(v)).real() > own) return false;
  }
  return true;
}

double capture_radius(const FunctionSpec& spec, const std::vector<Complex>& cycle, std::size_t i,
                      double multiplier) {
  const int p = static_cast<int>(cycle.size());
  double separation = 1.0;
  for (std::size_t j = 0; j < cycle.size(); ++j)
    if (j != i) separation = std::min(separation, std::abs(cycle[j] - cycle[i]));
  const double bound = 0.5 * (1.0 + multiplier);
  double r = std::min(0.1, 0.4 * separation);
  for (int halving = 0; halving < 40; ++halving, r *= 0.5) {
    bool ok = true;
    for (double scale : {1.0, 0.5}) {
      for (int k = 0; k < 16 && ok; ++k) {
        const Complex z = cycle[i] + std::polar(r * scale, 2.0 * kPi * k / 16);
        ok = iterate_derivative_modulus(spec, z, p) <= bound;
      }
    }
    if (ok) return r;
  }
  return r;
}

bool same_cycle(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  if (a.size() != b.size()) return false;
  for (const Complex& x : a) {
    const bool hit = std::any_of(b.begin(), b.end(), [&](const Complex& y) { return std::abs(x - y) < 1e-6; });
    if (!hit) return false;
  }
  return true;
}

}  // namespace

std::uint8_t Label::code() const {
  switch (tag) {
    case Tag::FastEscaping:
      return 0;
    case Tag::Escaping:
      return 1;
    case Tag::Undetermined:
      return 2;
    case Tag::Attracted:
      return static_cast<std::uint8_t>(3 + cycle);
  }
  return 2;
}

Label Label::from_code(std::uint8_t code) {
  switch (code) {
    case 0:
      return fast_escaping();
    case 1:
      return escaping();
    case 2:
      return undetermined();
    default:
      return attracted(code - 3);
  }
}

std::string to_string(const Label& label) {
  switch (label.tag) {
    case Tag::FastEscaping:
      return "FastEscaping";
    case Tag::Escaping:
      return "Escaping";
    case Tag::Undetermined:
      return "Undetermined";
    case Tag::Attracted:
      return "Attracted(" + std::to_string(label.cycle) + ")";
  }
  return "?";
}

bool CycleRecord::captures(Complex z) const {
  if (petal) {
    const Complex w = z - points.front();
    if (std::norm(w) >= petal->radius * petal->radius || w == 0.0) return w == 0.0;
    Complex wk = w;
    for (int k = 1; k < petal->order; ++k) wk *= w;
    const Complex u = -1.0 / (static_cast<double>(petal->order) * petal->leading * wk);
    return u.real() > petal->threshold && in_lobe(w, petal->direction, petal->order);
  }
  for (std::size_t i = 0; i < points.size(); ++i)
    if (std::norm(z - points[i]) < capture_radii[i] * capture_radii[i]) return true;
  return false;
}

double iterate_derivative_modulus(const FunctionSpec& spec, Complex z, int p) {
  const auto fd = iterate_with_derivative(spec, z, p);
  return fd ? std::abs(fd->second) : std::numeric_limits<double>::infinity();
}

Orbit iterate_orbit(const FunctionSpec& spec, Complex z0, std::size_t max_iter,
                    std::span<const CycleRecord> cycles) {
  if (max_iter < 1) throw Error("iterate_orbit: max_iter must be at least 1");
  Orbit orbit;
  orbit.points.push_back(z0);
  Complex z = z0;
  for (std::size_t n = 0;; ++n) {
    for (const CycleRecord& c : cycles) {
      if (c.captures(z)) {
        orbit.terminal = Orbit::Terminal::Converged;
        orbit.step = n;
        orbit.cycle_id = c.id;
        return orbit;
      }
    }
    if (n == max_iter) {
      orbit.terminal = Orbit::Terminal::Exhausted;
      orbit.step = n;
      return orbit;
    }
    const auto w = eval(spec, z);
    if (!w) {
      orbit.terminal = Orbit::Terminal::Overflowed;
      orbit.step = n + 1;
      return orbit;
    }
    z = *w;
    orbit.points.push_back(z);
  }
}

CycleSearch find_attracting_cycles(const FunctionSpec& spec, std::span<const Complex> seeds,
                                   int max_period) {
  if (seeds.empty()) throw Error("find_attracting_cycles: no seeds");
  CycleSearch out;
  for (const Complex& seed : seeds) {
    SeedOutcome outcome{seed, std::nullopt, ""};
    Complex z = seed;
    std::size_t escaped_at = 0;
    for (std::size_t k = 0; k < kSeedIterations; ++k) {
      const auto w = eval(spec, z);
      if (!w) {
        escaped_at = k + 1;
        break;
      }
      z = *w;
    }
    if (escaped_at) {
      outcome.note = "no cycle found: orbit overflowed at step " + std::to_string(escaped_at);
      out.seeds.push_back(outcome);
      continue;
    }

    std::optional<Complex> root;
    int period = 0;
    for (int p = 1; p <= max_period && !root; ++p) {
      const auto zp = iterate_n(spec, z, p);
      if (!zp) continue;
      const bool repeats = std::abs(*zp - z) < kRepetitionTolerance * std::max(1.0, std::abs(z));
      const auto refined = newton_cycle(spec, z, p);
      if (!refined) continue;
      // Slowly converging (parabolic) orbits do not repeat to tolerance; accept
      // a nearby root only if it is not repelling.
      if (!repeats && std::abs(*refined - z) > kNewtonReach) continue;
      if (!repeats && iterate_derivative_modulus(spec, *refined, p) > 1.0 + kParabolicTolerance) continue;
      root = refined;
      period = p;
    }
    if (!root) {
      outcome.note = "no cycle found: no repetition with period <= " + std::to_string(max_period);
      out.seeds.push_back(outcome);
      continue;
    }

    CycleRecord record;
    record.period = period;
    record.multiplier_modulus = iterate_derivative_modulus(spec, *root, period);
    if (record.multiplier_modulus > 1.0 + kParabolicTolerance) {
      outcome.note = "no cycle found: period-" + std::to_string(period) + " cycle is repelling";
      out.seeds.push_back(outcome);
      continue;
    }
    Complex base = *root;
    if (record.multiplier_modulus > 1.0 - kParabolicTolerance) {
      const auto para = resolve_parabolic(spec, base, period);
      if (!para) {
        outcome.note = "no cycle found: indifferent cycle without a resolvable petal";
        out.seeds.push_back(outcome);
        continue;
      }
      base = para->point;
      record.parabolic = true;
      record.multiplier_modulus = std::abs(1.0 + para->coefficients[1]);
      // advance the seed orbit to the neighbourhood of the base point
      Complex near = z;
      for (int s = 0; s < para->period && std::abs(near - base) > kNewtonReach; ++s)
        near = eval(spec, near).value_or(near);
      const auto dirs = petal_directions(para->leading, para->order);
      Complex direction = dirs.front();
      for (const Complex& v : dirs)
        if (in_lobe(near - base, v, para->order)) direction = v;
      const auto& c = para->coefficients;
      const int mu = para->order + 1;
      const double lead = std::abs(para->leading);
      double radius = 0.2;
      if (mu + 1 < static_cast<int>(c.size()) && std::abs(c[mu + 1]) > 0)
        radius = std::min(radius, 0.1 * lead / std::abs(c[mu + 1]));
      if (mu + 2 < static_cast<int>(c.size()) && std::abs(c[mu + 2]) > 0)
        radius = std::min(radius, std::sqrt(0.1 * lead / std::abs(c[mu + 2])));
      Petal petal{direction, para->order, para->leading,
                  1.0 / (para->order * lead * std::pow(radius, para->order)), radius};
      record.petal = petal;
    }
    // exact zeros come back from the root polish as ~1e-16 residue
    if (std::abs(base.real()) < 1e-13) base.real(0.0);
    if (std::abs(base.imag()) < 1e-13) base.imag(0.0);
    record.points.push_back(base);
    for (int j = 1; j < period; ++j) record.points.push_back(eval(spec, record.points.back()).value());
    if (!record.parabolic)
      for (std::size_t i = 0; i < record.points.size(); ++i)
        record.capture_radii.push_back(capture_radius(spec, record.points, i, record.multiplier_modulus));

    auto existing = std::find_if(out.cycles.begin(), out.cycles.end(), [&](const CycleRecord& c) {
      if (!same_cycle(c.points, record.points)) return false;
      if (c.petal.has_value() != record.petal.has_value()) return false;
      return !c.petal || std::abs(c.petal->direction - record.petal->direction) < 1e-6;
    });
    if (existing != out.cycles.end()) {
      outcome.cycle_id = existing->id;
    } else {
      record.id = static_cast<int>(out.cycles.size());
      outcome.cycle_id = record.id;
      out.cycles.push_back(std::move(record));
    }
    out.seeds.push_back(outcome);
  }
  return out;
}

Classifier::Classifier(FunctionSpec spec, std::vector<CycleRecord> cycles, const MaxModulusTable& table,
                       ClassifyParams params)
    : spec_(std::move(spec)), cycles_(std::move(cycles)), params_(params) {
  for (double level : table.log_levels)
    level_moduli_.push_back(level > kSaturationLog ? std::numeric_limits<double>::infinity() : std::exp(level));
}

std::optional<int> Classifier::capture(Complex z) const {
  for (const CycleRecord& c : cycles_)
    if (c.captures(z)) return c.id;
  return std::nullopt;
}

Label Classifier::operator()(Complex z) const {
  bool dominates = true;
  std::size_t comparisons = 0;
  for (std::size_t n = 0;; ++n) {
    if (n < level_moduli_.size()) {
      if (std::abs(z) < level_moduli_[n]) dominates = false;
      ++comparisons;
    }
    if (auto id = capture(z)) return Label::attracted(*id);
    if (n == params_.max_iter) return Label::undetermined();
    const auto w = eval(spec_, z);
    if (!w) {
      // the overflowed value exceeds every unsaturated level
      if (n + 1 < level_moduli_.size()) ++comparisons;
      return dominates && comparisons >= 3 ? Label::fast_escaping() : Label::escaping();
    }
    z = *w;
  }
}

Label classify_point(const FunctionSpec& spec, Complex z, std::span<const CycleRecord> cycles,
                     const MaxModulusTable& table, ClassifyParams params) {
  return Classifier(spec, {cycles.begin(), cycles.end()}, table, params)(z);
}

bool in_A_R(const FunctionSpec& spec, Complex z, const MaxModulusTable& table, std::size_t horizon) {
  if (horizon < 3) throw Error("in_A_R: horizon must be at least 3");
  for (std::size_t n = 0; n <= horizon; ++n) {
    if (n >= table.log_levels.size()) {
      // a finite orbit point cannot reach a saturated level
      if (table.saturated_at) return false;
      throw Error("in_A_R: table depth " + std::to_string(table.depth()) + " is below horizon " +
                  std::to_string(horizon));
    }
    const double level = table.log_levels[n];
    if (std::log(std::abs(z)) < level) return false;
    const auto w = eval(spec, z);
    if (!w) return true;
    z = *w;
  }
  return true;
}

Dynamics prepare_dynamics(const FunctionSpec& spec, std::size_t depth, ClassifyParams params,
                          int max_period) {
  const double radius = find_escape_radius(spec);
  auto table = build_table(spec, radius, depth);
  const auto seeds = spec.singular_values();
  auto cycles = seeds.empty() ? std::vector<CycleRecord>{}
                              : find_attracting_cycles(spec, seeds, max_period).cycles;
  return Dynamics{spec, std::move(table), std::move(cycles), params};
}

std::optional<LambdaSinSearch> search_lambda_sin(int grid, double max_multiplier) {
  if (grid < 2) throw Error("search_lambda_sin: grid must be at least 2");
  const double re_lo = kPi / 2.0, re_hi = 3.0, im_lo = 0.0, im_hi = 1.0;
  std::size_t tried = 0;
  for (int j = 0; j < grid; ++j) {
    for (int i = 0; i < grid; ++i) {
      const Complex lambda{re_lo + (re_hi - re_lo) * i / (grid - 1), im_lo + (im_hi - im_lo) * j / (grid - 1)};
      ++tried;
      const auto spec = FunctionSpec::lambda_sin(lambda);
      const std::vector<Complex> seeds{lambda, -lambda};
      auto found = find_attracting_cycles(spec, seeds, 8);
      const auto& s = found.seeds;
      if (!s[0].cycle_id || !s[1].cycle_id || *s[0].cycle_id == *s[1].cycle_id) continue;
      const bool strong = std::all_of(found.cycles.begin(), found.cycles.end(), [&](const CycleRecord& c) {
        return !c.parabolic && c.multiplier_modulus < max_multiplier;
      });
      if (!strong) continue;
      return LambdaSinSearch{lambda, std::move(found.cycles), tried};
    }
  }
  return std::nullopt;
}

}  // namespace jws
