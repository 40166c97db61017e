#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "jws/gridfield.hpp"
#include "jws/orbits.hpp"
#include "jws/topology.hpp"

namespace jws {

using Json = nlohmann::ordered_json;

enum class Outcome { Pass, Fail, Inconclusive };

std::string to_string(Outcome outcome);

/// One experiment result. to_json() emits
/// {claim, spec: {name, params}, settings, outcome, evidence} in that order.
struct VerificationReport {
  std::string claim;
  std::string function;
  std::vector<Complex> parameters;
  Json settings = Json::object();
  Outcome outcome = Outcome::Inconclusive;
  Json evidence = Json::object();

  Json to_json() const;
};

Json to_json(Complex z);

// Pass/fail rules, pure over the evidence payload.
Outcome decide_lemniscate(const Json& evidence);
Outcome decide_inverse_contraction(const Json& evidence);
Outcome decide_koebe(const Json& evidence);
Outcome decide_real_line(const Json& evidence);
Outcome decide_spiderweb(const Json& evidence);
Outcome decide_buried(const Json& evidence);
Outcome decide_congruence(const Json& evidence);
Outcome decide_lambda_search(const Json& evidence);

/// Points z = +-sqrt(1 + e^(i theta)) on |z^2 - 1| = 1 must be captured by the
/// parabolic basin on their own side of the imaginary axis.
VerificationReport check_lemniscate(std::size_t n_samples = 1000);

/// For w outside the lemniscate, a solution of sin z = w has |cos z| > 1.
VerificationReport check_inverse_contraction(std::size_t n_samples = 1000);

/// |f(z)| <= |z| / (1 - |z|)^2 for univalent f on the unit disc with f(0) = 0,
/// f'(0) = 1, on the family z / (1 - c z), |c| <= 1, with equality only for
/// the Koebe function on its extremal ray.
VerificationReport check_koebe_bound(std::size_t n_samples = 10000);

/// Real orbits of sin stay in [-1, 1] after one step and never escape.
VerificationReport check_real_line_trapped(std::size_t n_samples = 10000);

struct SpiderwebSettings {
  Region region{};
  std::uint32_t resolution = 2048;
  std::size_t min_loops = 3;
  std::size_t depth = 24;
  std::size_t max_iter = 10000;
  unsigned threads = 0;
  BuriedScanParams buried{};
};

struct SpiderwebRun {
  VerificationReport report;
  LoopChain chain;
  std::vector<JordanLoop> jordan;
  BuriedScan buried;
};

/// Spider's-web evidence on an existing grid: loop chain about the centre of
/// the region, Jordan-loop checks on every domain, flood-fill oracles and a
/// buried-point scan.
SpiderwebRun analyse_spiderweb(const GridField& grid, const Dynamics& dynamics, const SpiderwebSettings& settings);

/// render + analyse_spiderweb.
SpiderwebRun run_spiderweb_experiment(const FunctionSpec& spec, const SpiderwebSettings& settings,
                                      std::optional<GridField>* grid_out = nullptr);

struct CongruenceSettings {
  Region region{-60.0, 60.0, -20.0, 20.0};
  std::uint32_t width = 2048, height = 1024;
  int strip_min = -5, strip_max = 5;
  double tolerance = 0.05;
  unsigned threads = 0;
};

/// Basin components D_n of sin through pi/2 + n pi are translates of D_0:
/// equal euclidean diameters, and strip maxima that do not grow with |n|.
VerificationReport check_component_congruence(const CongruenceSettings& settings = {},
                                              const GridField* grid = nullptr);

/// Search for lambda with two attracting cycles for lambda sin z.
VerificationReport check_lambda_sin_search(int grid = 100, double max_multiplier = 0.9);

/// Component census of a grid's Attracted cells.
VerificationReport diameter_report(const GridField& grid, const std::vector<double>& thresholds);

Json table_json(const MaxModulusTable& table);

}  // namespace jws
