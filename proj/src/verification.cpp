#include "jws/verification.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace jws {

namespace {

constexpr std::uint64_t kSeed = 0x5eed;

Json params_json(const std::vector<Complex>& params) {
  Json out = Json::array();
  for (const Complex& p : params) out.push_back(to_json(p));
  return out;
}

VerificationReport base_report(std::string claim, const FunctionSpec& spec) {
  VerificationReport r;
  r.claim = std::move(claim);
  r.function = spec.name();
  r.parameters = spec.parameters();
  return r;
}

Json cycles_json(const std::vector<CycleRecord>& cycles) {
  Json out = Json::array();
  for (const CycleRecord& c : cycles) {
    Json pts = Json::array();
    for (const Complex& p : c.points) pts.push_back(to_json(p));
    Json item{{"id", c.id},
              {"period", c.period},
              {"points", pts},
              {"multiplier_modulus", c.multiplier_modulus},
              {"parabolic", c.parabolic}};
    if (c.petal) item["petal_direction"] = to_json(c.petal->direction);
    out.push_back(item);
  }
  return out;
}

bool is_escape(Label l) { return l.tag == Tag::FastEscaping || l.tag == Tag::Escaping; }

}  // namespace

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    case Outcome::Inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json VerificationReport::to_json() const {
  Json out;
  out["claim"] = claim;
  out["spec"] = Json{{"name", function}, {"params", params_json(parameters)}};
  out["settings"] = settings;
  out["outcome"] = jws::to_string(outcome);
  out["evidence"] = evidence;
  return out;
}

Outcome decide_lemniscate(const Json& e) {
  const double sampled = e.at("sampled").get<double>();
  if (sampled == 0) return Outcome::Inconclusive;
  const bool sides = e.at("wrong_side").get<std::size_t>() == 0;
  return sides && e.at("attracted").get<double>() / sampled >= 0.99 ? Outcome::Pass : Outcome::Fail;
}

Outcome decide_inverse_contraction(const Json& e) {
  return e.at("solver_failures").get<std::size_t>() == 0 && e.at("violations").get<std::size_t>() == 0
             ? Outcome::Pass
             : Outcome::Fail;
}

Outcome decide_koebe(const Json& e) {
  return e.at("violations").get<std::size_t>() == 0 && e.at("family_max_ratio").get<double>() < 1.0 &&
                 e.at("koebe_ray_max_deviation").get<double>() < 1e-9 &&
                 e.at("koebe_off_ray_max_ratio").get<double>() < 1.0
             ? Outcome::Pass
             : Outcome::Fail;
}

Outcome decide_real_line(const Json& e) {
  return e.at("escaping").get<std::size_t>() == 0 && e.at("first_iterate_outside").get<std::size_t>() == 0 &&
                 e.at("orbit_exceedances").get<std::size_t>() == 0
             ? Outcome::Pass
             : Outcome::Fail;
}

Outcome decide_spiderweb(const Json& e) {
  if (!e.at("chain_found").get<bool>()) return Outcome::Fail;
  for (const Json& loop : e.at("loops"))
    if (!loop.at("simple").get<bool>() || std::abs(loop.at("winding").get<int>()) != 1 ||
        !loop.at("julia_cells_only").get<bool>() || !loop.at("oracle_surrounds").get<bool>())
      return Outcome::Fail;
  return e.at("nesting_verified").get<bool>() ? Outcome::Pass : Outcome::Fail;
}

Outcome decide_buried(const Json& e) {
  if (e.at("resolved_scales").empty() || e.at("sampled").get<std::size_t>() == 0) return Outcome::Inconclusive;
  if (e.at("witness_failures").get<std::size_t>() != 0) return Outcome::Fail;
  return e.at("candidates").get<std::size_t>() > 0 ? Outcome::Pass : Outcome::Inconclusive;
}

Outcome decide_congruence(const Json& e) {
  for (const Json& s : e.at("components"))
    if (!s.at("interior").get<bool>() || s.at("relative_deviation").get<double>() > e.at("tolerance").get<double>())
      return Outcome::Fail;
  return e.at("strip_max_bounded").get<bool>() ? Outcome::Pass : Outcome::Fail;
}

Outcome decide_lambda_search(const Json& e) {
  if (!e.at("found").get<bool>()) return Outcome::Fail;
  const Json& lambda = e.at("lambda");
  if (std::abs(lambda.at(0).get<double>()) < kPi / 2.0) return Outcome::Fail;
  const Json& cycles = e.at("cycles");
  if (cycles.size() < 2) return Outcome::Fail;
  const double bound = e.at("max_multiplier").get<double>();
  for (const Json& c : cycles)
    if (c.at("parabolic").get<bool>() || c.at("multiplier_modulus").get<double>() >= bound) return Outcome::Fail;
  return Outcome::Pass;
}

VerificationReport check_lemniscate(std::size_t n_samples) {
  if (n_samples < 100) throw Error("check_lemniscate: n_samples must be at least 100");
  const Dynamics dyn = prepare_dynamics(FunctionSpec::sin());
  const Classifier classify = dyn.classifier();
  std::map<int, int> side_of;  // cycle id -> sign of the petal direction
  for (const CycleRecord& c : dyn.cycles)
    if (c.petal) side_of[c.id] = c.petal->direction.real() > 0 ? 1 : -1;

  std::size_t sampled = 0, attracted = 0, wrong_side = 0, excluded = 0;
  Json misses = Json::array();
  const std::size_t per_sign = n_samples / 2;
  for (std::size_t k = 0; k < per_sign; ++k) {
    const double theta = 2.0 * kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(per_sign);
    const Complex root = std::sqrt(1.0 + std::polar(1.0, theta));
    for (int sign : {1, -1}) {
      const Complex z = static_cast<double>(sign) * root;
      if (std::abs(z) < 1e-3) {
        ++excluded;
        continue;
      }
      ++sampled;
      const Label l = classify(z);
      if (l.tag == Tag::Attracted) {
        ++attracted;
        if (side_of.count(l.cycle) && side_of[l.cycle] != sign) ++wrong_side;
      } else if (misses.size() < 20) {
        misses.push_back(Json{{"z", to_json(z)}, {"label", to_string(l)}});
      }
    }
  }
  VerificationReport r = base_report("lemniscate", dyn.spec);
  r.settings = Json{{"n_samples", n_samples}, {"exclusion_radius", 1e-3}, {"max_iter", dyn.params.max_iter},
                    {"horizon", dyn.table.depth()}};
  r.evidence = Json{{"sampled", sampled},
                    {"excluded", excluded},
                    {"attracted", attracted},
                    {"attracted_fraction", sampled ? static_cast<double>(attracted) / sampled : 0.0},
                    {"all_attracted", attracted == sampled},
                    {"wrong_side", wrong_side},
                    {"misses", misses}};
  r.outcome = decide_lemniscate(r.evidence);
  return r;
}

VerificationReport check_inverse_contraction(std::size_t n_samples) {
  if (n_samples < 100) throw Error("check_inverse_contraction: n_samples must be at least 100");
  constexpr double kWindow = 4.0;
  constexpr double kMargin = 1e-6;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> coord(-kWindow, kWindow);
  std::size_t accepted = 0, failures = 0, violations = 0;
  double min_cos = std::numeric_limits<double>::infinity(), max_residual = 0.0;
  Json failed = Json::array();
  while (accepted < n_samples) {
    const Complex w{coord(rng), coord(rng)};
    if (!(std::abs(w * w - 1.0) > 1.0 + kMargin)) continue;
    ++accepted;
    Complex z = std::asin(w);
    double residual = std::abs(std::sin(z) - w);
    for (int it = 0; it < 50 && residual > 1e-14 * std::max(1.0, std::abs(w)); ++it) {
      z -= (std::sin(z) - w) / std::cos(z);
      residual = std::abs(std::sin(z) - w);
    }
    if (!(residual <= 1e-12 * std::max(1.0, std::abs(w)))) {
      ++failures;
      if (failed.size() < 20) failed.push_back(Json{{"w", to_json(w)}, {"residual", residual}});
      continue;
    }
    max_residual = std::max(max_residual, residual);
    const double c = std::abs(std::cos(z));
    min_cos = std::min(min_cos, c);
    if (!(c > 1.0)) ++violations;
  }
  VerificationReport r = base_report("inverse-contraction", FunctionSpec::sin());
  r.settings = Json{{"n_samples", n_samples}, {"window", kWindow}, {"margin", kMargin}, {"seed", kSeed}};
  r.evidence = Json{{"accepted", accepted},
                    {"solver_failures", failures},
                    {"violations", violations},
                    {"min_abs_cos", min_cos},
                    {"max_residual", max_residual},
                    {"failed", failed}};
  r.outcome = decide_inverse_contraction(r.evidence);
  return r;
}

VerificationReport check_koebe_bound(std::size_t n_samples) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto disc_point = [&](double max_r) { return std::polar(max_r * std::sqrt(unit(rng)), 2.0 * kPi * unit(rng)); };
  auto bound = [](Complex z) { return std::abs(z) / ((1.0 - std::abs(z)) * (1.0 - std::abs(z))); };

  std::size_t violations = 0;
  double family_max = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const Complex c = disc_point(1.0);
    const Complex z = disc_point(0.999);
    if (std::abs(z) == 0.0) continue;
    const double value = std::abs(z / (1.0 - c * z));
    const double ratio = value / bound(z);
    family_max = std::max(family_max, ratio);
    if (value > bound(z)) ++violations;
  }

  // rotations e^(-ia) k(e^(ia) z) of the Koebe function k(z) = z / (1 - z)^2
  double ray_dev = 0.0, off_ray = 0.0;
  for (int a = 0; a < 16; ++a) {
    const Complex rot = std::polar(1.0, 2.0 * kPi * a / 16.0);
    auto koebe = [&](Complex z) { return (rot * z / ((1.0 - rot * z) * (1.0 - rot * z))) / rot; };
    for (int t = 1; t < 100; ++t) {
      const double r = 0.01 * t;
      const Complex on = r / rot;
      ray_dev = std::max(ray_dev, std::abs(std::abs(koebe(on)) / bound(on) - 1.0));
      const Complex off = on * std::polar(1.0, 0.5);
      off_ray = std::max(off_ray, std::abs(koebe(off)) / bound(off));
      if (std::abs(koebe(off)) > bound(off) * (1.0 + 1e-12)) ++violations;
    }
  }

  VerificationReport r;
  r.claim = "koebe";
  r.function = "z/(1-cz)";
  r.settings = Json{{"n_samples", n_samples}, {"max_modulus_z", 0.999}, {"seed", kSeed}};
  r.evidence = Json{{"violations", violations},
                    {"family_max_ratio", family_max},
                    {"koebe_ray_max_deviation", ray_dev},
                    {"koebe_off_ray_max_ratio", off_ray}};
  r.outcome = decide_koebe(r.evidence);
  return r;
}

VerificationReport check_real_line_trapped(std::size_t n_samples) {
  const Dynamics dyn = prepare_dynamics(FunctionSpec::sin());
  const Classifier classify = dyn.classifier();
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> coord(-100.0, 100.0);
  std::vector<double> xs{kPi / 2.0, kPi, -3.0 * kPi, 0.0};
  while (xs.size() < n_samples) xs.push_back(coord(rng));
  xs.resize(n_samples);

  std::size_t escaping = 0, outside = 0, exceed = 0;
  double max_first = 0.0, max_later = 0.0;
  std::map<std::string, std::size_t> labels;
  for (double x : xs) {
    const Complex w = *eval(dyn.spec, x);
    max_first = std::max(max_first, std::abs(w));
    if (std::abs(w) > 1.0 + 1e-12 || std::abs(w.imag()) > 1e-12) ++outside;
    Complex z = w;
    for (int n = 1; n < 1000; ++n) {
      z = *eval(dyn.spec, z);
      max_later = std::max(max_later, std::abs(z));
      if (std::abs(z) > 1.0 + 1e-12) {
        ++exceed;
        break;
      }
    }
    const Label l = classify(x);
    if (is_escape(l)) ++escaping;
    ++labels[l.tag == Tag::Attracted ? "attracted" : to_string(l)];
  }
  Json label_counts = Json::object();
  for (const auto& [k, v] : labels) label_counts[k] = v;

  VerificationReport r = base_report("real-line-trapped", dyn.spec);
  r.settings = Json{{"n_samples", n_samples},   {"interval", Json::array({-100.0, 100.0})},
                    {"orbit_steps", 1000},      {"max_iter", dyn.params.max_iter},
                    {"horizon", dyn.table.depth()}, {"seed", kSeed}};
  r.evidence = Json{{"escaping", escaping},
                    {"first_iterate_outside", outside},
                    {"orbit_exceedances", exceed},
                    {"max_abs_first_iterate", max_first},
                    {"max_abs_later_iterate", max_later},
                    {"labels", label_counts}};
  r.outcome = decide_real_line(r.evidence);
  return r;
}

SpiderwebRun analyse_spiderweb(const GridField& grid, const Dynamics& dynamics, const SpiderwebSettings& settings) {
  const Region& reg = grid.region();
  const Complex center{0.5 * (reg.x_min + reg.x_max), 0.5 * (reg.y_min + reg.y_max)};
  const int w = static_cast<int>(grid.width()), h = static_cast<int>(grid.height());
  const Mask julia = julia_mask(grid);

  SpiderwebRun run;
  run.chain = find_loop_chain(grid, julia, center);
  const LoopChain undetermined_only = find_loop_chain(grid, julia_mask(grid, JuliaMaskMode::UndeterminedOnly), center);
  const CellIndex c0 = grid.cell_of(center);

  Json loops = Json::array();
  for (std::size_t k = 0; k < run.chain.domains.size(); ++k) {
    const Domain& d = run.chain.domains[k];
    JordanLoop jl = extract_jordan_loop(grid, d.to_mask(w, h), center, Connectivity::Four);
    Mask ring(w, h);
    bool julia_only = true;
    for (const CellIndex& c : run.chain.loops[k]) {
      ring.set(c.i, c.j);
      julia_only = julia_only && julia(c.i, c.j);
    }
    loops.push_back(Json{{"domain_cells", d.cell_count()},
                         {"bbox", Json::array({d.bbox().i_min, d.bbox().i_max, d.bbox().j_min, d.bbox().j_max})},
                         {"seed_radius", run.chain.radii[k]},
                         {"loop_cells", run.chain.loops[k].size()},
                         {"polyline_vertices", jl.vertices.size()},
                         {"simple", jl.simple},
                         {"winding", jl.winding},
                         {"julia_cells_only", julia_only},
                         {"oracle_surrounds", surrounds(ring, c0.i, c0.j)}});
    run.jordan.push_back(std::move(jl));
  }
  const bool nesting = std::all_of(run.chain.nested.begin(), run.chain.nested.end(), [](bool b) { return b; });
  const bool found = run.chain.loops.size() >= settings.min_loops && run.chain.spans_grid;

  run.buried = buried_point_scan(grid, julia, settings.buried);
  std::size_t witness_failures = 0;
  for (const BuriedCandidate& c : run.buried.candidates) {
    for (const auto& loop : c.witness_loops) {
      Mask ring(w, h);
      for (const CellIndex& cell : loop) ring.set(cell.i, cell.j);
      if (!surrounds(ring, c.cell.i, c.cell.j)) ++witness_failures;
    }
  }
  Json buried{{"eligible_cells", run.buried.eligible_cells},
              {"sampled", run.buried.sampled},
              {"candidates", run.buried.candidates.size()},
              {"candidate_fraction",
               run.buried.sampled ? static_cast<double>(run.buried.candidates.size()) / run.buried.sampled : 0.0},
              {"resolved_scales", run.buried.resolved_scales},
              {"unresolved_scales", run.buried.unresolved_scales},
              {"witness_failures", witness_failures}};
  buried["outcome"] = to_string(decide_buried(buried));

  VerificationReport& r = run.report;
  r = base_report("spiderweb", dynamics.spec);
  r.settings = Json{{"region", Json::array({reg.x_min, reg.x_max, reg.y_min, reg.y_max})},
                    {"width", grid.width()},
                    {"height", grid.height()},
                    {"horizon", grid.meta().horizon},
                    {"max_iter", grid.meta().max_iter},
                    {"escape_radius", grid.meta().radius},
                    {"min_loops", settings.min_loops},
                    {"julia_mask", "basin-complement"},
                    {"buried_samples", settings.buried.sample_count},
                    {"buried_scales", settings.buried.scales},
                    {"buried_seed", settings.buried.seed}};
  r.evidence = Json{{"cycles", cycles_json(dynamics.cycles)},
                    {"chain_found", found},
                    {"loop_count", run.chain.loops.size()},
                    {"spans_grid", run.chain.spans_grid},
                    {"nesting_verified", nesting},
                    {"loops", loops},
                    {"undetermined_only_loop_count", undetermined_only.loops.size()},
                    {"buried", buried}};
  r.outcome = decide_spiderweb(r.evidence);
  return run;
}

SpiderwebRun run_spiderweb_experiment(const FunctionSpec& spec, const SpiderwebSettings& settings,
                                      std::optional<GridField>* grid_out) {
  const Dynamics dyn = prepare_dynamics(spec, settings.depth, ClassifyParams{settings.max_iter});
  GridField grid = render(dyn, settings.region, settings.resolution, settings.resolution, {settings.threads, false});
  SpiderwebRun run = analyse_spiderweb(grid, dyn, settings);
  if (grid_out) grid_out->emplace(std::move(grid));
  return run;
}

VerificationReport check_component_congruence(const CongruenceSettings& settings, const GridField* grid) {
  const Dynamics dyn = prepare_dynamics(FunctionSpec::sin());
  std::optional<GridField> owned;
  if (!grid) {
    owned.emplace(render(dyn, settings.region, settings.width, settings.height, {settings.threads, false}));
    grid = &*owned;
  }
  const ComponentSet cs = label_components(
      *grid, [](Label l) { return l.tag == Tag::Attracted; }, Connectivity::Four, {true, true});

  // strip n is n pi < x < (n + 1) pi, the strip of D_n
  auto strip_of = [](double x) { return static_cast<int>(std::floor(x / kPi)); };
  std::map<int, double> strip_max;
  for (const Component& c : cs.components) {
    if (c.touches_border) continue;
    const int n = strip_of(c.centroid_x);
    if (n < settings.strip_min || n > settings.strip_max) continue;
    strip_max[n] = std::max(strip_max[n], c.euclidean_diameter);
  }

  Json components = Json::array();
  double d0 = 0.0;
  {
    const CellIndex c = grid->cell_of({kPi / 2.0, 0.0});
    if (const int id = cs.id_at(c.i, c.j)) d0 = cs.components[id - 1].euclidean_diameter;
  }
  for (int n = settings.strip_min; n <= settings.strip_max; ++n) {
    const Complex p{kPi / 2.0 + n * kPi, 0.0};
    const CellIndex c = grid->cell_of(p);
    const int id = cs.id_at(c.i, c.j);
    Json item{{"n", n}, {"point", to_json(p)}};
    if (!id || d0 == 0.0) {
      item["interior"] = false;
      item["attracted"] = id != 0;
      item["euclidean_diameter"] = 0.0;
      item["relative_deviation"] = 1.0;
    } else {
      const Component& comp = cs.components[id - 1];
      item["interior"] = !comp.touches_border;
      item["cells"] = comp.cell_count;
      item["euclidean_diameter"] = comp.euclidean_diameter;
      item["spherical_diameter"] = comp.spherical_diameter;
      item["relative_deviation"] = std::abs(comp.euclidean_diameter / d0 - 1.0);
    }
    components.push_back(item);
  }
  const double strip0 = strip_max.count(0) ? strip_max[0] : 0.0;
  bool bounded = strip0 > 0.0;
  Json strips = Json::array();
  for (const auto& [n, m] : strip_max) {
    strips.push_back(Json{{"n", n}, {"max_euclidean_diameter", m}});
    if (m > (1.0 + settings.tolerance) * strip0) bounded = false;
  }

  const Region& reg = grid->region();
  VerificationReport r = base_report("component-congruence", dyn.spec);
  r.settings = Json{{"region", Json::array({reg.x_min, reg.x_max, reg.y_min, reg.y_max})},
                    {"width", grid->width()},
                    {"height", grid->height()},
                    {"horizon", grid->meta().horizon},
                    {"max_iter", grid->meta().max_iter},
                    {"strips", Json::array({settings.strip_min, settings.strip_max})},
                    {"tolerance", settings.tolerance}};
  r.evidence = Json{{"tolerance", settings.tolerance},
                    {"reference_diameter", d0},
                    {"components", components},
                    {"strip_maxima", strips},
                    {"strip_max_bounded", bounded},
                    {"interior_components", std::count_if(cs.components.begin(), cs.components.end(),
                                                          [](const Component& c) { return !c.touches_border; })}};
  r.outcome = decide_congruence(r.evidence);
  return r;
}

VerificationReport check_lambda_sin_search(int grid, double max_multiplier) {
  const auto found = search_lambda_sin(grid, max_multiplier);
  VerificationReport r;
  r.claim = "lambda-sin-search";
  r.function = "lambda-sin";
  r.settings = Json{{"grid", grid},
                    {"re_range", Json::array({kPi / 2.0, 3.0})},
                    {"im_range", Json::array({0.0, 1.0})},
                    {"max_multiplier", max_multiplier}};
  if (found) {
    r.parameters = {found->lambda};
    r.evidence = Json{{"found", true},
                      {"lambda", to_json(found->lambda)},
                      {"candidates_tried", found->candidates_tried},
                      {"max_multiplier", max_multiplier},
                      {"cycles", cycles_json(found->cycles)}};
  } else {
    r.evidence = Json{{"found", false}, {"max_multiplier", max_multiplier}};
  }
  r.outcome = decide_lambda_search(r.evidence);
  return r;
}

VerificationReport diameter_report(const GridField& grid, const std::vector<double>& thresholds) {
  const ComponentSet cs = label_components(
      grid, [](Label l) { return l.tag == Tag::Attracted; }, Connectivity::Four, {true, true});
  const DiameterCensus census = diameter_census(cs, thresholds);
  VerificationReport r;
  r.claim = "diameters";
  r.function = grid.meta().spec_name;
  r.parameters = grid.meta().parameters;
  const Region& reg = grid.region();
  r.settings = Json{{"region", Json::array({reg.x_min, reg.x_max, reg.y_min, reg.y_max})},
                    {"width", grid.width()},
                    {"height", grid.height()},
                    {"horizon", grid.meta().horizon},
                    {"max_iter", grid.meta().max_iter},
                    {"connectivity", 4},
                    {"thresholds", thresholds}};
  Json counts = Json::array();
  for (std::size_t k = 0; k < thresholds.size(); ++k)
    counts.push_back(Json{{"threshold", thresholds[k]}, {"components", census.counts[k]}});
  r.evidence = Json{{"components", cs.components.size()},
                    {"interior_components", census.interior_components},
                    {"max_interior_euclidean_diameter", census.max_interior_euclidean},
                    {"spherical_counts", counts}};
  r.outcome = Outcome::Pass;
  return r;
}

Json table_json(const MaxModulusTable& table) {
  Json levels = Json::array();
  for (double l : table.log_levels) levels.push_back(l);
  Json out{{"function", table.spec.name()},
           {"params", params_json(table.spec.parameters())},
           {"R", table.radius},
           {"depth", table.depth()},
           {"log_levels", levels}};
  out["saturated_at"] = table.saturated_at ? Json(*table.saturated_at) : Json(nullptr);
  return out;
}

}  // namespace jws
