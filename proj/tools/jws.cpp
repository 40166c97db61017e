// jws: render grids, detect spider's webs, run verification experiments.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jws/complex_core.hpp"
#include "jws/gridfield.hpp"
#include "jws/maxmod.hpp"
#include "jws/orbits.hpp"
#include "jws/topology.hpp"
#include "jws/verification.hpp"

namespace {

using namespace jws;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string function = "sin";
  std::vector<double> params;
  std::vector<double> region{-20.0, 20.0, -20.0, 20.0};
  std::string res = "1024";
  std::size_t horizon = 24;
  std::size_t max_iter = 10000;
  unsigned threads = 0;
  bool supersample = false;
  std::string out, img, report, grid;
  std::size_t min_loops = 3;
  std::size_t buried_samples = 200;
  std::vector<double> scales{2.0, 1.0, 0.5};
  std::vector<double> thresholds{0.01, 0.05, 0.1, 0.5, 1.0, 2.0};
  std::string claim;
  std::size_t samples = 0;
  int search_grid = 100;
};

FunctionSpec make_spec(const RunConfig& cfg) {
  std::vector<double> p = cfg.params;
  if (p.empty()) {
    if (cfg.function == "lambda-sin") p = {kPi / 2.0, 0.0};
    else if (cfg.function == "morosawa-g") p = {2.0};
    else if (cfg.function == "bm-cos") p = {10.0};
  }
  return FunctionSpec::from_name(cfg.function, p);
}

Region make_region(const RunConfig& cfg) {
  if (cfg.region.size() != 4) throw UsageError("--region expects x_min,x_max,y_min,y_max");
  Region r{cfg.region[0], cfg.region[1], cfg.region[2], cfg.region[3]};
  try {
    r.validate();
  } catch (const DomainError& e) {
    throw UsageError(std::string("--region: ") + e.what());
  }
  return r;
}

std::pair<std::uint32_t, std::uint32_t> make_resolution(const std::string& res) {
  unsigned long w = 0, h = 0;
  char x = 0;
  std::istringstream in(res);
  if (!(in >> w)) throw UsageError("--res expects N or WxH, got '" + res + "'");
  if (in >> x) {
    if ((x != 'x' && x != 'X') || !(in >> h)) throw UsageError("--res expects N or WxH, got '" + res + "'");
  } else {
    h = w;
  }
  if (w < 16 || h < 16 || w > 65536 || h > 65536) throw UsageError("--res: each side must be in [16, 65536]");
  return {static_cast<std::uint32_t>(w), static_cast<std::uint32_t>(h)};
}

void write_json(const Json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

int finish(const VerificationReport& r, const std::string& path) {
  write_json(r.to_json(), path);
  if (!path.empty()) std::cout << r.claim << ": " << to_string(r.outcome) << '\n';
  return r.outcome == Outcome::Fail ? kExitFail : kExitPass;
}

Dynamics dynamics_for(const RunConfig& cfg) {
  return prepare_dynamics(make_spec(cfg), cfg.horizon, ClassifyParams{cfg.max_iter});
}

// Grid from --grid, or rendered from the function flags.
std::pair<GridField, Dynamics> obtain_grid(const RunConfig& cfg) {
  if (!cfg.grid.empty()) {
    GridField g = load_grid(cfg.grid);
    const FunctionSpec spec = FunctionSpec::from_parameters(g.meta().spec_name, g.meta().parameters);
    Dynamics dyn = prepare_dynamics(spec, g.meta().horizon, ClassifyParams{g.meta().max_iter});
    return {std::move(g), std::move(dyn)};
  }
  Dynamics dyn = dynamics_for(cfg);
  const auto [w, h] = make_resolution(cfg.res);
  GridField g = render(dyn, make_region(cfg), w, h, {cfg.threads, cfg.supersample});
  return {std::move(g), std::move(dyn)};
}

int cmd_render(const RunConfig& cfg) {
  make_spec(cfg);
  const Region region = make_region(cfg);
  const auto [w, h] = make_resolution(cfg.res);
  if (cfg.out.empty() && cfg.img.empty()) throw UsageError("render: give --out and/or --img");
  const Dynamics dyn = dynamics_for(cfg);
  const GridField g = render(dyn, region, w, h, {cfg.threads, cfg.supersample});
  if (!cfg.out.empty()) save_grid(g, cfg.out);
  if (!cfg.img.empty()) write_ppm(g, cfg.img);
  std::size_t counts[4] = {0, 0, 0, 0};
  for (std::uint8_t c : g.codes()) ++counts[std::min<std::uint8_t>(c, 3)];
  std::cout << "rendered " << w << "x" << h << " " << dyn.spec.name() << ": fast-escaping " << counts[0]
            << ", escaping " << counts[1] << ", undetermined " << counts[2] << ", attracted " << counts[3] << '\n';
  return kExitPass;
}

int cmd_spiderweb(const RunConfig& cfg) {
  auto [grid, dyn] = obtain_grid(cfg);
  SpiderwebSettings s;
  s.region = grid.region();
  s.resolution = grid.width();
  s.min_loops = cfg.min_loops;
  s.threads = cfg.threads;
  s.buried.sample_count = cfg.buried_samples;
  s.buried.scales = cfg.scales;
  s.buried.threads = cfg.threads;
  const SpiderwebRun run = analyse_spiderweb(grid, dyn, s);
  if (!cfg.img.empty()) {
    std::vector<CellIndex> overlay;
    for (const auto& loop : run.chain.loops) overlay.insert(overlay.end(), loop.begin(), loop.end());
    write_ppm(grid, cfg.img, overlay);
  }
  if (run.report.outcome == Outcome::Fail && run.report.evidence.at("chain_found") == false)
    std::cerr << InsufficientLoops(run.chain.loops.size(), cfg.min_loops, run.chain).what() << '\n';
  return finish(run.report, cfg.report);
}

int cmd_diameters(const RunConfig& cfg) {
  const auto grid = obtain_grid(cfg).first;
  return finish(diameter_report(grid, cfg.thresholds), cfg.report);
}

int cmd_verify(const RunConfig& cfg) {
  const std::string& c = cfg.claim;
  auto n = [&](std::size_t d) { return cfg.samples ? cfg.samples : d; };
  if (c == "real-line-trapped") return finish(check_real_line_trapped(n(10000)), cfg.report);
  if (c == "lemniscate") return finish(check_lemniscate(n(1000)), cfg.report);
  if (c == "inverse-contraction") return finish(check_inverse_contraction(n(1000)), cfg.report);
  if (c == "koebe") return finish(check_koebe_bound(n(10000)), cfg.report);
  if (c == "lambda-sin-search") return finish(check_lambda_sin_search(cfg.search_grid), cfg.report);
  if (c == "component-congruence") {
    CongruenceSettings s;
    s.threads = cfg.threads;
    return finish(check_component_congruence(s), cfg.report);
  }
  if (c == "spiderweb") return cmd_spiderweb(cfg);
  throw UsageError("--claim: unknown claim '" + c + "'");
}

int cmd_table(const RunConfig& cfg) {
  const FunctionSpec spec = make_spec(cfg);
  const MaxModulusTable t = build_table(spec, find_escape_radius(spec), cfg.horizon);
  write_json(table_json(t), cfg.out);
  return kExitPass;
}

// Flat key=value config: every key becomes --key value unless the flag is
// already on the command line.
std::vector<std::string> merge_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> kept;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config") {
      if (k + 1 >= args.size()) throw UsageError("--config requires a path");
      path = args[++k];
    } else if (args[k].rfind("--config=", 0) == 0) {
      path = args[k].substr(9);
    } else {
      kept.push_back(args[k]);
    }
  }
  if (path.empty()) return kept;
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open " + path);
  std::set<std::string> given;
  for (const std::string& a : kept)
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') == std::string::npos ? std::string::npos : a.find('=') - 2));
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("--config " + path + ":" + std::to_string(number) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (given.count(key)) continue;
    if (key == "supersample") {
      if (value == "true" || value == "1") kept.push_back("--supersample");
      continue;
    }
    kept.push_back("--" + key);
    kept.push_back(value);
  }
  return kept;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  CLI::App app{"jws: Fatou/Julia rasters, spider's-web loops and verification experiments"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto add_function = [&](CLI::App* sub) {
    sub->add_option("--function", cfg.function, "catalog entry: sin, lambda-sin, lambda-z-exp, morosawa-g, bm-cos");
    sub->add_option("--params", cfg.params,
                    "parameters, comma separated (lambda families: re,im; defaults: lambda-sin pi/2, morosawa-g 2, "
                    "bm-cos 10)")
        ->delimiter(',');
    sub->add_option("--horizon", cfg.horizon, "depth of the iterated maximum modulus table");
    sub->add_option("--max-iter", cfg.max_iter, "iteration cap per point");
    sub->add_option("--threads", cfg.threads, "worker threads, 0 = all cores");
  };
  auto add_render = [&](CLI::App* sub) {
    add_function(sub);
    sub->add_option("--region", cfg.region, "x_min,x_max,y_min,y_max")->delimiter(',')->expected(4);
    sub->add_option("--res", cfg.res, "resolution, N or WxH");
    sub->add_flag("--supersample", cfg.supersample, "2x2 majority vote per cell");
  };

  auto* render_cmd = app.add_subcommand("render", "classify a region and write a JWSG grid and/or PPM image");
  add_render(render_cmd);
  render_cmd->add_option("--out", cfg.out, "grid file (JWSG)");
  render_cmd->add_option("--img", cfg.img, "image file (PPM)");

  auto add_analysis = [&](CLI::App* sub) {
    add_render(sub);
    sub->add_option("--grid", cfg.grid, "analyse a saved grid instead of rendering");
    sub->add_option("--report", cfg.report, "JSON report path (stdout when empty)");
  };
  auto add_spiderweb = [&](CLI::App* sub) {
    sub->add_option("--min-loops", cfg.min_loops, "loops required around the centre");
    sub->add_option("--buried-samples", cfg.buried_samples, "Julia cells sampled by the buried-point scan");
    sub->add_option("--scales", cfg.scales, "buried-point scales, decreasing")->delimiter(',');
    sub->add_option("--img", cfg.img, "overlay image of the loops (PPM)");
  };

  auto* spider_cmd = app.add_subcommand("spiderweb", "nested Julia loops around the region centre");
  add_analysis(spider_cmd);
  add_spiderweb(spider_cmd);

  auto* diam_cmd = app.add_subcommand("diameters", "basin component census");
  add_analysis(diam_cmd);
  diam_cmd->add_option("--thresholds", cfg.thresholds, "spherical diameter thresholds")->delimiter(',');

  auto* verify_cmd = app.add_subcommand("verify", "run a named verification experiment");
  add_analysis(verify_cmd);
  add_spiderweb(verify_cmd);
  verify_cmd
      ->add_option("--claim", cfg.claim,
                   "real-line-trapped, lemniscate, inverse-contraction, koebe, spiderweb, lambda-sin-search, "
                   "component-congruence")
      ->required();
  verify_cmd->add_option("--samples", cfg.samples, "sample count, 0 = the experiment's default");
  verify_cmd->add_option("--search-grid", cfg.search_grid, "lattice size of the lambda search");

  auto* table_cmd = app.add_subcommand("table", "dump the iterated maximum modulus table as JSON");
  add_function(table_cmd);
  table_cmd->add_option("--out", cfg.out, "JSON path (stdout when empty)");

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = merge_config(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (*render_cmd) return cmd_render(cfg);
    if (*spider_cmd) return cmd_spiderweb(cfg);
    if (*diam_cmd) return cmd_diameters(cfg);
    if (*verify_cmd) return cmd_verify(cfg);
    if (*table_cmd) return cmd_table(cfg);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
