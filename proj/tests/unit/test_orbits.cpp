#include <cmath>
#include <fstream>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "jws/orbits.hpp"

using namespace jws;

namespace {

const Dynamics& sin_dynamics() {
  static const Dynamics d = prepare_dynamics(FunctionSpec::sin());
  return d;
}

struct LambdaFixture {
  Complex lambda;
  std::vector<Complex> points;
};

LambdaFixture lambda_fixture() {
  std::ifstream in(std::string(JWS_FIXTURES) + "/lambda_sin.json");
  REQUIRE(in.good());
  const auto j = nlohmann::json::parse(in);
  LambdaFixture f{{j["lambda"][0].get<double>(), j["lambda"][1].get<double>()}, {}};
  for (const auto& c : j["cycles"]) f.points.emplace_back(c["points"][0][0].get<double>(), c["points"][0][1].get<double>());
  return f;
}

// Right petal of sin holds Re z > 0; negation swaps the two records.
Label negate(Label l) {
  if (l.tag == Tag::Attracted) l.cycle = 1 - l.cycle;
  return l;
}

}  // namespace

TEST_CASE("label codes") {
  for (std::uint8_t c = 0; c < 20; ++c) CHECK(Label::from_code(c).code() == c);
  CHECK(Label::attracted(2).code() == 5);
  CHECK(Label::undetermined().code() == 2);
}

TEST_CASE("orbit of zero and the stored-pair invariant") {
  const auto& d = sin_dynamics();
  const Orbit o = iterate_orbit(d.spec, 0.0, 50, {});
  for (const auto& p : o.points) CHECK(p == Complex(0.0, 0.0));

  const Orbit w = iterate_orbit(d.spec, Complex(0.7, 1.3), 200, d.cycles);
  for (std::size_t k = 0; k + 1 < w.points.size(); ++k) CHECK(w.points[k + 1] == *eval(d.spec, w.points[k]));
}

TEST_CASE("real orbit of 3 converges to the parabolic point") {
  const auto& d = sin_dynamics();
  const Orbit o = iterate_orbit(d.spec, 3.0, 10000, d.cycles);
  CHECK(o.terminal == Orbit::Terminal::Converged);
  CHECK(o.cycle_id == 0);
  for (std::size_t k = 1; k < o.points.size(); ++k) {
    CHECK(std::abs(o.points[k].real()) <= 1.0);
    if (k > 1) CHECK(o.points[k].real() < o.points[k - 1].real());
  }
}

TEST_CASE("20i overflows within five steps") {
  const Orbit o = iterate_orbit(FunctionSpec::sin(), Complex(0, 20), 5, {});
  CHECK(o.terminal == Orbit::Terminal::Overflowed);
  CHECK(o.step <= 5);
  // sinh(20) ~ 2.4e8, sinh of that overflows.
  CHECK(o.points.size() >= 2);
  CHECK(std::abs(o.points[1]) == doctest::Approx(std::sinh(20.0)));
}

TEST_CASE("sin has a parabolic fixed point at 0") {
  const Complex seeds[] = {1.0};
  const auto r = find_attracting_cycles(FunctionSpec::sin(), seeds, 4);
  REQUIRE_FALSE(r.cycles.empty());
  for (const auto& c : r.cycles) {
    CHECK(c.parabolic);
    CHECK(c.period == 1);
    CHECK(std::abs(c.points[0]) < 1e-9);
    CHECK(c.multiplier_modulus == doctest::Approx(1.0).epsilon(1e-6));
  }
  const auto& d = sin_dynamics();
  REQUIRE(d.cycles.size() == 2);
  CHECK(d.cycles[0].petal->direction.real() > 0);
  CHECK(d.cycles[1].petal->direction.real() < 0);
}

TEST_CASE("lambda star from the fixture has two attracting cycles") {
  const auto fx = lambda_fixture();
  CHECK(std::abs(fx.lambda.real()) >= kPi / 2);
  const auto spec = FunctionSpec::lambda_sin(fx.lambda);
  const Complex seeds[] = {fx.lambda, -fx.lambda};
  const auto r = find_attracting_cycles(spec, seeds, 8);
  REQUIRE(r.cycles.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    const auto& c = r.cycles[k];
    CHECK_FALSE(c.parabolic);
    CHECK(c.multiplier_modulus < 0.9);
    CHECK(std::abs(*eval(spec, c.points.back()) - c.points.front()) < 1e-9);
    CHECK(std::abs(c.points[0] - fx.points[k]) < 1e-9);
  }
  CHECK(std::abs(r.cycles[0].points[0] - r.cycles[1].points[0]) > 1.0);
}

TEST_CASE("the parameter search reproduces the fixture") {
  const auto fx = lambda_fixture();
  const auto found = search_lambda_sin(100, 0.9);
  REQUIRE(found.has_value());
  CHECK(found->lambda == fx.lambda);
  CHECK(found->cycles.size() == 2);
}

TEST_CASE("morosawa g absorbs its free critical value") {
  const auto g = FunctionSpec::morosawa_g(2.0);
  const auto sv = g.singular_values();
  const auto r = find_attracting_cycles(g, sv, 8);
  REQUIRE_FALSE(r.cycles.empty());
  bool attracting = false;
  for (const auto& c : r.cycles) {
    attracting |= !c.parabolic && c.multiplier_modulus < 1.0;
    Complex z = c.points.back();
    CHECK(std::abs(*eval(g, z) - c.points.front()) < 1e-9);
  }
  CHECK(attracting);
}

TEST_CASE("capture residency") {
  for (const auto& d : {prepare_dynamics(FunctionSpec::lambda_sin(lambda_fixture().lambda)),
                        prepare_dynamics(FunctionSpec::morosawa_g(2.0))}) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& c : d.cycles) {
      if (c.parabolic) continue;
      const double q = (1.0 + c.multiplier_modulus) / 2.0;
      for (std::size_t i = 0; i < c.points.size(); ++i) {
        for (int t = 0; t < 50; ++t) {
          const Complex z0 = c.points[i] + std::polar(c.capture_radii[i] * u(rng), 2 * kPi * u(rng));
          Complex z = z0;
          const double r0 = std::abs(z0 - c.points[i]);
          for (int k = 1; k <= 20 * c.period; ++k) {
            z = *eval(d.spec, z);
            if (k % c.period == 0)
              CHECK(std::abs(z - c.points[i]) <= std::pow(q, k / c.period) * r0 + 1e-12);
          }
        }
      }
    }
  }
}

TEST_CASE("classification examples") {
  const auto& d = sin_dynamics();
  const auto cl = d.classifier();
  CHECK(cl(0.0).tag == Tag::Attracted);
  CHECK(classify_point(d.spec, 0.0, d.cycles, d.table) == cl(0.0));
  CHECK(cl(Complex(0, 10)) == Label::fast_escaping());
  CHECK(cl(Complex(0, -10)) == Label::fast_escaping());

  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  for (int k = 0; k < 500; ++k) {
    const Label l = cl(u(rng));
    CHECK(l.tag != Tag::FastEscaping);
    CHECK(l.tag != Tag::Escaping);
  }
}

TEST_CASE("symmetry transport") {
  const auto cl = sin_dynamics().classifier();
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  for (int k = 0; k < 400; ++k) {
    const Complex z(u(rng), u(rng));
    const Label l = cl(z);
    CHECK(cl(std::conj(z)) == l);
    CHECK(cl(-z) == negate(l));
    CHECK(cl(z) == l);
  }
}

TEST_CASE("A_R membership") {
  const auto& d = sin_dynamics();
  const double r = d.table.radius;
  CHECK(in_A_R(d.spec, Complex(0, 1.01 * r), d.table, 5));
  CHECK_THROWS(in_A_R(d.spec, 1.0, d.table, 2));
  for (double y = 2 * r; y < 2 * r + 30; y += 0.3) CHECK(in_A_R(d.spec, Complex(0, y), d.table, 5));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 100; ++k) {
    const Complex z = std::polar(0.999 * r * u(rng), 2 * kPi * u(rng));
    CHECK(std::log(std::abs(z)) < d.table.log_levels[0]);
    CHECK_FALSE(in_A_R(d.spec, z, d.table, 3));
  }
  // With R = 1 the point 0.1 sits below level 0; its orbit stays in [-1, 1].
  const auto t1 = build_table(d.spec, 1.0, 8);
  CHECK_FALSE(in_A_R(d.spec, 0.1, t1, 3));
}

TEST_CASE("monotone horizon") {
  const auto& d = sin_dynamics();
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int k = 0; k < 300; ++k) {
    const Complex z(u(rng), u(rng));
    bool prev = true;
    for (std::size_t h = 3; h <= 8; ++h) {
      const bool now = in_A_R(d.spec, z, d.table, h);
      if (!prev) CHECK_FALSE(now);
      prev = now;
    }
    if (d.cycles.size() && d.classifier()(z).tag == Tag::FastEscaping) CHECK(in_A_R(d.spec, z, d.table, 3));
  }
}

TEST_CASE("determinism") {
  const auto a = prepare_dynamics(FunctionSpec::sin());
  const auto b = prepare_dynamics(FunctionSpec::sin());
  CHECK(a.table.log_levels == b.table.log_levels);
  const auto ca = a.classifier(), cb = b.classifier();
  for (double x = -3; x < 3; x += 0.37)
    for (double y = -3; y < 3; y += 0.41) CHECK(ca({x, y}) == cb({x, y}));
}
