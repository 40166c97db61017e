#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "jws/complex_core.hpp"

using namespace jws;

namespace {

using CLD = std::complex<long double>;

// Independent power series for sin, summed in long double.
CLD sin_series(CLD z) {
  CLD term = z, sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / static_cast<long double>((2 * n) * (2 * n + 1));
    sum += term;
    if (std::abs(term) < 1e-30L * std::abs(sum)) break;
  }
  return sum;
}

// cos(sqrt w) = sum (-w)^n / (2n)!, no branch involved.
CLD cos_sqrt_series(CLD w) {
  CLD term = 1, sum = 1;
  for (int n = 1; n < 400; ++n) {
    term *= -w / static_cast<long double>((2 * n - 1) * (2 * n));
    sum += term;
    if (std::abs(term) < 1e-30L * std::abs(sum)) break;
  }
  return sum;
}

CLD bm_oracle(long double a, CLD z) {
  const long double pi = 3.141592653589793238462643383279503L;
  return a * z * cos_sqrt_series(z) / (pi * pi - 4.0L * z);
}

Complex to_c(CLD z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

double rel_err(Complex got, Complex want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST_CASE("sin at the listed points") {
  const auto s = FunctionSpec::sin();
  CHECK(*eval(s, 0.0) == Complex(0.0, 0.0));
  const Complex w = *eval(s, Complex(0.0, kPi));
  CHECK(std::abs(w.real()) < 1e-15);
  CHECK(w.imag() == doctest::Approx(11.5487393572577).epsilon(1e-12));
  CHECK(rel_err(w, to_c(sin_series(CLD(0.0L, 3.141592653589793238L)))) < 1e-14);
}

TEST_CASE("sin agrees with an independent series") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  const auto s = FunctionSpec::sin();
  for (int k = 0; k < 500; ++k) {
    const Complex z(u(rng), u(rng));
    CHECK(rel_err(*eval(s, z), to_c(sin_series(CLD(z.real(), z.imag())))) < 1e-12);
  }
}

TEST_CASE("conjugation and oddness") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  const auto s = FunctionSpec::sin();
  const auto ls = FunctionSpec::lambda_sin({1.8, 0.4});
  for (int k = 0; k < 1000; ++k) {
    const Complex z(u(rng), u(rng) / 3.0);
    const Complex f = *eval(s, z);
    CHECK(*eval(s, std::conj(z)) == std::conj(f));
    CHECK(*eval(s, -z) == -f);
    CHECK(*eval(ls, -z) == -*eval(ls, z));
  }
}

TEST_CASE("morosawa g vanishes at 1 - a") {
  for (double a : {1.5, 2.0, 3.7}) CHECK(std::abs(*eval(FunctionSpec::morosawa_g(a), 1.0 - a)) == 0.0);
}

TEST_CASE("lambda z e^z") {
  const auto f = FunctionSpec::lambda_z_exp({0.5, -0.25});
  const Complex z(0.3, 1.2);
  CHECK(rel_err(*eval(f, z), Complex(0.5, -0.25) * z * std::exp(z)) < 1e-15);
}

TEST_CASE("bm cos matches a long double oracle across the removable point") {
  const double a = 10.0;
  const auto f = FunctionSpec::bergweiler_morosawa_cos(a);
  const long double z0 = 3.141592653589793238462643383279503L * 3.141592653589793238462643383279503L / 4.0L;

  // d/dz cos sqrt z = -1/pi at z0, so the limit is a z0 (-1/pi) / (-4).
  const long double limit = a * z0 * (-1.0L / 3.141592653589793238462643383279503L) / -4.0L;
  const Complex at = *eval(f, static_cast<double>(z0));
  CHECK(std::abs(at - Complex(static_cast<double>(limit), 0.0)) < 1e-9);

  for (double off : {1e-9, 1e-7, 1e-6, 1e-5, 1e-4, 5e-4, 9e-4, 1.1e-3, 1e-2}) {
    for (Complex dir : {Complex(1, 0), Complex(-1, 0), Complex(0, 1), Complex(0.6, -0.8)}) {
      const Complex z = static_cast<double>(z0) + off * dir;
      const Complex want = to_c(bm_oracle(a, CLD(z.real(), z.imag())));
      CHECK(rel_err(*eval(f, z), want) < 1e-9);
    }
  }
}

TEST_CASE("bm cos is continuous at the removable point") {
  // |f'| is of order one there, so a 1e-6 step moves the value by about 1e-6;
  // the check is against the first-order oracle.
  const auto f = FunctionSpec::bergweiler_morosawa_cos(12.0);
  const double z0 = kPi * kPi / 4.0;
  const Complex mid = *eval(f, z0);
  const double h = 1e-6;
  const Complex lo = *eval(f, z0 - h), hi = *eval(f, z0 + h);
  const Complex slope = (hi - lo) / (2 * h);
  CHECK(std::abs(hi - (mid + slope * h)) < 1e-10);
  CHECK(std::abs(lo - (mid - slope * h)) < 1e-10);
  CHECK(std::abs(hi - mid) < 10 * h);
}

TEST_CASE("cos sqrt is branch independent") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int k = 0; k < 300; ++k) {
    const Complex z(u(rng), u(rng));
    CHECK(rel_err(cos_sqrt(z), to_c(cos_sqrt_series(CLD(z.real(), z.imag())))) < 1e-10);
    CHECK(rel_err(cos_sqrt(z), std::cos(-std::sqrt(z))) < 1e-12);
  }
  CHECK(cos_sqrt(Complex(-4, 0)).real() == doctest::Approx(std::cosh(2.0)));
  CHECK(cos_sqrt(Complex(-4, 1e-300)) == std::conj(cos_sqrt(Complex(-4, -1e-300))));
}

TEST_CASE("overflow sentinel") {
  const auto s = FunctionSpec::sin();
  CHECK_FALSE(eval(s, Complex(0, 800)).has_value());
  CHECK(eval(s, Complex(0, 600)).has_value());
  CHECK_FALSE(eval(FunctionSpec::lambda_z_exp({1, 0}), Complex(800, 0)).has_value());
  CHECK_FALSE(eval(s, Complex(std::nan(""), 0)).has_value());
}

TEST_CASE("chordal distance") {
  CHECK(chordal_distance(0.0, 0.0) == 0.0);
  CHECK(chordal_distance(0.0, infinity) == 2.0);
  CHECK(chordal_distance(1.0, -1.0) == doctest::Approx(2.0));
  CHECK(chordal_distance(Complex(1e200, 0), infinity) == doctest::Approx(2e-200));

  std::mt19937_64 rng(5);
  std::cauchy_distribution<double> c(0.0, 3.0);
  for (int k = 0; k < 2000; ++k) {
    const Complex z(c(rng), c(rng)), w(c(rng), c(rng)), v(c(rng), c(rng));
    const double zw = chordal_distance(z, w);
    CHECK(zw == chordal_distance(w, z));
    CHECK(zw <= 2.0);
    CHECK(zw <= chordal_distance(z, v) + chordal_distance(v, w) + 1e-12);
    CHECK(chordal_distance(z, infinity) <= 2.0);
  }
}

TEST_CASE("catalog rejects out of domain parameters") {
  CHECK_THROWS_AS(FunctionSpec::morosawa_g(1.0), DomainError);
  CHECK_THROWS_AS(FunctionSpec::morosawa_g(0.5), DomainError);
  CHECK_THROWS_AS(FunctionSpec::bergweiler_morosawa_cos(kPi * kPi), DomainError);
  CHECK_THROWS_AS(FunctionSpec::lambda_sin({0, 0}), DomainError);
  const double two[] = {2.0};
  CHECK(FunctionSpec::from_name("morosawa-g", two) == FunctionSpec::morosawa_g(2.0));
  CHECK_THROWS_AS(FunctionSpec::from_name("tan", two), DomainError);
  const double none[] = {0.0};
  CHECK_THROWS_AS(FunctionSpec::from_name("sin", std::span<const double>(none, 1)), DomainError);
  for (const auto& name : FunctionSpec::catalog_names()) CHECK_FALSE(name.empty());
}

TEST_CASE("parameters round trip through from_parameters") {
  for (const auto& f : {FunctionSpec::sin(), FunctionSpec::lambda_sin({1.7, 0.2}), FunctionSpec::morosawa_g(2.5),
                        FunctionSpec::lambda_z_exp({0.3, 0.0}), FunctionSpec::bergweiler_morosawa_cos(11.0)}) {
    const auto p = f.parameters();
    CHECK(FunctionSpec::from_parameters(f.name(), p) == f);
  }
}
