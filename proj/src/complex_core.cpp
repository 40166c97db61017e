#include "jws/complex_core.hpp"

#include <array>
#include <cmath>

namespace jws {

namespace {

constexpr double kLogOverflow = 690.7755278982137;  // log(1e300)
constexpr double kPiSquared = kPi * kPi;
constexpr double kSingularPoint = kPiSquared / 4.0;
constexpr double kSeriesRadius = 1e-3;

std::optional<Complex> checked(Complex w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) return std::nullopt;
  if (std::abs(w) > kOverflowModulus) return std::nullopt;
  return w;
}

Complex sin_unchecked(Complex z) {
  const double x = z.real(), y = z.imag();
  return {std::sin(x) * std::cosh(y), std::cos(x) * std::sinh(y)};
}

// Taylor coefficients of cos(sqrt z) about pi^2/4, from 4z y'' + 2y' + y = 0.
const std::array<double, 16>& cos_sqrt_coefficients() {
  static const std::array<double, 16> c = [] {
    std::array<double, 16> out{};
    out[0] = 0.0;
    out[1] = -1.0 / kPi;
    for (std::size_t k = 0; k + 2 < out.size(); ++k) {
      const double kk = static_cast<double>(k);
      out[k + 2] = -((4.0 * kk * (kk + 1.0) + 2.0 * (kk + 1.0)) * out[k + 1] + out[k]) /
                   (4.0 * kSingularPoint * (kk + 1.0) * (kk + 2.0));
    }
    return out;
  }();
  return c;
}

// cos(sqrt z) / (pi^2 - 4z) near z = pi^2/4 with the zero divided out.
Complex cos_sqrt_quotient_series(Complex t) {
  const auto& c = cos_sqrt_coefficients();
  Complex sum = 0.0;
  for (std::size_t k = c.size() - 1; k >= 1; --k) sum = sum * t + c[k];
  return -0.25 * sum;
}

std::optional<Complex> eval_bm_cos(double a, Complex z) {
  const Complex t = z - kSingularPoint;
  if (std::abs(t) < kSeriesRadius) return checked(a * z * cos_sqrt_quotient_series(t));
  const Complex s = std::sqrt(z);
  if (std::abs(s.imag()) > 700.0) return std::nullopt;
  return checked(a * z * cos_sqrt(z) / (kPiSquared - 4.0 * z));
}

// A factor times z e^z, with the modulus screened in log space first.
std::optional<Complex> eval_scaled_exp(Complex factor, Complex linear, Complex z) {
  if (linear == 0.0 || factor == 0.0) return Complex{0.0, 0.0};
  const double log_mod = std::log(std::abs(factor)) + std::log(std::abs(linear)) + z.real();
  if (log_mod > kLogOverflow) return std::nullopt;
  return checked(factor * linear * std::exp(z));
}

}  // namespace

FunctionSpec FunctionSpec::sin() { return {FunctionKind::Sin, "sin", {}, 0.0}; }

FunctionSpec FunctionSpec::lambda_sin(Complex lambda) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || lambda == 0.0)
    throw DomainError("lambda-sin: lambda must be finite and nonzero");
  return {FunctionKind::LambdaSin, "lambda-sin", lambda, 0.0};
}

FunctionSpec FunctionSpec::lambda_z_exp(Complex lambda) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || lambda == 0.0)
    throw DomainError("lambda-z-exp: lambda must be finite and nonzero");
  return {FunctionKind::LambdaZExp, "lambda-z-exp", lambda, 0.0};
}

FunctionSpec FunctionSpec::morosawa_g(double a) {
  if (!(a > 1.0) || !std::isfinite(a))
    throw DomainError("morosawa-g: parameter a must satisfy a > 1 (got " + std::to_string(a) + ")");
  return {FunctionKind::MorosawaG, "morosawa-g", {}, a};
}

FunctionSpec FunctionSpec::bergweiler_morosawa_cos(double a) {
  if (!(a > kPiSquared) || !std::isfinite(a))
    throw DomainError("bm-cos: parameter a must satisfy a > pi^2 (got " + std::to_string(a) + ")");
  return {FunctionKind::BergweilerMorosawaCos, "bm-cos", {}, a};
}

std::vector<std::string> FunctionSpec::catalog_names() {
  return {"sin", "lambda-sin", "lambda-z-exp", "morosawa-g", "bm-cos"};
}

FunctionSpec FunctionSpec::from_name(std::string_view name, std::span<const double> params) {
  auto need = [&](std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi)
      throw DomainError(std::string(name) + ": expected " + std::to_string(lo) +
                        (hi != lo ? "-" + std::to_string(hi) : "") + " parameter(s), got " +
                        std::to_string(params.size()));
  };
  auto complex_param = [&] { return Complex{params[0], params.size() > 1 ? params[1] : 0.0}; };
  if (name == "sin") {
    need(0, 0);
    return sin();
  }
  if (name == "lambda-sin") {
    need(1, 2);
    return lambda_sin(complex_param());
  }
  if (name == "lambda-z-exp") {
    need(1, 2);
    return lambda_z_exp(complex_param());
  }
  if (name == "morosawa-g") {
    need(1, 1);
    return morosawa_g(params[0]);
  }
  if (name == "bm-cos") {
    need(1, 1);
    return bergweiler_morosawa_cos(params[0]);
  }
  throw DomainError("unknown function '" + std::string(name) + "'");
}

FunctionSpec FunctionSpec::from_parameters(std::string_view name, std::span<const Complex> params) {
  std::vector<double> flat;
  for (const Complex& p : params) {
    flat.push_back(p.real());
    if (name == "lambda-sin" || name == "lambda-z-exp") flat.push_back(p.imag());
  }
  return from_name(name, flat);
}

std::vector<Complex> FunctionSpec::parameters() const {
  switch (kind_) {
    case FunctionKind::Sin:
      return {};
    case FunctionKind::LambdaSin:
    case FunctionKind::LambdaZExp:
      return {lambda_};
    case FunctionKind::MorosawaG:
    case FunctionKind::BergweilerMorosawaCos:
      return {Complex{a_, 0.0}};
  }
  return {};
}

std::vector<Complex> FunctionSpec::singular_values() const {
  switch (kind_) {
    case FunctionKind::Sin:
      return {1.0, -1.0};
    case FunctionKind::LambdaSin:
      return {lambda_, -lambda_};
    case FunctionKind::LambdaZExp:
      // critical point -1; 0 is the omitted (asymptotic) value
      return {-lambda_ / std::exp(1.0), 0.0};
    case FunctionKind::MorosawaG:
      // critical point -a maps to -a; 0 is the asymptotic value
      return {Complex{-a_, 0.0}, 0.0};
    case FunctionKind::BergweilerMorosawaCos: {
      // Real critical points lie between consecutive zeros of cos(sqrt x);
      // locate a few by Newton on a central-difference derivative.
      std::vector<Complex> out;
      for (int k = 1; k <= 3; ++k) {
        double x = std::pow(k * kPi, 2.0);
        for (int it = 0; it < 60; ++it) {
          const double h = 1e-4 * std::max(1.0, x);
          auto f = [&](double u) { return eval(*this, Complex{u, 0.0}).value_or(0.0).real(); };
          const double d1 = (f(x + h) - f(x - h)) / (2 * h);
          const double d2 = (f(x + h) - 2 * f(x) + f(x - h)) / (h * h);
          if (d2 == 0.0) break;
          const double step = d1 / d2;
          x -= step;
          if (std::abs(step) < 1e-12 * std::max(1.0, x)) break;
        }
        if (auto v = eval(*this, Complex{x, 0.0})) out.push_back(*v);
      }
      return out;
    }
  }
  return {};
}

Complex cos_sqrt(Complex z) {
  if (std::abs(z) < 1.0) {
    // sum_n (-z)^n / (2n)!
    Complex term = 1.0, sum = 1.0;
    for (int n = 1; n < 30; ++n) {
      term *= -z / static_cast<double>((2 * n - 1) * (2 * n));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return std::cos(std::sqrt(z));
}

std::optional<Complex> eval(const FunctionSpec& spec, Complex z) {
  switch (spec.kind()) {
    case FunctionKind::Sin:
      if (std::abs(z.imag()) > 700.0) return std::nullopt;
      return checked(sin_unchecked(z));
    case FunctionKind::LambdaSin:
      if (std::abs(z.imag()) > 700.0) return std::nullopt;
      return checked(spec.lambda() * sin_unchecked(z));
    case FunctionKind::LambdaZExp:
      return eval_scaled_exp(spec.lambda(), z, z);
    case FunctionKind::MorosawaG: {
      const double a = spec.a();
      return eval_scaled_exp(a * std::exp(a), z + (a - 1.0), z);
    }
    case FunctionKind::BergweilerMorosawaCos:
      return eval_bm_cos(spec.a(), z);
  }
  return std::nullopt;
}

double chordal_distance(Complex z, Complex w) {
  return 2.0 * std::abs(z - w) / (std::hypot(1.0, std::abs(z)) * std::hypot(1.0, std::abs(w)));
}

double chordal_distance(Complex z, Infinity) { return 2.0 / std::hypot(1.0, std::abs(z)); }

}  // namespace jws
