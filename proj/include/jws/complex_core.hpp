#pragma once

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jws {

using Complex = std::complex<double>;

// Any evaluation whose modulus exceeds this bound is reported as overflow.
inline constexpr double kOverflowModulus = 1e300;
inline constexpr double kPi = 3.14159265358979323846;

/// Tag for the point at infinity on the Riemann sphere.
struct Infinity {};
inline constexpr Infinity infinity{};

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Out-of-domain catalog parameters or unknown function names.
class DomainError : public Error {
 public:
  using Error::Error;
};

enum class FunctionKind {
  Sin,                    // sin z
  LambdaSin,              // lambda * sin z
  LambdaZExp,             // lambda * z * e^z
  MorosawaG,              // a e^a (z - (1 - a)) e^z, a > 1
  BergweilerMorosawaCos,  // a z cos(sqrt z) / (pi^2 - 4z), a > pi^2
};

/// One entry of the function catalog. Construct through the named factories;
/// they reject parameters outside each family's admissible range.
class FunctionSpec {
 public:
  static FunctionSpec sin();
  static FunctionSpec lambda_sin(Complex lambda);
  static FunctionSpec lambda_z_exp(Complex lambda);
  static FunctionSpec morosawa_g(double a);
  static FunctionSpec bergweiler_morosawa_cos(double a);

  /// Catalog lookup by CLI name (sin, lambda-sin, lambda-z-exp, morosawa-g,
  /// bm-cos). Real-parameter families take one value; lambda families take
  /// re,im (im defaults to 0).
  static FunctionSpec from_name(std::string_view name, std::span<const double> params);

  /// Rebuild from the name and complex parameter list stored in grid files.
  static FunctionSpec from_parameters(std::string_view name, std::span<const Complex> params);

  static std::vector<std::string> catalog_names();

  FunctionKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  Complex lambda() const { return lambda_; }
  double a() const { return a_; }

  /// Parameters as complex numbers, in declaration order (empty for sin).
  std::vector<Complex> parameters() const;

  /// Singular values (critical or asymptotic values) whose orbits locate the
  /// attracting and parabolic cycles.
  std::vector<Complex> singular_values() const;

  bool operator==(const FunctionSpec&) const = default;

 private:
  FunctionSpec(FunctionKind kind, std::string name, Complex lambda, double a)
      : kind_(kind), name_(std::move(name)), lambda_(lambda), a_(a) {}

  FunctionKind kind_;
  std::string name_;
  Complex lambda_{};
  double a_ = 0.0;
};

/// f(z) for the catalog entry. std::nullopt is the overflow sentinel: the true
/// value has modulus above kOverflowModulus (or is not representable).
std::optional<Complex> eval(const FunctionSpec& spec, Complex z);

/// cos(sqrt z), single valued because cosine is even.
Complex cos_sqrt(Complex z);

double chordal_distance(Complex z, Complex w);
double chordal_distance(Complex z, Infinity);
inline double chordal_distance(Infinity, Complex w) { return chordal_distance(w, infinity); }

}  // namespace jws
