#ifndef TENSORCERT_SCALAR_HPP
#define TENSORCERT_SCALAR_HPP

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>
#include <vector>

namespace tensorcert {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Thrown on malformed scalar text and on field/arity mismatches at parse time.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown on arithmetic that is undefined in the field (division by a
/// non-invertible element, inverse of zero, ...).
class ArithmeticError : public std::runtime_error {
 public:
  explicit ArithmeticError(const std::string& what) : std::runtime_error(what) {}
};

/// Description of an exact coefficient domain: a prime field F_p, the
/// rationals Q, or a truncated polynomial ring F[e]/(e^order) over one of
/// the former two.  Values are immutable.
class FieldSpec {
 public:
  enum class Kind { prime, rational, eps };

  FieldSpec() = default;  // the rationals

  static FieldSpec prime(const Int& p);
  static FieldSpec rationals();
  static FieldSpec eps(const FieldSpec& base, int order);

  Kind kind() const { return kind_; }
  bool is_prime() const { return kind_ == Kind::prime; }
  bool is_rational() const { return kind_ == Kind::rational; }
  bool is_eps() const { return kind_ == Kind::eps; }

  /// Modulus of the (base) prime field; throws unless prime-based.
  const Int& modulus() const;
  /// Truncation order of an eps ring; throws otherwise.
  int eps_order() const;
  /// Base field of an eps ring; identity on plain fields.
  FieldSpec base() const;

  bool operator==(const FieldSpec& o) const;
  bool operator!=(const FieldSpec& o) const { return !(*this == o); }

  /// "Q", "F5", "Q[eps]^3", "F5[eps]^2"
  std::string name() const;

 private:
  Kind kind_ = Kind::rational;
  Kind base_kind_ = Kind::rational;  // meaningful when kind_ == eps
  Int p_ = 0;
  int order_ = 0;
};

/// One exact field (or eps-ring) element, always kept canonical:
/// least nonnegative residue for F_p, reduced fraction for Q, and a
/// coefficient vector of exactly `order` base elements for eps rings.
class Scalar {
 public:
  Scalar() = default;  // rational zero

  static Scalar zero(const FieldSpec& f);
  static Scalar one(const FieldSpec& f);
  static Scalar from_int(long long v, const FieldSpec& f);
  static Scalar from_rational(const Rat& v, const FieldSpec& f);
  /// Builds an eps element from base-field coefficients (c0 first); the
  /// list is truncated/zero-padded to the ring's order.
  static Scalar from_eps_coeffs(std::vector<Scalar> coeffs, const FieldSpec& f);

  const FieldSpec& field() const { return field_; }
  bool is_zero() const;
  bool is_one() const;
  bool invertible() const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator*(const Scalar& o) const;
  Scalar operator/(const Scalar& o) const;
  Scalar operator-() const;
  Scalar inverse() const;
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// Canonical text form, parseable by parse_scalar.
  std::string str() const;

  /// Payload access (each throws when the field kind does not match).
  const Rat& rational_value() const;
  const Int& residue() const;
  const Scalar& eps_coeff(int i) const;
  const std::vector<Scalar>& eps_coeffs() const;

  /// Image under the eps-ring truncation to a lower order (ring hom).
  Scalar truncated(int order) const;

 private:
  FieldSpec field_;
  Rat rat_;
  Int res_;
  std::vector<Scalar> coeffs_;
};

/// Parses "5", "-3/4", or "[c0,c1,...]" (eps) into a canonical Scalar.
Scalar parse_scalar(const std::string& text, const FieldSpec& field);

}  // namespace tensorcert

#endif
