#include "tensorcert/scalar.hpp"

#include <sstream>

namespace tensorcert {

namespace {

Int mod_norm(const Int& v, const Int& p) {
  Int r = v % p;
  if (r < 0) r += p;
  return r;
}

Int mod_inverse(const Int& a, const Int& p) {
  // extended Euclid
  Int old_r = mod_norm(a, p), r = p;
  Int old_s = 1, s = 0;
  while (r != 0) {
    Int q = old_r / r;
    Int tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  if (old_r != 1) throw ArithmeticError("element not invertible mod " + p.str());
  return mod_norm(old_s, p);
}

bool is_probable_prime(const Int& n) {
  if (n < 2) return false;
  for (Int d : {Int(2), Int(3), Int(5), Int(7), Int(11), Int(13)}) {
    if (n == d) return true;
    if (n % d == 0) return false;
  }
  // Miller-Rabin with fixed bases, deterministic far past any modulus we use
  Int d = n - 1;
  int s = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++s;
  }
  for (Int a : {Int(2), Int(3), Int(5), Int(7), Int(11), Int(13), Int(17),
                Int(19), Int(23), Int(29), Int(31), Int(37)}) {
    Int x = boost::multiprecision::powm(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace

FieldSpec FieldSpec::prime(const Int& p) {
  if (!is_probable_prime(p)) throw std::invalid_argument("modulus " + p.str() + " is not prime");
  FieldSpec f;
  f.kind_ = Kind::prime;
  f.base_kind_ = Kind::prime;
  f.p_ = p;
  return f;
}

FieldSpec FieldSpec::rationals() {
  FieldSpec f;
  f.kind_ = Kind::rational;
  f.base_kind_ = Kind::rational;
  return f;
}

FieldSpec FieldSpec::eps(const FieldSpec& base, int order) {
  if (base.is_eps()) throw std::invalid_argument("eps rings do not nest");
  if (order < 1) throw std::invalid_argument("eps order must be >= 1");
  FieldSpec f;
  f.kind_ = Kind::eps;
  f.base_kind_ = base.kind_;
  f.p_ = base.p_;
  f.order_ = order;
  return f;
}

const Int& FieldSpec::modulus() const {
  if (base_kind_ != Kind::prime) throw std::logic_error("field has no modulus");
  return p_;
}

int FieldSpec::eps_order() const {
  if (kind_ != Kind::eps) throw std::logic_error("not an eps ring");
  return order_;
}

FieldSpec FieldSpec::base() const {
  if (kind_ != Kind::eps) return *this;
  return base_kind_ == Kind::prime ? prime(p_) : rationals();
}

bool FieldSpec::operator==(const FieldSpec& o) const {
  return kind_ == o.kind_ && base_kind_ == o.base_kind_ && p_ == o.p_ && order_ == o.order_;
}

std::string FieldSpec::name() const {
  std::string base = base_kind_ == Kind::prime ? "F" + p_.str() : "Q";
  if (kind_ != Kind::eps) return base;
  return base + "[eps]^" + std::to_string(order_);
}

Scalar Scalar::zero(const FieldSpec& f) {
  Scalar s;
  s.field_ = f;
  s.rat_ = 0;
  s.res_ = 0;
  if (f.is_eps()) s.coeffs_.assign(f.eps_order(), zero(f.base()));
  return s;
}

Scalar Scalar::one(const FieldSpec& f) { return from_int(1, f); }

Scalar Scalar::from_int(long long v, const FieldSpec& f) {
  return from_rational(Rat(v), f);
}

Scalar Scalar::from_rational(const Rat& v, const FieldSpec& f) {
  Scalar s = zero(f);
  switch (f.kind()) {
    case FieldSpec::Kind::rational:
      s.rat_ = v;
      break;
    case FieldSpec::Kind::prime: {
      Int num = mod_norm(numerator(v), f.modulus());
      Int den = mod_norm(denominator(v), f.modulus());
      if (den == 0) throw ArithmeticError("denominator vanishes mod " + f.modulus().str());
      s.res_ = num * mod_inverse(den, f.modulus()) % f.modulus();
      break;
    }
    case FieldSpec::Kind::eps:
      s.coeffs_[0] = from_rational(v, f.base());
      break;
  }
  return s;
}

Scalar Scalar::from_eps_coeffs(std::vector<Scalar> coeffs, const FieldSpec& f) {
  if (!f.is_eps()) throw std::invalid_argument("from_eps_coeffs requires an eps ring");
  Scalar s = zero(f);
  for (size_t i = 0; i < coeffs.size() && i < static_cast<size_t>(f.eps_order()); ++i) {
    if (coeffs[i].field() != f.base()) throw std::invalid_argument("eps coefficient in wrong field");
    s.coeffs_[i] = std::move(coeffs[i]);
  }
  return s;
}

bool Scalar::is_zero() const {
  switch (field_.kind()) {
    case FieldSpec::Kind::rational: return rat_ == 0;
    case FieldSpec::Kind::prime: return res_ == 0;
    case FieldSpec::Kind::eps:
      for (const auto& c : coeffs_)
        if (!c.is_zero()) return false;
      return true;
  }
  return false;
}

bool Scalar::is_one() const { return *this == one(field_); }

bool Scalar::invertible() const {
  if (field_.is_eps()) return !coeffs_[0].is_zero();
  return !is_zero();
}

Scalar Scalar::operator+(const Scalar& o) const {
  if (field_ != o.field_) throw ArithmeticError("field mismatch in +");
  Scalar s = zero(field_);
  switch (field_.kind()) {
    case FieldSpec::Kind::rational: s.rat_ = rat_ + o.rat_; break;
    case FieldSpec::Kind::prime: s.res_ = (res_ + o.res_) % field_.modulus(); break;
    case FieldSpec::Kind::eps:
      for (int i = 0; i < field_.eps_order(); ++i) s.coeffs_[i] = coeffs_[i] + o.coeffs_[i];
      break;
  }
  return s;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator-() const {
  Scalar s = zero(field_);
  switch (field_.kind()) {
    case FieldSpec::Kind::rational: s.rat_ = -rat_; break;
    case FieldSpec::Kind::prime: s.res_ = res_ == 0 ? Int(0) : field_.modulus() - res_; break;
    case FieldSpec::Kind::eps:
      for (int i = 0; i < field_.eps_order(); ++i) s.coeffs_[i] = -coeffs_[i];
      break;
  }
  return s;
}

Scalar Scalar::operator*(const Scalar& o) const {
  if (field_ != o.field_) throw ArithmeticError("field mismatch in *");
  Scalar s = zero(field_);
  switch (field_.kind()) {
    case FieldSpec::Kind::rational: s.rat_ = rat_ * o.rat_; break;
    case FieldSpec::Kind::prime: s.res_ = res_ * o.res_ % field_.modulus(); break;
    case FieldSpec::Kind::eps: {
      // truncated convolution
      int n = field_.eps_order();
      for (int i = 0; i < n; ++i) {
        if (coeffs_[i].is_zero()) continue;
        for (int j = 0; i + j < n; ++j) {
          if (o.coeffs_[j].is_zero()) continue;
          s.coeffs_[i + j] = s.coeffs_[i + j] + coeffs_[i] * o.coeffs_[j];
        }
      }
      break;
    }
  }
  return s;
}

Scalar Scalar::inverse() const {
  if (!invertible())
    throw ArithmeticError("division by non-invertible element " + str() + " in " + field_.name());
  Scalar s = zero(field_);
  switch (field_.kind()) {
    case FieldSpec::Kind::rational: s.rat_ = Rat(1) / rat_; break;
    case FieldSpec::Kind::prime: s.res_ = mod_inverse(res_, field_.modulus()); break;
    case FieldSpec::Kind::eps: {
      // power series inversion: b0 = a0^{-1}, b_k = -a0^{-1} sum_{j=1..k} a_j b_{k-j}
      int n = field_.eps_order();
      Scalar a0inv = coeffs_[0].inverse();
      s.coeffs_[0] = a0inv;
      for (int k = 1; k < n; ++k) {
        Scalar acc = Scalar::zero(field_.base());
        for (int j = 1; j <= k; ++j) acc = acc + coeffs_[j] * s.coeffs_[k - j];
        s.coeffs_[k] = -(a0inv * acc);
      }
      break;
    }
  }
  return s;
}

Scalar Scalar::operator/(const Scalar& o) const {
  if (field_ != o.field_) throw ArithmeticError("field mismatch in /");
  return *this * o.inverse();
}

bool Scalar::operator==(const Scalar& o) const {
  if (field_ != o.field_) return false;
  switch (field_.kind()) {
    case FieldSpec::Kind::rational: return rat_ == o.rat_;
    case FieldSpec::Kind::prime: return res_ == o.res_;
    case FieldSpec::Kind::eps: return coeffs_ == o.coeffs_;
  }
  return false;
}

std::string Scalar::str() const {
  switch (field_.kind()) {
    case FieldSpec::Kind::rational: {
      std::ostringstream os;
      os << numerator(rat_);
      if (denominator(rat_) != 1) os << "/" << denominator(rat_);
      return os.str();
    }
    case FieldSpec::Kind::prime:
      return res_.str();
    case FieldSpec::Kind::eps: {
      std::string out = "[";
      for (size_t i = 0; i < coeffs_.size(); ++i) {
        if (i) out += ",";
        out += coeffs_[i].str();
      }
      return out + "]";
    }
  }
  return "";
}

const Rat& Scalar::rational_value() const {
  if (!field_.is_rational()) throw std::logic_error("not a rational scalar");
  return rat_;
}

const Int& Scalar::residue() const {
  if (!field_.is_prime()) throw std::logic_error("not a prime-field scalar");
  return res_;
}

const Scalar& Scalar::eps_coeff(int i) const {
  if (!field_.is_eps()) throw std::logic_error("not an eps scalar");
  return coeffs_.at(i);
}

const std::vector<Scalar>& Scalar::eps_coeffs() const {
  if (!field_.is_eps()) throw std::logic_error("not an eps scalar");
  return coeffs_;
}

Scalar Scalar::truncated(int order) const {
  if (!field_.is_eps()) throw std::logic_error("truncated() requires an eps scalar");
  if (order < 1 || order > field_.eps_order())
    throw std::invalid_argument("truncation order out of range");
  FieldSpec lower = FieldSpec::eps(field_.base(), order);
  std::vector<Scalar> c(coeffs_.begin(), coeffs_.begin() + order);
  return from_eps_coeffs(std::move(c), lower);
}

namespace {

// integer or fraction token
Rat parse_fraction(const std::string& text) {
  auto bad = [&] { throw ParseError("malformed scalar '" + text + "'"); };
  if (text.empty()) bad();
  size_t slash = text.find('/');
  std::string num = slash == std::string::npos ? text : text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  auto check_int = [&](const std::string& s, bool sign_ok) {
    if (s.empty()) bad();
    size_t i = 0;
    if (sign_ok && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) bad();
    for (; i < s.size(); ++i)
      if (!isdigit(static_cast<unsigned char>(s[i]))) bad();
  };
  check_int(num, true);
  check_int(den, false);
  Int d(den);
  if (d == 0) throw ParseError("zero denominator in '" + text + "'");
  return Rat(Int(num), d);
}

std::vector<std::string> split_list(const std::string& inner) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : inner) {
    if (ch == ',') {
      parts.push_back(cur);
      cur.clear();
    } else if (!isspace(static_cast<unsigned char>(ch))) {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

Scalar parse_scalar(const std::string& raw, const FieldSpec& field) {
  std::string text;
  for (char ch : raw)
    if (!isspace(static_cast<unsigned char>(ch))) text += ch;
  if (field.is_eps()) {
    if (text.size() >= 2 && text.front() == '[' && text.back() == ']') {
      auto parts = split_list(text.substr(1, text.size() - 2));
      if (static_cast<int>(parts.size()) > field.eps_order())
        throw ParseError("eps coefficient list longer than order " +
                         std::to_string(field.eps_order()));
      std::vector<Scalar> coeffs;
      for (const auto& p : parts) coeffs.push_back(parse_scalar(p, field.base()));
      return Scalar::from_eps_coeffs(std::move(coeffs), field);
    }
    // bare base element, embedded at eps^0
    return Scalar::from_eps_coeffs({parse_scalar(text, field.base())}, field);
  }
  return Scalar::from_rational(parse_fraction(text), field);
}

}  // namespace tensorcert
