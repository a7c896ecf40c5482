#ifndef TENSORCERT_RNG_HPP
#define TENSORCERT_RNG_HPP

#include <cstdint>

#include "tensorcert/linalg.hpp"

namespace tensorcert {

/// SplitMix64: tiny, platform-independent generator so that seeded runs
/// produce byte-identical reports everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform value in [0, bound), bound > 0 (rejection-free multiply-shift).
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

  /// Uniform field element; rationals draw numerator in [-9,9], denominator
  /// in [1,9].
  Scalar scalar(const FieldSpec& f) {
    if (f.is_prime())
      return Scalar::from_int(static_cast<long long>(below(
                                  f.modulus().convert_to<std::uint64_t>())),
                              f);
    if (f.is_rational()) {
      long long num = static_cast<long long>(below(19)) - 9;
      long long den = static_cast<long long>(below(9)) + 1;
      return Scalar::from_rational(Rat(num, den), f);
    }
    throw std::invalid_argument("random eps scalars are not drawn");
  }

  Matrix matrix(int rows, int cols, const FieldSpec& f) {
    Matrix m(rows, cols, f);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) m.at(i, j) = scalar(f);
    return m;
  }

  /// Rejection-samples an invertible operator on F^{rows x cols}.
  MatrixSpaceOperator invertible_operator(int rows, int cols, const FieldSpec& f) {
    int d = rows * cols;
    while (true) {
      Matrix rep = matrix(d, d, f);
      if (rep.rank() == d) return MatrixSpaceOperator(rows, cols, rows, cols, std::move(rep));
    }
  }

 private:
  std::uint64_t state_;
};

}  // namespace tensorcert

#endif
