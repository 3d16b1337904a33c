#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "partial_search/errors.hpp"

namespace partial_search {

inline constexpr int kMaxQubits = 62;

/// Angles of the partial-search geometry: sin(theta1) = 1/sqrt(N),
/// sin(theta2) = 1/sqrt(b), sin(gamma) = 1/sqrt(K).
struct Angles {
  double theta1;
  double theta2;
  double gamma;
};

/// arcsin(2^(-bits/2)), evaluated through exp to stay accurate for large bit counts.
inline double asin_inv_sqrt_pow2(int bits) {
  return std::asin(std::exp(-0.5 * bits * std::log(2.0)));
}

/// A database of N = 2^n items split into K = 2^(n-m) blocks of b = 2^m items.
class SearchSpace {
 public:
  SearchSpace(int n, int m) : n_(n), m_(m) {
    if (n < 1 || n > kMaxQubits) {
      throw ParameterError("qubit count n must lie in [1, " + std::to_string(kMaxQubits) +
                           "], got " + std::to_string(n));
    }
    if (m < 0 || m >= n) {
      throw ParameterError("block qubit count m must satisfy 0 <= m < n, got n=" +
                           std::to_string(n) + ", m=" + std::to_string(m));
    }
  }

  int n() const { return n_; }
  int m() const { return m_; }
  std::uint64_t database_size() const { return std::uint64_t{1} << n_; }
  std::uint64_t block_size() const { return std::uint64_t{1} << m_; }
  std::uint64_t block_count() const { return std::uint64_t{1} << (n_ - m_); }

  Angles angles() const {
    return {asin_inv_sqrt_pow2(n_), asin_inv_sqrt_pow2(m_), asin_inv_sqrt_pow2(n_ - m_)};
  }

  friend bool operator==(const SearchSpace&, const SearchSpace&) = default;

 private:
  int n_;
  int m_;
};

inline Angles angles(const SearchSpace& space) { return space.angles(); }

}  // namespace partial_search
