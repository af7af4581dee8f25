#pragma once

#include "preludec/clock.hpp"
#include "preludec/rational.hpp"

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace preludec::testing {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string corpus_path(const std::string& name) {
  return std::string(PRELUDEC_CORPUS_DIR) + "/" + name;
}

inline std::string golden_path(const std::string& name) {
  return std::string(PRELUDEC_GOLDEN_DIR) + "/" + name;
}

// All randomized suites use a fixed seed so failures reproduce exactly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::int64_t pick(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  Rational rational(std::int64_t max_abs_num = 1000, std::int64_t max_den = 1000) {
    return Rational(BigInt(pick(-max_abs_num, max_abs_num)), BigInt(pick(1, max_den)));
  }

  Rational nonzero_rational(std::int64_t max_abs_num = 1000, std::int64_t max_den = 1000) {
    for (;;) {
      Rational r = rational(max_abs_num, max_den);
      if (!r.is_zero()) return r;
    }
  }

  // Periods built from small factors so they have plenty of divisors.
  BigInt composite_period() {
    static const int kFactors[] = {2, 2, 2, 3, 3, 5, 7};
    BigInt n = 1;
    int count = static_cast<int>(pick(0, 5));
    for (int i = 0; i < count; ++i) n *= kFactors[pick(0, 6)];
    return n;
  }

  // A valid clock: phase s/n for an integer start date s.
  Clock valid_clock() {
    BigInt n = composite_period();
    BigInt start = pick(-60, 60);
    auto checked = Clock::validate(n, Rational(start, n));
    return checked.value();
  }

  BigInt divisor_of(const BigInt& n) {
    std::vector<BigInt> divisors;
    for (BigInt d = 1; d * d <= n; ++d) {
      if (n % d == 0) {
        divisors.push_back(d);
        divisors.push_back(n / d);
      }
    }
    return divisors[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(divisors.size()) - 1))];
  }

  // A shift amount q with n*q integral: z/d for a divisor d of n.
  Rational legal_shift(const Clock& c) {
    return Rational(BigInt(pick(-30, 30)), divisor_of(c.period()));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace preludec::testing
