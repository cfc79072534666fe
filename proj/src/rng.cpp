#include "rbfgan/rng.hpp"

#include <cmath>
#include <numbers>

#include "rbfgan/errors.hpp"

namespace rbfgan {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// splitmix64 step; used only to expand the seed into the xoshiro state.
inline std::uint64_t splitmix64(std::uint64_t& s) {
  std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (int i = 0; i < 4; ++i) s_[i] = splitmix64(s);
}

std::uint64_t SeededRng::next_u64() {
  const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double SeededRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::next_below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("next_below: bound must be positive");
  // Rejection keeps the draw unbiased for any bound.
  std::uint64_t x, r;
  do {
    x = next_u64();
    r = x % bound;
  } while (x - r > std::uint64_t(-1) - (bound - 1));
  return r;
}

double SeededRng::next_normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = next_uniform();
  const double u2 = next_uniform();
  // 1-u1 lies in (0,1], so the log is finite.
  const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

Matrix rng_uniform(SeededRng& rng, std::size_t rows, std::size_t cols) {
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] = rng.next_uniform();
  return out;
}

Matrix rng_normal(SeededRng& rng, double mean, double stddev,
                  std::size_t rows, std::size_t cols) {
  if (!(stddev > 0.0))
    throw ParameterError("rng_normal: stddev must be positive, got " +
                         std::to_string(stddev));
  Matrix out(rows, cols);
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = mean + stddev * rng.next_normal();
  return out;
}

void shuffle_indices(std::vector<std::size_t>& idx, SeededRng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(idx[i - 1], idx[j]);
  }
}

}  // namespace rbfgan
