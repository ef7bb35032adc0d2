#include "sgcol/rng.hpp"

#include <boost/math/distributions/normal.hpp>

namespace sgcol {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = std::uint64_t(a) * b;
  hi = std::uint32_t(p >> 32);
  lo = std::uint32_t(p);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> c, std::array<std::uint32_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return c;
}

double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint32_t dim) {
  const auto r = philox4x32({std::uint32_t(sample), std::uint32_t(sample >> 32), dim, 0u},
                            {std::uint32_t(seed), std::uint32_t(seed >> 32)});
  const std::uint64_t a = r[0] >> 5;  // 27 bits
  const std::uint64_t b = r[1] >> 6;  // 26 bits
  return (double(a * 67108864ull + b) + 0.5) / 9007199254740992.0;
}

double counter_normal(std::uint64_t seed, std::uint64_t sample, std::uint32_t dim) {
  static const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, counter_uniform(seed, sample, dim));
}

}  // namespace sgcol
