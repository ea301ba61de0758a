#include "simplexstab/random.hpp"

#include <cmath>
#include <numbers>

namespace simplexstab {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53-bit uniform strictly inside (0,1).
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits =
      ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

std::array<double, 4> RandomSource::uniforms(std::uint64_t index,
                                             std::uint32_t block) const {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
      block, stream};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed),
                                            static_cast<std::uint32_t>(seed >> 32)};
  const auto r = philox4x32(ctr, key);
  const auto s = philox4x32({ctr[0], ctr[1], block ^ 0x80000000u, stream}, key);
  return {to_open_unit(r[0], r[1]), to_open_unit(r[2], r[3]),
          to_open_unit(s[0], s[1]), to_open_unit(s[2], s[3])};
}

void RandomSource::normals(std::uint64_t index, double* out, int d) const {
  int written = 0;
  for (std::uint32_t block = 0; written < d; ++block) {
    const auto u = uniforms(index, block);
    for (int pair = 0; pair < 2 && written < d; ++pair) {
      const double r = std::sqrt(-2.0 * std::log(u[2 * pair]));
      const double a = 2.0 * std::numbers::pi * u[2 * pair + 1];
      out[written++] = r * std::cos(a);
      if (written < d) out[written++] = r * std::sin(a);
    }
  }
}

Vector RandomSource::normal_vector(std::uint64_t index, int d) const {
  Vector v(d);
  normals(index, v.data(), d);
  return v;
}

Vector RandomSource::sphere_vector(std::uint64_t index, int d) const {
  Vector v = normal_vector(index, d);
  return v / v.norm();
}

Vector RandomSource::box_vector(std::uint64_t index, const Vector& lo,
                                const Vector& hi) const {
  const int d = static_cast<int>(lo.size());
  Vector v(d);
  int written = 0;
  for (std::uint32_t block = 0; written < d; ++block) {
    const auto u = uniforms(index, block);
    for (int j = 0; j < 4 && written < d; ++j, ++written) {
      v[written] = lo[written] + (hi[written] - lo[written]) * u[j];
    }
  }
  return v;
}

}  // namespace simplexstab
