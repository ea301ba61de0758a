#pragma once

#include <array>
#include <cstdint>

#include "simplexstab/common.hpp"

namespace simplexstab {

// Philox4x32-10 counter-based generator. Every draw is a pure function of
// (seed, stream, index, block), so sample i is the same no matter which
// worker produces it or in what order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

// Explicit random source handed to every Monte-Carlo operation. Parallel
// callers partition work by sample index; independent experiments use
// distinct streams.
struct RandomSource {
  std::uint64_t seed = 0;
  std::uint32_t stream = 0;

  RandomSource with_stream(std::uint32_t s) const { return {seed, s}; }

  // Four uniforms in (0,1) for (index, block).
  std::array<double, 4> uniforms(std::uint64_t index, std::uint32_t block) const;

  // Fills out[0..d) with standard normals belonging to sample `index`.
  void normals(std::uint64_t index, double* out, int d) const;
  Vector normal_vector(std::uint64_t index, int d) const;

  // Uniform direction on S^{d-1} for sample `index`.
  Vector sphere_vector(std::uint64_t index, int d) const;

  // Uniform point in the box [lo, hi] for sample `index`.
  Vector box_vector(std::uint64_t index, const Vector& lo, const Vector& hi) const;
};

}  // namespace simplexstab
