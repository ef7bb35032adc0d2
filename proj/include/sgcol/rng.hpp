#pragma once

// Counter-based Gaussian sampling: the value for (seed, sample, dim) is a pure
// function of those three numbers, so sample sets do not depend on how many
// samples are drawn or in what order.

#include <array>
#include <cstdint>

namespace sgcol {

/// Philox4x32-10 block cipher (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Uniform in the open interval (0, 1) with 53 random bits.
double counter_uniform(std::uint64_t seed, std::uint64_t sample, std::uint32_t dim);

/// Standard normal by inverse CDF of counter_uniform.
double counter_normal(std::uint64_t seed, std::uint64_t sample, std::uint32_t dim);

}  // namespace sgcol
