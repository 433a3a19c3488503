#pragma once

#include <cstdint>
#include <optional>

namespace hyperlab {

// Binomial coefficient C(m, r) in exact 64-bit integer arithmetic.
// Conventions: r == 0 gives 1 for every m (including negative m, so that
// per-step edge counts of the k = 2 walk stay constant), r < 0 gives 0,
// and 0 <= m < r gives 0. Returns nullopt when the exact value does not
// fit in uint64_t.
std::optional<uint64_t> binom_checked(int64_t m, int64_t r) noexcept;

// Same, but throws std::overflow_error instead of returning nullopt.
uint64_t binom_or_throw(int64_t m, int64_t r);

}  // namespace hyperlab
