#include "hyperlab/binom.hpp"

#include <limits>
#include <stdexcept>

namespace hyperlab {

std::optional<uint64_t> binom_checked(int64_t m, int64_t r) noexcept {
  if (r < 0) return uint64_t{0};
  if (r == 0) return uint64_t{1};
  if (m < r) return uint64_t{0};
  // Use the smaller of r, m-r; intermediate values C(m-r+i, i) never exceed
  // the final result, so checking each step against 2^64-1 is enough.
  if (m - r < r) r = m - r;
  if (r == 0) return uint64_t{1};
  unsigned __int128 acc = 1;
  for (int64_t i = 1; i <= r; ++i) {
    acc = acc * static_cast<uint64_t>(m - r + i);
    acc /= static_cast<uint64_t>(i);  // exact: acc holds C(m-r+i, i)
    if (acc > std::numeric_limits<uint64_t>::max()) return std::nullopt;
  }
  return static_cast<uint64_t>(acc);
}

uint64_t binom_or_throw(int64_t m, int64_t r) {
  auto v = binom_checked(m, r);
  if (!v) throw std::overflow_error("binomial coefficient exceeds 64 bits");
  return *v;
}

}  // namespace hyperlab
