#include "dfadma/random.hpp"

#include <algorithm>

namespace dfadma {

void shuffle_values(std::span<double> values, std::uint64_t seed) {
  Rng rng(seed);
  std::shuffle(values.begin(), values.end(), rng);
}

ReturnSeries shuffle(const ReturnSeries& r, std::uint64_t seed) {
  ReturnSeries out = r;
  shuffle_values(std::span<double>(out.values.data(), static_cast<std::size_t>(out.values.size())),
                 seed);
  return out;
}

}  // namespace dfadma
