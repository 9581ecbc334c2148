#include "rfidnet/rng.hpp"

#include <cmath>

namespace rfidnet {

std::uint64_t Pcg32::poisson(double mean) noexcept {
  if (!(mean > 0.0)) return 0;
  constexpr double kChunk = 10.0;
  std::uint64_t total = 0;
  double left = mean;
  while (left > 0.0) {
    const double lambda = left > kChunk ? kChunk : left;
    left -= lambda;
    const double limit = std::exp(-lambda);
    double product = next_double();
    while (product > limit) {
      ++total;
      product *= next_double();
    }
  }
  return total;
}

}  // namespace rfidnet
