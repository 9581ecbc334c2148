#include "rfidnet/forecast.hpp"

#include <algorithm>

namespace rfidnet {

double ewma_update(double prev, double obs, double alpha) noexcept {
  return alpha * obs + (1.0 - alpha) * prev;
}

double predict_load(std::span<const double> history, double alpha, std::uint32_t horizon) {
  if (history.empty()) throw DomainError("predict_load: empty history");
  double level = history.front();
  double trend = 0.0;
  for (std::size_t i = 1; i < history.size(); ++i) {
    level = ewma_update(level, history[i], alpha);
    trend = ewma_update(trend, history[i] - history[i - 1], alpha);
  }
  return std::max(0.0, level + static_cast<double>(horizon) * trend);
}

}  // namespace rfidnet
