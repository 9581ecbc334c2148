#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "rfidnet/domain.hpp"

namespace rfidnet {

struct ForecastParams {
  double alpha = 0.3;
  std::uint32_t horizon = 5;
  std::size_t window = 100;
};

double ewma_update(double prev, double obs, double alpha) noexcept;

/// Smoothed level plus horizon times a smoothed first-difference trend,
/// floored at 0. Both smoothers start from the first sample (trend from 0).
/// Throws DomainError on an empty history.
double predict_load(std::span<const double> history, double alpha, std::uint32_t horizon);

inline bool proactive_flag(double forecast, const Pool& pool) noexcept {
  return forecast > pool.l_threshold;
}

}  // namespace rfidnet
