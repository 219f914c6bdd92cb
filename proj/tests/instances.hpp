#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "engage/core.hpp"

namespace engage::testing {

struct Instance {
  PiecewiseDemand demand;
  LinearLandscape landscape;
  EngagementParams params;
  double initial_state;
};

// Random linear instance with at most max_levels demand levels. Every third
// instance keeps C_E = 0 and a start at 0; the rest draw both freely.
inline Instance random_instance(std::uint64_t seed, std::size_t max_levels) {
  Rng rng = make_stream(seed, 0xD1CE);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto levels = 1 + static_cast<std::size_t>(u(rng) * static_cast<double>(max_levels));

  std::vector<double> bps;
  while (bps.size() + 1 < std::min(levels, max_levels)) {
    const double b = std::round((u(rng) * 20.0 - 10.0) * 100.0) / 100.0;
    if (std::find(bps.begin(), bps.end(), b) == bps.end()) bps.push_back(b);
  }
  std::sort(bps.begin(), bps.end());
  std::vector<double> vals;
  for (std::size_t j = 0; j <= bps.size(); ++j) vals.push_back(u(rng));
  std::sort(vals.begin(), vals.end());
  if (u(rng) < 0.3) vals.front() = 0.0;
  if (u(rng) < 0.2) vals.back() = 1.0;

  const bool plain = seed % 3 == 0;
  const double c_r = u(rng) * 2.0;
  const double c_e = plain ? 0.0 : u(rng);
  const double k = c_e + 0.5 + u(rng) * 3.5;
  const double gamma = 0.5 + u(rng) * 0.45;
  const double friction = u(rng) < 0.15 ? (u(rng) < 0.5 ? 0.0 : 1.0) : u(rng);
  const double x0 = plain ? 0.0 : std::round((u(rng) * 12.0 - 6.0) * 100.0) / 100.0;
  return {PiecewiseDemand(bps, vals), LinearLandscape(c_r, c_e, k),
          EngagementParams(gamma, friction), x0};
}

}  // namespace engage::testing
