#pragma once

#include <cmath>
#include <vector>

#include "hiermud/core/rng.hpp"
#include "hiermud/sim/types.hpp"

namespace hiermud::prep {

// White-noise augmentation: each copy adds zero-mean Gaussian noise whose
// per-channel variance equals the mean squared magnitude of that channel.
// Copy 0 is the untouched original.
inline std::vector<sim::SignalRecord> augment(const sim::SignalRecord& record, int n_copies,
                                              std::uint64_t seed) {
  std::vector<sim::SignalRecord> out;
  out.reserve(static_cast<std::size_t>(n_copies) + 1);
  out.push_back(record);
  for (int copy = 1; copy <= n_copies; ++copy) {
    sim::SignalRecord r = record;
    for (std::size_t c = 0; c < r.channels.size(); ++c) {
      core::Rng rng(core::derive_seed(seed, "augment", static_cast<std::uint64_t>(copy), c));
      auto& channel = r.channels[c];
      double ms = 0.0;
      for (double v : channel) ms += v * v;
      ms /= static_cast<double>(channel.size());
      const double sigma = std::sqrt(ms);
      if (sigma == 0.0) continue;
      for (double& v : channel) v += sigma * rng.normal();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace hiermud::prep
