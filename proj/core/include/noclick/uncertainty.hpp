#pragma once

#include <cstdint>

namespace noclick {

// Binomial point estimate for a no-click fraction together with its variance.
// When every shot lands on the same side the plug-in variance is zero, so the
// estimate falls back to a Wilson interval half-width (z = 1) and sets the
// flag.
struct PhatEstimate {
  double phat = 0.0;
  double variance = 0.0;
  bool wilson = false;
};

PhatEstimate phat_from_counts(std::int64_t no_click_count, std::int64_t shots);

}  // namespace noclick
