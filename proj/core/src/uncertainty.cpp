#include "noclick/uncertainty.hpp"

#include "noclick/errors.hpp"

namespace noclick {

PhatEstimate phat_from_counts(std::int64_t no_click_count, std::int64_t shots) {
  if (shots <= 0) {
    throw InvalidParameter("shots must be positive");
  }
  if (no_click_count < 0 || no_click_count > shots) {
    throw InvalidProbability("no_click_count must lie in [0, shots]");
  }
  PhatEstimate est;
  double m = static_cast<double>(shots);
  est.phat = static_cast<double>(no_click_count) / m;
  if (no_click_count == 0 || no_click_count == shots) {
    double se = 0.5 / (m + 1.0);
    est.variance = se * se;
    est.wilson = true;
  } else {
    est.variance = est.phat * (1.0 - est.phat) / m;
  }
  return est;
}

}  // namespace noclick
