#include "noclick/rng.hpp"

#include <cmath>
#include <cstdlib>

#include "noclick/errors.hpp"

namespace noclick {

namespace {

constexpr std::uint64_t kPhiloxM0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kPhiloxM1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kPhiloxW0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kPhiloxW1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t* hi, std::uint64_t* lo) {
  unsigned __int128 product = static_cast<unsigned __int128>(a) * b;
  *hi = static_cast<std::uint64_t>(product >> 64);
  *lo = static_cast<std::uint64_t>(product);
}

inline std::array<std::uint64_t, 4> philox_round(const std::array<std::uint64_t, 4>& c,
                                                 const std::array<std::uint64_t, 2>& k) {
  std::uint64_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], &hi0, &lo0);
  mulhilo(kPhiloxM1, c[2], &hi1, &lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64_block(const std::array<std::uint64_t, 4>& counter,
                                              const std::array<std::uint64_t, 2>& key) {
  std::array<std::uint64_t, 4> state = counter;
  std::array<std::uint64_t, 2> k = key;
  for (int round = 0; round < 10; round++) {
    state = philox_round(state, k);
    k[0] += kPhiloxW0;
    k[1] += kPhiloxW1;
  }
  return state;
}

PhiloxStream::PhiloxStream(std::uint64_t seed, std::uint64_t stream) : key_{{seed, stream}} {}

void PhiloxStream::refill() {
  buffer_ = philox4x64_block(counter_, key_);
  buffer_pos_ = 0;
  // 256-bit little-endian counter increment.
  for (int w = 0; w < 4; w++) {
    if (++counter_[w] != 0) {
      break;
    }
  }
}

std::uint64_t PhiloxStream::next_u64() {
  if (buffer_pos_ == 4) {
    refill();
  }
  return buffer_[buffer_pos_++];
}

double PhiloxStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ull;
  }
  return hash;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
  return splitmix64(seed ^ fnv1a64(label));
}

namespace {

// Binomial sampling by pmf inversion, for small n*p. Walks the CDF from
// X = 0 using the pmf recurrence.
std::int64_t binomial_inversion(PhiloxStream& rng, std::int64_t n, double p) {
  double q = 1.0 - p;
  double qn = std::exp(static_cast<double>(n) * std::log(q));
  double np = static_cast<double>(n) * p;
  double bound = std::min(static_cast<double>(n), np + 10.0 * std::sqrt(np * q + 1.0));
  while (true) {
    double x = 0.0;
    double px = qn;
    double u = rng.next_double();
    while (u > px) {
      x += 1.0;
      if (x > bound) {
        break;
      }
      u -= px;
      px *= (static_cast<double>(n) - x + 1.0) * p / (x * q);
    }
    if (x <= bound) {
      return static_cast<std::int64_t>(x);
    }
  }
}

// BTPE (binomial triangle-parallelogram-exponential) rejection sampler of
// Kachitvichyanukul and Schmeiser, used when n*p is large enough for its
// piecewise majorizing function to be set up. Requires p <= 0.5.
std::int64_t binomial_btpe(PhiloxStream& rng, std::int64_t n, double r) {
  double q = 1.0 - r;
  double nd = static_cast<double>(n);
  double fm = nd * r + r;
  std::int64_t m = static_cast<std::int64_t>(std::floor(fm));
  double md = static_cast<double>(m);
  double nrq = nd * r * q;
  double p1 = std::floor(2.195 * std::sqrt(nrq) - 4.6 * q) + 0.5;
  double xm = md + 0.5;
  double xl = xm - p1;
  double xr = xm + p1;
  double c = 0.134 + 20.5 / (15.3 + md);
  double a = (fm - xl) / (fm - xl * r);
  double laml = a * (1.0 + 0.5 * a);
  a = (xr - fm) / (xr * q);
  double lamr = a * (1.0 + 0.5 * a);
  double p2 = p1 * (1.0 + 2.0 * c);
  double p3 = p2 + c / laml;
  double p4 = p3 + c / lamr;

  double y;
  while (true) {
    double u = rng.next_double() * p4;
    double v = rng.next_double();
    if (u <= p1) {
      // Triangular center region, accepted outright.
      y = std::floor(xm - p1 * v + u);
      break;
    }
    if (u <= p2) {
      // Parallelogram region.
      double x = xl + (u - p1) / c;
      v = v * c + 1.0 - std::fabs(md - x + 0.5) / p1;
      if (v > 1.0) {
        continue;
      }
      y = std::floor(x);
    } else if (u <= p3) {
      // Left exponential tail.
      y = std::floor(xl + std::log(v) / laml);
      if (y < 0.0) {
        continue;
      }
      v = v * (u - p2) * laml;
    } else {
      // Right exponential tail.
      y = std::floor(xr - std::log(v) / lamr);
      if (y > nd) {
        continue;
      }
      v = v * (u - p3) * lamr;
    }

    double k = std::fabs(y - md);
    if (k <= 20.0 || k >= nrq / 2.0 - 1.0) {
      // Evaluate pmf(y)/pmf(m) exactly via the recurrence.
      double s = r / q;
      double aa = s * (nd + 1.0);
      double f = 1.0;
      if (md < y) {
        for (double i = md + 1.0; i <= y; i += 1.0) {
          f *= aa / i - s;
        }
      } else if (md > y) {
        for (double i = y + 1.0; i <= md; i += 1.0) {
          f /= aa / i - s;
        }
      }
      if (v <= f) {
        break;
      }
      continue;
    }

    // Squeeze test, then Stirling-series bound on the log pmf ratio.
    double rho = (k / nrq) * ((k * (k / 3.0 + 0.625) + 1.0 / 6.0) / nrq + 0.5);
    double t = -k * k / (2.0 * nrq);
    double log_v = std::log(v);
    if (log_v < t - rho) {
      break;
    }
    if (log_v > t + rho) {
      continue;
    }
    double x1 = y + 1.0;
    double f1 = md + 1.0;
    double z = nd + 1.0 - md;
    double w = nd - y + 1.0;
    double x2 = x1 * x1;
    double f2 = f1 * f1;
    double z2 = z * z;
    double w2 = w * w;
    double bound = xm * std::log(f1 / x1) + (nd - md + 0.5) * std::log(z / w) +
                   (y - md) * std::log(w * r / (x1 * q)) +
                   (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / f2) / f2) / f2) / f2) / f1 /
                       166320.0 +
                   (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / z2) / z2) / z2) / z2) / z /
                       166320.0 +
                   (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / x2) / x2) / x2) / x2) / x1 /
                       166320.0 +
                   (13680.0 - (462.0 - (132.0 - (99.0 - 140.0 / w2) / w2) / w2) / w2) / w /
                       166320.0;
    if (log_v <= bound) {
      break;
    }
  }

  return static_cast<std::int64_t>(y);
}

}  // namespace

std::int64_t sample_binomial(PhiloxStream& rng, std::int64_t n, double p) {
  if (n < 0) {
    throw InvalidParameter("binomial trial count must be non-negative");
  }
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidProbability("binomial probability must lie in [0, 1]");
  }
  if (n == 0 || p == 0.0) {
    return 0;
  }
  if (p == 1.0) {
    return n;
  }
  double r = std::min(p, 1.0 - p);
  std::int64_t draw;
  if (static_cast<double>(n) * r <= 30.0) {
    draw = binomial_inversion(rng, n, r);
  } else {
    draw = binomial_btpe(rng, n, r);
  }
  return p > 0.5 ? n - draw : draw;
}

}  // namespace noclick
