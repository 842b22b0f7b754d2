#pragma once

// Reference computations used only by the tests. They are written directly
// from the textbook formulas with plain loops and share no code with the
// library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

// Brute-force fuzzy c-means fixed-point iteration. `u` is clusters x points.
struct FcmState {
  Rows centers;
  Rows u;
};

inline Rows centers_from(const Rows& data, const Rows& u, double m) {
  const std::size_t c = u.size();
  const std::size_t d = data.front().size();
  Rows centers(c, std::vector<double>(d, 0.0));
  for (std::size_t j = 0; j < c; ++j) {
    double denom = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      const double w = std::pow(u[j][i], m);
      denom += w;
      for (std::size_t k = 0; k < d; ++k) centers[j][k] += w * data[i][k];
    }
    for (std::size_t k = 0; k < d; ++k) centers[j][k] /= denom;
  }
  return centers;
}

inline double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return std::sqrt(s);
}

inline Rows memberships_from(const Rows& data, const Rows& centers, double m) {
  const std::size_t c = centers.size();
  Rows u(c, std::vector<double>(data.size(), 0.0));
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < c; ++k) {
        s += std::pow(dist(data[i], centers[j]) / dist(data[i], centers[k]), 2.0 / (m - 1.0));
      }
      u[j][i] = 1.0 / s;
    }
  }
  return u;
}

inline double objective(const Rows& data, const Rows& centers, const Rows& u, double m) {
  double total = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < centers.size(); ++j) {
      const double d = dist(data[i], centers[j]);
      total += std::pow(u[j][i], m) * d * d;
    }
  }
  return total;
}

inline FcmState fcm(const Rows& data, Rows u, double m, std::size_t iterations) {
  FcmState s;
  for (std::size_t it = 0; it < iterations; ++it) {
    s.centers = centers_from(data, u, m);
    u = memberships_from(data, s.centers, m);
  }
  s.u = u;
  return s;
}

// |X_k| for k = 0..n/2 of x[offset .. offset+n) times the window, by the
// defining sum.
inline std::vector<double> dft_magnitude(const std::vector<double>& x, std::size_t offset,
                                         std::size_t n, const std::vector<double>& window) {
  std::vector<double> mag(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double ang = -2.0 * std::numbers::pi * static_cast<double>((k * t) % n) /
                         static_cast<double>(n);
      acc += x[offset + t] * window[t] * std::polar(1.0, ang);
    }
    mag[k] = std::abs(acc);
  }
  return mag;
}

inline std::vector<double> rect_window(std::size_t n) { return std::vector<double>(n, 1.0); }

// 4-term Blackman-Harris (sidelobes near -92 dB).
inline std::vector<double> blackman_harris(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double x = 2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n);
    w[t] = 0.35875 - 0.48829 * std::cos(x) + 0.14128 * std::cos(2 * x) - 0.01168 * std::cos(3 * x);
  }
  return w;
}

// Seeded Gaussian blobs, points as rows.
inline Rows blobs(const Rows& centers, std::size_t per_center, double spread, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, spread);
  Rows out;
  for (std::size_t p = 0; p < per_center; ++p) {
    for (const auto& c : centers) {
      std::vector<double> row;
      for (double v : c) row.push_back(v + noise(rng));
      out.push_back(row);
    }
  }
  return out;
}


// Iterative radix-2 FFT, n a power of two.
inline std::vector<std::complex<double>> fft(std::vector<std::complex<double>> a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        const auto w = std::polar(1.0, ang * static_cast<double>(k));
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  return a;
}

inline std::vector<double> hann(std::size_t n) {
  std::vector<double> w(n);
  for (std::size_t t = 0; t < n; ++t) {
    w[t] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(t) / static_cast<double>(n));
  }
  return w;
}

// Averaged Hann periodogram (power), frames of n with 50% overlap.
inline std::vector<double> welch_power(const std::vector<double>& x, std::size_t n) {
  const auto w = hann(n);
  std::vector<double> acc(n / 2 + 1, 0.0);
  std::size_t frames = 0;
  for (std::size_t start = 0; start + n <= x.size(); start += n / 2) {
    std::vector<std::complex<double>> buf(n);
    for (std::size_t t = 0; t < n; ++t) buf[t] = x[start + t] * w[t];
    const auto spec = fft(std::move(buf));
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += std::norm(spec[k]);
    ++frames;
  }
  for (auto& v : acc) v /= static_cast<double>(frames);
  return acc;
}


// Harmonic spacing of one dB spectrum, in bins: the local maximum in
// [lo_bin, hi_bin] of the autocorrelation of the linear magnitude across frequency,
// refined by a parabola through the peak. Works when the fundamental itself
// is buried.
inline double harmonic_spacing(const std::vector<double>& db, double lo_bin, double hi_bin) {
  std::vector<double> mag(db.size());
  for (std::size_t k = 0; k < db.size(); ++k) mag[k] = std::pow(10.0, db[k] / 20.0);
  const auto corr = [&](std::size_t lag) {
    double acc = 0.0;
    for (std::size_t k = 0; k + lag < mag.size(); ++k) acc += mag[k] * mag[k + lag];
    return acc;
  };
  const auto lo = static_cast<std::size_t>(std::floor(lo_bin));
  const auto hi = static_cast<std::size_t>(std::ceil(hi_bin));
  std::size_t best = 0;
  for (std::size_t lag = std::max<std::size_t>(lo, 1); lag <= hi; ++lag) {
    const double c = corr(lag);
    if (c >= corr(lag - 1) && c >= corr(lag + 1) && (best == 0 || c > corr(best))) best = lag;
  }
  if (best == 0) return 0.0;
  const double l = corr(best - 1), c = corr(best), r = corr(best + 1);
  const double denom = l - 2.0 * c + r;
  return static_cast<double>(best) + (denom < 0.0 ? 0.5 * (l - r) / denom : 0.0);
}

}  // namespace oracle
