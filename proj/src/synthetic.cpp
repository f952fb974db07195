#include "monogenic/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "fft.hpp"

namespace monogenic::synthetic {

using std::numbers::pi;

ScalarField vertical_step(int width, int height, int column, double low, double high) {
  ScalarField f(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) f(x, y) = x < column ? low : high;
  }
  return f;
}

ScalarField ramp(int width, int height, double slope) {
  ScalarField f(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) f(x, y) = slope * x;
  }
  return f;
}

ScalarField radial_blob(int width, int height, double sigma, double amplitude) {
  ScalarField f(width, height);
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      f(x, y) = amplitude * std::exp(-0.5 * r2 / (sigma * sigma));
    }
  }
  return f;
}

ScalarField plane_wave(int width, int height, double omega, double angle, double amplitude,
                       double phase, double offset) {
  ScalarField f(width, height);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      f(x, y) = offset + amplitude * std::cos(omega * (c * x + s * y) + phase);
    }
  }
  return f;
}

ScalarField band_limited_random(int width, int height, int max_index, std::uint64_t seed,
                                double dc, double rms) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  struct Term {
    int k1, k2;
    double amp, phase;
  };
  std::vector<Term> terms;
  // Half-plane of wave numbers so that each real cosine appears once.
  for (int k2 = 0; k2 <= max_index; ++k2) {
    for (int k1 = -max_index; k1 <= max_index; ++k1) {
      if (k2 == 0 && k1 <= 0) continue;
      terms.push_back({k1, k2, unit(rng), 2.0 * pi * unit(rng)});
    }
  }
  ScalarField f(width, height);
  double energy = 0.0;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double acc = 0.0;
      for (const Term& t : terms) {
        acc += t.amp * std::cos(2.0 * pi * (static_cast<double>(t.k1) * x / width +
                                            static_cast<double>(t.k2) * y / height) +
                                t.phase);
      }
      f(x, y) = acc;
      energy += acc * acc;
    }
  }
  const double current = std::sqrt(energy / static_cast<double>(f.size()));
  const double gain = current > 0.0 ? rms / current : 0.0;
  for (double& x : f.samples()) x = dc + gain * x;
  return f;
}

ScalarField gaussian_smoothed_noise(int width, int height, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<detail::Complex> buf(static_cast<std::size_t>(width) * height);
  for (auto& c : buf) c = normal(rng);
  const std::array<int, 2> dims{height, width};
  detail::fft_forward(buf, dims);
  std::size_t i = 0;
  for (int ky = 0; ky < height; ++ky) {
    const double xi2 = 2.0 * pi * detail::signed_frequency_index(ky, height) / height;
    for (int kx = 0; kx < width; ++kx, ++i) {
      const double xi1 = 2.0 * pi * detail::signed_frequency_index(kx, width) / width;
      buf[i] *= std::exp(-0.5 * sigma * sigma * (xi1 * xi1 + xi2 * xi2));
    }
  }
  detail::fft_inverse(buf, dims);
  ScalarField f(width, height);
  for (std::size_t k = 0; k < buf.size(); ++k) f[k] = buf[k].real();
  return f;
}

ScalarField noisy_shapes(int width, int height, double noise_sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, noise_sigma);
  ScalarField f(width, height);
  const double cx = 0.3 * width;
  const double cy = 0.5 * height;
  const double radius = 0.18 * std::min(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const bool disc = (x - cx) * (x - cx) + (y - cy) * (y - cy) <= radius * radius;
      const bool square = x >= 0.6 * width && x < 0.85 * width && y >= 0.3 * height &&
                          y < 0.7 * height;
      f(x, y) = (disc || square ? 0.75 : 0.25) + normal(rng);
    }
  }
  return f;
}

}  // namespace monogenic::synthetic
