#pragma once

#include <cstdint>

#include "monogenic/field.hpp"

namespace monogenic::synthetic {

// low for x < column, high otherwise.
ScalarField vertical_step(int width, int height, int column, double low = 0.0,
                          double high = 1.0);

// f = slope * x1.
ScalarField ramp(int width, int height, double slope = 1.0);

// Gaussian bump of the given standard deviation centred on the grid.
ScalarField radial_blob(int width, int height, double sigma, double amplitude = 1.0);

// offset + amplitude * cos(omega <x, (cos a, sin a)> + phase).
ScalarField plane_wave(int width, int height, double omega, double angle = 0.0,
                       double amplitude = 1.0, double phase = 0.0, double offset = 0.0);

// dc + sum of random cosines with integer wave numbers |k1|,|k2| <= max_index
// (not both zero), periodic on the grid. Random amplitudes and phases; the
// fluctuating part is rescaled to the given RMS.
ScalarField band_limited_random(int width, int height, int max_index, std::uint64_t seed,
                                double dc = 1.0, double rms = 0.25);

// White Gaussian noise smoothed periodically by a Gaussian of std sigma.
ScalarField gaussian_smoothed_noise(int width, int height, double sigma, std::uint64_t seed);

// A disc and a square at level 0.75 on a 0.25 background plus white Gaussian
// noise of the given std.
ScalarField noisy_shapes(int width, int height, double noise_sigma, std::uint64_t seed);

}  // namespace monogenic::synthetic
