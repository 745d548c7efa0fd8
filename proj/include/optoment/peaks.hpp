// peaks.hpp — peak bookkeeping on sampled 1-D curves

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace optoment {

// Interior indices i with y[i−1] < y[i] ≥ y[i+1]. Plateaus count once.
std::vector<std::size_t> local_maxima(std::span<const double> y);

// Full width at half of the local peak value y[peak], with linear
// interpolation of the crossings. Returns nullopt when the curve does not
// drop below half on both sides.
std::optional<double> full_width_half_max(std::span<const double> x, std::span<const double> y,
                                          std::size_t peak);

// Index of the largest y in [x_lo, x_hi]; nullopt when no samples fall there.
std::optional<std::size_t> argmax_in_window(std::span<const double> x, std::span<const double> y,
                                            double x_lo, double x_hi);

// Climb from `start` to the local maximum whose basin contains it.
std::size_t climb_to_peak(std::span<const double> y, std::size_t start);

}  // namespace optoment
