// peaks.cpp — peak bookkeeping on sampled 1-D curves

#include "optoment/peaks.hpp"

#include <stdexcept>

namespace optoment {

std::vector<std::size_t> local_maxima(std::span<const double> y) {
    std::vector<std::size_t> out;
    if (y.size() < 3) return out;
    std::size_t i = 1;
    while (i + 1 < y.size()) {
        if (y[i] > y[i - 1]) {
            std::size_t j = i;
            while (j + 1 < y.size() && y[j + 1] == y[i]) ++j;
            if (j + 1 < y.size() && y[j + 1] < y[i]) out.push_back(i);
            i = j + 1;
        } else {
            ++i;
        }
    }
    return out;
}

std::optional<double> full_width_half_max(std::span<const double> x, std::span<const double> y,
                                          std::size_t peak) {
    if (x.size() != y.size() || peak >= y.size()) {
        throw std::invalid_argument("full_width_half_max: bad input");
    }
    const double half = 0.5 * y[peak];
    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double t = (y[inside] - half) / (y[inside] - y[outside]);
        return x[inside] + t * (x[outside] - x[inside]);
    };
    std::size_t l = peak;
    while (l > 0 && y[l - 1] > half) --l;
    if (l == 0) return std::nullopt;
    std::size_t r = peak;
    while (r + 1 < y.size() && y[r + 1] > half) ++r;
    if (r + 1 == y.size()) return std::nullopt;
    return crossing(r, r + 1) - crossing(l, l - 1);
}

std::optional<std::size_t> argmax_in_window(std::span<const double> x, std::span<const double> y,
                                            double x_lo, double x_hi) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < x_lo || x[i] > x_hi) continue;
        if (!best || y[i] > y[*best]) best = i;
    }
    return best;
}

std::size_t climb_to_peak(std::span<const double> y, std::size_t start) {
    if (start >= y.size()) throw std::invalid_argument("climb_to_peak: start out of range");
    std::size_t i = start;
    for (;;) {
        const bool left = i > 0 && y[i - 1] > y[i];
        const bool right = i + 1 < y.size() && y[i + 1] > y[i];
        if (left && (!right || y[i - 1] >= y[i + 1])) {
            --i;
        } else if (right) {
            ++i;
        } else {
            return i;
        }
    }
}

}  // namespace optoment
