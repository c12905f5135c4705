#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace ideate::stats {

inline double mean(std::span<const double> xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return sum / static_cast<double>(xs.size());
}

/// Sample standard deviation (n-1 denominator); 0 for n <= 1 by convention.
inline double sample_std(std::span<const double> xs) {
    if (xs.size() <= 1) return 0.0;
    double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

} // namespace ideate::stats
