#pragma once

#include <algorithm>
#include <vector>

namespace bald {

// Piecewise-linear lookup over ascending xs; values outside the table are
// clamped to the endpoint values.
inline double interp_ascending(const std::vector<double>& xs,
                               const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const size_t j = static_cast<size_t>(it - xs.begin());
    const double t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    return ys[j - 1] + t * (ys[j] - ys[j - 1]);
}

}  // namespace bald
