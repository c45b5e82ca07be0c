#include "bald/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bald {

double psnr(const SpectralSequence& reference, const SpectralSequence& test, double peak) {
    if (reference.n_offsets() != test.n_offsets() || reference.height() != test.height() ||
        reference.width() != test.width())
        throw ConfigError("psnr: dimension mismatch");

    double sq = 0.0;
    double ref_max = -std::numeric_limits<double>::infinity();
    size_t n = 0;
    for (int k = 0; k < reference.n_offsets(); ++k)
        for (int y = 0; y < reference.height(); ++y)
            for (int x = 0; x < reference.width(); ++x) {
                if (!reference.in_mask(y, x)) continue;
                const double r = reference(k, y, x);
                const double d = r - test(k, y, x);
                sq += d * d;
                ref_max = std::max(ref_max, r);
                ++n;
            }
    if (n == 0) throw DataError("psnr: mask excludes every pixel");
    const double p = peak > 0.0 ? peak : ref_max;
    if (!(p > 0.0)) throw DataError("psnr: nonpositive peak");
    const double mse = sq / static_cast<double>(n);
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p * p / mse);
}

double psnr(const std::vector<double>& reference, const std::vector<double>& test,
            double peak) {
    if (reference.size() != test.size()) throw ConfigError("psnr: size mismatch");
    if (reference.empty()) throw ConfigError("psnr: empty input");
    double sq = 0.0;
    double ref_max = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < reference.size(); ++i) {
        const double d = reference[i] - test[i];
        sq += d * d;
        ref_max = std::max(ref_max, reference[i]);
    }
    const double p = peak > 0.0 ? peak : ref_max;
    if (!(p > 0.0)) throw DataError("psnr: nonpositive peak");
    const double mse = sq / static_cast<double>(reference.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(p * p / mse);
}

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
double betacf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 3e-16;
    constexpr double fpmin = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < fpmin) d = fpmin;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < fpmin) d = fpmin;
        c = 1.0 + aa / c;
        if (std::abs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) break;
    }
    return h;
}

double sample_mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v, double mean) {
    double s = 0.0;
    for (double x : v) s += (x - mean) * (x - mean);
    return s / static_cast<double>(v.size() - 1);
}

}  // namespace

double ibeta_reg(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // Use the continued fraction on whichever side converges fast.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

WelchResult welch_t_test_full(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2)
        throw ConfigError("welch_t_test: each sample needs n >= 2");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double ma = sample_mean(a);
    const double mb = sample_mean(b);
    const double va = sample_var(a, ma);
    const double vb = sample_var(b, mb);
    if (va == 0.0 && vb == 0.0)
        throw DataError("welch_t_test: both samples have zero variance");

    const double sa = va / na;
    const double sb = vb / nb;
    const double se = std::sqrt(sa + sb);
    WelchResult res;
    res.t = (ma - mb) / se;
    res.df = (sa + sb) * (sa + sb) /
             (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    // Two-sided p-value via the Student-t tail identity
    //   P(|T| >= t) = I_{df / (df + t^2)}(df / 2, 1 / 2).
    res.p = ibeta_reg(res.df / 2.0, 0.5, res.df / (res.df + res.t * res.t));
    return res;
}

double welch_t_test(const std::vector<double>& a, const std::vector<double>& b) {
    return welch_t_test_full(a, b).p;
}

RoiStats roi_stats(const std::vector<double>& map_values, int width, int height,
                   const Roi& roi) {
    if (roi.pixels.size() < 2)
        throw ConfigError("roi_stats: ROI '" + roi.label + "' needs at least 2 pixels");
    std::vector<double> vals;
    vals.reserve(roi.pixels.size());
    for (const auto& [y, x] : roi.pixels) {
        if (y < 0 || y >= height || x < 0 || x >= width)
            throw ConfigError("roi_stats: ROI '" + roi.label + "' has out-of-bounds pixels");
        vals.push_back(map_values[static_cast<size_t>(y) * width + x]);
    }
    std::sort(vals.begin(), vals.end());

    const auto quantile = [&vals](double q) {
        const double pos = q * static_cast<double>(vals.size() - 1);
        const size_t lo = static_cast<size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        if (lo + 1 >= vals.size()) return vals.back();
        return vals[lo] + frac * (vals[lo + 1] - vals[lo]);
    };

    RoiStats stats;
    stats.label = roi.label;
    stats.n = vals.size();
    stats.mean = sample_mean(vals);
    stats.stddev = std::sqrt(sample_var(vals, stats.mean));
    stats.q1 = quantile(0.25);
    stats.q2 = quantile(0.50);
    stats.q3 = quantile(0.75);
    return stats;
}

}  // namespace bald
