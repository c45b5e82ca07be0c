#include "bald/svd_denoise.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <thread>

namespace bald {

namespace {

void validate(const SpectralSequence& seq, double sigma, const PatchConfig& cfg) {
    const int s = cfg.patch_size;
    if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (cfg.stride < 1 || cfg.stride > s)
        throw ConfigError("stride must satisfy 1 <= stride <= patch_size");
    if (s > std::min(seq.height(), seq.width()))
        throw ConfigError("patch_size exceeds image dimensions");
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Thin SVD with a deterministic sign convention: the largest-magnitude entry
// of each left singular vector is made nonnegative (first index on ties), so
// outputs are bit-stable across runs and library versions.
void svd_signed(const Eigen::MatrixXd& P, Eigen::MatrixXd& U, Eigen::VectorXd& S,
                Eigen::MatrixXd& V) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(P, Eigen::ComputeThinU | Eigen::ComputeThinV);
    U = svd.matrixU();
    S = svd.singularValues();
    V = svd.matrixV();
    for (Eigen::Index j = 0; j < U.cols(); ++j) {
        Eigen::Index imax = 0;
        U.col(j).cwiseAbs().maxCoeff(&imax);
        if (U(imax, j) < 0.0) {
            U.col(j) = -U.col(j);
            V.col(j) = -V.col(j);
        }
    }
}

// One patch position's contribution for either stage: computes the denoised
// patch and its scalar aggregation weight.
struct StageContext {
    const SpectralSequence* seq = nullptr;
    const SpectralSequence* guide = nullptr;  // null for the hard stage
    double sigma = 0.0;
    int s = 0;
};

void process_patch(const StageContext& ctx, int py, int px, Eigen::MatrixXd& P,
                   Eigen::MatrixXd& G, Eigen::MatrixXd& rec, double& weight) {
    const int s = ctx.s;
    const int C = ctx.seq->n_offsets();
    // Flatten to s^2 x C: row j is the in-patch pixel (j / s, j % s).
    for (int j = 0; j < s * s; ++j) {
        const int y = py + j / s;
        const int x = px + j % s;
        for (int k = 0; k < C; ++k) P(j, k) = (*ctx.seq)(k, y, x);
    }

    Eigen::MatrixXd U, V;
    Eigen::VectorXd S;
    svd_signed(P, U, S, V);
    Eigen::MatrixXd Uh = U * S.asDiagonal();

    if (ctx.guide == nullptr) {
        // Hard threshold: keep coefficients at or above 3 sigma in magnitude.
        const double thr = 3.0 * ctx.sigma;
        long n_kept = 0;
        for (Eigen::Index i = 0; i < Uh.rows(); ++i)
            for (Eigen::Index j = 0; j < Uh.cols(); ++j) {
                if (std::abs(Uh(i, j)) >= thr)
                    ++n_kept;
                else
                    Uh(i, j) = 0.0;
            }
        rec.noalias() = Uh * V.transpose();
        weight = 1.0 / (1.0 + static_cast<double>(n_kept));
    } else {
        // Wiener shrinkage: project the guide patch onto the noisy patch's
        // right basis and attenuate per coefficient.
        for (int j = 0; j < s * s; ++j) {
            const int y = py + j / s;
            const int x = px + j % s;
            for (int k = 0; k < C; ++k) G(j, k) = (*ctx.guide)(k, y, x);
        }
        const Eigen::MatrixXd UG = G * V;
        const double s2 = ctx.sigma * ctx.sigma;
        double sp = 0.0;
        for (Eigen::Index i = 0; i < Uh.rows(); ++i)
            for (Eigen::Index j = 0; j < Uh.cols(); ++j) {
                const double g2 = UG(i, j) * UG(i, j);
                const double rho = g2 / (g2 + s2);
                Uh(i, j) *= rho;
                sp += rho * rho;
            }
        rec.noalias() = Uh * V.transpose();
        weight = 1.0 / (1.0 + sp);
    }
}

SpectralSequence run_stage(const StageContext& ctx, const PatchConfig& cfg) {
    const SpectralSequence& seq = *ctx.seq;
    const int C = seq.n_offsets();
    const int H = seq.height();
    const int W = seq.width();
    const int s = cfg.patch_size;

    const std::vector<int> ys = patch_positions(H, s, cfg.stride);
    const std::vector<int> xs = patch_positions(W, s, cfg.stride);
    std::vector<std::pair<int, int>> positions;
    positions.reserve(ys.size() * xs.size());
    for (int py : ys)
        for (int px : xs) positions.emplace_back(py, px);

    const int n_threads =
        std::max(1, std::min<int>(resolve_threads(cfg.threads),
                                  static_cast<int>(positions.size())));

    // Each worker accumulates into private planes over a contiguous chunk of
    // patch positions; planes are merged in chunk order afterwards, so the
    // result depends only on the worker count (and matches single-threaded
    // execution to rounding).
    const size_t plane = static_cast<size_t>(H) * W;
    std::vector<std::vector<double>> accum(n_threads), wsum(n_threads);
    auto worker = [&](int ti) {
        accum[ti].assign(static_cast<size_t>(C) * plane, 0.0);
        wsum[ti].assign(plane, 0.0);
        Eigen::MatrixXd P(s * s, C), G(s * s, C), rec(s * s, C);
        const size_t lo = positions.size() * ti / n_threads;
        const size_t hi = positions.size() * (ti + 1) / n_threads;
        for (size_t pi = lo; pi < hi; ++pi) {
            const auto [py, px] = positions[pi];
            double weight = 0.0;
            process_patch(ctx, py, px, P, G, rec, weight);
            for (int j = 0; j < s * s; ++j) {
                const size_t at = static_cast<size_t>(py + j / s) * W + (px + j % s);
                for (int k = 0; k < C; ++k)
                    accum[ti][static_cast<size_t>(k) * plane + at] += weight * rec(j, k);
                wsum[ti][at] += weight;
            }
        }
    };

    if (n_threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int ti = 0; ti < n_threads; ++ti) pool.emplace_back(worker, ti);
        for (auto& th : pool) th.join();
    }
    for (int ti = 1; ti < n_threads; ++ti) {
        for (size_t i = 0; i < accum[0].size(); ++i) accum[0][i] += accum[ti][i];
        for (size_t i = 0; i < plane; ++i) wsum[0][i] += wsum[ti][i];
    }

    SpectralSequence out = seq.like();
    for (size_t i = 0; i < plane; ++i)
        if (!(wsum[0][i] > 0.0))
            throw InternalError("patch aggregation left a zero-weight pixel");
    auto& dst = out.frames();
    for (int k = 0; k < C; ++k)
        for (size_t i = 0; i < plane; ++i)
            dst[static_cast<size_t>(k) * plane + i] =
                accum[0][static_cast<size_t>(k) * plane + i] / wsum[0][i];
    return out;
}

}  // namespace

std::vector<int> patch_positions(int extent, int patch_size, int stride) {
    std::vector<int> pos;
    for (int p = 0; p + patch_size <= extent; p += stride) pos.push_back(p);
    if (pos.empty() || pos.back() != extent - patch_size)
        pos.push_back(extent - patch_size);
    return pos;
}

SpectralSequence denoise_hard(const SpectralSequence& seq, double sigma,
                              const PatchConfig& cfg) {
    validate(seq, sigma, cfg);
    StageContext ctx;
    ctx.seq = &seq;
    ctx.sigma = sigma;
    ctx.s = cfg.patch_size;
    return run_stage(ctx, cfg);
}

SpectralSequence denoise_wiener(const SpectralSequence& seq, const SpectralSequence& guide,
                                double sigma, const PatchConfig& cfg) {
    validate(seq, sigma, cfg);
    if (guide.n_offsets() != seq.n_offsets() || guide.height() != seq.height() ||
        guide.width() != seq.width())
        throw ConfigError("guide dimensions do not match input");
    StageContext ctx;
    ctx.seq = &seq;
    ctx.guide = &guide;
    ctx.sigma = sigma;
    ctx.s = cfg.patch_size;
    return run_stage(ctx, cfg);
}

}  // namespace bald
