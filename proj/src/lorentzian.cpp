#include "bald/lorentzian.hpp"

#include <cmath>

namespace bald {

std::vector<PoolSpec> default_pools() {
    PoolSpec water{"water", 0.0, 1.0, 0.0, 1.0, 0.2, 100.0, 0.9, 1.0};
    PoolSpec apt{"apt", 3.5, 0.0, 0.0, 1.0, 0.2, 100.0, 0.1, 1.0};
    PoolSpec noe{"noe", -3.5, 0.0, 0.0, 1.0, 0.2, 100.0, 0.1, 1.0};
    PoolSpec mt{"mt", -2.5, 0.0, 0.0, 1.0, 0.2, 100.0, 0.1, 20.0};
    return {water, apt, noe, mt};
}

PoolLayout param_layout(const std::vector<PoolSpec>& pools) {
    PoolLayout layout;
    int at = 0;
    for (const auto& pool : pools) {
        layout.amp_index.push_back(at++);
        layout.width_index.push_back(at++);
        layout.center_index.push_back(pool.center_tol > 0.0 ? at++ : -1);
    }
    layout.n_params = at;
    return layout;
}

Eigen::VectorXd initial_params(const std::vector<PoolSpec>& pools) {
    const PoolLayout layout = param_layout(pools);
    Eigen::VectorXd p(layout.n_params);
    for (size_t i = 0; i < pools.size(); ++i) {
        p[layout.amp_index[i]] = pools[i].amp_init;
        p[layout.width_index[i]] = pools[i].width_init;
        if (layout.center_index[i] >= 0) p[layout.center_index[i]] = pools[i].center;
    }
    return p;
}

void param_bounds(const std::vector<PoolSpec>& pools, Eigen::VectorXd& lo,
                  Eigen::VectorXd& hi) {
    const PoolLayout layout = param_layout(pools);
    lo.resize(layout.n_params);
    hi.resize(layout.n_params);
    for (size_t i = 0; i < pools.size(); ++i) {
        lo[layout.amp_index[i]] = pools[i].amp_lo;
        hi[layout.amp_index[i]] = pools[i].amp_hi;
        lo[layout.width_index[i]] = pools[i].width_lo;
        hi[layout.width_index[i]] = pools[i].width_hi;
        if (layout.center_index[i] >= 0) {
            lo[layout.center_index[i]] = pools[i].center - pools[i].center_tol;
            hi[layout.center_index[i]] = pools[i].center + pools[i].center_tol;
        }
    }
}

Eigen::VectorXd lorentzian_model(const std::vector<PoolSpec>& pools,
                                 const Eigen::VectorXd& params,
                                 const std::vector<double>& offsets) {
    const PoolLayout layout = param_layout(pools);
    const Eigen::Index n = static_cast<Eigen::Index>(offsets.size());
    Eigen::VectorXd z = Eigen::VectorXd::Ones(n);
    for (size_t i = 0; i < pools.size(); ++i) {
        const double A = params[layout.amp_index[i]];
        const double G = params[layout.width_index[i]];
        const double ctr = layout.center_index[i] >= 0 ? params[layout.center_index[i]]
                                                       : pools[i].center;
        const double q = G * G / 4.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double r = (offsets[j] - ctr) * (offsets[j] - ctr);
            z[j] -= A * q / (q + r);
        }
    }
    return z;
}

Eigen::MatrixXd lorentzian_jacobian(const std::vector<PoolSpec>& pools,
                                    const Eigen::VectorXd& params,
                                    const std::vector<double>& offsets) {
    const PoolLayout layout = param_layout(pools);
    const Eigen::Index n = static_cast<Eigen::Index>(offsets.size());
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, layout.n_params);
    for (size_t i = 0; i < pools.size(); ++i) {
        const double A = params[layout.amp_index[i]];
        const double G = params[layout.width_index[i]];
        const double ctr = layout.center_index[i] >= 0 ? params[layout.center_index[i]]
                                                       : pools[i].center;
        const double q = G * G / 4.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            const double dx = offsets[j] - ctr;
            const double r = dx * dx;
            const double den = q + r;
            const double den2 = den * den;
            J(j, layout.amp_index[i]) = -q / den;
            J(j, layout.width_index[i]) = -A * (G / 2.0) * r / den2;
            if (layout.center_index[i] >= 0)
                J(j, layout.center_index[i]) = -A * 2.0 * q * dx / den2;
        }
    }
    return J;
}

FitResult fit_lorentzian(const std::vector<double>& offsets, const std::vector<double>& z,
                         const std::vector<PoolSpec>& pools, const FitOptions& opts) {
    if (pools.empty()) throw ConfigError("fit_lorentzian: empty pool list");
    if (offsets.size() != z.size())
        throw ConfigError("fit_lorentzian: offsets and spectrum lengths differ");
    const PoolLayout layout = param_layout(pools);
    if (static_cast<int>(offsets.size()) < layout.n_params + 2)
        throw ConfigError("fit_lorentzian: too few samples for " +
                          std::to_string(layout.n_params) + " parameters");
    for (double v : z)
        if (!std::isfinite(v)) throw DataError("fit_lorentzian: non-finite spectrum value");

    Eigen::VectorXd lo, hi;
    param_bounds(pools, lo, hi);
    Eigen::VectorXd p = initial_params(pools);
    const Eigen::Map<const Eigen::VectorXd> zv(z.data(), static_cast<Eigen::Index>(z.size()));

    Eigen::VectorXd r = lorentzian_model(pools, p, offsets) - zv;
    double cost = 0.5 * r.squaredNorm();
    double lambda = 1e-3;
    bool converged = false;
    int it = 0;
    for (; it < opts.max_iter; ++it) {
        const Eigen::MatrixXd J = lorentzian_jacobian(pools, p, offsets);
        const Eigen::VectorXd g = J.transpose() * r;
        const Eigen::MatrixXd H = J.transpose() * J;
        const double dfloor = 1e-12 * std::max(H.diagonal().maxCoeff(), 1.0);

        bool accepted = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::MatrixXd A = H;
            for (Eigen::Index d = 0; d < A.rows(); ++d)
                A(d, d) += lambda * std::max(H(d, d), dfloor);
            const Eigen::VectorXd step = A.ldlt().solve(-g);
            if (!step.allFinite()) {
                lambda *= 3.0;
                continue;
            }
            const Eigen::VectorXd cand = (p + step).cwiseMax(lo).cwiseMin(hi);
            const Eigen::VectorXd rc = lorentzian_model(pools, cand, offsets) - zv;
            const double cc = 0.5 * rc.squaredNorm();
            if (cc < cost) {
                const double rel = (cost - cc) / std::max(cost, 1e-300);
                p = cand;
                r = rc;
                cost = cc;
                lambda = std::max(lambda / 3.0, 1e-12);
                accepted = true;
                if (rel < opts.tol) converged = true;
                break;
            }
            lambda *= 3.0;
        }
        if (!accepted || converged) {
            // A fully stalled step search means no bounded descent direction
            // remains; treat it as convergence at the current point.
            converged = converged || !accepted;
            ++it;
            break;
        }
    }

    FitResult result;
    result.params.assign(p.data(), p.data() + p.size());
    result.residual_norm = std::sqrt(2.0 * cost);
    result.converged = converged;
    result.iterations = it;
    return result;
}

}  // namespace bald
