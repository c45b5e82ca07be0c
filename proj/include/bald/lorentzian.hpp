#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "bald/errors.hpp"

namespace bald {

// One saturation pool of the multi-pool Lorentzian z-spectrum model
//   z(x) = 1 - sum_j A_j * L(x; center_j, Gamma_j),
//   L(x; c, G) = (G^2/4) / (G^2/4 + (x - c)^2).
// center_tol = 0 pins the center; center_tol > 0 frees it within +-tol.
struct PoolSpec {
    std::string name;
    double center = 0.0;       // ppm relative to water
    double center_tol = 0.0;   // ppm
    double amp_lo = 0.0;
    double amp_hi = 1.0;
    double width_lo = 0.2;     // ppm
    double width_hi = 100.0;   // ppm
    double amp_init = 0.1;
    double width_init = 1.0;
};

// Water (direct saturation, center free within +-1 ppm) plus APT at +3.5,
// NOE at -3.5, and MT at -2.5 ppm with fixed centers.
std::vector<PoolSpec> default_pools();

// Parameter packing: per pool in order, amplitude then width, followed by
// the center when it is free. Indices of -1 mean "not a parameter".
struct PoolLayout {
    std::vector<int> amp_index;
    std::vector<int> width_index;
    std::vector<int> center_index;
    int n_params = 0;
};

PoolLayout param_layout(const std::vector<PoolSpec>& pools);

Eigen::VectorXd initial_params(const std::vector<PoolSpec>& pools);
void param_bounds(const std::vector<PoolSpec>& pools, Eigen::VectorXd& lo,
                  Eigen::VectorXd& hi);

Eigen::VectorXd lorentzian_model(const std::vector<PoolSpec>& pools,
                                 const Eigen::VectorXd& params,
                                 const std::vector<double>& offsets);

Eigen::MatrixXd lorentzian_jacobian(const std::vector<PoolSpec>& pools,
                                    const Eigen::VectorXd& params,
                                    const std::vector<double>& offsets);

struct FitOptions {
    int max_iter = 200;
    double tol = 1e-8;  // relative residual-change stopping threshold
};

struct FitResult {
    std::vector<double> params;   // packed per param_layout
    double residual_norm = 0.0;   // euclidean norm of the final residual
    bool converged = false;
    int iterations = 0;
};

// Bounded damped least squares: Levenberg-Marquardt steps with a Marquardt
// diagonal, candidate steps clipped to the bounds, accepted only when the
// residual decreases; the damping factor shrinks on acceptance and grows on
// rejection. Stops when the relative cost change drops below opts.tol or
// after opts.max_iter iterations (flagged, best-so-far returned).
FitResult fit_lorentzian(const std::vector<double>& offsets, const std::vector<double>& z,
                         const std::vector<PoolSpec>& pools = default_pools(),
                         const FitOptions& opts = {});

}  // namespace bald
