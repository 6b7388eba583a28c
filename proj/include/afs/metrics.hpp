#ifndef AFS_METRICS_HPP
#define AFS_METRICS_HPP

#include <vector>

#include "afs/core.hpp"

namespace afs {

/// Denominator guard used by the relative error metrics.
inline constexpr double kDelta = 1e-15;

/// Root-mean-square of per-point Frobenius errors between truth and model.
inline double rmse(const std::vector<CMatrix>& truth, const std::vector<CMatrix>& model) {
    if (truth.size() != model.size())
        throw std::invalid_argument("rmse: trace length mismatch");
    if (truth.empty()) throw std::invalid_argument("rmse: empty traces");
    double acc = 0.0;
    for (std::size_t l = 0; l < truth.size(); ++l) {
        if (truth[l].rows() != model[l].rows() || truth[l].cols() != model[l].cols())
            throw std::invalid_argument("rmse: dimension mismatch");
        acc += (truth[l] - model[l]).squaredNorm();
    }
    return std::sqrt(acc / static_cast<double>(truth.size()));
}

/// Per-point Frobenius norm of the element-wise relative error
/// (H_ij - S_ij)/(S_ij + delta).
inline std::vector<double> relative_error(const std::vector<CMatrix>& truth,
                                          const std::vector<CMatrix>& model) {
    if (truth.size() != model.size())
        throw std::invalid_argument("relative_error: trace length mismatch");
    std::vector<double> out(truth.size());
    for (std::size_t l = 0; l < truth.size(); ++l) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < truth[l].rows(); ++i)
            for (Eigen::Index j = 0; j < truth[l].cols(); ++j) {
                const Complex e = (model[l](i, j) - truth[l](i, j)) / (truth[l](i, j) + kDelta);
                acc += std::norm(e);
            }
        out[l] = std::sqrt(acc);
    }
    return out;
}

/// Estimated relative error from an interpolant family: per point, the
/// Frobenius norm of max over ordered pairs (tau, nu) of
/// (1/p)|(H^tau_ij - H^nu_ij)/(H^tau_ij + delta)|.
inline std::vector<double> approx_error(const std::vector<std::vector<CMatrix>>& family) {
    if (family.size() < 2) throw std::invalid_argument("approx_error: need at least 2 interpolants");
    const std::size_t points = family.front().size();
    for (const auto& trace : family)
        if (trace.size() != points) throw std::invalid_argument("approx_error: trace length mismatch");

    std::vector<double> out(points, 0.0);
    for (std::size_t l = 0; l < points; ++l) {
        const auto& first = family.front()[l];
        const double p = static_cast<double>(first.rows());
        double acc = 0.0;
        for (Eigen::Index i = 0; i < first.rows(); ++i)
            for (Eigen::Index j = 0; j < first.cols(); ++j) {
                double worst = 0.0;
                for (std::size_t t = 0; t < family.size(); ++t)
                    for (std::size_t n = 0; n < family.size(); ++n) {
                        if (t == n) continue;
                        const Complex ht = family[t][l](i, j);
                        const Complex hn = family[n][l](i, j);
                        worst = std::max(worst, std::abs((ht - hn) / (ht + kDelta)) / p);
                    }
                acc += worst * worst;
            }
        out[l] = std::sqrt(acc);
    }
    return out;
}

}  // namespace afs

#endif  // AFS_METRICS_HPP
