#ifndef AFS_VECFIT_HPP
#define AFS_VECFIT_HPP

#include <vector>

#include "afs/core.hpp"

namespace afs {

struct VfConfig {
    int order = 8;
    int iterations = 10;
    bool enforce_stable_poles = true;

    void validate() const {
        if (order < 1) throw std::invalid_argument("VfConfig: order must be >= 1");
        if (iterations < 1) throw std::invalid_argument("VfConfig: iterations must be >= 1");
    }
};

/// Result of one linearized least-squares pass for a scalar signal.
struct VfIteration {
    CVector sigma_residues;  // residues of the auxiliary function sigma
    CVector residues;        // residues of the model numerator
    Complex d;
    Complex e;
    int rank = 0;
};

namespace vf_detail {

/// Column-equilibrated complex least squares; reports the effective rank.
inline CVector solve_ls(CMatrix A, const CVector& b, int* rank_out = nullptr) {
    Eigen::VectorXd scale(A.cols());
    for (Eigen::Index c = 0; c < A.cols(); ++c) {
        const double n = A.col(c).norm();
        scale[c] = n > 0.0 ? n : 1.0;
        A.col(c) /= scale[c];
    }
    Eigen::CompleteOrthogonalDecomposition<CMatrix> cod(A);
    if (rank_out) *rank_out = static_cast<int>(cod.rank());
    CVector x = cod.solve(b);
    return x.cwiseQuotient(scale.cast<Complex>());
}

}  // namespace vf_detail

/// Heuristic starting poles: conjugate pairs with imaginary parts linearly
/// spaced over the angular band and real part -imag/100; an odd order adds
/// one real pole at minus band-center/100.
inline CVector initial_poles(int order, double w_min, double w_max) {
    if (order < 1) throw std::invalid_argument("initial_poles: order must be >= 1");
    CVector poles(order);
    const int pairs = order / 2;
    int n = 0;
    for (int k = 0; k < pairs; ++k) {
        const double w = pairs == 1 ? w_min
                                    : w_min + (w_max - w_min) * static_cast<double>(k) / (pairs - 1);
        poles[n++] = Complex(-w / 100.0, w);
        poles[n++] = Complex(-w / 100.0, -w);
    }
    if (order % 2) poles[n] = Complex(-0.5 * (w_min + w_max) / 100.0, 0.0);
    return poles;
}

/// One pass of the linearized augmented problem for scalar data: solves for
/// model residues, d, e, and the sigma residues used for pole relocation.
inline VfIteration vf_iterate(const std::vector<Complex>& s, const std::vector<Complex>& h,
                              const CVector& poles) {
    if (s.size() != h.size()) throw std::invalid_argument("vf_iterate: data length mismatch");
    const int N = static_cast<int>(poles.size());
    const int rows = static_cast<int>(s.size());
    const int cols = 2 * N + 2;
    if (2 * rows < cols)
        throw std::invalid_argument("vf_iterate: not enough samples for the requested order");

    CMatrix A(rows, cols);
    CVector b(rows);
    for (int i = 0; i < rows; ++i) {
        for (int n = 0; n < N; ++n) {
            const Complex phi = 1.0 / (s[i] - poles[n]);
            A(i, n) = phi;
            A(i, N + 2 + n) = -h[i] * phi;
        }
        A(i, N) = 1.0;
        A(i, N + 1) = s[i];
        b[i] = h[i];
    }

    VfIteration out;
    CVector x = vf_detail::solve_ls(std::move(A), b, &out.rank);
    out.residues = x.head(N);
    out.d = x[N];
    out.e = x[N + 1];
    out.sigma_residues = x.tail(N);
    return out;
}

/// New poles = eig(diag(poles) - ones * sigma_residues^T); unstable
/// eigenvalues optionally get their real part negated.
inline CVector relocate_poles(const CVector& poles, const CVector& sigma_residues,
                              bool enforce_stable = true) {
    if (poles.size() != sigma_residues.size())
        throw std::invalid_argument("relocate_poles: length mismatch");
    const int N = static_cast<int>(poles.size());
    CMatrix M = CMatrix(poles.asDiagonal());
    M -= CVector::Ones(N) * sigma_residues.transpose();
    Eigen::ComplexEigenSolver<CMatrix> es(M, /*computeEigenvectors=*/false);
    CVector out = es.eigenvalues();
    if (enforce_stable)
        for (int n = 0; n < N; ++n)
            if (out[n].real() > 0.0) out[n] = Complex(-out[n].real(), out[n].imag());
    return out;
}

/// Entry-wise vector fitting with one pole set shared across all matrix
/// entries. Pole relocation uses a joint least-squares pass where every entry
/// contributes rows and the sigma residues are common; the final residues,
/// d, and e are then solved per entry with the poles fixed.
inline PoleResidueModel vf_fit(const SampleSet& samples, const VfConfig& config) {
    config.validate();
    const int N = config.order;
    const int ns = samples.count();
    const int p = samples.rows();
    const int m = samples.cols();
    if (ns == 0) throw std::invalid_argument("vf_fit: empty sample set");

    std::vector<Complex> sv(ns);
    double w_lo = std::numeric_limits<double>::infinity(), w_hi = 0.0;
    for (int i = 0; i < ns; ++i) {
        sv[i] = samples.samples[i].s;
        const double w = std::abs(sv[i].imag());
        w_lo = std::min(w_lo, w);
        w_hi = std::max(w_hi, w);
    }
    if (w_hi == 0.0) w_hi = 1.0;
    if (!std::isfinite(w_lo)) w_lo = 0.0;

    CVector poles = initial_poles(N, w_lo, w_hi);
    const int entries = p * m;

    // Joint relocation passes: unknowns are per-entry (residues, d, e) blocks
    // followed by the shared sigma residues.
    const int cols = entries * (N + 2) + N;
    for (int it = 0; it < config.iterations; ++it) {
        CMatrix A = CMatrix::Zero(entries * ns, cols);
        CVector b(entries * ns);
        for (int e = 0; e < entries; ++e) {
            const int i0 = e / m, j0 = e % m;
            for (int i = 0; i < ns; ++i) {
                const int row = e * ns + i;
                const Complex h = samples.samples[i].value(i0, j0);
                for (int n = 0; n < N; ++n) {
                    const Complex phi = 1.0 / (sv[i] - poles[n]);
                    A(row, e * (N + 2) + n) = phi;
                    A(row, entries * (N + 2) + n) = -h * phi;
                }
                A(row, e * (N + 2) + N) = 1.0;
                A(row, e * (N + 2) + N + 1) = sv[i];
                b[row] = h;
            }
        }
        CVector x = vf_detail::solve_ls(std::move(A), b);
        poles = relocate_poles(poles, x.tail(N), config.enforce_stable_poles);
    }

    // Final residue solve per entry with the relocated poles.
    PoleResidueModel model;
    model.poles = poles;
    model.residues.assign(N, CMatrix::Zero(p, m));
    model.d = CMatrix::Zero(p, m);
    model.e = CMatrix::Zero(p, m);
    for (int e = 0; e < entries; ++e) {
        const int i0 = e / m, j0 = e % m;
        CMatrix A(ns, N + 2);
        CVector b(ns);
        for (int i = 0; i < ns; ++i) {
            for (int n = 0; n < N; ++n) A(i, n) = 1.0 / (sv[i] - poles[n]);
            A(i, N) = 1.0;
            A(i, N + 1) = sv[i];
            b[i] = samples.samples[i].value(i0, j0);
        }
        // rank deficiency and under-modeling surface through fit quality,
        // not as a hard failure
        CVector x = vf_detail::solve_ls(std::move(A), b);
        for (int n = 0; n < N; ++n) model.residues[n](i0, j0) = x[n];
        model.d(i0, j0) = x[N];
        model.e(i0, j0) = x[N + 1];
    }
    return model;
}

}  // namespace afs

#endif  // AFS_VECFIT_HPP
