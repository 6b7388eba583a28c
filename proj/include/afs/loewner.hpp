#ifndef AFS_LOEWNER_HPP
#define AFS_LOEWNER_HPP

#include <optional>
#include <vector>

#include "afs/core.hpp"

namespace afs {

/// Relative singular-value cutoff for the Loewner pseudo-inverse.
inline constexpr double kPinvEps = 1e-12;

struct LoewnerPartition {
    std::vector<Complex> lambda;    // column frequencies
    std::vector<CMatrix> w;         // column values
    std::vector<Complex> mu;        // row frequencies
    std::vector<CMatrix> v;         // row values
};

/// Sorts by angular frequency, then sends odd-indexed (1st, 3rd, ...) samples
/// to the column set and the rest to the row set.
inline LoewnerPartition alternate_split(const SampleSet& samples) {
    const SampleSet sorted = samples.sorted();
    LoewnerPartition part;
    for (int i = 0; i < sorted.count(); ++i) {
        if (i % 2 == 0) {
            part.lambda.push_back(sorted.samples[i].s);
            part.w.push_back(sorted.samples[i].value);
        } else {
            part.mu.push_back(sorted.samples[i].s);
            part.v.push_back(sorted.samples[i].value);
        }
    }
    return part;
}

/// Column data goes to P_c, its mirror image (conjugate frequencies and
/// values) to P_r. Used by the barycentric/theta paths that pair each sample
/// with its double-sided twin.
inline LoewnerPartition conjugate_split(const SampleSet& samples) {
    const SampleSet sorted = samples.sorted();
    LoewnerPartition part;
    for (const Sample& x : sorted.samples) {
        part.lambda.push_back(x.s);
        part.w.push_back(x.value);
        part.mu.push_back(std::conj(x.s));
        part.v.push_back(x.value.conjugate());
    }
    return part;
}

/// Block Loewner data: the six generating matrices and the Loewner matrix
/// itself, with block (j, i) = (v_j - w_i)/(mu_j - lambda_i).
class LoewnerData {
  public:
    explicit LoewnerData(LoewnerPartition part) : part_(std::move(part)) {
        const int k = this->k(), q = this->q();
        if (k == 0) throw std::invalid_argument("LoewnerData: empty column set");
        p_ = static_cast<int>(part_.w.front().rows());
        m_ = static_cast<int>(part_.w.front().cols());
        for (const Complex& mu : part_.mu)
            for (const Complex& lam : part_.lambda)
                if (mu == lam)
                    throw std::invalid_argument("LoewnerData: coincident row/column frequency");

        Lambda_ = CMatrix::Zero(m_ * k, m_ * k);
        R_ = CMatrix::Zero(m_, m_ * k);
        W_ = CMatrix::Zero(p_, m_ * k);
        for (int i = 0; i < k; ++i) {
            Lambda_.block(m_ * i, m_ * i, m_, m_) = part_.lambda[i] * CMatrix::Identity(m_, m_);
            R_.block(0, m_ * i, m_, m_) = CMatrix::Identity(m_, m_);
            W_.block(0, m_ * i, p_, m_) = part_.w[i];
        }
        M_ = CMatrix::Zero(p_ * q, p_ * q);
        L_ = CMatrix::Zero(p_ * q, p_);
        V_ = CMatrix::Zero(p_ * q, m_);
        for (int j = 0; j < q; ++j) {
            M_.block(p_ * j, p_ * j, p_, p_) = part_.mu[j] * CMatrix::Identity(p_, p_);
            L_.block(p_ * j, 0, p_, p_) = CMatrix::Identity(p_, p_);
            V_.block(p_ * j, 0, p_, m_) = part_.v[j];
        }
        LL_ = CMatrix::Zero(p_ * q, m_ * k);
        for (int j = 0; j < q; ++j)
            for (int i = 0; i < k; ++i)
                LL_.block(p_ * j, m_ * i, p_, m_) =
                    (part_.v[j] - part_.w[i]) / (part_.mu[j] - part_.lambda[i]);
    }

    int k() const { return static_cast<int>(part_.lambda.size()); }
    int q() const { return static_cast<int>(part_.mu.size()); }
    int p() const { return p_; }
    int m() const { return m_; }

    const LoewnerPartition& partition() const { return part_; }
    const CMatrix& Lambda() const { return Lambda_; }
    const CMatrix& R() const { return R_; }
    const CMatrix& W() const { return W_; }
    const CMatrix& M() const { return M_; }
    const CMatrix& L() const { return L_; }
    const CMatrix& V() const { return V_; }
    const CMatrix& loewner() const { return LL_; }

  private:
    LoewnerPartition part_;
    int p_ = 0, m_ = 0;
    CMatrix Lambda_, R_, W_, M_, L_, V_, LL_;
};

inline LoewnerData build_loewner(LoewnerPartition part) { return LoewnerData(std::move(part)); }

/// Moore-Penrose pseudo-inverse with relative truncation
/// sigma < eps * sigma_max * max(rows, cols).
inline CMatrix pseudo_inverse(const CMatrix& A, double eps = kPinvEps, int* rank_out = nullptr) {
    Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff =
        sv.size() ? eps * sv[0] * static_cast<double>(std::max(A.rows(), A.cols())) : 0.0;
    int rank = 0;
    CMatrix out = CMatrix::Zero(A.cols(), A.rows());
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] <= cutoff || sv[i] == 0.0) break;
        out += (1.0 / sv[i]) * svd.matrixV().col(i) * svd.matrixU().col(i).adjoint();
        ++rank;
    }
    if (rank_out) *rank_out = rank;
    return out;
}

/// State-space interpolant from Loewner data:
/// B = L^#(V - L D), A = Lambda + B R, C = -(W - D R).
inline StateSpaceModel state_space_interpolant(const LoewnerData& data,
                                               std::optional<CMatrix> D_opt = std::nullopt) {
    CMatrix D = D_opt.value_or(CMatrix::Zero(data.p(), data.m()));
    int rank = 0;
    const CMatrix pinv = pseudo_inverse(data.loewner(), kPinvEps, &rank);
    const CMatrix B = pinv * (data.V() - data.L() * D);
    const CMatrix A = data.Lambda() + B * data.R();
    const CMatrix C = -(data.W() - D * data.R());
    return StateSpaceModel(A, B, C, D);
}

/// Theta(s) and ThetaBar(s), the (p+m)x(p+m) generating functions. The
/// diagonal-resolvent identities
///   (s L - L Lambda)^{-1} = (s I - Lambda)^{-1} L^{-1}
///   (s L - M L)^{-1}      = L^{-1} (s I - M)^{-1}
/// let one factorization of the Loewner matrix serve every frequency.
class ThetaFactors {
  public:
    explicit ThetaFactors(const LoewnerData& data) : data_(&data) {
        if (data.k() != data.q())
            throw std::invalid_argument("ThetaFactors: requires k == q");
        if (data.p() != data.m())
            throw std::invalid_argument("ThetaFactors: requires p == m");
        const CMatrix& LL = data.loewner();
        Eigen::PartialPivLU<CMatrix> lu(LL);
        if (lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0)
            throw std::runtime_error("ThetaFactors: Loewner matrix exactly singular");

        const int p = data.p(), m = data.m();
        lv_ = CMatrix(LL.rows(), p + m);
        lv_.leftCols(p) = data.L();
        lv_.rightCols(m) = data.V();
        x_ = lu.solve(lv_);  // L^{-1} [L V]
        x_ -= lu.solve(CMatrix(LL * x_ - lv_));  // one refinement pass
        top_ = CMatrix(p + m, LL.cols());
        top_.topRows(p) = data.W();
        top_.bottomRows(m) = -data.R();
        // [-W; R] L^{-1} computed through the adjoint system
        Eigen::PartialPivLU<CMatrix> lu_h(CMatrix(LL.adjoint()));
        const CMatrix rhs = -top_.adjoint();
        CMatrix zt = lu_h.solve(rhs);
        zt -= lu_h.solve(CMatrix(LL.adjoint() * zt - rhs));
        z_ = zt.adjoint();

        lambda_diag_ = data.Lambda().diagonal();
        mu_diag_ = data.M().diagonal();
        node_scale_ = std::max(lambda_diag_.cwiseAbs().maxCoeff(),
                               mu_diag_.cwiseAbs().maxCoeff());
    }

    const LoewnerData& data() const { return *data_; }

    /// Theta(s); s must avoid the column frequencies lambda_i.
    CMatrix theta(Complex s) const {
        check_nodes(s, lambda_diag_);
        const int pm = static_cast<int>(x_.cols());
        CVector scale = (CVector::Constant(lambda_diag_.size(), s) - lambda_diag_).cwiseInverse();
        return CMatrix::Identity(pm, pm) + top_ * scale.asDiagonal() * x_;
    }

    /// ThetaBar(s); s must avoid the row frequencies mu_j.
    CMatrix theta_bar(Complex s) const {
        check_nodes(s, mu_diag_);
        const int pm = static_cast<int>(x_.cols());
        CVector scale = (CVector::Constant(mu_diag_.size(), s) - mu_diag_).cwiseInverse();
        return CMatrix::Identity(pm, pm) + z_ * scale.asDiagonal() * lv_;
    }

    /// kappa(Theta, s) = ||Theta(s)||_2 ||ThetaBar(s)||_2.
    double condition_number(Complex s) const {
        const auto n2 = [](const CMatrix& A) {
            return Eigen::JacobiSVD<CMatrix>(A).singularValues()[0];
        };
        return n2(theta(s)) * n2(theta_bar(s));
    }

  private:
    void check_nodes(Complex s, const CVector& nodes) const {
        for (Eigen::Index i = 0; i < nodes.size(); ++i)
            if (std::abs(s - nodes[i]) <= 1e-14 * std::max(node_scale_, 1.0))
                throw std::runtime_error("ThetaFactors: evaluation at a data node");
    }

    const LoewnerData* data_;
    CMatrix lv_;   // [L V]
    CMatrix x_;    // L^{-1} [L V]
    CMatrix top_;  // [W; -R]
    CMatrix z_;    // [-W; R] L^{-1}
    CVector lambda_diag_, mu_diag_;
    double node_scale_ = 0.0;
};

struct ThetaEvaluation {
    CMatrix theta;
    CMatrix theta_bar;
};

inline ThetaEvaluation theta(const LoewnerData& data, Complex s) {
    ThetaFactors f(data);
    return {f.theta(s), f.theta_bar(s)};
}

/// Theta(s) through the pseudo-inverse of (s L - L Lambda); the fallback path
/// for non-square Loewner matrices (odd sample counts).
inline CMatrix theta_pinv(const LoewnerData& data, Complex s) {
    const int p = data.p(), m = data.m();
    CMatrix lv(data.loewner().rows(), p + m);
    lv.leftCols(p) = data.L();
    lv.rightCols(m) = data.V();
    CMatrix top(p + m, data.loewner().cols());
    top.topRows(p) = data.W();
    top.bottomRows(m) = -data.R();
    const CMatrix res = s * data.loewner() - data.loewner() * data.Lambda();
    return CMatrix::Identity(p + m, p + m) + top * pseudo_inverse(res) * lv;
}

/// Interpolant generated from Theta with constant matrices G1, G2:
/// H(s) = [T11 G1 - T12 G2][-T21 G1 + T22 G2]^{-1}.
/// Evaluation points with a singular denominator block throw; scan loops
/// treat those points as invalid.
class GeneratingInterpolant {
  public:
    GeneratingInterpolant(const ThetaFactors& factors, CMatrix g1, CMatrix g2)
        : factors_(&factors), g1_(std::move(g1)), g2_(std::move(g2)) {}

    CMatrix eval(Complex s) const { return from_theta(factors_->theta(s)); }

    CMatrix from_theta(const CMatrix& th) const {
        const int p = factors_->data().p(), m = factors_->data().m();
        const CMatrix num = th.topLeftCorner(p, p) * g1_ - th.topRightCorner(p, m) * g2_;
        const CMatrix den = -th.bottomLeftCorner(m, p) * g1_ + th.bottomRightCorner(m, m) * g2_;
        Eigen::FullPivLU<CMatrix> lu(den);
        if (!lu.isInvertible())
            throw std::runtime_error("GeneratingInterpolant: singular denominator");
        return num * lu.inverse();
    }

    const CMatrix& g1() const { return g1_; }
    const CMatrix& g2() const { return g2_; }

  private:
    const ThetaFactors* factors_;
    CMatrix g1_, g2_;
};

inline CMatrix generating_interpolant(const LoewnerData& data, const CMatrix& g1, const CMatrix& g2,
                                      Complex s) {
    ThetaFactors f(data);
    return GeneratingInterpolant(f, g1, g2).eval(s);
}

/// Barycentric coefficients from the norm-constrained least-squares problem:
/// b is the right singular vector of the smallest singular value of the
/// matrix whose column i stacks (v_j - w_i)/(mu_j - lambda_i) over j; the
/// phase is fixed so the largest-magnitude entry is real positive.
inline BarycentricModel barycentric_fit(const LoewnerPartition& part) {
    const int k = static_cast<int>(part.lambda.size());
    const int q = static_cast<int>(part.mu.size());
    if (k < 1 || q < 1) throw std::invalid_argument("barycentric_fit: empty partition");
    const int p = static_cast<int>(part.w.front().rows());
    const int m = static_cast<int>(part.w.front().cols());

    BarycentricModel model;
    model.nodes = CVector(k);
    for (int i = 0; i < k; ++i) model.nodes[i] = part.lambda[i];
    model.values = part.w;

    CMatrix A(p * q * m, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < q; ++j) {
            const CMatrix blk = (part.v[j] - part.w[i]) / (part.mu[j] - part.lambda[i]);
            for (int c = 0; c < m; ++c)
                A.block((j * m + c) * p, i, p, 1) = blk.col(c);
        }
    }
    Eigen::BDCSVD<CMatrix> svd(A, Eigen::ComputeFullV);
    CVector b = svd.matrixV().col(k - 1);
    b.normalize();

    Eigen::Index imax = 0;
    b.cwiseAbs().maxCoeff(&imax);
    const Complex ph = b[imax] / std::abs(b[imax]);
    model.coeffs = b / ph;
    return model;
}

/// Value of the Eq.-style objective sum_j ||sum_i b_i (v_j - w_i)/(mu_j - lambda_i)||_F^2.
inline double barycentric_objective(const LoewnerPartition& part, const CVector& b) {
    const int k = static_cast<int>(part.lambda.size());
    const int q = static_cast<int>(part.mu.size());
    double acc = 0.0;
    for (int j = 0; j < q; ++j) {
        CMatrix sum = CMatrix::Zero(part.w.front().rows(), part.w.front().cols());
        for (int i = 0; i < k; ++i)
            sum += b[i] * (part.v[j] - part.w[i]) / (part.mu[j] - part.lambda[i]);
        acc += sum.squaredNorm();
    }
    return acc;
}

}  // namespace afs

#endif  // AFS_LOEWNER_HPP
