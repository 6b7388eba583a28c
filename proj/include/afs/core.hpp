#ifndef AFS_CORE_HPP
#define AFS_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace afs {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Fine evaluation grid: M_s points s = j*2*pi*f with f equidistant in
/// [f_min, f_max].
struct FrequencyGrid {
    double f_min = 0.0;
    double f_max = 0.0;
    std::vector<Complex> points;

    int size() const { return static_cast<int>(points.size()); }
    double freq_hz(int l) const { return points[l].imag() / kTwoPi; }
};

inline FrequencyGrid make_grid(double f_min_hz, double f_max_hz, int count) {
    if (count < 2) throw std::invalid_argument("make_grid: need at least 2 points");
    if (!(f_min_hz < f_max_hz)) throw std::invalid_argument("make_grid: reversed or empty band");
    FrequencyGrid g;
    g.f_min = f_min_hz;
    g.f_max = f_max_hz;
    g.points.resize(count);
    for (int l = 0; l < count; ++l) {
        // endpoints exact
        double f = (l == 0) ? f_min_hz
                 : (l == count - 1) ? f_max_hz
                 : f_min_hz + (f_max_hz - f_min_hz) * static_cast<double>(l) / (count - 1);
        g.points[l] = Complex(0.0, kTwoPi * f);
    }
    return g;
}

/// One frequency sample: complex frequency and the p x m response there.
struct Sample {
    Complex s;
    CMatrix value;
};

struct SampleSet {
    std::vector<Sample> samples;

    int count() const { return static_cast<int>(samples.size()); }
    int rows() const { return samples.empty() ? 0 : static_cast<int>(samples.front().value.rows()); }
    int cols() const { return samples.empty() ? 0 : static_cast<int>(samples.front().value.cols()); }

    bool contains(Complex s) const {
        return std::any_of(samples.begin(), samples.end(),
                           [&](const Sample& x) { return x.s == s; });
    }

    void add(Complex s, CMatrix value) {
        if (!samples.empty()) {
            if (value.rows() != rows() || value.cols() != cols())
                throw std::invalid_argument("SampleSet: inconsistent response dimensions");
            if (contains(s))
                throw std::invalid_argument("SampleSet: duplicate frequency");
        }
        samples.push_back({s, std::move(value)});
    }

    /// Samples ordered by angular frequency (imaginary part).
    SampleSet sorted() const {
        SampleSet out = *this;
        std::sort(out.samples.begin(), out.samples.end(),
                  [](const Sample& a, const Sample& b) { return a.s.imag() < b.s.imag(); });
        return out;
    }
};

/// Pole-residue form: H(s) = sum_n R_n/(s - a_n) + D + s*E, with one residue
/// matrix per pole.
struct PoleResidueModel {
    CVector poles;
    std::vector<CMatrix> residues;  // residues[n] is p x m
    CMatrix d;
    CMatrix e;

    int order() const { return static_cast<int>(poles.size()); }

    CMatrix eval(Complex s) const {
        CMatrix out = d + s * e;
        for (int n = 0; n < order(); ++n) out += residues[n] / (s - poles[n]);
        return out;
    }
};

/// State-space form H(s) = C (sI - A)^{-1} B + D. The resolvent is applied
/// through a cached eigendecomposition of A so that grid sweeps cost O(n^2)
/// per point.
class StateSpaceModel {
  public:
    StateSpaceModel() = default;
    StateSpaceModel(CMatrix A, CMatrix B, CMatrix C, CMatrix D)
        : A_(std::move(A)), B_(std::move(B)), C_(std::move(C)), D_(std::move(D)) {}

    const CMatrix& A() const { return A_; }
    const CMatrix& B() const { return B_; }
    const CMatrix& C() const { return C_; }
    const CMatrix& D() const { return D_; }
    int order() const { return static_cast<int>(A_.rows()); }

    CMatrix eval(Complex s) const {
        CMatrix res = -A_;
        res.diagonal().array() += s;
        const Eigen::PartialPivLU<CMatrix> lu(res);
        const CVector piv = lu.matrixLU().diagonal();
        const double piv_max = piv.size() ? piv.cwiseAbs().maxCoeff() : 0.0;
        if (piv.size() &&
            piv.cwiseAbs().minCoeff() < 1e-14 * std::max(piv_max, 1.0))
            throw std::runtime_error("StateSpaceModel: singular resolvent at evaluation point");
        return C_ * lu.solve(B_) + D_;
    }

  private:
    CMatrix A_, B_, C_, D_;
};

/// Barycentric form H(s) = (sum b_i w_i/(s-l_i)) / (sum b_i/(s-l_i)).
/// Within 1e-13*|l_i| of a node the interpolation limit w_i is returned.
struct BarycentricModel {
    CVector nodes;
    std::vector<CMatrix> values;  // value at each node, p x m
    CVector coeffs;               // unit 2-norm

    int node_count() const { return static_cast<int>(nodes.size()); }

    CMatrix eval(Complex s) const {
        for (int i = 0; i < node_count(); ++i)
            if (std::abs(s - nodes[i]) <= 1e-13 * std::abs(nodes[i])) return values[i];
        CMatrix num = CMatrix::Zero(values.front().rows(), values.front().cols());
        Complex den = 0.0;
        for (int i = 0; i < node_count(); ++i) {
            const Complex c = coeffs[i] / (s - nodes[i]);
            num += c * values[i];
            den += c;
        }
        return num / den;
    }
};

using SurrogateModel = std::variant<PoleResidueModel, StateSpaceModel, BarycentricModel>;

inline CMatrix evaluate_model(const SurrogateModel& model, Complex s) {
    return std::visit([&](const auto& m) { return m.eval(s); }, model);
}

inline std::vector<CMatrix> evaluate_model(const SurrogateModel& model, const FrequencyGrid& grid) {
    std::vector<CMatrix> out;
    out.reserve(grid.points.size());
    for (Complex s : grid.points) out.push_back(evaluate_model(model, s));
    return out;
}

}  // namespace afs

#endif  // AFS_CORE_HPP
