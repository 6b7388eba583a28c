#ifndef AFS_ORACLE_HPP
#define AFS_ORACLE_HPP

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <utility>

#include "afs/core.hpp"

namespace afs {

/// Portable uniform draw on [-1, 1]. mt19937_64 output is fully specified by
/// the standard, unlike uniform_real_distribution, so seeded runs reproduce
/// across compilers.
inline double uniform_pm1(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

/// Source of true response data. Query count is the benchmark cost metric.
class Oracle {
  public:
    virtual ~Oracle() = default;

    CMatrix query(Complex s) {
        ++queries_;
        return do_query(s);
    }

    virtual int rows() const = 0;
    virtual int cols() const = 0;

    std::uint64_t query_count() const { return queries_; }
    void reset_query_count() { queries_ = 0; }

  private:
    virtual CMatrix do_query(Complex s) const = 0;
    std::atomic<std::uint64_t> queries_{0};
};

/// Stable rational system with conjugate-closed poles/residues, used as an
/// exactly-known stand-in for solver data.
struct SyntheticRationalSystem {
    CVector poles;
    std::vector<CMatrix> residues;
    CMatrix constant;  // optional constant term, zero by default
    std::uint64_t seed = 0;

    int order() const { return static_cast<int>(poles.size()); }
    int rows() const { return static_cast<int>(residues.front().rows()); }
    int cols() const { return static_cast<int>(residues.front().cols()); }

    CMatrix eval(Complex s) const {
        CMatrix out = constant;
        for (int n = 0; n < order(); ++n) out += residues[n] / (s - poles[n]);
        return out;
    }
};

/// Builds a deterministic synthetic system. Pole imaginary parts are spread
/// across the band (5% inset from the edges), real parts are
/// -(angular spread)/sharpness, and residues are uniform on [-1,1] per
/// component, scaled by the pole damping so the resonant peaks are O(1).
/// Odd orders get one extra real pole at minus band-center/sharpness.
inline SyntheticRationalSystem make_synthetic(std::uint64_t seed, int order, int p, int m,
                                              double f_min_hz, double f_max_hz,
                                              double sharpness = 100.0) {
    if (order < 1 || p < 1 || m < 1)
        throw std::invalid_argument("make_synthetic: order and port counts must be positive");
    if (!(f_min_hz < f_max_hz)) throw std::invalid_argument("make_synthetic: reversed band");

    const double w_min = kTwoPi * f_min_hz;
    const double w_max = kTwoPi * f_max_hz;
    const double spread = w_max - w_min;
    const double re = -spread / sharpness;

    std::mt19937_64 rng(seed);
    auto random_residue = [&](double scale, bool real_only) {
        CMatrix r(p, m);
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < m; ++j) {
                const double a = uniform_pm1(rng);
                const double b = real_only ? 0.0 : uniform_pm1(rng);
                r(i, j) = Complex(a, b) * scale;
            }
        return r;
    };

    SyntheticRationalSystem sys;
    sys.seed = seed;
    sys.constant = CMatrix::Zero(p, m);
    const int pairs = order / 2;
    sys.poles.resize(order);
    int n = 0;
    for (int k = 0; k < pairs; ++k) {
        const double frac = pairs == 1 ? 0.5 : static_cast<double>(k) / (pairs - 1);
        const double wi = w_min + spread * (0.05 + 0.9 * frac);
        const Complex a(re, wi);
        const CMatrix r = random_residue(std::abs(re), false);
        sys.poles[n] = a;
        sys.residues.push_back(r);
        sys.poles[n + 1] = std::conj(a);
        sys.residues.push_back(r.conjugate());
        n += 2;
    }
    if (order % 2) {
        sys.poles[n] = Complex(-0.5 * (w_min + w_max) / sharpness, 0.0);
        sys.residues.push_back(random_residue(std::abs(re), true));
    }
    return sys;
}

/// Answers queries by evaluating a synthetic system directly.
class SyntheticOracle final : public Oracle {
  public:
    explicit SyntheticOracle(SyntheticRationalSystem sys) : sys_(std::move(sys)) {}

    int rows() const override { return sys_.rows(); }
    int cols() const override { return sys_.cols(); }
    const SyntheticRationalSystem& system() const { return sys_; }

  private:
    CMatrix do_query(Complex s) const override { return sys_.eval(s); }
    SyntheticRationalSystem sys_;
};

/// Answers queries by exact lookup in a pre-recorded sample set covering the
/// fine grid. Off-grid queries are rejected; samplers draw from the grid only.
class PlaybackOracle final : public Oracle {
  public:
    explicit PlaybackOracle(const SampleSet& data) {
        if (data.count() == 0) throw std::invalid_argument("PlaybackOracle: empty data");
        rows_ = data.rows();
        cols_ = data.cols();
        for (const Sample& x : data.samples) table_.emplace(key(x.s), x.value);
    }

    int rows() const override { return rows_; }
    int cols() const override { return cols_; }

  private:
    static std::pair<double, double> key(Complex s) { return {s.real(), s.imag()}; }

    CMatrix do_query(Complex s) const override {
        auto it = table_.find(key(s));
        if (it == table_.end())
            throw std::runtime_error("PlaybackOracle: query off the recorded grid");
        return it->second;
    }

    std::map<std::pair<double, double>, CMatrix> table_;
    int rows_ = 0;
    int cols_ = 0;
};

/// Evaluates the truth on every grid point (one oracle query each) and wraps
/// it in a playback oracle, so adaptive runs hit the lookup path.
inline SampleSet record_on_grid(Oracle& oracle, const FrequencyGrid& grid) {
    SampleSet out;
    for (Complex s : grid.points) out.add(s, oracle.query(s));
    return out;
}

}  // namespace afs

#endif  // AFS_ORACLE_HPP
