#ifndef AFS_SAMPLING_HPP
#define AFS_SAMPLING_HPP

#include <array>
#include <functional>
#include <optional>
#include <random>
#include <set>

#include "afs/core.hpp"
#include "afs/loewner.hpp"
#include "afs/metrics.hpp"
#include "afs/oracle.hpp"
#include "afs/vecfit.hpp"

namespace afs {

// ---------------------------------------------------------------------------
// Predetermined distributions
// ---------------------------------------------------------------------------

/// Frequencies (Hz, before grid snapping) of `count` points equidistant in
/// arc length on the upper half of an ellipse with x-radius 1 and y-radius c,
/// mapped affinely onto [f_min, f_max]. c = 0 degenerates to the equidistant
/// distribution.
inline std::vector<double> chebyshev_points(double c, int count, double f_min, double f_max) {
    if (c < 0.0) throw std::invalid_argument("chebyshev_points: negative y-radius");
    if (count < 2) throw std::invalid_argument("chebyshev_points: need at least 2 points");

    std::vector<double> x(count);  // x-coordinates in [-1, 1], ascending
    if (c == 0.0) {
        // degenerate ellipse: exactly the equidistant grid formula
        std::vector<double> freqs(count);
        for (int i = 0; i < count; ++i)
            freqs[i] = f_min + (f_max - f_min) * static_cast<double>(i) / (count - 1);
        freqs.front() = f_min;
        freqs.back() = f_max;
        return freqs;
    }
    {
        // Cumulative arc length of (cos t, c sin t) over t in [0, pi].
        constexpr int kTable = 20000;
        std::vector<double> arc(kTable + 1, 0.0);
        auto ds = [c](double t) {
            const double st = std::sin(t), ct = std::cos(t);
            return std::sqrt(st * st + c * c * ct * ct);
        };
        const double h = std::numbers::pi / kTable;
        for (int i = 1; i <= kTable; ++i)
            arc[i] = arc[i - 1] + 0.5 * h * (ds((i - 1) * h) + ds(i * h));
        const double total = arc.back();

        // Invert for the first half, then mirror to keep the set exactly
        // symmetric about the band midpoint.
        auto invert = [&](double target) {
            auto it = std::lower_bound(arc.begin(), arc.end(), target);
            if (it == arc.begin()) return 0.0;
            if (it == arc.end()) return std::numbers::pi;
            const int i = static_cast<int>(it - arc.begin());
            const double frac = (target - arc[i - 1]) / (arc[i] - arc[i - 1]);
            return (i - 1 + frac) * h;
        };
        for (int i = 0; i <= (count - 1) / 2; ++i) {
            const double t = invert(total * static_cast<double>(i) / (count - 1));
            x[count - 1 - i] = std::cos(t);  // t = 0 is x = +1
            x[i] = -x[count - 1 - i];
        }
        if (count % 2) x[count / 2] = 0.0;
    }

    std::vector<double> freqs(count);
    for (int i = 0; i < count; ++i)
        freqs[i] = f_min + 0.5 * (x[i] + 1.0) * (f_max - f_min);
    freqs.front() = f_min;
    freqs.back() = f_max;
    return freqs;
}

/// Snaps target frequencies to distinct fine-grid indices: nearest grid
/// point, colliding targets shifted to the nearest free one (ties toward the
/// lower index).
inline std::vector<int> snap_to_grid(const std::vector<double>& freqs_hz,
                                     const FrequencyGrid& grid) {
    if (static_cast<int>(freqs_hz.size()) > grid.size())
        throw std::invalid_argument("snap_to_grid: more targets than grid points");
    std::set<int> taken;
    std::vector<int> out;
    out.reserve(freqs_hz.size());
    for (double f : freqs_hz) {
        int best = -1;
        double best_err = std::numeric_limits<double>::infinity();
        for (int l = 0; l < grid.size(); ++l) {
            if (taken.count(l)) continue;
            const double err = std::abs(grid.freq_hz(l) - f);
            if (err < best_err) {
                best_err = err;
                best = l;
            }
        }
        taken.insert(best);
        out.push_back(best);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Double-sided sampling
// ---------------------------------------------------------------------------

/// Mirrors every positive-frequency sample to (conj(s), conj(S)); already
/// mirrored content is left untouched, so the operation is idempotent.
inline SampleSet double_sided(const SampleSet& samples) {
    SampleSet out = samples;
    for (const Sample& x : samples.samples) {
        if (x.s.imag() <= 0.0) continue;
        const Complex mirrored = std::conj(x.s);
        if (!out.contains(mirrored)) out.add(mirrored, x.value.conjugate());
    }
    return out;
}

// ---------------------------------------------------------------------------
// G-matrix families for the Theta disagreement rule
// ---------------------------------------------------------------------------

struct GMatrixSet {
    std::vector<CMatrix> g1;
    std::vector<CMatrix> g2;
    bool paired = false;  // paired: interpolant tau uses (g1[tau], g2[tau]);
                          // otherwise every (g1, g2) combination is used
    std::uint64_t seed = 0;

    int interpolant_count() const {
        return paired ? static_cast<int>(g1.size())
                      : static_cast<int>(g1.size() * g2.size());
    }

    std::vector<std::pair<const CMatrix*, const CMatrix*>> pairs() const {
        std::vector<std::pair<const CMatrix*, const CMatrix*>> out;
        if (paired) {
            for (std::size_t t = 0; t < g1.size(); ++t) out.emplace_back(&g1[t], &g2[t]);
        } else {
            for (const CMatrix& a : g1)
                for (const CMatrix& b : g2) out.emplace_back(&a, &b);
        }
        return out;
    }
};

/// Random m x m matrices with entries i.i.d. uniform on [-1, 1]; half are
/// G1 matrices, half G2.
inline GMatrixSet make_g_matrices(std::uint64_t seed, int count, int m) {
    if (m < 1 || count < 2 || count % 2)
        throw std::invalid_argument("make_g_matrices: count must be even and positive");
    std::mt19937_64 rng(seed);
    GMatrixSet set;
    set.seed = seed;
    auto draw = [&] {
        CMatrix g(m, m);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j) g(i, j) = uniform_pm1(rng);
        return g;
    };
    for (int t = 0; t < count / 2; ++t) set.g1.push_back(draw());
    for (int t = 0; t < count / 2; ++t) set.g2.push_back(draw());
    return set;
}

/// The 2x2 unitary family: paired G1/G2 matrices built from four fixed
/// phases and a per-pair rotation theta_tau linearly spaced over [0, 2*pi].
inline GMatrixSet make_unitary_g_matrices(int count,
                                          std::array<double, 4> phi = {1.1051, -1.7482, 2.9750,
                                                                       0.9596}) {
    if (count < 2) throw std::invalid_argument("make_unitary_g_matrices: need at least 2 pairs");
    const Complex x = std::polar(1.0 / std::sqrt(2.0), phi[0]);
    const Complex y = std::polar(1.0 / std::sqrt(2.0), phi[1]);
    const Complex z = std::polar(1.0 / std::sqrt(2.0), phi[2]);
    const Complex w = std::polar(1.0 / std::sqrt(2.0), phi[3]);
    GMatrixSet set;
    set.paired = true;
    for (int t = 0; t < count; ++t) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(t) / (count - 1);
        const Complex e = std::polar(1.0, theta);
        CMatrix g1(2, 2), g2(2, 2);
        g1 << w, z, -std::conj(z) * e, std::conj(w) * e;
        g2 << x, y, -std::conj(y) * e, std::conj(x) * e;
        set.g1.push_back(g1);
        set.g2.push_back(g2);
    }
    return set;
}

inline CMatrix generating_from_theta(const CMatrix& th, int p, int m, const CMatrix& g1,
                                     const CMatrix& g2) {
    const CMatrix num = th.topLeftCorner(p, p) * g1 - th.topRightCorner(p, m) * g2;
    const CMatrix den = -th.bottomLeftCorner(m, p) * g1 + th.bottomRightCorner(m, m) * g2;
    Eigen::FullPivLU<CMatrix> lu(den);
    if (!lu.isInvertible())
        throw std::runtime_error("generating_from_theta: singular denominator");
    return num * lu.inverse();
}

// ---------------------------------------------------------------------------
// Selection rules
// ---------------------------------------------------------------------------

/// Vuillemin rule on the scalar trace f = ||H||_2 over the grid: even
/// iterations take the strongest unsampled interior peak, odd iterations the
/// deepest valley; without such extrema, the largest discrete forward
/// difference decides. NaN entries mark invalid model evaluations.
inline int pick_vuillemin(const std::vector<double>& f, const std::set<int>& sampled,
                          int iteration) {
    const int n = static_cast<int>(f.size());
    if (static_cast<int>(sampled.size()) >= n)
        throw std::runtime_error("pick_vuillemin: all grid points sampled");
    auto valid = [&](int l) { return !sampled.count(l) && std::isfinite(f[l]); };

    const bool want_peak = iteration % 2 == 0;
    int best = -1;
    for (int l = 1; l + 1 < n; ++l) {
        if (!valid(l) || !std::isfinite(f[l - 1]) || !std::isfinite(f[l + 1])) continue;
        const bool peak = f[l] > f[l - 1] && f[l] > f[l + 1];
        const bool valley = f[l] < f[l - 1] && f[l] < f[l + 1];
        if (want_peak ? !peak : !valley) continue;
        if (best < 0 || (want_peak ? f[l] > f[best] : f[l] < f[best])) best = l;
    }
    if (best >= 0) return best;

    // derivative fallback
    double best_mag = -1.0;
    for (int l = 0; l + 1 < n; ++l) {
        if (!std::isfinite(f[l]) || !std::isfinite(f[l + 1])) continue;
        const double mag = std::abs(f[l + 1] - f[l]);
        const int candidate = valid(l) ? l : (valid(l + 1) ? l + 1 : -1);
        if (candidate < 0) continue;
        if (mag > best_mag) {
            best_mag = mag;
            best = candidate;
        }
    }
    if (best < 0) throw std::runtime_error("pick_vuillemin: no usable candidate");
    return best;
}

/// Pradovera rule: the unsampled grid point minimizing |sum_i b_i/(s - l_i)|,
/// ties toward lower frequency.
inline int pick_pradovera(const BarycentricModel& model, const FrequencyGrid& grid,
                          const std::set<int>& sampled) {
    int best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (int l = 0; l < grid.size(); ++l) {
        if (sampled.count(l)) continue;
        Complex acc = 0.0;
        for (int i = 0; i < model.node_count(); ++i)
            acc += model.coeffs[i] / (grid.points[l] - model.nodes[i]);
        const double val = std::abs(acc);
        if (val < best_val) {
            best_val = val;
            best = l;
        }
    }
    if (best < 0) throw std::runtime_error("pick_pradovera: all grid points sampled");
    return best;
}

struct Theta1Pick {
    int index = -1;
    double d_max = 0.0;                // objective value at the chosen point
    std::vector<double> e_approx;      // estimated relative error trace, length M_s
    bool used_absolute = false;        // relative denominators all under the guard
};

/// Theta disagreement scan over one Theta provider. Interpolants that cannot
/// be evaluated at a point (singular denominator) invalidate that candidate.
inline Theta1Pick theta1_scan(const std::function<CMatrix(Complex)>& theta_at, int p, int m,
                              const GMatrixSet& gs, const FrequencyGrid& grid,
                              const std::set<int>& sampled) {
    const auto pairs = gs.pairs();
    if (pairs.size() < 2) throw std::invalid_argument("theta1_scan: need at least 2 interpolants");

    Theta1Pick out;
    out.e_approx.assign(grid.size(), 0.0);
    int best_abs = -1;
    double best_abs_val = -1.0;
    bool any_denominator = false;

    std::vector<CMatrix> values(pairs.size());
    for (int l = 0; l < grid.size(); ++l) {
        if (sampled.count(l)) continue;  // interpolants agree with data at nodes
        bool ok = true;
        CMatrix th;
        try {
            th = theta_at(grid.points[l]);
            for (std::size_t t = 0; t < pairs.size(); ++t)
                values[t] = generating_from_theta(th, p, m, *pairs[t].first, *pairs[t].second);
        } catch (const std::exception&) {
            ok = false;
        }
        if (!ok) continue;

        double rel_max = 0.0, abs_max = 0.0, approx_acc = 0.0;
        for (int i = 0; i < p; ++i)
            for (int j = 0; j < m; ++j) {
                double entry_approx = 0.0;
                for (std::size_t t = 0; t < pairs.size(); ++t)
                    for (std::size_t u = 0; u < pairs.size(); ++u) {
                        if (t == u) continue;
                        const Complex ht = values[t](i, j);
                        const Complex diff = ht - values[u](i, j);
                        if (std::abs(ht) >= kDelta) any_denominator = true;
                        const double rel = std::abs(diff / (ht + kDelta));
                        rel_max = std::max(rel_max, rel);
                        abs_max = std::max(abs_max, std::abs(diff));
                        entry_approx = std::max(entry_approx, rel / static_cast<double>(p));
                    }
                approx_acc += entry_approx * entry_approx;
            }
        out.e_approx[l] = std::sqrt(approx_acc);
        if (rel_max > out.d_max) {
            out.d_max = rel_max;
            out.index = l;
        }
        if (abs_max > best_abs_val) {
            best_abs_val = abs_max;
            best_abs = l;
        }
    }

    if (!any_denominator) {
        out.used_absolute = true;
        out.index = best_abs;
        out.d_max = best_abs_val;
    }
    if (out.index < 0) {
        // degenerate: zero disagreement everywhere; take the lowest unsampled point
        for (int l = 0; l < grid.size(); ++l)
            if (!sampled.count(l)) {
                out.index = l;
                break;
            }
    }
    if (out.index < 0) throw std::runtime_error("theta1_scan: all grid points sampled");
    return out;
}

inline Theta1Pick pick_theta1(const LoewnerData& data, const GMatrixSet& gs,
                              const FrequencyGrid& grid, const std::set<int>& sampled) {
    ThetaFactors factors(data);
    return theta1_scan([&](Complex s) { return factors.theta(s); }, data.p(), data.m(), gs, grid,
                       sampled);
}

/// Theta condition-number rule: the unsampled point with smallest
/// kappa(Theta, s) = ||Theta||_2 ||ThetaBar||_2, ties toward lower frequency.
inline int pick_theta2(const ThetaFactors& factors, const FrequencyGrid& grid,
                       const std::set<int>& sampled) {
    int best = -1;
    double best_val = std::numeric_limits<double>::infinity();
    for (int l = 0; l < grid.size(); ++l) {
        if (sampled.count(l)) continue;
        double kappa;
        try {
            kappa = factors.condition_number(grid.points[l]);
        } catch (const std::exception&) {
            continue;  // resolvent singular: excluded candidate
        }
        if (kappa < best_val) {
            best_val = kappa;
            best = l;
        }
    }
    if (best < 0) throw std::runtime_error("pick_theta2: no usable candidate");
    return best;
}

// ---------------------------------------------------------------------------
// General adaptive loop
// ---------------------------------------------------------------------------

enum class Sampler { vuillemin, pradovera, theta1, theta2 };
enum class Framework { loewner, vecfit };
enum class OddStrategy { pinv, split, double_sided };

struct ModelOptions {
    Framework framework = Framework::loewner;
    bool double_sided_data = true;  // mirror samples before model construction
    std::optional<int> vf_order;    // default: half the (augmented) sample count minus one
    int vf_iterations = 10;
};

/// Builds the configured surrogate from a sample set (alternate-split
/// Loewner state space with D = 0, or vector fitting).
inline SurrogateModel build_model(const SampleSet& samples, const ModelOptions& opts) {
    const SampleSet data = opts.double_sided_data ? double_sided(samples) : samples;
    if (opts.framework == Framework::loewner) {
        return state_space_interpolant(build_loewner(alternate_split(data)));
    }
    VfConfig cfg;
    cfg.iterations = opts.vf_iterations;
    cfg.order = opts.vf_order.value_or(std::max(1, data.count() / 2 - 1));
    return vf_fit(data, cfg);
}

struct AdaptiveConfig {
    Sampler method = Sampler::theta1;
    int max_iterations = 0;  // N_I
    double tolerance = 0.0;  // Theta I early stop on max E_approx; 0 disables
    std::uint64_t seed = 0;
    int g_count = 6;
    bool unitary_g = false;  // use the 2x2 unitary family instead of random G's
    OddStrategy odd_strategy = OddStrategy::double_sided;
    ModelOptions model;
};

struct PickRecord {
    int grid_index = -1;
    double freq_hz = 0.0;
    bool fallback = false;
    double diagnostic = 0.0;  // rule-specific scalar (e.g. D_max for Theta I)
};

struct AdaptiveResult {
    SurrogateModel model;
    SampleSet samples;  // oracle-queried samples in pick order (endpoints first)
    std::vector<PickRecord> history;
    std::vector<double> e_approx;  // last Theta I estimate trace, empty otherwise
    bool tolerance_reached = false;
};

namespace sampling_detail {

/// Loewner data for the Theta rules under the configured odd-count strategy.
/// Returns one data set, or two for the split strategy with an odd count.
inline std::vector<LoewnerData> theta_data(const SampleSet& samples, OddStrategy strategy) {
    std::vector<LoewnerData> out;
    if (strategy == OddStrategy::double_sided) {
        out.emplace_back(conjugate_split(samples));
    } else if (samples.count() % 2 == 0) {
        out.emplace_back(alternate_split(samples));
    } else if (strategy == OddStrategy::split) {
        SampleSet sorted = samples.sorted();
        SampleSet a, b;
        for (int i = 0; i < sorted.count() - 1; ++i)
            a.add(sorted.samples[i].s, sorted.samples[i].value);
        for (int i = 1; i < sorted.count(); ++i)
            b.add(sorted.samples[i].s, sorted.samples[i].value);
        out.emplace_back(alternate_split(a));
        out.emplace_back(alternate_split(b));
    } else {
        out.emplace_back(alternate_split(samples));  // k != q, pseudo-inverse path
    }
    return out;
}

inline int bisect_largest_gap(const std::set<int>& sampled, int grid_size) {
    int best = -1, best_gap = 0;
    int prev = -1;
    auto consider = [&](int lo, int hi) {
        if (hi - lo > best_gap + 1) {
            best_gap = hi - lo - 1;
            best = (lo + hi) / 2;
        }
    };
    for (int l : sampled) {
        if (prev >= 0) consider(prev, l);
        prev = l;
    }
    if (best < 0 || sampled.count(best)) {
        for (int l = 0; l < grid_size; ++l)
            if (!sampled.count(l)) return l;
        throw std::runtime_error("adaptive_run: grid exhausted");
    }
    return best;
}

}  // namespace sampling_detail

/// Algorithm-1 loop: start from the two band endpoints, then iterate
/// interpolant construction, candidate selection by the configured rule, and
/// an oracle query per pick. Rule failures fall back to bisecting the largest
/// sampled-frequency gap (recorded in the history).
inline AdaptiveResult adaptive_run(Oracle& oracle, const FrequencyGrid& grid,
                                   const AdaptiveConfig& config) {
    if (config.max_iterations < 0)
        throw std::invalid_argument("adaptive_run: negative iteration count");
    const int M = grid.size();

    AdaptiveResult result;
    std::set<int> sampled{0, M - 1};
    result.samples.add(grid.points.front(), oracle.query(grid.points.front()));
    result.samples.add(grid.points.back(), oracle.query(grid.points.back()));

    const int m = oracle.cols();
    GMatrixSet gs;
    if (config.method == Sampler::theta1)
        gs = config.unitary_g ? make_unitary_g_matrices(config.g_count)
                              : make_g_matrices(config.seed, config.g_count, m);

    for (int n = 0; n < config.max_iterations; ++n) {
        if (static_cast<int>(sampled.size()) >= M) break;
        PickRecord rec;
        try {
            switch (config.method) {
                case Sampler::vuillemin: {
                    const SurrogateModel model = build_model(result.samples, config.model);
                    std::vector<double> f(M, std::numeric_limits<double>::quiet_NaN());
                    for (int l = 0; l < M; ++l) {
                        try {
                            f[l] = Eigen::JacobiSVD<CMatrix>(evaluate_model(model, grid.points[l]))
                                       .singularValues()[0];
                        } catch (const std::exception&) {
                        }
                    }
                    rec.grid_index = pick_vuillemin(f, sampled, n);
                    rec.diagnostic = f[rec.grid_index];
                    break;
                }
                case Sampler::pradovera: {
                    const BarycentricModel bary = barycentric_fit(conjugate_split(result.samples));
                    rec.grid_index = pick_pradovera(bary, grid, sampled);
                    break;
                }
                case Sampler::theta1: {
                    Theta1Pick best;
                    for (const LoewnerData& data :
                         sampling_detail::theta_data(result.samples, config.odd_strategy)) {
                        Theta1Pick pick;
                        if (data.k() == data.q()) {
                            pick = pick_theta1(data, gs, grid, sampled);
                        } else {
                            pick = theta1_scan([&](Complex s) { return theta_pinv(data, s); },
                                               data.p(), data.m(), gs, grid, sampled);
                        }
                        if (best.index < 0 || pick.d_max > best.d_max) best = pick;
                    }
                    rec.grid_index = best.index;
                    rec.diagnostic = best.d_max;
                    result.e_approx = std::move(best.e_approx);
                    if (config.tolerance > 0.0 &&
                        *std::max_element(result.e_approx.begin(), result.e_approx.end()) <
                            config.tolerance) {
                        result.tolerance_reached = true;
                    }
                    break;
                }
                case Sampler::theta2: {
                    int best = -1;
                    double best_val = std::numeric_limits<double>::infinity();
                    for (const LoewnerData& data :
                         sampling_detail::theta_data(result.samples, config.odd_strategy)) {
                        if (data.k() != data.q()) {
                            // pseudo-inverse path: kappa from the pinv Theta and its
                            // explicit inverse estimate is not defined; defer to fallback
                            throw std::runtime_error("theta2: non-square Loewner data");
                        }
                        ThetaFactors factors(data);
                        const int cand = pick_theta2(factors, grid, sampled);
                        const double kappa = factors.condition_number(grid.points[cand]);
                        if (kappa < best_val) {
                            best_val = kappa;
                            best = cand;
                        }
                    }
                    rec.grid_index = best;
                    rec.diagnostic = best_val;
                    break;
                }
            }
            if (result.tolerance_reached) break;
        } catch (const std::exception&) {
            rec.fallback = true;
            rec.grid_index = sampling_detail::bisect_largest_gap(sampled, M);
        }
        rec.freq_hz = grid.freq_hz(rec.grid_index);
        sampled.insert(rec.grid_index);
        result.samples.add(grid.points[rec.grid_index],
                           oracle.query(grid.points[rec.grid_index]));
        result.history.push_back(rec);
    }

    result.model = build_model(result.samples, config.model);
    return result;
}

}  // namespace afs

#endif  // AFS_SAMPLING_HPP
