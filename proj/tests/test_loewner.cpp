#include <catch2/catch_amalgamated.hpp>

#include "afs/loewner.hpp"
#include "afs/metrics.hpp"
#include "afs/oracle.hpp"

using namespace afs;

namespace {

SampleSet sample_system(const SyntheticRationalSystem& sys, const FrequencyGrid& grid,
                        int count) {
    SampleSet out;
    for (int i = 0; i < count; ++i) {
        const int l = count == 1 ? 0 : (grid.size() - 1) * i / (count - 1);
        out.add(grid.points[l], sys.eval(grid.points[l]));
    }
    return out;
}

SampleSet scalar_samples(std::initializer_list<std::pair<Complex, Complex>> data) {
    SampleSet out;
    for (const auto& [s, v] : data) out.add(s, CMatrix::Constant(1, 1, v));
    return out;
}

}  // namespace

TEST_CASE("alternate split sends odd-indexed sorted samples to the column set") {
    SECTION("four frequencies") {
        const auto part = alternate_split(scalar_samples({{Complex(0, 1), 1},
                                                          {Complex(0, 2), 2},
                                                          {Complex(0, 3), 3},
                                                          {Complex(0, 4), 4}}));
        REQUIRE(part.lambda.size() == 2);
        REQUIRE(part.mu.size() == 2);
        CHECK(part.lambda[0] == Complex(0, 1));
        CHECK(part.lambda[1] == Complex(0, 3));
        CHECK(part.mu[0] == Complex(0, 2));
        CHECK(part.mu[1] == Complex(0, 4));
    }
    SECTION("single sample leaves the row set empty") {
        const auto part = alternate_split(scalar_samples({{Complex(0, 1), 1}}));
        CHECK(part.lambda.size() == 1);
        CHECK(part.mu.empty());
    }
    SECTION("unsorted input is sorted first") {
        const auto part = alternate_split(scalar_samples(
            {{Complex(0, 3), 3}, {Complex(0, 1), 1}, {Complex(0, 2), 2}}));
        REQUIRE(part.lambda.size() == 2);
        CHECK(part.lambda[0] == Complex(0, 1));
        CHECK(part.lambda[1] == Complex(0, 3));
        CHECK(part.mu[0] == Complex(0, 2));
    }
}

TEST_CASE("Loewner matrix entries are divided differences") {
    SECTION("scalar single entry") {
        LoewnerPartition part;
        part.lambda = {Complex(1, 0)};
        part.w = {CMatrix::Constant(1, 1, Complex(2, 0))};
        part.mu = {Complex(3, 0)};
        part.v = {CMatrix::Constant(1, 1, Complex(4, 0))};
        const LoewnerData data = build_loewner(part);
        CHECK(data.loewner()(0, 0) == Complex(1, 0));
    }
    SECTION("constant data gives a zero matrix") {
        const auto part = alternate_split(scalar_samples(
            {{Complex(0, 1), 5}, {Complex(0, 2), 5}, {Complex(0, 3), 5}, {Complex(0, 4), 5}}));
        CHECK(build_loewner(part).loewner().norm() == 0.0);
    }
    SECTION("S(s) = 1/s with lambda = j, mu = 2j") {
        LoewnerPartition part;
        part.lambda = {Complex(0, 1)};
        part.w = {CMatrix::Constant(1, 1, 1.0 / Complex(0, 1))};
        part.mu = {Complex(0, 2)};
        part.v = {CMatrix::Constant(1, 1, 1.0 / Complex(0, 2))};
        CHECK(std::abs(build_loewner(part).loewner()(0, 0) - Complex(0.5, 0)) < 1e-15);
    }
    SECTION("coincident row/column frequency is rejected") {
        LoewnerPartition part;
        part.lambda = {Complex(0, 1)};
        part.w = {CMatrix::Ones(1, 1)};
        part.mu = {Complex(0, 1)};
        part.v = {CMatrix::Ones(1, 1)};
        CHECK_THROWS_AS(build_loewner(part), std::invalid_argument);
    }
    SECTION("block dimensions match the multiport layout") {
        const SyntheticRationalSystem sys = make_synthetic(1, 4, 2, 3, 1.0, 10.0);
        const FrequencyGrid grid = make_grid(1.0, 10.0, 20);
        const LoewnerData data = build_loewner(alternate_split(sample_system(sys, grid, 7)));
        CHECK(data.k() == 4);
        CHECK(data.q() == 3);
        CHECK(data.Lambda().rows() == 3 * 4);
        CHECK(data.R().rows() == 3);
        CHECK(data.W().rows() == 2);
        CHECK(data.M().rows() == 2 * 3);
        CHECK(data.L().cols() == 2);
        CHECK(data.V().cols() == 3);
        CHECK(data.loewner().rows() == 2 * 3);
        CHECK(data.loewner().cols() == 3 * 4);
    }
}

TEST_CASE("state-space interpolant from Loewner data") {
    SECTION("interpolates and extrapolates S(s) = 1/(s+1)") {
        SampleSet samples;
        for (double w : {1.0, 2.0, 3.0, 4.0}) {
            const Complex s(0.0, w);
            samples.add(s, CMatrix::Constant(1, 1, 1.0 / (s + 1.0)));
        }
        const LoewnerData data = build_loewner(alternate_split(samples));
        const StateSpaceModel model = state_space_interpolant(data);
        for (const Sample& x : samples.samples)
            CHECK(std::abs(model.eval(x.s)(0, 0) - x.value(0, 0)) < 1e-10);
        const Complex off(0.0, 2.5);
        CHECK(std::abs(model.eval(off)(0, 0) - 1.0 / (off + 1.0)) < 1e-10);
    }
    SECTION("order-8 2x2 system is recovered from 24 samples") {
        const SyntheticRationalSystem sys = make_synthetic(11, 8, 2, 2, 1e9, 1e10);
        const FrequencyGrid grid = make_grid(1e9, 1e10, 400);
        const LoewnerData data = build_loewner(alternate_split(sample_system(sys, grid, 24)));
        const StateSpaceModel model = state_space_interpolant(data);
        std::vector<CMatrix> truth, fit;
        for (Complex s : grid.points) {
            truth.push_back(sys.eval(s));
            fit.push_back(model.eval(s));
        }
        CHECK(rmse(truth, fit) < 1e-9);
    }
}

TEST_CASE("pseudo-inverse truncates small singular values") {
    CMatrix a = CMatrix::Zero(3, 2);
    a(0, 0) = 2.0;
    a(1, 1) = 1e-20;  // far below the relative cutoff
    int rank = 0;
    const CMatrix pinv = pseudo_inverse(a, kPinvEps, &rank);
    CHECK(rank == 1);
    CHECK(std::abs(pinv(0, 0) - Complex(0.5, 0)) < 1e-15);
    CHECK(std::abs(pinv(1, 1)) == 0.0);
}

TEST_CASE("Theta and ThetaBar form an inverse pair") {
    // moderate resonance sharpness keeps ||Theta|| small so the absolute
    // identity tolerance is meaningful
    const SyntheticRationalSystem sys = make_synthetic(17, 4, 1, 1, 1.0, 10.0, 10.0);
    const FrequencyGrid grid = make_grid(1.0, 10.0, 101);
    const LoewnerData data = build_loewner(alternate_split(sample_system(sys, grid, 8)));
    const ThetaFactors factors(data);
    std::mt19937_64 rng(5);
    int checked = 0;
    while (checked < 10) {
        const int l = static_cast<int>(rng() % 101);
        CMatrix th, thb;
        try {
            th = factors.theta(grid.points[l]);
            thb = factors.theta_bar(grid.points[l]);
        } catch (const std::exception&) {
            continue;  // landed on a node
        }
        ++checked;
        const CMatrix prod = th * thb;
        // identity error scales with ||Theta|| ||ThetaBar|| in floating point
        CHECK((prod - CMatrix::Identity(2, 2)).norm() < 1e-12 * (1.0 + th.norm() * thb.norm()));
        // identity path agrees with explicit inversion
        CHECK((thb - th.fullPivLu().inverse()).norm() < 1e-10 * thb.norm());
    }
}

TEST_CASE("Theta tends to the identity far from the data") {
    const SyntheticRationalSystem sys = make_synthetic(2, 4, 1, 1, 1.0, 10.0);
    const FrequencyGrid grid = make_grid(1.0, 10.0, 30);
    const LoewnerData data = build_loewner(alternate_split(sample_system(sys, grid, 8)));
    const ThetaFactors factors(data);
    const double far = 1e9 * grid.points.back().imag();
    CHECK((factors.theta(Complex(0.0, far)) - CMatrix::Identity(2, 2)).norm() < 1e-6);
}

TEST_CASE("scalar one-pair Theta matches direct substitution") {
    LoewnerPartition part;
    part.lambda = {Complex(0, 1)};
    part.w = {CMatrix::Constant(1, 1, Complex(1, 0))};
    part.mu = {Complex(0, 2)};
    part.v = {CMatrix::Constant(1, 1, Complex(2, 0))};
    const LoewnerData data = build_loewner(part);
    const Complex s(0.0, 5.0);

    // direct formula with scalars: LL = (v-w)/(mu-lambda), resolvent 1/(s*LL - LL*lambda)
    const Complex LL = (2.0 - 1.0) / (Complex(0, 2) - Complex(0, 1));
    const Complex resolvent = 1.0 / (s * LL - LL * Complex(0, 1));
    CMatrix direct = CMatrix::Identity(2, 2);
    Eigen::Vector2cd left(Complex(1, 0), Complex(-1, 0));  // [W; -R]
    Eigen::RowVector2cd right(Complex(1, 0), Complex(2, 0));  // [L V]
    direct += left * resolvent * right;

    const ThetaEvaluation ev = theta(data, s);
    CHECK((ev.theta - direct).norm() < 1e-12);
    CHECK((ev.theta * ev.theta_bar - CMatrix::Identity(2, 2)).norm() < 1e-12);

    // pseudo-inverse path agrees on square data
    CHECK((theta_pinv(data, s) - direct).norm() < 1e-10);
}

TEST_CASE("generating interpolants reproduce the row data and the full-order model") {
    // k p = q m = 4 matches the McMillan order, so the Loewner matrix has
    // full rank and the Theta factorization is well posed
    const SyntheticRationalSystem sys = make_synthetic(23, 4, 2, 2, 1.0, 10.0);
    const FrequencyGrid grid = make_grid(1.0, 10.0, 60);
    const LoewnerData data = build_loewner(alternate_split(sample_system(sys, grid, 4)));
    const ThetaFactors factors(data);

    std::mt19937_64 rng(8);
    auto random_g = [&] {
        CMatrix g(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = uniform_pm1(rng);
        return g;
    };
    const GeneratingInterpolant h1(factors, random_g(), random_g());
    const GeneratingInterpolant h2(factors, random_g(), random_g());

    SECTION("row data interpolation for any G pair") {
        for (std::size_t j = 0; j < data.partition().mu.size(); ++j) {
            const CMatrix h = h1.eval(data.partition().mu[j]);
            CHECK((h - data.partition().v[j]).norm() < 1e-8 * data.partition().v[j].norm());
        }
    }
    SECTION("oversampled data collapses the family onto one interpolant") {
        // with k p well beyond the McMillan order the data pins the model
        // down and every G choice reproduces it
        const LoewnerData rich = build_loewner(alternate_split(sample_system(sys, grid, 12)));
        const ThetaFactors rich_factors(rich);
        const GeneratingInterpolant r1(rich_factors, h1.g1(), h1.g2());
        const GeneratingInterpolant r2(rich_factors, h2.g1(), h2.g2());
        for (int l = 3; l < grid.size(); l += 7) {
            CMatrix a, b;
            try {
                a = r1.eval(grid.points[l]);
                b = r2.eval(grid.points[l]);
            } catch (const std::exception&) {
                continue;
            }
            CHECK((a - b).norm() < 1e-8 * (a.norm() + 1.0));
        }
    }
    SECTION("identity G matrices give a finite interpolant off nodes") {
        const GeneratingInterpolant hid(factors, CMatrix::Identity(2, 2),
                                        CMatrix::Identity(2, 2));
        CHECK(hid.eval(grid.points[31]).allFinite());
    }
}

TEST_CASE("barycentric fit honours the unit-norm constraint") {
    SECTION("k = 1 gives b = [1]") {
        LoewnerPartition part;
        part.lambda = {Complex(0, 1)};
        part.w = {CMatrix::Constant(1, 1, Complex(2, 0))};
        part.mu = {Complex(0, 2)};
        part.v = {CMatrix::Constant(1, 1, Complex(3, 0))};
        const BarycentricModel m = barycentric_fit(part);
        REQUIRE(m.node_count() == 1);
        CHECK(std::abs(m.coeffs[0] - Complex(1, 0)) < 1e-14);
    }
    SECTION("unit norm and real-positive leading coefficient in general") {
        const SyntheticRationalSystem sys = make_synthetic(31, 6, 1, 1, 1.0, 10.0);
        const FrequencyGrid grid = make_grid(1.0, 10.0, 50);
        const auto part = alternate_split(sample_system(sys, grid, 10));
        const BarycentricModel m = barycentric_fit(part);
        CHECK(std::abs(m.coeffs.norm() - 1.0) < 1e-12);
        Eigen::Index imax = 0;
        m.coeffs.cwiseAbs().maxCoeff(&imax);
        CHECK(m.coeffs[imax].imag() == Catch::Approx(0.0).margin(1e-14));
        CHECK(m.coeffs[imax].real() > 0.0);
    }
    SECTION("exactly rational data attains a near-zero objective") {
        const SyntheticRationalSystem sys = make_synthetic(13, 2, 1, 1, 1.0, 10.0);
        const FrequencyGrid grid = make_grid(1.0, 10.0, 30);
        const auto part = alternate_split(sample_system(sys, grid, 6));  // k = q = 3, order 2
        const BarycentricModel m = barycentric_fit(part);
        CHECK(barycentric_objective(part, m.coeffs) < 1e-18 * sys.eval(grid.points[5]).squaredNorm());
        // interpolation through the barycentric evaluation
        for (std::size_t j = 0; j < part.mu.size(); ++j)
            CHECK((m.eval(part.mu[j]) - part.v[j]).norm() < 1e-8 * part.v[j].norm());
    }
}
