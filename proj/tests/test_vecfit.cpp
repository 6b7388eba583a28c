#include <catch2/catch_amalgamated.hpp>

#include "afs/metrics.hpp"
#include "afs/oracle.hpp"
#include "afs/vecfit.hpp"

using namespace afs;

TEST_CASE("initial poles follow the heuristic layout") {
    SECTION("single pair at a single frequency") {
        const CVector p = initial_poles(2, 1.0, 1.0);
        CHECK(std::abs(p[0] - Complex(-0.01, 1.0)) < 1e-15);
        CHECK(std::abs(p[1] - Complex(-0.01, -1.0)) < 1e-15);
    }
    SECTION("two pairs span the band") {
        const CVector p = initial_poles(4, 1.0, 2.0);
        CHECK(std::abs(p[0] - Complex(-0.01, 1.0)) < 1e-15);
        CHECK(std::abs(p[2] - Complex(-0.02, 2.0)) < 1e-15);
        CHECK(p[1] == std::conj(p[0]));
        CHECK(p[3] == std::conj(p[2]));
    }
    SECTION("odd order appends a real pole at minus band-center/100") {
        const CVector p = initial_poles(1, 1.0, 2.0);
        CHECK(std::abs(p[0] - Complex(-0.015, 0.0)) < 1e-15);
    }
}

TEST_CASE("vf_iterate solves the linearized problem") {
    SECTION("constant data yields d and nothing else") {
        std::vector<Complex> s, h;
        for (int i = 1; i <= 8; ++i) {
            s.emplace_back(0.0, static_cast<double>(i));
            h.emplace_back(4.2, 0.0);
        }
        const CVector poles = initial_poles(1, 1.0, 8.0);
        const VfIteration it = vf_iterate(s, h, poles);
        CHECK(std::abs(it.d - Complex(4.2, 0.0)) < 1e-9);
        CHECK(it.residues.norm() < 1e-9);
        CHECK(std::abs(it.e) < 1e-10);
    }
    SECTION("zero data gives zero coefficients") {
        std::vector<Complex> s, h;
        for (int i = 1; i <= 8; ++i) {
            s.emplace_back(0.0, static_cast<double>(i));
            h.emplace_back(0.0, 0.0);
        }
        const VfIteration it = vf_iterate(s, h, initial_poles(2, 1.0, 8.0));
        CHECK(it.residues.norm() < 1e-12);
        CHECK(it.sigma_residues.norm() < 1e-12);
        CHECK(std::abs(it.d) < 1e-12);
        CHECK(std::abs(it.e) < 1e-12);
    }
    SECTION("simple pole is recovered through relocation") {
        std::vector<Complex> s, h;
        for (int i = 1; i <= 10; ++i) {
            const Complex si(0.0, 0.3 * i);
            s.push_back(si);
            h.push_back(1.0 / (si + 1.0));
        }
        CVector poles(1);
        poles[0] = Complex(-2.0, 0.0);
        const VfIteration it = vf_iterate(s, h, poles);
        const CVector relocated = relocate_poles(poles, it.sigma_residues);
        CHECK(std::abs(relocated[0] - Complex(-1.0, 0.0)) < 1e-8);
    }
    SECTION("too few samples for the order is an error") {
        std::vector<Complex> s{Complex(0, 1)}, h{Complex(1, 0)};
        CHECK_THROWS_AS(vf_iterate(s, h, initial_poles(4, 1.0, 2.0)), std::invalid_argument);
    }
}

TEST_CASE("relocate_poles implements the eigenvalue update") {
    SECTION("1x1 case: new pole is a - r") {
        CVector a(1), r(1);
        a[0] = Complex(-2.0, 0.0);
        r[0] = Complex(-1.0, 0.0);
        const CVector out = relocate_poles(a, r, false);
        CHECK(std::abs(out[0] - Complex(-1.0, 0.0)) < 1e-14);
    }
    SECTION("zero sigma residues leave poles unchanged") {
        CVector a(2);
        a << Complex(-1.0, 2.0), Complex(-1.0, -2.0);
        const CVector out = relocate_poles(a, CVector::Zero(2));
        CHECK((out.array().real() + 1.0).abs().maxCoeff() < 1e-12);
    }
    SECTION("stability flip negates positive real parts") {
        CVector a(1), r(1);
        a[0] = Complex(0.5, 3.0);
        r[0] = Complex(0.0, 0.0);
        const CVector out = relocate_poles(a, r, true);
        CHECK(std::abs(out[0] - Complex(-0.5, 3.0)) < 1e-12);
    }
}

TEST_CASE("vf_fit recovers exact rational data") {
    SECTION("scalar order-2 system") {
        SyntheticRationalSystem sys = make_synthetic(3, 2, 1, 1, 1.0, 10.0);
        SampleSet samples;
        const FrequencyGrid grid = make_grid(1.0, 10.0, 40);
        for (Complex s : grid.points) samples.add(s, sys.eval(s));
        VfConfig cfg;
        cfg.order = 2;
        cfg.iterations = 3;
        const PoleResidueModel model = vf_fit(samples, cfg);
        std::vector<CMatrix> truth, fit;
        for (Complex s : grid.points) {
            truth.push_back(sys.eval(s));
            fit.push_back(model.eval(s));
        }
        CHECK(rmse(truth, fit) < 1e-8);
    }
    SECTION("under-modeling is reported through fit quality, not an error") {
        SyntheticRationalSystem sys = make_synthetic(3, 2, 1, 1, 1.0, 10.0);
        SampleSet samples;
        const FrequencyGrid grid = make_grid(1.0, 10.0, 40);
        for (Complex s : grid.points) samples.add(s, sys.eval(s));
        VfConfig cfg;
        cfg.order = 1;
        cfg.iterations = 5;
        const PoleResidueModel model = vf_fit(samples, cfg);
        std::vector<CMatrix> truth, fit;
        for (Complex s : grid.points) {
            truth.push_back(sys.eval(s));
            fit.push_back(model.eval(s));
        }
        CHECK(rmse(truth, fit) > 1e-5);
    }
    SECTION("conjugate-closed data yields conjugate-closed poles") {
        SyntheticRationalSystem sys = make_synthetic(4, 4, 2, 2, 1.0, 10.0);
        SampleSet samples;
        const FrequencyGrid grid = make_grid(1.0, 10.0, 30);
        for (Complex s : grid.points) {
            samples.add(s, sys.eval(s));
            samples.add(std::conj(s), sys.eval(s).conjugate());
        }
        VfConfig cfg;
        cfg.order = 4;
        cfg.iterations = 8;
        const PoleResidueModel model = vf_fit(samples, cfg);
        for (int n = 0; n < model.order(); ++n) {
            double best = std::numeric_limits<double>::infinity();
            for (int k = 0; k < model.order(); ++k)
                best = std::min(best, std::abs(model.poles[k] - std::conj(model.poles[n])));
            CHECK(best < 1e-10 * std::abs(model.poles[n]));
        }
    }
}
