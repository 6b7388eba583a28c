#include <catch2/catch_amalgamated.hpp>

#include "afs/oracle.hpp"

using namespace afs;

TEST_CASE("uniform_pm1 is deterministic and in range") {
    std::mt19937_64 a(42), b(42);
    for (int i = 0; i < 1000; ++i) {
        const double x = uniform_pm1(a);
        CHECK(x == uniform_pm1(b));
        CHECK(x >= -1.0);
        CHECK(x <= 1.0);
    }
}

TEST_CASE("make_synthetic produces a stable conjugate-closed system") {
    const auto sys = make_synthetic(5, 8, 2, 2, 1e9, 1e10);
    REQUIRE(sys.order() == 8);
    for (int n = 0; n < sys.order(); ++n) CHECK(sys.poles[n].real() < 0.0);
    // conjugate closure: pairs are adjacent
    for (int n = 0; n < sys.order(); n += 2) {
        CHECK(sys.poles[n + 1] == std::conj(sys.poles[n]));
        CHECK((sys.residues[n + 1] - sys.residues[n].conjugate()).norm() == 0.0);
    }
    // real-axis symmetry of the response
    const Complex s(0.0, kTwoPi * 3e9);
    CHECK((sys.eval(std::conj(s)) - sys.eval(s).conjugate()).norm() < 1e-12 * sys.eval(s).norm());
}

TEST_CASE("make_synthetic odd order adds a real pole with a real residue") {
    const auto sys = make_synthetic(1, 5, 1, 1, 1e9, 1e10);
    REQUIRE(sys.order() == 5);
    CHECK(sys.poles[4].imag() == 0.0);
    CHECK(sys.poles[4].real() < 0.0);
    CHECK(sys.residues[4](0, 0).imag() == 0.0);
}

TEST_CASE("make_synthetic is reproducible per seed") {
    const auto a = make_synthetic(9, 6, 2, 2, 1e9, 1e10);
    const auto b = make_synthetic(9, 6, 2, 2, 1e9, 1e10);
    const auto c = make_synthetic(10, 6, 2, 2, 1e9, 1e10);
    CHECK((a.poles - b.poles).norm() == 0.0);
    CHECK((a.residues[0] - b.residues[0]).norm() == 0.0);
    CHECK((a.residues[0] - c.residues[0]).norm() != 0.0);
}

TEST_CASE("oracle counts queries") {
    SyntheticOracle oracle(make_synthetic(1, 4, 2, 2, 1e9, 1e10));
    CHECK(oracle.query_count() == 0);
    oracle.query(Complex(0.0, kTwoPi * 2e9));
    oracle.query(Complex(0.0, kTwoPi * 3e9));
    CHECK(oracle.query_count() == 2);
    oracle.reset_query_count();
    CHECK(oracle.query_count() == 0);
}

TEST_CASE("playback oracle answers recorded points and rejects others") {
    SyntheticOracle truth(make_synthetic(2, 4, 2, 2, 1e9, 1e10));
    const FrequencyGrid grid = make_grid(1e9, 1e10, 10);
    const SampleSet recorded = record_on_grid(truth, grid);
    CHECK(truth.query_count() == 10);

    PlaybackOracle playback(recorded);
    const Complex s = grid.points[3];
    CHECK((playback.query(s) - truth.system().eval(s)).norm() == 0.0);
    CHECK_THROWS_AS(playback.query(Complex(0.0, 1.2345)), std::runtime_error);
}
