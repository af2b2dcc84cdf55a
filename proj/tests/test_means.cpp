#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "meanscope/means.hpp"

using namespace meanscope;

TEST_CASE("representing_fn: weighted geometric closed forms") {
    const auto f = representing_fn("geometric", 0.5);
    CHECK(f(4.0) == Catch::Approx(2.0).margin(1e-14));
    CHECK(f.deriv(4.0) == Catch::Approx(0.25).margin(1e-14));
    CHECK(f.is_submultiplicative == TriState::Yes);
}

TEST_CASE("representing_fn: weighted arithmetic closed forms") {
    const auto f = representing_fn("arithmetic", 0.25);
    CHECK(f(3.0) == Catch::Approx(1.5).margin(1e-14));
    CHECK(f.deriv(3.0) == Catch::Approx(0.25).margin(1e-14));
    CHECK(f.is_submultiplicative == TriState::No);
}

TEST_CASE("representing_fn: right-trivial mean") {
    const auto f = representing_fn("right-trivial", 0.0);
    CHECK(f(7.0) == Catch::Approx(7.0));
    CHECK(f.is_submultiplicative == TriState::Yes);
}

TEST_CASE("representing_fn: alpha outside [0,1] rejected") {
    CHECK_THROWS_AS(representing_fn("geometric", -0.1), InputError);
    CHECK_THROWS_AS(representing_fn("arithmetic", 1.5), InputError);
    CHECK_THROWS_AS(representing_fn("no-such-kind", 0.5), InputError);
}

TEST_CASE("submultiplicativity probe: power law is exactly multiplicative") {
    const auto f = representing_fn("geometric", 0.3);
    CHECK(probe_submultiplicative(f) == TriState::Yes);
    // Spot equality f(xy) = f(x) f(y) on a few points.
    for (double x : {0.01, 0.5, 3.0}) {
        for (double y : {0.2, 1.0, 40.0}) {
            CHECK(f(x * y) == Catch::Approx(f(x) * f(y)).epsilon(1e-12));
        }
    }
    CHECK(probe_submultiplicative(representing_fn("arithmetic", 0.5)) == TriState::No);
}

TEST_CASE("custom mean registration validates f(1) = 1") {
    CHECK_THROWS_AS(
        register_custom_mean("bad", [](double t) { return t + 1.0; },
                             [](double) { return 1.0; }),
        ValidationError);
    // Harmonic-like mean 2t/(1+t) is operator monotone with f(1)=1; it is
    // not submultiplicative (take x < 1 < y), and the grid probe sees that.
    register_custom_mean("half-harmonic", [](double t) { return 2.0 * t / (1.0 + t); },
                         [](double t) { return 2.0 / ((1.0 + t) * (1.0 + t)); });
    const auto f = representing_fn("custom:half-harmonic", 0.0);
    CHECK(f(1.0) == Catch::Approx(1.0));
    CHECK(f.is_submultiplicative == TriState::No);
}

TEST_CASE("kubo_ando_mean: normalization I sigma I = I") {
    for (const auto& f : registered_means()) {
        const HermitianMatrix id = HermitianMatrix::identity(3);
        const HermitianMatrix m = kubo_ando_mean(id, id, f);
        CHECK((m.matrix() - id.matrix()).norm() <= 1e-12);
    }
}

TEST_CASE("kubo_ando_mean: commuting diagonal case is entrywise") {
    RealVector da(2), db(2);
    da << 1.0, 4.0;
    db << 4.0, 1.0;
    const auto f = representing_fn("geometric", 0.5);
    const HermitianMatrix m = kubo_ando_mean(HermitianMatrix::diagonal(da),
                                             HermitianMatrix::diagonal(db), f);
    CHECK(m.matrix()(0, 0).real() == Catch::Approx(2.0).margin(1e-12));
    CHECK(m.matrix()(1, 1).real() == Catch::Approx(2.0).margin(1e-12));
    CHECK(std::abs(m.matrix()(0, 1)) <= 1e-12);
}

TEST_CASE("kubo_ando_mean: geometric mean with identity is the square root") {
    ComplexMatrix a(2, 2);
    a << 2.0, 1.0, 1.0, 2.0;
    const HermitianMatrix am(a);
    const HermitianMatrix mean =
        weighted_geometric(am, HermitianMatrix::identity(2), 0.5);
    const HermitianMatrix oracle = matrix_sqrt(am);
    CHECK((mean.matrix() - oracle.matrix()).norm() <= 1e-10);
}

TEST_CASE("kubo_ando_mean: scalar consistency a f(b/a)") {
    RandomStream rng(21);
    for (const auto& f : registered_means()) {
        for (int trial = 0; trial < 10; ++trial) {
            const double a = rng.uniform(0.2, 5.0);
            const double b = rng.uniform(0.2, 5.0);
            const HermitianMatrix m = kubo_ando_mean(HermitianMatrix::scalar(a),
                                                     HermitianMatrix::scalar(b), f);
            const double expected = a * f(b / a);
            CHECK(m.scalar_value() ==
                  Catch::Approx(expected).epsilon(1e-12).margin(1e-14));
        }
    }
}

TEST_CASE("kubo_ando_mean: symmetry of the geometric mean") {
    RandomStream rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const HermitianMatrix a = random_banded_hermitian(
            3, SpectralBounds(0.5, 4.0), false, rng.next_u64());
        const HermitianMatrix b = random_banded_hermitian(
            3, SpectralBounds(0.5, 4.0), false, rng.next_u64());
        const HermitianMatrix ab = weighted_geometric(a, b, 0.5);
        const HermitianMatrix ba = weighted_geometric(b, a, 0.5);
        const double scale = std::max(1.0, spectral_norm(ab));
        CHECK(spectral_norm(ab.minus(ba)) <= 1e-8 * scale);
    }
}

TEST_CASE("kubo_ando_mean: omega-weighted identity") {
    RandomStream rng(13);
    for (double alpha : {0.25, 0.5, 0.75}) {
        for (int trial = 0; trial < 8; ++trial) {
            const HermitianMatrix x = random_banded_hermitian(
                3, SpectralBounds(0.3, 3.0), false, rng.next_u64());
            const HermitianMatrix y = random_banded_hermitian(
                3, SpectralBounds(0.3, 3.0), false, rng.next_u64());
            const double w = rng.uniform(0.1, 6.0);
            const HermitianMatrix lhs =
                weighted_geometric(x, y, alpha).scaled(std::pow(w, 1.0 - alpha));
            const HermitianMatrix rhs = weighted_geometric(x.scaled(w), y, alpha);
            const double scale = std::max(1.0, rhs.frobenius_norm());
            CHECK((lhs.matrix() - rhs.matrix()).norm() <= 1e-10 * scale);
        }
    }
}

TEST_CASE("kubo_ando_mean: singular A requires explicit regularization") {
    RealVector diag(2);
    diag << 0.0, 1.0;
    const HermitianMatrix a = HermitianMatrix::diagonal(diag);
    const HermitianMatrix b = HermitianMatrix::identity(2);
    const auto f = representing_fn("geometric", 0.5);
    CHECK_THROWS_AS(kubo_ando_mean(a, b, f), SingularError);
    const HermitianMatrix reg = kubo_ando_mean(a, b, f, 1e-8);
    CHECK(reg.dim() == 2);
}

TEST_CASE("kubo_ando_mean: negative eigenvalue of B rejected") {
    RealVector diag(2);
    diag << -0.5, 1.0;
    const auto f = representing_fn("geometric", 0.5);
    CHECK_THROWS_AS(kubo_ando_mean(HermitianMatrix::identity(2),
                                   HermitianMatrix::diagonal(diag), f),
                    DomainError);
}

TEST_CASE("kubo_ando_mean: epsilon consistency decreases along the grid") {
    RandomStream rng(5);
    const HermitianMatrix a =
        random_banded_hermitian(3, SpectralBounds(0.5, 2.0), false, rng.next_u64());
    const HermitianMatrix b =
        random_banded_hermitian(3, SpectralBounds(0.5, 2.0), false, rng.next_u64());
    const auto f = representing_fn("geometric", 0.5);
    const HermitianMatrix base = kubo_ando_mean(a, b, f);
    double prev = std::numeric_limits<double>::infinity();
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const double dist =
            (kubo_ando_mean(a, b, f, eps).matrix() - base.matrix()).norm();
        CHECK(dist <= prev + 1e-12);
        prev = dist;
    }
}

TEST_CASE("transformer inequality is an equality for unitary C") {
    // Congruence by a unitary commutes with any mean; the arithmetic
    // mean makes it to machine precision through plain linearity.
    RandomStream rng(61);
    const auto f = representing_fn("arithmetic", 0.5);
    for (int trial = 0; trial < 10; ++trial) {
        const HermitianMatrix a = random_banded_hermitian(
            3, SpectralBounds(0.5, 4.0), false, rng.next_u64());
        const HermitianMatrix b = random_banded_hermitian(
            3, SpectralBounds(0.5, 4.0), false, rng.next_u64());
        const ComplexMatrix u = random_unitary(3, rng);
        const HermitianMatrix lhs =
            hermitian_part(u.adjoint() * kubo_ando_mean(a, b, f).matrix() * u);
        const HermitianMatrix rhs =
            kubo_ando_mean(hermitian_part(u.adjoint() * a.matrix() * u),
                           hermitian_part(u.adjoint() * b.matrix() * u), f);
        const double scale = std::max(1.0, rhs.frobenius_norm());
        CHECK((lhs.matrix() - rhs.matrix()).norm() <= 1e-12 * scale);
    }
}

TEST_CASE("check_mean_axioms: all registered means pass at d=3") {
    for (const auto& f : registered_means()) {
        const AxiomReport report = check_mean_axioms(f, {3}, 100, 42);
        INFO(f.name << " alpha=" << f.alpha.value_or(-1));
        CHECK(report.all_passed());
    }
}

TEST_CASE("check_mean_axioms: right-trivial monotonicity is the identity check") {
    const auto f = representing_fn("right-trivial", 0.0);
    const AxiomReport report = check_mean_axioms(f, {2, 3}, 60, 7);
    CHECK(report.monotonicity_passes == report.monotonicity_checks);
    CHECK(report.transformer_passes == report.transformer_checks);
}
