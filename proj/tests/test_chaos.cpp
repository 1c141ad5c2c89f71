#include <doctest.h>

#include "test_helpers.hpp"

using namespace ousem;
using namespace ousem::testing;

namespace {

struct SymmetricSetup {
    OUModel m;
    GramianSet g;
    OperatorBundle b;
};

SymmetricSetup scalar_setup() {
    SymmetricSetup s;
    s.m = testing::dense_model(-Matrix::Identity(1, 1), 2.0 * Matrix::Identity(1, 1));
    s.g = make_gramians(s.m);
    s.b = build_operator_bundle(s.m, s.g);
    return s;
}

SymmetricSetup random_setup(int d, std::uint64_t seed) {
    CounterRng rng(seed, 0);
    SymmetricSetup s;
    s.m = random_symmetric_model(d, rng);
    s.g = make_gramians(s.m);
    s.b = build_operator_bundle(s.m, s.g);
    return s;
}

// Quadrature oracle for a single chaos coefficient:
// c_n = E[ phi(Qinf^{1/2} G y) prod_i h_{n_i}(y_i) ], y standard normal.
double coefficient_oracle(const Polynomial& phi, const OperatorBundle& b, const MultiIndex& n,
                          int nodes) {
    Matrix push = b.qinf_sqrt * b.frame_0;
    return gaussian_expectation(static_cast<int>(n.size()), nodes, [&](const Vector& y) {
        double h = 1.0;
        for (size_t i = 0; i < n.size(); ++i) h *= hermite_h(n[i], y(i));
        return phi.evaluate(push * y) * h;
    });
}

} // namespace

TEST_SUITE("chaos") {

TEST_CASE("constants expand to the vacuum coefficient") {
    SymmetricSetup s = scalar_setup();
    ChaosCoefficients c = expand(Polynomial::constant(1, 1.0), s.b);
    CHECK(c.coeffs.size() == 1);
    CHECK(c.coeffs.at({0}) == doctest::Approx(1.0));
}

TEST_CASE("scalar quadratic observable: explicit coefficients") {
    SymmetricSetup s = scalar_setup(); // Qinf = 1, so y = x
    Polynomial phi(1);
    phi.add_term({2}, 1.0); // x^2 = 1 * h0 + sqrt(2) * h2
    ChaosCoefficients c = expand(phi, s.b);
    CHECK(c.coeffs.at({0}) == doctest::Approx(1.0));
    CHECK(c.coeffs.at({2}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.coeffs.count({1}) == 0);

    // quadrature oracle per coefficient
    CHECK(coefficient_oracle(phi, s.b, {0}, 8) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(coefficient_oracle(phi, s.b, {2}, 8) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("parseval against quadrature on random observables in two dimensions") {
    SymmetricSetup s = random_setup(2, 51);
    CounterRng rng(52, 0);
    for (int rep = 0; rep < 5; ++rep) {
        Polynomial phi = random_polynomial(2, 3, rng);
        ChaosCoefficients c = expand(phi, s.b);
        Matrix push = s.b.qinf_sqrt * s.b.frame_0;
        const double l2_quad = gaussian_expectation(2, 12, [&](const Vector& y) {
            const double v = phi.evaluate(push * y);
            return v * v;
        });
        CHECK(c.l2_norm_sq() == doctest::Approx(l2_quad).epsilon(1e-9));
    }
}

TEST_CASE("coefficients match the quadrature oracle term by term") {
    SymmetricSetup s = random_setup(2, 53);
    CounterRng rng(54, 0);
    Polynomial phi = random_polynomial(2, 3, rng);
    ChaosCoefficients c = expand(phi, s.b);
    for (const auto& [n, v] : c.coeffs) {
        CHECK(v == doctest::Approx(coefficient_oracle(phi, s.b, n, 10)).epsilon(1e-9));
    }
}

TEST_CASE("round trip: expand, convert back, evaluate") {
    SymmetricSetup s = random_setup(3, 55);
    CounterRng rng(56, 0);
    Polynomial phi = random_polynomial(3, 4, rng);
    ChaosCoefficients c = expand(phi, s.b);
    Polynomial back = chaos_to_polynomial(c, s.b);
    for (int rep = 0; rep < 100; ++rep) {
        Vector x(3);
        for (int i = 0; i < 3; ++i) x(i) = 4.0 * rng.uniform() - 2.0;
        const double direct = phi.evaluate(x);
        CHECK(back.evaluate(x) == doctest::Approx(direct).epsilon(1e-9));
        CHECK(chaos_evaluate(c, s.b, x) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("degree overflow is rejected") {
    SymmetricSetup s = scalar_setup();
    Polynomial phi(1);
    phi.add_term({7}, 1.0);
    CHECK_THROWS_AS(expand(phi, s.b, 6), DegreeOverflow);
}

TEST_CASE("transition action: identity at t = 0, scalar mean decay") {
    SymmetricSetup s = scalar_setup();
    Polynomial phi = Polynomial::coordinate(1, 0);
    ChaosCoefficients c = expand(phi, s.b);
    ChaosCoefficients c0 = apply_rt_spectral(c, s.b, 0.0);
    CHECK(c0.coeffs.at({1}) == doctest::Approx(c.coeffs.at({1})));
    const double t = 0.7;
    ChaosCoefficients ct = apply_rt_spectral(c, s.b, t);
    CHECK(ct.coeffs.at({1}) == doctest::Approx(std::exp(-t) * c.coeffs.at({1})));
}

TEST_CASE("semigroup law and mass conservation") {
    SymmetricSetup s = random_setup(2, 57);
    CounterRng rng(58, 0);
    Polynomial phi = random_polynomial(2, 3, rng);
    ChaosCoefficients c = expand(phi, s.b);
    ChaosCoefficients via_two = apply_rt_spectral(apply_rt_spectral(c, s.b, 0.3), s.b, 0.9);
    ChaosCoefficients direct = apply_rt_spectral(c, s.b, 1.2);
    for (const auto& [n, v] : direct.coeffs) {
        CHECK(via_two.coeffs.at(n) == doctest::Approx(v).epsilon(1e-13));
        if (order_of(n) > 0 && v != 0.0) CHECK(std::abs(v) < std::abs(c.coeffs.at(n)) + 1e-300);
    }
    MultiIndex zero(2, 0);
    CHECK(direct.coeffs.at(zero) == doctest::Approx(c.coeffs.at(zero)));
}

TEST_CASE("spectral generator equals the symbolic differential operator") {
    SUBCASE("scalar closed form") {
        SymmetricSetup s = scalar_setup();
        Polynomial phi(1);
        phi.add_term({2}, 1.0);
        Polynomial lphi = chaos_to_polynomial(apply_generator_spectral(expand(phi, s.b), s.b), s.b);
        Polynomial oracle = generator_apply_symbolic(phi, s.m.A, s.m.Q); // 2 - 2 x^2
        for (double v : {-2.0, 0.0, 1.5}) {
            Vector x(1);
            x << v;
            CHECK(lphi.evaluate(x) == doctest::Approx(oracle.evaluate(x)).epsilon(1e-10));
        }
    }
    SUBCASE("random model, random observable") {
        SymmetricSetup s = random_setup(2, 59);
        CounterRng rng(60, 0);
        for (int rep = 0; rep < 5; ++rep) {
            Polynomial phi = random_polynomial(2, 4, rng);
            Polynomial spectral =
                chaos_to_polynomial(apply_generator_spectral(expand(phi, s.b), s.b), s.b);
            Polynomial symbolic = generator_apply_symbolic(phi, s.m.A, s.m.Q);
            for (int pt = 0; pt < 20; ++pt) {
                Vector x(2);
                x << 3.0 * rng.uniform() - 1.5, 3.0 * rng.uniform() - 1.5;
                CHECK(spectral.evaluate(x) ==
                      doctest::Approx(symbolic.evaluate(x)).epsilon(1e-9).scale(1.0));
            }
        }
    }
}

TEST_CASE("spectral gap values") {
    SymmetricSetup s = scalar_setup();
    CHECK(spectral_gap(s.b) == doctest::Approx(1.0));
    for (int n : {4, 16, 64}) {
        OUModel m = preset_example1(n);
        GramianSet g = make_gramians(m);
        OperatorBundle b = build_operator_bundle(m, g);
        CHECK(spectral_gap(b) == doctest::Approx(1.0 / n).epsilon(1e-12));
    }
}

TEST_CASE("generator eigenvalues on low chaos orders via finite differences") {
    // -L has eigenvalues {0, 1, 2, 3} on chaos of order <= 3 for the unit-gap
    // scalar model. Oracle: Richardson limit of (R_t phi - phi)/t under
    // quadrature, no spectral machinery involved.
    SymmetricSetup s = scalar_setup();
    for (int order = 0; order <= 3; ++order) {
        // phi = h_order(x / sqrt(qinf)) as a polynomial through the chaos basis
        ChaosCoefficients c;
        c.dim = 1;
        c.degree = 3;
        c.coeffs[{order}] = 1.0;
        Polynomial phi = chaos_to_polynomial(c, s.b);

        Vector x(1);
        x << 0.6;
        const double phi_x = phi.evaluate(x);
        auto rayleigh = [&](double t) {
            const double rt = evaluate_rt_quadrature(s.m, s.g, phi, x, t, 12);
            return (rt - phi_x) / t;
        };
        const double t0 = 1e-3;
        const double lphi = 2.0 * rayleigh(t0 / 2.0) - rayleigh(t0); // Richardson
        if (order == 0) {
            CHECK(std::abs(lphi) < 1e-8);
        } else {
            CHECK(-lphi / phi_x == doctest::Approx(static_cast<double>(order)).epsilon(1e-5));
        }
    }
}

TEST_CASE("square root of the shifted generator") {
    SymmetricSetup s = random_setup(2, 61);
    CounterRng rng(62, 0);
    Polynomial phi = random_polynomial(2, 3, rng);
    ChaosCoefficients c = expand(phi, s.b);

    ChaosCoefficients constant = expand(Polynomial::constant(2, 3.0), s.b);
    ChaosCoefficients root_const = apply_sqrt_shifted_generator(constant, s.b);
    CHECK(root_const.coeffs.at(MultiIndex(2, 0)) == doctest::Approx(3.0));

    // applying twice reproduces I - L spectrally
    ChaosCoefficients twice =
        apply_sqrt_shifted_generator(apply_sqrt_shifted_generator(c, s.b), s.b);
    ChaosCoefficients lc = apply_generator_spectral(c, s.b);
    for (const auto& [n, v] : c.coeffs) {
        const double target = v - lc.coeffs.at(n);
        CHECK(twice.coeffs.at(n) == doctest::Approx(target).epsilon(1e-12));
    }

    // scalar unit-gap first order: factor sqrt(2)
    SymmetricSetup sc = scalar_setup();
    ChaosCoefficients c1 = expand(Polynomial::coordinate(1, 0), sc.b);
    ChaosCoefficients r1 = apply_sqrt_shifted_generator(c1, sc.b);
    CHECK(r1.coeffs.at({1}) == doctest::Approx(std::sqrt(2.0) * c1.coeffs.at({1})));
}

TEST_CASE("generator is selfadjoint under the invariant measure") {
    SymmetricSetup s = random_setup(2, 63);
    CounterRng rng(64, 0);
    for (int rep = 0; rep < 5; ++rep) {
        Polynomial phi = random_polynomial(2, 3, rng);
        Polynomial psi = random_polynomial(2, 3, rng);
        Polynomial lphi = generator_apply_symbolic(phi, s.m.A, s.m.Q);
        Polynomial lpsi = generator_apply_symbolic(psi, s.m.A, s.m.Q);
        Matrix push = s.b.qinf_sqrt * s.b.frame_0;
        const double lhs = gaussian_expectation(2, 14, [&](const Vector& y) {
            Vector x = push * y;
            return lphi.evaluate(x) * psi.evaluate(x);
        });
        const double rhs = gaussian_expectation(2, 14, [&](const Vector& y) {
            Vector x = push * y;
            return phi.evaluate(x) * lpsi.evaluate(x);
        });
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9).scale(1.0));
    }
}

} // TEST_SUITE
