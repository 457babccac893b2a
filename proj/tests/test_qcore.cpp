#include "test_helpers.hpp"

#include <coherence/fock.hpp>
#include <coherence/spin.hpp>

#include <numbers>

using namespace coherence;
using namespace coherence::testing;

TEST_CASE("Space dimension is product of factors") {
    const SpaceDescriptor s({Factor::fock(3), Factor::spin(Spin(3)), Factor::spin(Spin(0))});
    CHECK_EQ(s.dim(), 4 * 4 * 1);
    CHECK_EQ(s.slice(1, 3).dim(), 4);
    CHECK_EQ(Spin::from_value(1.5).twice(), 3);
    CHECK_EQ(error_code_of([] { Spin::from_value(0.3); }), Errc::invalid_argument);
}

TEST_CASE("TensorState identity case") {
    const auto v = fock::number_state(0, 2);
    const auto s = tensor_state(v, v);
    CHECK_EQ(s.dim(), 9);
    CHECK_EQ(s[0], Complex(1.0));
    CHECK_EQ(s.amps().norm(), 1.0);
}

TEST_CASE("TensorState up down bookkeeping") {
    const auto up = spin::basis_state(Spin(1), 1);
    const auto down = spin::basis_state(Spin(1), -1);
    const auto s = tensor_state(up, down);
    // (m_B, m_C) = (+1/2, -1/2) sits at row 1, column 0
    CHECK_LT(max_abs_diff(s.amps(), cvec({0.0, 0.0, 1.0, 0.0})), 1e-15);
}

TEST_CASE("TensorState kronecker of superposition") {
    const StateVector plus(SpaceDescriptor::fock(1), cvec({1.0, 1.0}));
    const auto s = tensor_state(plus, fock::number_state(0, 1));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK_LT(max_abs_diff(s.amps(), cvec({r, 0.0, r, 0.0})), 1e-15);
}

TEST_CASE("Apply identity and annihilation") {
    const auto s = fock::glauber_cs(0.3, 20);
    CHECK_LT(max_abs_diff(apply(LinearOperator::identity(s.space()), s), s.amps()), 1e-15);
    const auto [a, adag] = fock::ladder_ops(20);
    CHECK_EQ(apply(a, fock::number_state(0, 20)).norm(), 0.0);
    CHECK_EQ(error_code_of([&] { apply_normalized(a, fock::number_state(0, 20)); }), Errc::zero_vector);
}

TEST_CASE("Apply raising spin half") {
    const auto ops = spin::spin_ops(Spin(1));
    // <1/2| J+ |-1/2> = sqrt((j - m)(j + m + 1)) = sqrt(1 * 1)
    const CVector out = apply(ops.jplus, spin::lowest_state(Spin(1)));
    CHECK_LT(max_abs_diff(out, cvec({0.0, 1.0})), 1e-15);
}

TEST_CASE("Apply space mismatch") {
    const auto [a, adag] = fock::ladder_ops(3);
    CHECK_EQ(error_code_of([&] { apply(a, fock::number_state(0, 4)); }), Errc::space_mismatch);
}

TEST_CASE("Moments quadratures of coherent state") {
    const auto s = fock::glauber_cs(1.0, 40);
    const auto [q, p] = fock::quadrature_ops(40);
    const auto mq = moments(q, s);
    const auto mp = moments(p, s);
    CHECK_NEAR(mq.mean.real(), std::sqrt(2.0), 1e-8);
    CHECK_NEAR(*mq.variance, 0.5, 1e-8);
    CHECK_NEAR(mp.mean.real(), 0.0, 1e-8);
    CHECK_NEAR(*mp.variance, 0.5, 1e-8);
}

TEST_CASE("Moments eigenstate has no spread") {
    const auto ops = spin::spin_ops(Spin(1));
    const auto m = moments(ops.j0, spin::lowest_state(Spin(1)));
    CHECK_NEAR(m.mean.real(), -0.5, 1e-15);
    CHECK_NEAR(*m.variance, 0.0, 1e-15);
    CHECK_FALSE(moments(ops.jplus, spin::lowest_state(Spin(1))).variance.has_value());
}

TEST_CASE("MatExp zero is identity") {
    const auto space = SpaceDescriptor::fock(5);
    const auto e = mat_exp(LinearOperator(space, CMatrix::Zero(6, 6)));
    CHECK_LT(max_abs_diff(e.matrix(), CMatrix::Identity(6, 6)), 1e-15);
}

TEST_CASE("MatExp diagonal phase") {
    const auto ops = spin::spin_ops(Spin(1));
    const auto e = mat_exp(LinearOperator(ops.j0.space(), kI * std::numbers::pi * ops.j0.matrix()));
    CMatrix expected = CMatrix::Zero(2, 2);
    expected(0, 0) = std::polar(1.0, -std::numbers::pi / 2);
    expected(1, 1) = std::polar(1.0, std::numbers::pi / 2);
    CHECK_LT(max_abs_diff(e.matrix(), expected), 1e-14);
}

TEST_CASE("MatExp coset element on lowest weight") {
    const auto ops = spin::spin_ops(Spin(1));
    const Complex xi = -std::numbers::pi / 4;
    const CMatrix gen = xi * ops.jplus.matrix() - std::conj(xi) * ops.jminus.matrix();
    const CVector out = mat_exp(LinearOperator(ops.j0.space(), gen)).matrix().col(0);
    // theta = pi/2, phi = 0: (cos(pi/4), -sin(pi/4))
    const double r = 1.0 / std::sqrt(2.0);
    CHECK_LT(max_abs_diff(out, cvec({r, -r})), 1e-14);
}

TEST_CASE("MatExp non finite rejected") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = std::numeric_limits<double>::infinity();
    CHECK_EQ(error_code_of([&] { mat_exp(LinearOperator(qubit(), m)); }), Errc::non_finite);
}

TEST_CASE("MatExp inverse property") {
    CounterRng rng(11, 0);
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix a(6, 6);
        for (Index i = 0; i < a.size(); ++i) a.data()[i] = rng.complex_normal();
        const CMatrix product = expm(a) * expm(-a);
        CHECK_LT(max_abs_diff(product, CMatrix::Identity(6, 6)), 1e-10);
    }
}

TEST_CASE("MatExp anti hermitian preserves norm") {
    CounterRng rng(12, 0);
    const SpaceDescriptor space({Factor::fock(4), Factor::spin(Spin(2))});
    for (int trial = 0; trial < 20; ++trial) {
        CMatrix h(space.dim(), space.dim());
        for (Index i = 0; i < h.size(); ++i) h.data()[i] = rng.complex_normal();
        h = (h + h.adjoint()).eval();
        const auto s = haar_state(space, rng);
        const CVector out = expm(kI * h) * s.amps();
        CHECK_NEAR(out.norm(), 1.0, 1e-10);
    }
}

TEST_CASE("Schmidt product state") {
    const auto s = tensor_state(fock::glauber_cs(0.2, 14), spin::spin_cs(Spin(2), Complex(0.3, 0.1)));
    const auto r = schmidt_cut(s, 1);
    CHECK_NEAR(r.coefficients.front(), 1.0, 1e-12);
    CHECK_LT(r.entropy_bits, 1e-12);
    CHECK(r.is_product);
}

TEST_CASE("Schmidt maximally entangled pair") {
    const auto r = schmidt_cut(triplet_zero(), 1);
    REQUIRE_EQ(r.coefficients.size(), 2u);
    CHECK_NEAR(r.coefficients[0], 1.0 / std::sqrt(2.0), 1e-14);
    CHECK_NEAR(r.coefficients[1], 1.0 / std::sqrt(2.0), 1e-14);
    CHECK_NEAR(r.entropy_bits, 1.0, 1e-12);
    CHECK_FALSE(r.is_product);
}

TEST_CASE("Schmidt split spin one coherent state") {
    const auto split = spin::split_spin(spin::spin_cs(Spin(2), 1.0), Spin(1), Spin(1));
    CHECK_LT(schmidt_cut(split, 1).entropy_bits, 1e-10);
}

TEST_CASE("Schmidt reconstruction and normalization") {
    CounterRng rng(5, 0);
    const SpaceDescriptor space({Factor::fock(2), Factor::spin(Spin(1)), Factor::fock(3)});
    for (int trial = 0; trial < 25; ++trial) {
        const auto s = haar_state(space, rng);
        for (std::size_t cut : {1u, 2u}) {
            const auto r = schmidt_cut(s, cut);
            double total = 0.0;
            for (double c : r.coefficients) total += c * c;
            CHECK_NEAR(total, 1.0, 1e-10);
            CHECK(std::is_sorted(r.coefficients.rbegin(), r.coefficients.rend()));
            CHECK_LT(max_abs_diff(r.reconstruct(), s.amps()), 1e-10);
            CHECK_EQ(r.is_product, r.entropy_bits < kProductThresholdBits);
        }
    }
}

TEST_CASE("Schmidt needs composite space") {
    CHECK_EQ(error_code_of([] { schmidt_cut(fock::number_state(0, 3), 1); }), Errc::not_composite);
    CHECK_EQ(error_code_of([] { schmidt_cut(triplet_zero(), 0); }), Errc::not_composite);
}

TEST_CASE("Overlap self and vacuum") {
    const auto s = fock::glauber_cs(Complex(0.4, -0.2), 30);
    CHECK_NEAR(std::abs(overlap(s, s) - 1.0), 0.0, 1e-14);
    // displacement route to |alpha = 1>
    const CVector displaced = fock::displacement(1.0, 40).matrix().col(0);
    const StateVector alpha(SpaceDescriptor::fock(40), displaced);
    CHECK_NEAR(std::abs(overlap(fock::number_state(0, 40), alpha) - std::exp(-0.5)), 0.0, 1e-10);
}

TEST_CASE("Overlap lowest weight with spin coherent state") {
    const Complex zeta(0.7, -0.4);
    const auto s = spin::spin_cs(Spin(1), zeta);
    CHECK_NEAR(std::abs(overlap(spin::lowest_state(Spin(1)), s) - std::pow(1.0 + std::norm(zeta), -0.5)), 0.0, 1e-14);
}

TEST_CASE("Overlap phase aligned distance ignores global phase") {
    CounterRng rng(9, 1);
    const auto s = haar_state(SpaceDescriptor::spin(Spin(4)), rng);
    const StateVector rotated(s.space(), std::polar(1.0, 1.234) * s.amps());
    CHECK_LT(phase_aligned_distance(s, rotated), 1e-14);
    CHECK_GT(std::abs(overlap(s, rotated) - 1.0), 0.1);
}

TEST_CASE("Operators hermitian flag is checked") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    CHECK_EQ(error_code_of([&] { LinearOperator(qubit(), m, true); }), Errc::invalid_argument);
    CHECK_EQ(error_code_of([&] { LinearOperator(SpaceDescriptor::fock(2), m); }), Errc::space_mismatch);
}

TEST_CASE("Operators variance is non negative") {
    CounterRng rng(21, 0);
    const auto space = SpaceDescriptor::fock(6);
    for (int trial = 0; trial < 50; ++trial) {
        CMatrix h(7, 7);
        for (Index i = 0; i < h.size(); ++i) h.data()[i] = rng.complex_normal();
        const LinearOperator op(space, 0.5 * (h + h.adjoint()), true);
        CHECK_GE(*moments(op, haar_state(space, rng)).variance, -1e-12);
    }
}
