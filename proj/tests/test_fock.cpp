#include "test_helpers.hpp"

#include <coherence/fock.hpp>

#include <numbers>

using namespace coherence;
using namespace coherence::testing;

namespace {

// Untruncated coherent amplitudes by the recurrence c_n = c_{n-1} alpha / sqrt(n).
CVector coherent_oracle(Complex alpha, int cutoff) {
    CVector v(cutoff + 1);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n <= cutoff; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return v;
}

}  // namespace

TEST_CASE("Ladder action on low states") {
    const auto [a, adag] = fock::ladder_ops(5);
    CHECK_LT(max_abs_diff(apply(a, fock::number_state(1, 5)), fock::number_state(0, 5).amps()), 1e-15);
    CHECK_LT(max_abs_diff(apply(adag, fock::number_state(0, 5)), fock::number_state(1, 5).amps()), 1e-15);
}

TEST_CASE("Ladder commutator fails only at cutoff") {
    const int n_max = 12;
    const auto [a, adag] = fock::ladder_ops(n_max);
    const CMatrix comm = a.matrix() * adag.matrix() - adag.matrix() * a.matrix();
    for (int n = 0; n <= n_max; ++n) {
        const double diag = comm(n, n).real();
        if (n < n_max)
            CHECK_NEAR(diag, 1.0, 1e-13);
        else
            CHECK_NEAR(diag, -n_max, 1e-12);
    }
    CHECK_LT((comm - CMatrix(comm.diagonal().asDiagonal())).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_CASE("Quadrature vacuum and coherent means") {
    const auto [q, p] = fock::quadrature_ops(30);
    const auto vac = fock::number_state(0, 30);
    CHECK_NEAR(std::abs(moments(q, vac).mean), 0.0, 1e-15);
    CHECK_NEAR(*moments(q, vac).variance, 0.5, 1e-14);
    CHECK_NEAR(moments(q, fock::glauber_cs(0.5, 30)).mean.real(), std::sqrt(2.0) * 0.5, 1e-10);
    CHECK_LT((q.matrix() - q.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-15);
    CHECK_LT((p.matrix() - p.matrix().adjoint()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST_CASE("Quadrature minimum uncertainty grid") {
    const auto [q, p] = fock::quadrature_ops(40);
    for (double r : {0.0, 0.5, 1.0, 1.5}) {
        for (int k = 0; k < 8; ++k) {
            const auto s = fock::glauber_cs(std::polar(r, k * std::numbers::pi / 4), 40);
            const double vq = *moments(q, s).variance;
            const double vp = *moments(p, s).variance;
            CHECK_NEAR(std::sqrt(vq) * std::sqrt(vp), 0.5, 1e-8);
            CHECK_NEAR(std::sqrt(vq), 1.0 / std::sqrt(2.0), 1e-8);
        }
    }
}

TEST_CASE("Displacement zero is identity") {
    CHECK_LT(max_abs_diff(fock::displacement(0.0, 12).matrix(), CMatrix::Identity(13, 13)), 1e-15);
}

TEST_CASE("Displacement vacuum image is coherent state") {
    for (Complex alpha : {Complex(0.3, 0.0), Complex(1.0, -1.0), Complex(0.0, 2.0), Complex(-1.2, 1.5)}) {
        const CVector image = fock::displacement(alpha, 40).matrix().col(0);
        CHECK_LT(max_abs_diff(image, fock::glauber_cs(alpha, 40).amps()), 1e-10);
    }
}

TEST_CASE("Displacement inverse on lower half") {
    const int n_max = 40;
    const Complex alpha(0.8, -0.6);
    const CMatrix product = fock::displacement(alpha, n_max).matrix() * fock::displacement(-alpha, n_max).matrix();
    const CMatrix block = product.topLeftCorner(n_max / 2 + 1, n_max / 2 + 1);
    CHECK_LT(max_abs_diff(block, CMatrix::Identity(n_max / 2 + 1, n_max / 2 + 1)), 1e-9);
}

TEST_CASE("Displacement tail criterion enforced") {
    CHECK_EQ(error_code_of([] { fock::displacement(3.0, 20); }), Errc::truncation_too_small);
    CHECK_EQ(error_code_of([] { fock::glauber_cs(3.0, 20); }), Errc::truncation_too_small);
}

TEST_CASE("TailCriterion minimum cutoff bounds tail") {
    for (double r : {0.0, 0.5, 1.0, 2.0, 3.0}) {
        const int n = fock::minimum_cutoff(r);
        CHECK_GE(n, r * r + 12.0 * std::sqrt(r * r + 1.0));
        CHECK_LT(n - 1, r * r + 12.0 * std::sqrt(r * r + 1.0));
        CHECK_LT(fock::tail_mass(r, n), 1e-12);
    }
}

TEST_CASE("Glauber formula") {
    CHECK_LT(max_abs_diff(fock::glauber_cs(0.0, 15).amps(), fock::number_state(0, 15).amps()), 1e-15);
    CHECK_NEAR(fock::glauber_cs(1.0, 40)[0].real(), std::exp(-0.5), 1e-12);
    const Complex alpha(0.9, -0.7);
    CHECK_LT(max_abs_diff(fock::glauber_cs(alpha, 40).amps(), coherent_oracle(alpha, 40)), 1e-12);
}

TEST_CASE("Glauber eigenstate of annihilation") {
    const auto [a, adag] = fock::ladder_ops(40);
    const Complex alpha(1.0, 0.5);
    const auto s = fock::glauber_cs(alpha, 40);
    CHECK_LT((apply(a, s) - alpha * s.amps()).norm(), 1e-8);
    for (double r : {0.5, 1.0, 2.0}) {
        for (int k = 0; k < 6; ++k) {
            const auto c = fock::glauber_cs(std::polar(r, k * 1.1), 40);
            CHECK_LT((apply(a, c) - std::polar(r, k * 1.1) * c.amps()).norm(), 1e-7);
        }
    }
}

TEST_CASE("Glauber fit recovers amplitude") {
    const Complex alpha(0.6, -0.3);
    const auto fit = fock::fit_glauber_cs(fock::glauber_cs(alpha, 30));
    CHECK_NEAR(std::abs(fit.alpha - alpha), 0.0, 1e-6);
    CHECK_NEAR(fit.fidelity, 1.0, 1e-12);
}

TEST_CASE("SplitSpec validates normalization") {
    CHECK_EQ(error_code_of([] { fock::SplitSpec(1.0, 1.0); }), Errc::invalid_argument);
    const auto s = fock::SplitSpec::from_angles(0.3, 1.1);
    CHECK_NEAR(std::norm(s.mu()) + std::norm(s.nu()), 1.0, 1e-15);
}

TEST_CASE("Beamsplitter low states") {
    const auto v = fock::beamsplit_isometry(fock::SplitSpec::balanced(), 3, 3);
    const CVector vac = v.apply(fock::number_state(0, 3)).amps();
    CHECK_NEAR(std::abs(vac(0) - 1.0), 0.0, 1e-15);
    // |1> -> (|1,0> + |0,1>)/sqrt(2); index = nB * 4 + nC
    const CVector one = v.apply(fock::number_state(1, 3)).amps();
    CVector expected = CVector::Zero(16);
    expected(4) = expected(1) = 1.0 / std::sqrt(2.0);
    CHECK_LT(max_abs_diff(one, expected), 1e-15);
}

TEST_CASE("Beamsplitter isometry property") {
    for (int out : {6, 9}) {
        const auto v = fock::beamsplit_isometry(fock::SplitSpec::from_angles(0.7, 2.0), 6, out);
        CHECK_LT(v.isometry_defect(), 1e-10);
    }
    CHECK_EQ(error_code_of([] { fock::beamsplit_isometry(fock::SplitSpec::balanced(), 6, 5); }),
              Errc::insufficient_output_cutoff);
}

TEST_CASE("Beamsplitter number state two oracle") {
    // (mu b + nu c)^2 / sqrt 2 |0,0> = mu^2 |2,0> + sqrt2 mu nu |1,1> + nu^2 |0,2>
    const auto spec = fock::SplitSpec::from_angles(0.4, 0.9);
    const CVector out = fock::beamsplit_isometry(spec, 2, 2).apply(fock::number_state(2, 2)).amps();
    CVector expected = CVector::Zero(9);
    expected(6) = spec.mu() * spec.mu();
    expected(4) = std::sqrt(2.0) * spec.mu() * spec.nu();
    expected(2) = spec.nu() * spec.nu();
    CHECK_LT(max_abs_diff(out, expected), 1e-15);
}

TEST_CASE("Beamsplitter coherent split law") {
    const auto spec = fock::SplitSpec::balanced();
    const auto in = fock::glauber_cs(1.0, 30);
    const CVector out = fock::beamsplit_isometry(spec, 30, 30).apply(in).amps();
    const auto expected = tensor_state(fock::glauber_cs(spec.mu(), 30), fock::glauber_cs(spec.nu(), 30));
    CHECK_GT(std::abs(expected.amps().dot(out)), 1.0 - 1e-8);
}

TEST_CASE("Beamsplitter coherent split grid") {
    for (double r : {0.0, 0.7, 1.5}) {
        for (double t : {0.1, 0.5, 1.2}) {
            for (double phi : {0.0, 1.3, 4.0}) {
                const Complex alpha = std::polar(r, 0.4);
                const auto spec = fock::SplitSpec::from_angles(t, phi);
                const auto out = fock::split_fock(fock::glauber_cs(alpha, 40), spec);
                const auto expected = tensor_state(fock::glauber_cs(spec.mu() * alpha, 40),
                                                   fock::glauber_cs(spec.nu() * alpha, 40));
                CHECK_GT(std::abs(overlap(expected, out)), 1.0 - 1e-7);
            }
        }
    }
}

TEST_CASE("SplitFock vacuum and coherent are products") {
    const auto vac = fock::split_fock(fock::number_state(0, 4), fock::SplitSpec::balanced());
    CHECK_NEAR(std::abs(vac[0]), 1.0, 1e-15);
    const auto split = fock::split_fock(fock::glauber_cs(Complex(0.5, 0.5), 25), fock::SplitSpec::balanced());
    CHECK_LT(schmidt_cut(split, 1).entropy_bits, 1e-9);
    CHECK_NEAR(split.amps().norm(), 1.0, 1e-12);
}

TEST_CASE("SplitFock number states entangle") {
    // |2> on the balanced splitter: Schmidt weights (1/4, 1/2, 1/4) -> 1.5 bits
    const auto two = fock::split_fock(fock::number_state(2, 6), fock::SplitSpec::balanced());
    CHECK_GT(schmidt_cut(two, 1).entropy_bits, 0.5);
    CHECK_NEAR(schmidt_cut(two, 1).entropy_bits, 1.5, 1e-12);
    for (int n = 1; n <= 5; ++n) {
        const auto s = fock::split_fock(fock::number_state(n, 8), fock::SplitSpec::balanced());
        CHECK_GT(schmidt_cut(s, 1).entropy_bits, 0.1);
    }
}
