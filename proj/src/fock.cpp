#include <coherence/fock.hpp>

#include <coherence/optimize.hpp>

#include <spdlog/spdlog.h>

#include <cmath>

namespace coherence::fock {

namespace {

void require_cutoff(int cutoff) {
    if (cutoff < 1) throw Error(Errc::invalid_argument, "Fock cutoff must be at least 1");
}

// log of sqrt(binomial(n, k))
double log_sqrt_binomial(int n, int k) {
    return 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

Complex ipow(Complex base, int exponent) {
    Complex out{1.0, 0.0};
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

CVector coherent_amplitudes(Complex alpha, int cutoff) {
    CVector amps(cutoff + 1);
    amps(0) = std::exp(-0.5 * std::norm(alpha));
    for (Index n = 1; n <= cutoff; ++n) amps(n) = amps(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    return amps;
}

}  // namespace

SplitSpec::SplitSpec(Complex mu, Complex nu) : mu_(mu), nu_(nu) {
    if (std::abs(std::norm(mu) + std::norm(nu) - 1.0) > 1e-12)
        throw Error(Errc::invalid_argument, "splitting coefficients must satisfy |mu|^2 + |nu|^2 = 1");
}

SplitSpec SplitSpec::from_angles(double t, double phi) {
    return SplitSpec(std::cos(t), std::sin(t) * std::polar(1.0, phi));
}

int minimum_cutoff(Complex alpha) {
    const double n2 = std::norm(alpha);
    return static_cast<int>(std::ceil(n2 + 12.0 * std::sqrt(n2 + 1.0)));
}

void require_tail(Complex alpha, int cutoff) {
    if (cutoff < minimum_cutoff(alpha))
        throw Error(Errc::truncation_too_small, "cutoff " + std::to_string(cutoff) + " below required " +
                                                    std::to_string(minimum_cutoff(alpha)) + " for |alpha|=" +
                                                    std::to_string(std::abs(alpha)));
}

double tail_mass(Complex alpha, int cutoff) {
    const double n2 = std::norm(alpha);
    if (n2 == 0.0) return 0.0;
    // Poisson tail summed until terms become negligible
    double tail = 0.0;
    for (int n = cutoff + 1; n < cutoff + 2000; ++n) {
        const double term = std::exp(-n2 + n * std::log(n2) - std::lgamma(n + 1.0));
        tail += term;
        if (n > n2 && term < 1e-30 * std::max(tail, 1e-300)) break;
    }
    return tail;
}

LadderOps ladder_ops(int cutoff) {
    require_cutoff(cutoff);
    const auto space = SpaceDescriptor::fock(cutoff);
    CMatrix a = CMatrix::Zero(space.dim(), space.dim());
    for (Index n = 1; n <= cutoff; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    CMatrix adag = a.adjoint();
    return {LinearOperator(space, std::move(a)), LinearOperator(space, std::move(adag))};
}

QuadratureOps quadrature_ops(int cutoff) {
    const auto [a, adag] = ladder_ops(cutoff);
    const double s = 1.0 / std::sqrt(2.0);
    CMatrix q = s * (a.matrix() + adag.matrix());
    CMatrix p = (s / kI) * (a.matrix() - adag.matrix());
    return {LinearOperator(a.space(), std::move(q), true), LinearOperator(a.space(), std::move(p), true)};
}

LinearOperator number_op(int cutoff) {
    require_cutoff(cutoff);
    const auto space = SpaceDescriptor::fock(cutoff);
    CMatrix n = CMatrix::Zero(space.dim(), space.dim());
    for (Index k = 0; k <= cutoff; ++k) n(k, k) = static_cast<double>(k);
    return LinearOperator(space, std::move(n), true);
}

LinearOperator displacement(Complex alpha, int cutoff) {
    require_cutoff(cutoff);
    require_tail(alpha, cutoff);
    const auto [a, adag] = ladder_ops(cutoff);
    CMatrix generator = alpha * adag.matrix() - std::conj(alpha) * a.matrix();
    return LinearOperator(a.space(), expm(generator));
}

StateVector glauber_cs(Complex alpha, int cutoff) {
    require_cutoff(cutoff);
    require_tail(alpha, cutoff);
    CVector amps = coherent_amplitudes(alpha, cutoff);
    const double retained = amps.squaredNorm();
    spdlog::debug("glauber_cs: |alpha|={} N={} renormalizing retained mass {}", std::abs(alpha), cutoff, retained);
    return StateVector(SpaceDescriptor::fock(cutoff), std::move(amps));
}

StateVector number_state(int n, int cutoff) {
    require_cutoff(cutoff);
    if (n < 0 || n > cutoff) throw Error(Errc::invalid_argument, "number state outside truncated space");
    return StateVector::basis(SpaceDescriptor::fock(cutoff), n);
}

GlauberFit fit_glauber_cs(const StateVector& s) {
    if (s.space().num_factors() != 1 || s.space().factor(0).kind != Factor::Kind::fock)
        throw Error(Errc::space_mismatch, "fit_glauber_cs needs a single-mode Fock state");
    const int cutoff = s.space().factor(0).cutoff();
    const CVector& psi = s.amps();
    auto residual = [&](const Eigen::VectorXd& x) {
        const CVector n = coherent_amplitudes({x(0), x(1)}, cutoff).normalized();
        const Complex c = n.dot(psi);
        return (psi - c * n).squaredNorm();
    };
    const Complex mean_a = moments(ladder_ops(cutoff).a, s).mean;
    optimize::NelderMeadOptions opts;
    opts.initial_step = 0.05;
    opts.ftol = 1e-30;
    opts.xtol = 1e-13;
    opts.max_evaluations = 4000;
    const auto result = optimize::nelder_mead(residual, Eigen::Vector2d(mean_a.real(), mean_a.imag()), opts);
    const Complex alpha{result.x(0), result.x(1)};
    StateVector nearest(s.space(), coherent_amplitudes(alpha, cutoff));
    const double fid = fidelity(nearest, s);
    return {alpha, fid, std::move(nearest)};
}

SplitIsometry beamsplit_isometry(const SplitSpec& spec, int input_cutoff, int output_cutoff) {
    require_cutoff(input_cutoff);
    if (output_cutoff < input_cutoff)
        throw Error(Errc::insufficient_output_cutoff, "output cutoff must be at least the input cutoff");
    const auto source = SpaceDescriptor::fock(input_cutoff);
    const auto target = tensor(SpaceDescriptor::fock(output_cutoff), SpaceDescriptor::fock(output_cutoff));
    const Index out_dim = output_cutoff + 1;

    // (mu b^dag + nu c^dag)^n / sqrt(n!) |0,0> = sum_k sqrt(C(n,k)) mu^k nu^(n-k) |k, n-k>
    CMatrix v = CMatrix::Zero(target.dim(), source.dim());
    for (int n = 0; n <= input_cutoff; ++n) {
        for (int k = 0; k <= n; ++k) {
            const Complex amp = std::exp(log_sqrt_binomial(n, k)) * ipow(spec.mu(), k) * ipow(spec.nu(), n - k);
            v(k * out_dim + (n - k), n) = amp;
        }
    }
    return SplitIsometry(source, target, std::move(v));
}

StateVector split_fock(const StateVector& s, const SplitSpec& spec) {
    if (s.space().num_factors() != 1 || s.space().factor(0).kind != Factor::Kind::fock)
        throw Error(Errc::space_mismatch, "split_fock needs a single-mode Fock state");
    const int cutoff = s.space().factor(0).cutoff();
    return beamsplit_isometry(spec, cutoff, cutoff).apply(s);
}

}  // namespace coherence::fock
