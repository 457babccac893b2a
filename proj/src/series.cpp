#include <coherence/splitting.hpp>

#include <algorithm>
#include <cmath>

namespace coherence::splitting {

namespace {

double binomial(int n, int k) {
    return std::round(std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)));
}

Complex ipow(Complex base, int exponent) {
    Complex out{1.0, 0.0};
    for (int i = 0; i < exponent; ++i) out *= base;
    return out;
}

double deviation_from_exponential(const SeriesPoly& f) {
    if (f.coeffs.size() < 2 || f[0] == Complex(0.0)) return 0.0;
    const Complex tau = f[1] / f[0];
    double worst = 0.0;
    Complex expected = f[0];
    for (std::size_t k = 0; k < f.coeffs.size(); ++k) {
        if (k > 0) expected *= tau / static_cast<double>(k);
        worst = std::max(worst, std::abs(f[k] - expected));
    }
    return worst;
}

}  // namespace

SeriesPoly SeriesPoly::exponential(Complex f0, Complex tau, int order) {
    if (order < 0) throw Error(Errc::invalid_argument, "negative series order");
    SeriesPoly f;
    f.coeffs.resize(static_cast<std::size_t>(order) + 1);
    f.coeffs[0] = f0;
    for (int k = 1; k <= order; ++k) f.coeffs[static_cast<std::size_t>(k)] = f.coeffs[k - 1] * tau / double(k);
    return f;
}

std::vector<double> functional_residual(const SeriesPoly& fa, const SeriesPoly& fb, const SeriesPoly& fc,
                                        const FunctionalEquation& eq) {
    const int order = std::min({fa.order(), fb.order(), fc.order()});
    std::vector<double> residual(static_cast<std::size_t>(order) + 1, 0.0);
    for (int n = 0; n <= order; ++n) {
        // coefficient of x^p y^q, p + q = n: a_n C(n,p) mu^p nu^q - b_p c_q
        for (int p = 0; p <= n; ++p) {
            const int q = n - p;
            const Complex lhs = fa[n] * binomial(n, p) * ipow(eq.mu, p) * ipow(eq.nu, q);
            const Complex rhs = fb[p] * fc[q];
            residual[n] = std::max(residual[n], std::abs(lhs - rhs));
        }
    }
    return residual;
}

std::optional<int> first_violation_order(const SeriesPoly& fa, const SeriesPoly& fb, const SeriesPoly& fc,
                                         const FunctionalEquation& eq, double tol) {
    const auto residual = functional_residual(fa, fb, fc, eq);
    for (std::size_t n = 0; n < residual.size(); ++n)
        if (residual[n] > tol) return static_cast<int>(n);
    return std::nullopt;
}

SeriesSolution aflp_series_solve(int order, const FunctionalEquation& eq, Complex tau, Complex fb0, Complex fc0) {
    if (order < 2) throw Error(Errc::invalid_argument, "series order must be at least 2");
    if (eq.mu == Complex(0.0) || eq.nu == Complex(0.0))
        throw Error(Errc::invalid_argument, "both splitting coefficients must be nonzero");
    if (fb0 == Complex(0.0) || fc0 == Complex(0.0))
        throw Error(Errc::invalid_argument, "normalizations f(0) must be nonzero");

    const auto size = static_cast<std::size_t>(order) + 1;
    SeriesPoly fa{std::vector<Complex>(size)};
    SeriesPoly fb{std::vector<Complex>(size)};
    SeriesPoly fc{std::vector<Complex>(size)};

    // degree 0: a0 = b0 c0
    fb.coeffs[0] = fb0;
    fc.coeffs[0] = fc0;
    fa.coeffs[0] = fb0 * fc0;
    // degree 1: a1 is free (rate tau); x and y terms give b1 and c1
    fa.coeffs[1] = tau * fa[0];
    fb.coeffs[1] = fa[1] * eq.mu / fc0;
    fc.coeffs[1] = fa[1] * eq.nu / fb0;
    for (int n = 2; n <= order; ++n) {
        // x^1 y^(n-1): a_n n mu nu^(n-1) = b_1 c_(n-1)
        const Complex a_n = fb[1] * fc[n - 1] / (double(n) * eq.mu * ipow(eq.nu, n - 1));
        fa.coeffs[n] = a_n;
        // pure powers x^n and y^n
        fb.coeffs[n] = a_n * ipow(eq.mu, n) / fc0;
        fc.coeffs[n] = a_n * ipow(eq.nu, n) / fb0;
    }

    SeriesSolution out{fa, fb, fc, fa[1] / fa[0], fb[1] / fb[0], fc[1] / fc[0], 0.0, {}};
    out.exponential_deviation =
        std::max({deviation_from_exponential(fa), deviation_from_exponential(fb), deviation_from_exponential(fc)});
    out.residual = functional_residual(fa, fb, fc, eq);
    return out;
}

}  // namespace coherence::splitting
