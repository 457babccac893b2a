#pragma once

// Factorization analysis of split states, the order-by-order solver for the
// splitting functional equation, and randomized uniqueness scans.

#include <coherence/fock.hpp>
#include <coherence/qcore.hpp>

#include <cstdint>
#include <optional>
#include <vector>

namespace coherence::splitting {

struct FactorizationReport {
    double entropy_bits;
    bool is_product;
    std::optional<StateVector> factor_b;  // populated only for products
    std::optional<StateVector> factor_c;
    double residual;  // || s - factor_b (x) factor_c ||, or the best rank-1 error otherwise
};

/// Top Schmidt coefficient at or above this counts as a product for factor extraction.
inline constexpr double kLeadingCoefficientFloor = 1.0 - 1e-10;

FactorizationReport factorization_report(const StateVector& s);

// ---- functional equation f_A(mu x + nu y) = f_B(x) f_C(y) ------------------

/// Truncated one-variable power series sum_k c_k x^k.
struct SeriesPoly {
    std::vector<Complex> coeffs;

    /// f0 * exp(tau x) up to x^order.
    static SeriesPoly exponential(Complex f0, Complex tau, int order);

    int order() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex operator[](std::size_t k) const { return coeffs.at(k); }
};

/// mu = nu = 1 is the semisimple case (E_A = E_B + E_C); general mu, nu the
/// beamsplitter case.
struct FunctionalEquation {
    Complex mu{1.0, 0.0};
    Complex nu{1.0, 0.0};

    static FunctionalEquation semisimple() { return {}; }
    static FunctionalEquation beamsplitter(const fock::SplitSpec& spec) { return {spec.mu(), spec.nu()}; }
};

/// Per total degree n, the largest |coefficient of x^p y^(n-p)| in
/// f_A(mu x + nu y) - f_B(x) f_C(y).
std::vector<double> functional_residual(const SeriesPoly& fa, const SeriesPoly& fb, const SeriesPoly& fc,
                                        const FunctionalEquation& eq);

/// Lowest degree whose residual exceeds `tol`, if any.
std::optional<int> first_violation_order(const SeriesPoly& fa, const SeriesPoly& fb, const SeriesPoly& fc,
                                         const FunctionalEquation& eq, double tol);

struct SeriesSolution {
    SeriesPoly fa;
    SeriesPoly fb;
    SeriesPoly fc;
    Complex tau_a;  // first-order rates c_1 / c_0
    Complex tau_b;
    Complex tau_c;
    double exponential_deviation;     // max_k |c_k - c_0 tau^k / k!| over the three series
    std::vector<double> residual;     // functional_residual of the solved triple
};

/// Solves the equation order by order from the free data (f_B(0), f_C(0), tau):
/// f_A(0) = f_B(0) f_C(0), the first-order terms fix the rates, and the
/// mixed monomial x y^(n-1) fixes each higher coefficient of f_A. All other
/// monomials are then consistency conditions, reported in `residual`.
SeriesSolution aflp_series_solve(int order, const FunctionalEquation& eq, Complex tau, Complex fb0 = 1.0,
                                 Complex fc0 = 1.0);

// ---- uniqueness scans --------------------------------------------------------

struct ScanSystem {
    enum class Kind { fock, spin };
    Kind kind;
    int cutoff = 0;       // fock
    Spin jb{1};           // spin
    Spin jc{1};

    static ScanSystem fock(int cutoff) { return {Kind::fock, cutoff, Spin(1), Spin(1)}; }
    static ScanSystem spin(Spin jb, Spin jc) { return {Kind::spin, 0, jb, jc}; }

    Spin ja() const { return jb + jc; }
    std::string describe() const;
};

struct ScanStats {
    ScanSystem system;
    std::size_t n_samples;
    std::uint64_t seed;
    double min_entropy_non_cs;   // +inf when every sample was excluded
    double cs_max_entropy;
    std::size_t n_non_cs;
    std::size_t n_excluded;      // samples within the CS guard band
    double min_cs_distance;      // over all random samples
};

/// Random samples closer than this (phase-aligned) to their fitted CS are not counted as non-CS.
inline constexpr double kCsGuardBand = 1e-6;

/// Haar samples split and classified; CS drawn on a fixed parameter grid.
/// Each sample uses its own counter-based stream, so the result does not
/// depend on `threads`.
ScanStats uniqueness_scan(const ScanSystem& system, std::size_t n_samples, std::uint64_t seed,
                          unsigned threads = 0);

}  // namespace coherence::splitting
