#pragma once

// Single-mode oscillator on a truncated Fock space: ladder and quadrature
// operators, displacement, Glauber coherent states and beamsplitter splitting.

#include <coherence/qcore.hpp>

namespace coherence::fock {

struct LadderOps {
    LinearOperator a;
    LinearOperator adag;
};

struct QuadratureOps {
    LinearOperator q;
    LinearOperator p;
};

/// Beamsplitter mode relation a_A^dagger = mu a_B^dagger + nu a_C^dagger.
class SplitSpec {
public:
    /// Requires |mu|^2 + |nu|^2 = 1 within 1e-12.
    SplitSpec(Complex mu, Complex nu);

    /// mu = cos t, nu = sin t e^{i phi}.
    static SplitSpec from_angles(double t, double phi);
    static SplitSpec balanced() { return from_angles(0.25 * 3.14159265358979323846, 0.0); }

    Complex mu() const noexcept { return mu_; }
    Complex nu() const noexcept { return nu_; }

private:
    Complex mu_;
    Complex nu_;
};

/// Smallest cutoff satisfying N >= |alpha|^2 + 12 sqrt(|alpha|^2 + 1).
int minimum_cutoff(Complex alpha);

/// Throws TruncationTooSmall when (alpha, N) violates the tail criterion.
void require_tail(Complex alpha, int cutoff);

/// Probability mass of the untruncated coherent state beyond level N.
double tail_mass(Complex alpha, int cutoff);

LadderOps ladder_ops(int cutoff);
QuadratureOps quadrature_ops(int cutoff);
LinearOperator number_op(int cutoff);

/// exp(alpha a^dagger - conj(alpha) a) on the truncated space.
LinearOperator displacement(Complex alpha, int cutoff);

/// Amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!), renormalized after truncation.
StateVector glauber_cs(Complex alpha, int cutoff);

StateVector number_state(int n, int cutoff);

struct GlauberFit {
    Complex alpha;
    double fidelity;  // |<alpha|psi>| with the truncated, renormalized |alpha>
    StateVector nearest;
};

/// Nearest truncated coherent state by maximizing the overlap over alpha,
/// starting from <a>. The tail criterion is not enforced here.
GlauberFit fit_glauber_cs(const StateVector& s);

/// V|n> = (mu b^dagger + nu c^dagger)^n / sqrt(n!) |0,0>, each output mode cut at `output_cutoff`.
SplitIsometry beamsplit_isometry(const SplitSpec& spec, int input_cutoff, int output_cutoff);

/// Splits a single-mode state; both outputs keep the input cutoff so the image is exact.
StateVector split_fock(const StateVector& s, const SplitSpec& spec);

}  // namespace coherence::fock
