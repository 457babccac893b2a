#pragma once

// Time evolution under Hamiltonians linear in the group generators:
//   oscillator  H(t) = omega a^dagger a + lambda(t) a^dagger + conj(lambda(t)) a
//   spin        H = beta0 J0 + beta+ J+ + beta- J-,  beta- = conj(beta+)
// Stepping uses the exponential midpoint rule, so every step is unitary.

#include <coherence/qcore.hpp>
#include <coherence/spin.hpp>

#include <string>
#include <variant>
#include <vector>

namespace coherence::dynamics {

struct ConstantDrive {
    Complex lambda;
};

/// lambda(t) = amplitude * e^{-i frequency t}.
struct RotatingDrive {
    Complex amplitude;
    double frequency;
};

/// lambda(t) = amplitude * cos(frequency t).
struct CosineDrive {
    Complex amplitude;
    double frequency;
};

/// Linear interpolation between samples; evaluation outside the table throws.
struct SampledDrive {
    std::vector<double> times;
    std::vector<Complex> values;
};

class DriveSpec {
public:
    using Shape = std::variant<ConstantDrive, RotatingDrive, CosineDrive, SampledDrive>;

    /// Requires omega > 0 and finite drive data.
    DriveSpec(double omega, Shape shape);

    double omega() const noexcept { return omega_; }
    const Shape& shape() const noexcept { return shape_; }

    Complex lambda(double t) const;

    /// Kinks of a sampled drive inside (0, t); empty for smooth shapes.
    std::vector<double> breakpoints(double t) const;

private:
    double omega_;
    Shape shape_;
};

struct AlphaEta {
    Complex alpha;  // -i e^{-i omega t} int_0^t lambda(tau) e^{i omega tau} dtau
    double eta;     // -omega t / 2 - int_0^t Re[conj(lambda) alpha] dtau
};

/// Coherent amplitude and phase of the vacuum-started driven solution, by
/// adaptive Gauss-Kronrod quadrature (tolerance 1e-10).
AlphaEta alpha_eta_of_t(const DriveSpec& drive, double t);

LinearOperator fock_hamiltonian(const DriveSpec& drive, double t, int cutoff);

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<Complex> alpha_track;       // <a>
    std::vector<Complex> alpha_quadrature;  // (<q> + i <p>) / sqrt(2)
    std::vector<double> eta_track;          // unwrapped arg <alpha_track|psi>
    std::vector<double> cs_fidelity;        // |<alpha_track|psi>|
};

/// Default step (2 pi / omega) / 400.
double default_step(double omega);

/// Integrates from t_grid.front() with at most `max_step` per step (0 = default).
/// Throws TruncationTooSmall if the expected amplitude outgrows the cutoff and
/// StepSizeTooLarge if the norm drifts by more than 1e-8.
Trajectory evolve_fock(const DriveSpec& drive, const std::vector<double>& t_grid, int cutoff,
                       const StateVector& initial, double max_step = 0.0);

struct CsOverlap {
    double fidelity;
    Complex overlap;  // <alpha_ref|state>, phase included
};

CsOverlap cs_fidelity(const StateVector& state, Complex alpha_ref);

/// Which vacuum-energy convention reproduces the numerically observed phase.
struct EtaConventionReport {
    double rate_offset;          // fitted c in eta_numeric - eta_drive = c * omega t
    std::string convention;      // "omega*adag*a" (c = 0) or "omega*(adag*a+1/2)" (c = -1/2)
    double max_residual;         // after removing the fitted rate
    bool matches_closed_form;    // eta_numeric agrees with alpha_eta_of_t's eta within 1e-6
};

/// Compares a vacuum-started trajectory's phase against the quadrature phase.
EtaConventionReport eta_convention(const Trajectory& trajectory, const DriveSpec& drive);

struct LinearSpinHamiltonian {
    double beta0 = 0.0;
    Complex beta_plus{0.0, 0.0};
    Complex beta_minus{0.0, 0.0};

    static LinearSpinHamiltonian precession(double omega) { return {omega, 0.0, 0.0}; }
    /// Omega (J+ + J-) / 2.
    static LinearSpinHamiltonian rabi(double rabi_frequency) {
        return {0.0, 0.5 * rabi_frequency, 0.5 * rabi_frequency};
    }

    /// Throws unless beta- = conj(beta+) within 1e-12.
    LinearOperator matrix(Spin j) const;
    /// Angular frequency of the induced rotation, sqrt(beta0^2 + 4 |beta+|^2).
    double rate() const;
};

struct SpinTrajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
    std::vector<Complex> zeta_track;  // NaN at the antipode
    std::vector<spin::SphereAngles> angles;
    std::vector<double> cs_fidelity;
};

SpinTrajectory evolve_spin(const LinearSpinHamiltonian& h, Spin j, const std::vector<double>& t_grid,
                           const StateVector& initial, double max_step = 0.0);

}  // namespace coherence::dynamics
