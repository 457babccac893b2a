#pragma once

// SU(2) instance: spin-j generators, canonical basis via repeated raising,
// spin coherent states (closed form, angle form and coset exponential) and
// the stretched angular-momentum addition j_A = j_B + j_C.

#include <coherence/qcore.hpp>

#include <variant>

namespace coherence::spin {

struct SpinOps {
    LinearOperator j0;
    LinearOperator jplus;
    LinearOperator jminus;
};

/// Point on the sphere; theta in [0, pi], phi in [0, 2 pi).
struct SphereAngles {
    double theta = 0.0;
    double phi = 0.0;
};

/// Coherent-state label: either the stereographic coordinate zeta or the angles.
/// The antipodal state theta = pi only exists in the angle form.
struct SpinCsParams {
    Spin j;
    std::variant<Complex, SphereAngles> label;
};

SpinOps spin_ops(Spin j);

/// J^2 = J0^2 + (J+ J- + J- J+) / 2.
LinearOperator casimir(Spin j);

/// Canonical |j, m> built as binom(2j, j+m)^{-1/2} (J+)^{j+m} / (j+m)! |j, -j>.
/// `twice_m` is 2m.
StateVector basis_state(Spin j, int twice_m);

StateVector lowest_state(Spin j);

/// (1 + |zeta|^2)^{-j} exp(zeta J+) |j, -j>.
StateVector spin_cs(Spin j, Complex zeta);
StateVector spin_cs(Spin j, const SphereAngles& angles);
StateVector spin_cs(const SpinCsParams& params);

/// exp(xi J+ - conj(xi) J-) |j, -j> via the matrix exponential.
StateVector spin_cs_exp(Spin j, Complex xi);

/// zeta = -tan(theta/2) e^{-i phi}. Throws AntipodalPoint at theta = pi.
Complex angle_to_zeta(double theta, double phi);

/// Inverse of angle_to_zeta, with phi wrapped into [0, 2 pi).
SphereAngles zeta_to_angles(Complex zeta);

/// xi = -(theta/2) e^{-i phi}.
Complex angle_to_xi(double theta, double phi);

/// zeta = (xi/|xi|) tan|xi|.
Complex xi_to_zeta(Complex xi);

/// Isometry from spin j_B + j_C into spin-j_B (x) spin-j_C, built by raising
/// the product of lowest-weight states.
SplitIsometry addition_isometry(Spin jb, Spin jc);

/// Throws WeightConditionViolated unless the state's spin equals jb + jc.
StateVector split_spin(const StateVector& s, Spin jb, Spin jc);

struct CsFit {
    SphereAngles angles;
    Complex zeta;          // NaN when the fit lands on the antipode
    double fidelity;       // max over the sphere of |<j, n|psi>|
    StateVector nearest;
};

/// Nearest spin coherent state by maximizing the overlap over (theta, phi).
/// `warm_start` seeds the local search; a coarse grid and the <J> direction
/// are always tried as well.
CsFit fit_spin_cs(const StateVector& s, const SphereAngles* warm_start = nullptr);

}  // namespace coherence::spin
