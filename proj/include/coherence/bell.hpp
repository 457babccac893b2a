#pragma once

// CHSH correlations on bipartite pure states: dichotomic observables, the
// CHSH value for given settings, the two-qubit analytic maximum, and a
// multistart numerical maximizer for arbitrary local dimensions.
//
// Observable B acts on the first tensor factor, C on the second:
//   S = <C(r) B(s)> + <C(r) B(s')> + <C(r') B(s)> - <C(r') B(s')>.

#include <coherence/qcore.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace coherence::bell {

/// B = U diag(signs) U^dagger.
struct UnitarySigns {
    CMatrix unitary;
    std::vector<int> signs;
};

class DichotomicObservable {
public:
    using Parameterization = std::variant<Eigen::Vector3d, UnitarySigns>;

    DichotomicObservable(LinearOperator op, Parameterization param);

    static DichotomicObservable from_unitary(const SpaceDescriptor& space, CMatrix unitary, std::vector<int> signs);

    const LinearOperator& op() const noexcept { return op_; }
    const Parameterization& parameterization() const noexcept { return param_; }

    /// (theta, phi) of a qubit direction, or the flattened signs otherwise.
    std::vector<double> angles() const;

private:
    LinearOperator op_;
    Parameterization param_;
};

struct ChshSettings {
    DichotomicObservable b;
    DichotomicObservable b_prime;
    DichotomicObservable c;
    DichotomicObservable c_prime;
};

/// n . sigma on a two-level factor (spin-1/2 by default), sigma = 2J, basis
/// m-ascending. Throws NotUnit unless |n| = 1 within 1e-12.
DichotomicObservable qubit_observable(const Eigen::Vector3d& n, const SpaceDescriptor& space = SpaceDescriptor::spin(Spin(1)));
DichotomicObservable qubit_observable(double theta, double phi,
                                      const SpaceDescriptor& space = SpaceDescriptor::spin(Spin(1)));

/// Pauli matrices (x, y, z) in the m-ascending basis.
std::array<CMatrix, 3> pauli();

double chsh_value(const StateVector& s, const ChshSettings& settings);

/// T_kl = <sigma_k (x) sigma_l>. Throws NotTwoQubit.
Eigen::Matrix3d correlation_matrix(const StateVector& s);

/// 2 sqrt(t1^2 + t2^2) from the two largest singular values of T.
double horodecki_max(const StateVector& s);

enum class Strategy { analytic_qubit, multistart };

struct MultistartOptions {
    int n_starts = 32;
    std::uint64_t seed = 0;
    double tol = 1e-7;
    unsigned threads = 0;
};

struct ChshResult {
    double max_value;
    std::optional<ChshSettings> settings;
    Strategy strategy;
    int n_starts;          // 0 for the analytic route
    std::uint64_t seed;
};

/// Analytic route only for two qubits (StrategyUnavailable otherwise).
/// The numerical route searches the B-side observables with Nelder-Mead from
/// seeded random starts; for fixed B, B' the best C, C' follow in closed form
/// from the reduced correlation operators.
ChshResult chsh_maximize(const StateVector& s, Strategy strategy, const MultistartOptions& options = {});

bool is_qubit(const Factor& f);

}  // namespace coherence::bell
