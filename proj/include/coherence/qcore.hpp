#pragma once

// Finite-dimensional Hilbert-space kernel: labeled spaces, normalized states,
// dense operators, tensor products, Schmidt analysis and the matrix exponential.
//
// Basis ordering is fixed: Fock levels by n ascending, spin levels by m
// ascending from -j, composite spaces row-major with the leftmost factor
// varying slowest.

#include <coherence/errors.hpp>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace coherence {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

/// Entropy (bits) below which a bipartite pure state counts as a product.
inline constexpr double kProductThresholdBits = 1e-9;

/// Angular momentum quantum number, stored as the integer 2j.
class Spin {
public:
    constexpr explicit Spin(int twice_j) : twice_(twice_j) {
        if (twice_j < 0) throw Error(Errc::invalid_argument, "negative spin");
    }
    /// Accepts j = 0, 0.5, 1, ...; anything that is not an exact half-integer throws.
    static Spin from_value(double j);

    constexpr int twice() const noexcept { return twice_; }
    constexpr double value() const noexcept { return 0.5 * twice_; }
    constexpr Index dim() const noexcept { return twice_ + 1; }

    friend constexpr bool operator==(Spin, Spin) = default;
    friend constexpr Spin operator+(Spin a, Spin b) { return Spin(a.twice_ + b.twice_); }

private:
    int twice_;
};

/// One tensor factor: a truncated Fock space (levels 0..N) or a spin-j multiplet.
struct Factor {
    enum class Kind : std::uint8_t { fock, spin };

    Kind kind;
    int label;  // cutoff N for fock, 2j for spin

    static Factor fock(int cutoff);
    static Factor spin(Spin j) { return {Kind::spin, j.twice()}; }

    Index dim() const noexcept { return label + 1; }
    int cutoff() const;
    Spin spin_value() const;

    friend bool operator==(const Factor&, const Factor&) = default;
};

class SpaceDescriptor {
public:
    explicit SpaceDescriptor(std::vector<Factor> factors);

    static SpaceDescriptor fock(int cutoff) { return SpaceDescriptor({Factor::fock(cutoff)}); }
    static SpaceDescriptor spin(Spin j) { return SpaceDescriptor({Factor::spin(j)}); }

    const std::vector<Factor>& factors() const noexcept { return factors_; }
    const Factor& factor(std::size_t k) const { return factors_.at(k); }
    std::size_t num_factors() const noexcept { return factors_.size(); }
    Index dim() const noexcept { return dim_; }

    /// Sub-space spanned by factors [first, last).
    SpaceDescriptor slice(std::size_t first, std::size_t last) const;

    std::string describe() const;

    friend bool operator==(const SpaceDescriptor& a, const SpaceDescriptor& b) {
        return a.factors_ == b.factors_;
    }

private:
    std::vector<Factor> factors_;
    Index dim_;
};

SpaceDescriptor tensor(const SpaceDescriptor& left, const SpaceDescriptor& right);

/// Unit-norm amplitude vector over a labeled basis. Construction always normalizes.
class StateVector {
public:
    StateVector(SpaceDescriptor space, CVector amps);

    static StateVector basis(SpaceDescriptor space, Index index);

    const SpaceDescriptor& space() const noexcept { return space_; }
    const CVector& amps() const noexcept { return amps_; }
    Index dim() const noexcept { return amps_.size(); }
    Complex operator[](Index i) const { return amps_(i); }

private:
    SpaceDescriptor space_;
    CVector amps_;
};

class LinearOperator {
public:
    /// With `hermitian` set, the matrix must satisfy max|M - M^dagger| < 1e-12.
    LinearOperator(SpaceDescriptor space, CMatrix matrix, bool hermitian = false);

    static LinearOperator identity(const SpaceDescriptor& space);

    const SpaceDescriptor& space() const noexcept { return space_; }
    const CMatrix& matrix() const noexcept { return matrix_; }
    bool is_hermitian() const noexcept { return hermitian_; }

    LinearOperator adjoint() const;

private:
    SpaceDescriptor space_;
    CMatrix matrix_;
    bool hermitian_;
};

/// Norm-preserving map from a source space into a (usually composite) target space.
class SplitIsometry {
public:
    SplitIsometry(SpaceDescriptor source, SpaceDescriptor target, CMatrix matrix);

    const SpaceDescriptor& source() const noexcept { return source_; }
    const SpaceDescriptor& target() const noexcept { return target_; }
    const CMatrix& matrix() const noexcept { return matrix_; }

    StateVector apply(const StateVector& s) const;

    /// max |V^dagger V - I|.
    double isometry_defect() const;

private:
    SpaceDescriptor source_;
    SpaceDescriptor target_;
    CMatrix matrix_;
};

struct Moments {
    Complex mean;
    std::optional<double> variance;  // only for Hermitian operators
};

struct SchmidtReport {
    std::vector<double> coefficients;  // descending
    double entropy_bits = 0.0;
    bool is_product = false;
    SpaceDescriptor left_space;
    SpaceDescriptor right_space;
    CMatrix left_vectors;   // columns paired with coefficients
    CMatrix right_vectors;

    /// Rebuilds the amplitude vector from the Schmidt triples.
    CVector reconstruct() const;
};

// Kronecker product, row-major with the left operand varying slowest.
template <typename A, typename B>
Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(const Eigen::MatrixBase<A>& a,
                                                                      const Eigen::MatrixBase<B>& b) {
    Eigen::Matrix<typename A::Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                                          a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Dense matrix exponential (scaling and squaring with Padé approximants).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> expm(const Eigen::MatrixBase<Derived>& m) {
    if (!m.allFinite()) throw Error(Errc::non_finite, "matrix exponential of non-finite matrix");
    Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> dense = m;
    return dense.exp();
}

/// Shannon entropy in bits of the squared coefficients, with 0 log 0 = 0.
double entropy_bits(const std::vector<double>& coefficients);

StateVector tensor_state(const StateVector& u, const StateVector& v);
LinearOperator tensor_operator(const LinearOperator& a, const LinearOperator& b);

/// Lifts an operator on factor `k` of `space` to the whole space.
LinearOperator embed(const LinearOperator& op, const SpaceDescriptor& space, std::size_t k);

CVector apply(const LinearOperator& op, const StateVector& s);
StateVector apply_normalized(const LinearOperator& op, const StateVector& s);

Moments moments(const LinearOperator& op, const StateVector& s);

LinearOperator mat_exp(const LinearOperator& op);

/// Schmidt decomposition across the cut between factors [0, cut) and [cut, n).
SchmidtReport schmidt_cut(const StateVector& s, std::size_t cut);

Complex overlap(const StateVector& u, const StateVector& v);
inline double fidelity(const StateVector& u, const StateVector& v) { return std::abs(overlap(u, v)); }

/// Distance between rays: v is rotated so its phase matches u at u's
/// largest-magnitude amplitude, then ||u - e^{i chi} v|| is returned.
double phase_aligned_distance(const StateVector& u, const StateVector& v);
double phase_aligned_distance(const CVector& u, const CVector& v);

}  // namespace coherence
