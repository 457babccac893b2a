#include <coherence/qcore.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace coherence {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::space_mismatch: return "SpaceMismatch";
        case Errc::zero_vector: return "ZeroVector";
        case Errc::non_finite: return "NonFinite";
        case Errc::not_composite: return "NotComposite";
        case Errc::truncation_too_small: return "TruncationTooSmall";
        case Errc::insufficient_output_cutoff: return "InsufficientOutputCutoff";
        case Errc::invalid_weight: return "InvalidWeight";
        case Errc::antipodal_point: return "AntipodalPoint";
        case Errc::weight_condition_violated: return "WeightConditionViolated";
        case Errc::not_unit: return "NotUnit";
        case Errc::not_two_qubit: return "NotTwoQubit";
        case Errc::strategy_unavailable: return "StrategyUnavailable";
        case Errc::quadrature_failure: return "QuadratureFailure";
        case Errc::step_size_too_large: return "StepSizeTooLarge";
        case Errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

Spin Spin::from_value(double j) {
    const double twice = 2.0 * j;
    const double rounded = std::round(twice);
    if (!std::isfinite(j) || j < 0.0 || std::abs(twice - rounded) > 1e-12)
        throw Error(Errc::invalid_argument, "spin must be a non-negative half-integer");
    return Spin(static_cast<int>(rounded));
}

Factor Factor::fock(int cutoff) {
    if (cutoff < 0) throw Error(Errc::invalid_argument, "negative Fock cutoff");
    return {Kind::fock, cutoff};
}

int Factor::cutoff() const {
    if (kind != Kind::fock) throw Error(Errc::space_mismatch, "factor is not a Fock space");
    return label;
}

Spin Factor::spin_value() const {
    if (kind != Kind::spin) throw Error(Errc::space_mismatch, "factor is not a spin space");
    return Spin(label);
}

SpaceDescriptor::SpaceDescriptor(std::vector<Factor> factors) : factors_(std::move(factors)), dim_(1) {
    if (factors_.empty()) throw Error(Errc::invalid_argument, "space needs at least one factor");
    for (const auto& f : factors_) dim_ *= f.dim();
}

SpaceDescriptor SpaceDescriptor::slice(std::size_t first, std::size_t last) const {
    if (first >= last || last > factors_.size())
        throw Error(Errc::invalid_argument, "empty or out-of-range factor slice");
    return SpaceDescriptor(std::vector<Factor>(factors_.begin() + static_cast<std::ptrdiff_t>(first),
                                               factors_.begin() + static_cast<std::ptrdiff_t>(last)));
}

std::string SpaceDescriptor::describe() const {
    std::ostringstream out;
    for (std::size_t k = 0; k < factors_.size(); ++k) {
        if (k) out << " x ";
        const auto& f = factors_[k];
        if (f.kind == Factor::Kind::fock)
            out << "fock(N=" << f.label << ")";
        else if (f.label % 2 == 0)
            out << "spin(j=" << f.label / 2 << ")";
        else
            out << "spin(j=" << f.label << "/2)";
    }
    return out.str();
}

SpaceDescriptor tensor(const SpaceDescriptor& left, const SpaceDescriptor& right) {
    auto factors = left.factors();
    factors.insert(factors.end(), right.factors().begin(), right.factors().end());
    return SpaceDescriptor(std::move(factors));
}

StateVector::StateVector(SpaceDescriptor space, CVector amps) : space_(std::move(space)), amps_(std::move(amps)) {
    if (amps_.size() != space_.dim())
        throw Error(Errc::space_mismatch, "amplitude count does not match space dimension");
    if (!amps_.allFinite()) throw Error(Errc::non_finite, "non-finite amplitude");
    const double norm = amps_.norm();
    if (norm == 0.0) throw Error(Errc::zero_vector, "cannot normalize a null vector");
    amps_ /= norm;
}

StateVector StateVector::basis(SpaceDescriptor space, Index index) {
    if (index < 0 || index >= space.dim()) throw Error(Errc::invalid_argument, "basis index out of range");
    CVector amps = CVector::Zero(space.dim());
    amps(index) = 1.0;
    return StateVector(std::move(space), std::move(amps));
}

LinearOperator::LinearOperator(SpaceDescriptor space, CMatrix matrix, bool hermitian)
    : space_(std::move(space)), matrix_(std::move(matrix)), hermitian_(hermitian) {
    if (matrix_.rows() != space_.dim() || matrix_.cols() != space_.dim())
        throw Error(Errc::space_mismatch, "operator shape does not match space dimension");
    if (hermitian_ && (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff() >= 1e-12)
        throw Error(Errc::invalid_argument, "operator flagged Hermitian is not");
}

LinearOperator LinearOperator::identity(const SpaceDescriptor& space) {
    return LinearOperator(space, CMatrix::Identity(space.dim(), space.dim()), true);
}

LinearOperator LinearOperator::adjoint() const { return LinearOperator(space_, matrix_.adjoint(), hermitian_); }

SplitIsometry::SplitIsometry(SpaceDescriptor source, SpaceDescriptor target, CMatrix matrix)
    : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
        throw Error(Errc::space_mismatch, "isometry shape does not match its spaces");
}

StateVector SplitIsometry::apply(const StateVector& s) const {
    if (!(s.space() == source_)) throw Error(Errc::space_mismatch, "state is not on the isometry source space");
    return StateVector(target_, matrix_ * s.amps());
}

double SplitIsometry::isometry_defect() const {
    const CMatrix gram = matrix_.adjoint() * matrix_;
    return (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

CVector SchmidtReport::reconstruct() const {
    CMatrix block = CMatrix::Zero(left_space.dim(), right_space.dim());
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
        const auto col = static_cast<Index>(k);
        block += coefficients[k] * left_vectors.col(col) * right_vectors.col(col).transpose();
    }
    // row-major flattening: index = row * dim_right + col
    CVector amps(block.size());
    for (Index r = 0; r < block.rows(); ++r)
        for (Index c = 0; c < block.cols(); ++c) amps(r * block.cols() + c) = block(r, c);
    return amps;
}

double entropy_bits(const std::vector<double>& coefficients) {
    double h = 0.0;
    for (double c : coefficients) {
        const double p = c * c;
        if (p > 0.0) h -= p * std::log2(p);
    }
    return std::max(h, 0.0);
}

StateVector tensor_state(const StateVector& u, const StateVector& v) {
    CVector amps(u.dim() * v.dim());
    for (Index i = 0; i < u.dim(); ++i) amps.segment(i * v.dim(), v.dim()) = u[i] * v.amps();
    return StateVector(tensor(u.space(), v.space()), std::move(amps));
}

LinearOperator tensor_operator(const LinearOperator& a, const LinearOperator& b) {
    return LinearOperator(tensor(a.space(), b.space()), kron(a.matrix(), b.matrix()),
                          a.is_hermitian() && b.is_hermitian());
}

LinearOperator embed(const LinearOperator& op, const SpaceDescriptor& space, std::size_t k) {
    if (k >= space.num_factors() || !(op.space() == space.slice(k, k + 1)))
        throw Error(Errc::space_mismatch, "operator does not act on the requested factor");
    Index left = 1;
    Index right = 1;
    for (std::size_t i = 0; i < k; ++i) left *= space.factor(i).dim();
    for (std::size_t i = k + 1; i < space.num_factors(); ++i) right *= space.factor(i).dim();
    CMatrix m = kron(kron(CMatrix::Identity(left, left), op.matrix()), CMatrix::Identity(right, right));
    return LinearOperator(space, std::move(m), op.is_hermitian());
}

CVector apply(const LinearOperator& op, const StateVector& s) {
    if (!(op.space() == s.space())) throw Error(Errc::space_mismatch, "operator and state live on different spaces");
    return op.matrix() * s.amps();
}

StateVector apply_normalized(const LinearOperator& op, const StateVector& s) {
    return StateVector(s.space(), apply(op, s));
}

Moments moments(const LinearOperator& op, const StateVector& s) {
    const CVector image = apply(op, s);
    Moments out{s.amps().dot(image), std::nullopt};
    if (op.is_hermitian()) {
        // <A^2> = ||A psi||^2 for Hermitian A
        out.variance = image.squaredNorm() - std::norm(out.mean);
    }
    return out;
}

LinearOperator mat_exp(const LinearOperator& op) { return LinearOperator(op.space(), expm(op.matrix())); }

SchmidtReport schmidt_cut(const StateVector& s, std::size_t cut) {
    const auto& space = s.space();
    if (space.num_factors() < 2) throw Error(Errc::not_composite, "Schmidt cut needs a composite space");
    if (cut == 0 || cut >= space.num_factors())
        throw Error(Errc::not_composite, "cut must leave both groups nonempty");

    SpaceDescriptor left = space.slice(0, cut);
    SpaceDescriptor right = space.slice(cut, space.num_factors());
    CMatrix block(left.dim(), right.dim());
    for (Index r = 0; r < left.dim(); ++r)
        for (Index c = 0; c < right.dim(); ++c) block(r, c) = s[r * right.dim() + c];

    Eigen::JacobiSVD<CMatrix> svd(block, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    std::vector<double> coefficients(sv.data(), sv.data() + sv.size());
    const double h = entropy_bits(coefficients);
    // psi = sum_k c_k u_k (x) conj(v_k)
    CMatrix right_vectors = svd.matrixV().conjugate();
    return SchmidtReport{std::move(coefficients), h,         h < kProductThresholdBits, std::move(left),
                         std::move(right),        svd.matrixU(), std::move(right_vectors)};
}

Complex overlap(const StateVector& u, const StateVector& v) {
    if (!(u.space() == v.space())) throw Error(Errc::space_mismatch, "overlap of states on different spaces");
    return u.amps().dot(v.amps());
}

double phase_aligned_distance(const CVector& u, const CVector& v) {
    if (u.size() != v.size()) throw Error(Errc::space_mismatch, "vectors of different length");
    Index k = 0;
    u.cwiseAbs().maxCoeff(&k);
    const double mag = std::abs(v(k));
    const Complex rotation = mag > 0.0 ? (u(k) / std::abs(u(k))) / (v(k) / mag) : Complex(1.0);
    return (u - rotation * v).norm();
}

double phase_aligned_distance(const StateVector& u, const StateVector& v) {
    if (!(u.space() == v.space())) throw Error(Errc::space_mismatch, "distance between states on different spaces");
    return phase_aligned_distance(u.amps(), v.amps());
}

}  // namespace coherence
