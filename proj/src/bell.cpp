#include <coherence/bell.hpp>
#include <coherence/optimize.hpp>
#include <coherence/parallel.hpp>
#include <coherence/random.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace coherence::bell {

namespace {

constexpr double kPi = std::numbers::pi;

CMatrix amplitude_block(const StateVector& s) {
    const Index rows = s.space().factor(0).dim();
    const Index cols = s.space().factor(1).dim();
    CMatrix psi(rows, cols);
    for (Index r = 0; r < rows; ++r)
        for (Index c = 0; c < cols; ++c) psi(r, c) = s[r * cols + c];
    return psi;
}

void require_bipartite(const StateVector& s) {
    if (s.space().num_factors() != 2) throw Error(Errc::not_composite, "CHSH needs a two-factor state");
}

Eigen::Vector3d direction(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

CMatrix direction_matrix(const Eigen::Vector3d& n) {
    const auto s = pauli();
    return n(0) * s[0] + n(1) * s[1] + n(2) * s[2];
}

CMatrix hermitian_from(const double* x, Index d) {
    CMatrix h = CMatrix::Zero(d, d);
    std::size_t at = 0;
    for (Index i = 0; i < d; ++i) h(i, i) = x[at++];
    for (Index i = 0; i < d; ++i)
        for (Index j = i + 1; j < d; ++j) {
            h(i, j) = Complex(x[at], x[at + 1]);
            h(j, i) = std::conj(h(i, j));
            at += 2;
        }
    return h;
}

std::vector<int> sign_pattern(Index d, Index plus) {
    std::vector<int> signs(static_cast<std::size_t>(d), -1);
    for (Index i = 0; i < plus; ++i) signs[static_cast<std::size_t>(i)] = 1;
    return signs;
}

// Balanced sign counts for a d-level observable: floor(d/2) and ceil(d/2) plus-ones.
std::vector<Index> balanced_counts(Index d) {
    if (d % 2 == 0) return {d / 2};
    return {d / 2, d / 2 + 1};
}

// Local search over the B-side pair for a fixed sign assignment.
class BSide {
public:
    BSide(const Factor& f, Index plus_b, Index plus_bp) : qubit_(is_qubit(f)), d_(f.dim()), plus_{plus_b, plus_bp} {}

    Index num_params() const { return qubit_ ? 4 : 2 * d_ * d_; }

    Eigen::VectorXd random_start(CounterRng& rng) const {
        Eigen::VectorXd x(num_params());
        if (qubit_) {
            for (int k = 0; k < 2; ++k) {
                x(2 * k) = std::acos(2.0 * rng.uniform() - 1.0);
                x(2 * k + 1) = 2.0 * kPi * rng.uniform();
            }
        } else {
            for (Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
        }
        return x;
    }

    DichotomicObservable observable(const Eigen::VectorXd& x, int which, const SpaceDescriptor& space) const {
        if (qubit_) return qubit_observable(x(2 * which), x(2 * which + 1), space);
        const CMatrix u = expm(kI * hermitian_from(x.data() + which * d_ * d_, d_));
        return DichotomicObservable::from_unitary(space, u, sign_pattern(d_, plus_[which]));
    }

    std::pair<CMatrix, CMatrix> matrices(const Eigen::VectorXd& x) const {
        if (qubit_)
            return {direction_matrix(direction(x(0), x(1))), direction_matrix(direction(x(2), x(3)))};
        std::array<CMatrix, 2> out;
        for (int which = 0; which < 2; ++which) {
            const CMatrix u = expm(kI * hermitian_from(x.data() + which * d_ * d_, d_));
            Eigen::VectorXd diag(d_);
            for (Index i = 0; i < d_; ++i) diag(i) = i < plus_[which] ? 1.0 : -1.0;
            out[which] = u * diag.asDiagonal() * u.adjoint();
        }
        return {out[0], out[1]};
    }

private:
    bool qubit_;
    Index d_;
    std::array<Index, 2> plus_;
};

// Best C for <psi| X (x) C |psi> = Tr(R C^T), R = Psi^dagger X Psi.
class CSide {
public:
    CSide(const Factor& f, SpaceDescriptor space) : qubit_(is_qubit(f)), d_(f.dim()), space_(std::move(space)) {}

    double value(const CMatrix& r) const {
        if (qubit_) return qubit_vector(r).norm();
        const Eigen::SelfAdjointEigenSolver<CMatrix> eig(r.transpose());
        double best = -std::numeric_limits<double>::infinity();
        for (Index plus : balanced_counts(d_)) best = std::max(best, pattern_value(eig.eigenvalues(), plus));
        return best;
    }

    DichotomicObservable best(const CMatrix& r) const {
        if (qubit_) {
            Eigen::Vector3d v = qubit_vector(r);
            const double len = v.norm();
            return qubit_observable(len > 0.0 ? Eigen::Vector3d(v / len) : Eigen::Vector3d::UnitZ(), space_);
        }
        const Eigen::SelfAdjointEigenSolver<CMatrix> eig(r.transpose());
        Index best_plus = balanced_counts(d_).front();
        for (Index plus : balanced_counts(d_))
            if (pattern_value(eig.eigenvalues(), plus) > pattern_value(eig.eigenvalues(), best_plus)) best_plus = plus;
        // eigenvalues ascending: the largest best_plus get +1
        CMatrix u = eig.eigenvectors().rowwise().reverse();
        return DichotomicObservable::from_unitary(space_, std::move(u), sign_pattern(d_, best_plus));
    }

private:
    static double pattern_value(const Eigen::VectorXd& ascending, Index plus) {
        const Index n = ascending.size();
        return ascending.tail(plus).sum() - ascending.head(n - plus).sum();
    }

    static Eigen::Vector3d qubit_vector(const CMatrix& r) {
        const auto s = pauli();
        Eigen::Vector3d v;
        for (int l = 0; l < 3; ++l) v(l) = (r.array() * s[l].array()).sum().real();
        return v;
    }

    bool qubit_;
    Index d_;
    SpaceDescriptor space_;
};

ChshResult analytic(const StateVector& s) {
    const Eigen::Matrix3d t = correlation_matrix(s);
    const Eigen::JacobiSVD<Eigen::Matrix3d> svd(t, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double value = 2.0 * std::hypot(sv(0), sv(1));

    // c, c' = cos(a) e1 +- sin(a) e2 with tan(a) = t2/t1; b, b' = u1, u2.
    const double angle = std::atan2(sv(1), sv(0));
    const Eigen::Vector3d e1 = svd.matrixV().col(0);
    const Eigen::Vector3d e2 = svd.matrixV().col(1);
    const auto space_b = s.space().slice(0, 1);
    const auto space_c = s.space().slice(1, 2);
    ChshSettings settings{qubit_observable(Eigen::Vector3d(svd.matrixU().col(0)), space_b),
                          qubit_observable(Eigen::Vector3d(svd.matrixU().col(1)), space_b),
                          qubit_observable(Eigen::Vector3d(std::cos(angle) * e1 + std::sin(angle) * e2), space_c),
                          qubit_observable(Eigen::Vector3d(std::cos(angle) * e1 - std::sin(angle) * e2), space_c)};
    return {value, std::move(settings), Strategy::analytic_qubit, 0, 0};
}

ChshResult multistart(const StateVector& s, const MultistartOptions& opts) {
    if (opts.n_starts < 1) throw Error(Errc::invalid_argument, "multistart needs at least one start");
    const CMatrix psi = amplitude_block(s);
    const Factor& fb = s.space().factor(0);
    const auto space_b = s.space().slice(0, 1);
    const CSide c_side(s.space().factor(1), s.space().slice(1, 2));

    std::vector<std::pair<Index, Index>> combos;
    if (is_qubit(fb)) {
        combos.emplace_back(1, 1);
    } else {
        for (Index pb : balanced_counts(fb.dim()))
            for (Index pbp : balanced_counts(fb.dim())) combos.emplace_back(pb, pbp);
    }

    struct StartResult {
        double value;
        Eigen::VectorXd x;
        std::size_t combo;
    };
    std::vector<StartResult> results(static_cast<std::size_t>(opts.n_starts));

    parallel_for(results.size(), opts.threads, [&](std::size_t start) {
        const std::size_t combo = start % combos.size();
        const BSide b_side(fb, combos[combo].first, combos[combo].second);
        auto objective = [&](const Eigen::VectorXd& x) {
            const auto [b, bp] = b_side.matrices(x);
            const CMatrix sum = psi.adjoint() * (b + bp) * psi;
            const CMatrix diff = psi.adjoint() * (b - bp) * psi;
            return -(c_side.value(sum) + c_side.value(diff));
        };
        CounterRng rng(opts.seed, start);
        optimize::NelderMeadOptions nm;
        nm.initial_step = 0.3;
        nm.ftol = std::min(opts.tol, 1e-9) * 1e-3;
        nm.xtol = 1e-8;
        nm.max_evaluations = 40000;
        nm.restarts = 3;
        const auto found = optimize::nelder_mead(objective, b_side.random_start(rng), nm);
        results[start] = {-found.value, found.x, combo};
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value > results[best].value) best = i;

    const auto& winner = results[best];
    const BSide b_side(fb, combos[winner.combo].first, combos[winner.combo].second);
    const auto [b, bp] = b_side.matrices(winner.x);
    ChshSettings settings{b_side.observable(winner.x, 0, space_b), b_side.observable(winner.x, 1, space_b),
                          c_side.best(psi.adjoint() * (b + bp) * psi), c_side.best(psi.adjoint() * (b - bp) * psi)};
    const double value = chsh_value(s, settings);
    return {value, std::move(settings), Strategy::multistart, opts.n_starts, opts.seed};
}

}  // namespace

bool is_qubit(const Factor& f) { return f.dim() == 2; }

DichotomicObservable::DichotomicObservable(LinearOperator op, Parameterization param)
    : op_(std::move(op)), param_(std::move(param)) {
    const CMatrix& m = op_.matrix();
    if ((m * m - CMatrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw Error(Errc::invalid_argument, "dichotomic observable must square to the identity");
}

DichotomicObservable DichotomicObservable::from_unitary(const SpaceDescriptor& space, CMatrix unitary,
                                                        std::vector<int> signs) {
    if (static_cast<Index>(signs.size()) != space.dim() || unitary.rows() != space.dim())
        throw Error(Errc::space_mismatch, "unitary or sign pattern does not match the factor dimension");
    Eigen::VectorXd diag(space.dim());
    for (Index i = 0; i < diag.size(); ++i) {
        const int sgn = signs[static_cast<std::size_t>(i)];
        if (sgn != 1 && sgn != -1) throw Error(Errc::invalid_argument, "signs must be +1 or -1");
        diag(i) = sgn;
    }
    CMatrix m = unitary * diag.asDiagonal() * unitary.adjoint();
    m = (0.5 * (m + m.adjoint())).eval();
    return DichotomicObservable(LinearOperator(space, std::move(m), true),
                                UnitarySigns{std::move(unitary), std::move(signs)});
}

std::vector<double> DichotomicObservable::angles() const {
    if (const auto* n = std::get_if<Eigen::Vector3d>(&param_)) {
        const double theta = std::acos(std::clamp((*n)(2), -1.0, 1.0));
        double phi = std::atan2((*n)(1), (*n)(0));
        if (phi < 0.0) phi += 2.0 * kPi;
        return {theta, phi};
    }
    const auto& us = std::get<UnitarySigns>(param_);
    return std::vector<double>(us.signs.begin(), us.signs.end());
}

std::array<CMatrix, 3> pauli() {
    CMatrix x(2, 2), y(2, 2), z(2, 2);
    // m-ascending basis (down, up): sigma = 2J
    x << 0.0, 1.0, 1.0, 0.0;
    y << 0.0, kI, -kI, 0.0;
    z << -1.0, 0.0, 0.0, 1.0;
    return {x, y, z};
}

DichotomicObservable qubit_observable(const Eigen::Vector3d& n, const SpaceDescriptor& space) {
    if (std::abs(n.norm() - 1.0) > 1e-12) throw Error(Errc::not_unit, "measurement direction must be a unit vector");
    if (space.num_factors() != 1 || !is_qubit(space.factor(0)))
        throw Error(Errc::space_mismatch, "qubit observable needs a two-level factor");
    CMatrix m = direction_matrix(n);
    return DichotomicObservable(LinearOperator(space, std::move(m), true), n);
}

DichotomicObservable qubit_observable(double theta, double phi, const SpaceDescriptor& space) {
    return qubit_observable(direction(theta, phi), space);
}

double chsh_value(const StateVector& s, const ChshSettings& settings) {
    require_bipartite(s);
    const auto space_b = s.space().slice(0, 1);
    const auto space_c = s.space().slice(1, 2);
    for (const auto* o : {&settings.b, &settings.b_prime})
        if (!(o->op().space() == space_b)) throw Error(Errc::space_mismatch, "B observable not on the first factor");
    for (const auto* o : {&settings.c, &settings.c_prime})
        if (!(o->op().space() == space_c)) throw Error(Errc::space_mismatch, "C observable not on the second factor");

    const CMatrix psi = amplitude_block(s);
    auto correlator = [&](const DichotomicObservable& b, const DichotomicObservable& c) {
        const CMatrix r = psi.adjoint() * b.op().matrix() * psi;
        return (r.array() * c.op().matrix().array()).sum();
    };
    const Complex value = correlator(settings.b, settings.c) + correlator(settings.b_prime, settings.c) +
                          correlator(settings.b, settings.c_prime) - correlator(settings.b_prime, settings.c_prime);
    if (std::abs(value.imag()) > 1e-10) throw Error(Errc::non_finite, "CHSH expectation has an imaginary part");
    return value.real();
}

Eigen::Matrix3d correlation_matrix(const StateVector& s) {
    require_bipartite(s);
    if (!is_qubit(s.space().factor(0)) || !is_qubit(s.space().factor(1)))
        throw Error(Errc::not_two_qubit, "correlation matrix needs two two-level factors");
    const CMatrix psi = amplitude_block(s);
    const auto sigma = pauli();
    Eigen::Matrix3d t;
    for (int k = 0; k < 3; ++k) {
        const CMatrix r = psi.adjoint() * sigma[k] * psi;
        for (int l = 0; l < 3; ++l) t(k, l) = (r.array() * sigma[l].array()).sum().real();
    }
    return t;
}

double horodecki_max(const StateVector& s) {
    const Eigen::Matrix3d t = correlation_matrix(s);
    const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(t).singularValues();
    return 2.0 * std::hypot(sv(0), sv(1));
}

ChshResult chsh_maximize(const StateVector& s, Strategy strategy, const MultistartOptions& options) {
    require_bipartite(s);
    if (strategy == Strategy::analytic_qubit) {
        if (!is_qubit(s.space().factor(0)) || !is_qubit(s.space().factor(1)))
            throw Error(Errc::strategy_unavailable, "analytic maximum exists only for two qubits");
        return analytic(s);
    }
    return multistart(s, options);
}

}  // namespace coherence::bell
