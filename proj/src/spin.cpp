#include <coherence/optimize.hpp>
#include <coherence/spin.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace coherence::spin {

namespace {

constexpr double kPi = std::numbers::pi;

void require_positive(Spin j) {
    if (j.twice() < 1) throw Error(Errc::invalid_argument, "spin operators need j >= 1/2");
}

// Ladder coefficient <j, m+1| J+ |j, m> = sqrt((j - m)(j + m + 1)), with m = -j + k.
double raise_coefficient(Spin j, Index k) {
    const double jj = j.value();
    const double m = -jj + static_cast<double>(k);
    return std::sqrt((jj - m) * (jj + m + 1.0));
}

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// Amplitudes of (1+|zeta|^2)^{-j} exp(zeta J+)|j,-j>, component k = j + m: zeta^k sqrt(C(2j, k)).
CVector zeta_amplitudes(Spin j, Complex zeta) {
    CVector amps(j.dim());
    Complex power{1.0, 0.0};
    for (Index k = 0; k < j.dim(); ++k) {
        amps(k) = power * std::sqrt(binomial(j.twice(), static_cast<int>(k)));
        power *= zeta;
    }
    return amps;
}

// Same family in angle form: cos(theta/2)^{2j-k} (-sin(theta/2) e^{-i phi})^k sqrt(C(2j, k)).
CVector angle_amplitudes(Spin j, double theta, double phi) {
    const double c = std::cos(0.5 * theta);
    const Complex s = -std::sin(0.5 * theta) * std::polar(1.0, -phi);
    CVector amps(j.dim());
    for (Index k = 0; k < j.dim(); ++k) {
        const auto up = static_cast<int>(k);
        Complex term = std::sqrt(binomial(j.twice(), up));
        for (int i = 0; i < j.twice() - up; ++i) term *= c;
        for (int i = 0; i < up; ++i) term *= s;
        amps(k) = term;
    }
    return amps;
}

SphereAngles canonical_angles(double theta, double phi) {
    theta = std::fmod(theta, 2.0 * kPi);
    if (theta < 0.0) theta += 2.0 * kPi;
    if (theta > kPi) {
        theta = 2.0 * kPi - theta;
        phi += kPi;
    }
    phi = std::fmod(phi, 2.0 * kPi);
    if (phi < 0.0) phi += 2.0 * kPi;
    return {theta, phi};
}

Spin single_spin(const StateVector& s) {
    if (s.space().num_factors() != 1 || s.space().factor(0).kind != Factor::Kind::spin)
        throw Error(Errc::space_mismatch, "expected a state on a single spin space");
    return s.space().factor(0).spin_value();
}

}  // namespace

SpinOps spin_ops(Spin j) {
    require_positive(j);
    const auto space = SpaceDescriptor::spin(j);
    const Index d = j.dim();
    CMatrix j0 = CMatrix::Zero(d, d);
    CMatrix jp = CMatrix::Zero(d, d);
    for (Index k = 0; k < d; ++k) {
        j0(k, k) = -j.value() + static_cast<double>(k);
        if (k + 1 < d) jp(k + 1, k) = raise_coefficient(j, k);
    }
    CMatrix jm = jp.adjoint();
    return {LinearOperator(space, std::move(j0), true), LinearOperator(space, std::move(jp)),
            LinearOperator(space, std::move(jm))};
}

LinearOperator casimir(Spin j) {
    const auto ops = spin_ops(j);
    const CMatrix& j0 = ops.j0.matrix();
    const CMatrix& jp = ops.jplus.matrix();
    const CMatrix& jm = ops.jminus.matrix();
    CMatrix c = j0 * j0 + 0.5 * (jp * jm + jm * jp);
    c = 0.5 * (c + c.adjoint()).eval();
    return LinearOperator(ops.j0.space(), std::move(c), true);
}

StateVector lowest_state(Spin j) { return StateVector::basis(SpaceDescriptor::spin(j), 0); }

StateVector basis_state(Spin j, int twice_m) {
    if (twice_m < -j.twice() || twice_m > j.twice() || (j.twice() - twice_m) % 2 != 0)
        throw Error(Errc::invalid_weight, "m must satisfy -j <= m <= j with j - m integer");
    const int steps = (j.twice() + twice_m) / 2;  // j + m
    if (steps == 0) return lowest_state(j);
    const auto ops = spin_ops(j);
    CVector v = lowest_state(j).amps();
    double factorial = 1.0;
    for (int p = 1; p <= steps; ++p) {
        v = ops.jplus.matrix() * v;
        factorial *= p;
    }
    v *= 1.0 / (std::sqrt(binomial(j.twice(), steps)) * factorial);
    return StateVector(SpaceDescriptor::spin(j), std::move(v));
}

StateVector spin_cs(Spin j, Complex zeta) {
    if (!std::isfinite(zeta.real()) || !std::isfinite(zeta.imag()))
        throw Error(Errc::invalid_argument, "zeta must be finite; use the angle form for the antipode");
    return StateVector(SpaceDescriptor::spin(j), zeta_amplitudes(j, zeta));
}

StateVector spin_cs(Spin j, const SphereAngles& angles) {
    return StateVector(SpaceDescriptor::spin(j), angle_amplitudes(j, angles.theta, angles.phi));
}

StateVector spin_cs(const SpinCsParams& params) {
    return std::visit([&](const auto& label) { return spin_cs(params.j, label); }, params.label);
}

StateVector spin_cs_exp(Spin j, Complex xi) {
    if (j.twice() == 0) return lowest_state(j);
    const auto ops = spin_ops(j);
    const CMatrix generator = xi * ops.jplus.matrix() - std::conj(xi) * ops.jminus.matrix();
    return StateVector(ops.j0.space(), expm(generator).col(0));
}

Complex angle_to_zeta(double theta, double phi) {
    if (!(theta >= 0.0) || theta > kPi) throw Error(Errc::invalid_argument, "theta must lie in [0, pi]");
    if (theta == kPi) throw Error(Errc::antipodal_point, "theta = pi has no finite zeta; use the angle form");
    return -std::tan(0.5 * theta) * std::polar(1.0, -phi);
}

SphereAngles zeta_to_angles(Complex zeta) {
    const double r = std::abs(zeta);
    if (r == 0.0) return {0.0, 0.0};
    // -zeta = tan(theta/2) e^{-i phi}
    return canonical_angles(2.0 * std::atan(r), -std::arg(-zeta));
}

Complex angle_to_xi(double theta, double phi) { return -(0.5 * theta) * std::polar(1.0, -phi); }

Complex xi_to_zeta(Complex xi) {
    const double r = std::abs(xi);
    if (r == 0.0) return {0.0, 0.0};
    return (xi / r) * std::tan(r);
}

SplitIsometry addition_isometry(Spin jb, Spin jc) {
    require_positive(jb);
    require_positive(jc);
    const Spin ja = jb + jc;
    const auto target = tensor(SpaceDescriptor::spin(jb), SpaceDescriptor::spin(jc));
    const auto ops_b = spin_ops(jb);
    const auto ops_c = spin_ops(jc);
    const CMatrix raise = embed(ops_b.jplus, target, 0).matrix() + embed(ops_c.jplus, target, 1).matrix();

    CMatrix w = CMatrix::Zero(target.dim(), ja.dim());
    w(0, 0) = 1.0;  // |jb,-jb> (x) |jc,-jc>
    for (Index k = 0; k + 1 < ja.dim(); ++k) w.col(k + 1) = raise * w.col(k) / raise_coefficient(ja, k);
    return SplitIsometry(SpaceDescriptor::spin(ja), target, std::move(w));
}

StateVector split_spin(const StateVector& s, Spin jb, Spin jc) {
    const Spin ja = single_spin(s);
    if (!(ja == jb + jc))
        throw Error(Errc::weight_condition_violated, "coherent-state factorization requires j_A = j_B + j_C");
    return addition_isometry(jb, jc).apply(s);
}

CsFit fit_spin_cs(const StateVector& s, const SphereAngles* warm_start) {
    const Spin j = single_spin(s);
    const CVector& psi = s.amps();

    // ||psi - <n|psi> n||^2 resolves the optimum far better than 1 - |<n|psi>|^2.
    auto residual = [&](const Eigen::VectorXd& x) {
        const CVector n = angle_amplitudes(j, x(0), x(1));
        const Complex c = n.dot(psi);
        return (psi - c * n).squaredNorm();
    };

    std::vector<Eigen::VectorXd> starts;
    if (warm_start) starts.push_back(Eigen::Vector2d(warm_start->theta, warm_start->phi));
    if (j.twice() > 0) {
        const auto ops = spin_ops(j);
        const double jz = moments(ops.j0, s).mean.real();
        const Complex jp = moments(ops.jplus, s).mean;  // <J+> = <Jx> + i <Jy>
        const double jx = jp.real();
        const double jy = jp.imag();
        const double len = std::sqrt(jx * jx + jy * jy + jz * jz);
        // a coherent state with angles (theta, phi) has <J> = -j n(theta, phi)
        if (len > 1e-12) starts.push_back(Eigen::Vector2d(std::acos(std::clamp(-jz / len, -1.0, 1.0)),
                                                           std::atan2(-jy, -jx)));
    }
    for (double theta : {0.0, kPi / 4, kPi / 2, 3 * kPi / 4, kPi})
        for (double phi : {0.0, kPi / 2, kPi, 3 * kPi / 2}) {
            starts.push_back(Eigen::Vector2d(theta, phi));
            if (theta == 0.0 || theta == kPi) break;
        }

    // refine the three most promising starts
    std::vector<std::pair<double, std::size_t>> ranked;
    for (std::size_t i = 0; i < starts.size(); ++i) ranked.emplace_back(residual(starts[i]), i);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    optimize::NelderMeadOptions opts;
    opts.initial_step = 0.05;
    opts.ftol = 1e-30;
    opts.xtol = 1e-13;
    opts.max_evaluations = 4000;
    Eigen::VectorXd best_x = starts[ranked.front().second];
    double best_value = ranked.front().first;
    for (std::size_t r = 0; r < std::min<std::size_t>(3, ranked.size()); ++r) {
        const auto result = optimize::nelder_mead(residual, starts[ranked[r].second], opts);
        if (result.value < best_value) {
            best_value = result.value;
            best_x = result.x;
        }
    }

    const SphereAngles angles = canonical_angles(best_x(0), best_x(1));
    StateVector nearest = spin_cs(j, angles);
    const double fid = fidelity(nearest, s);
    const Complex zeta = std::cos(0.5 * angles.theta) < 1e-15
                             ? Complex(std::numeric_limits<double>::quiet_NaN(), 0.0)
                             : -std::tan(0.5 * angles.theta) * std::polar(1.0, -angles.phi);
    return {angles, zeta, fid, std::move(nearest)};
}

}  // namespace coherence::spin
