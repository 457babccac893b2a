#include <coherence/dynamics.hpp>
#include <coherence/fock.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace coherence::dynamics {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kQuadratureTol = 1e-10;
constexpr double kAbsoluteTarget = 1e-13;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// Adaptive Gauss-Kronrod over [a, b] split at `cuts`, real part. Boost's
// tolerance is relative to the L1 norm, so a first non-adaptive pass either
// already meets the absolute target or sets the relative one.
template <typename F>
double integrate(F&& f, double a, double b, const std::vector<double>& cuts) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    std::vector<double> nodes{a};
    for (double c : cuts)
        if (c > a && c < b) nodes.push_back(c);
    nodes.push_back(b);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        double error = 0.0;
        double l1 = 0.0;
        const double first = GK::integrate(f, nodes[k], nodes[k + 1], 0, 0.0, &error, &l1);
        if (std::isfinite(error) && error <= kAbsoluteTarget) {
            total += first;
            continue;
        }
        const double rel = l1 > 0.0 ? std::clamp(kAbsoluteTarget / l1, 1e-13, 1e-3) : 1e-3;
        total += GK::integrate(f, nodes[k], nodes[k + 1], 15, rel, &error, &l1);
        if (!std::isfinite(error) || error > kQuadratureTol * std::max(1.0, l1)) {
            char msg[96];
            std::snprintf(msg, sizeof msg, "quadrature error estimate %.3e on [%.6g, %.6g]", error, nodes[k],
                          nodes[k + 1]);
            throw Error(Errc::quadrature_failure, msg);
        }
    }
    return total;
}

// int_0^t lambda(tau) e^{i omega tau} dtau
Complex drive_integral(const DriveSpec& drive, double t) {
    if (t == 0.0) return {0.0, 0.0};
    const auto cuts = drive.breakpoints(t);
    const double w = drive.omega();
    const double re = integrate([&](double s) { return (drive.lambda(s) * std::polar(1.0, w * s)).real(); }, 0.0, t, cuts);
    const double im = integrate([&](double s) { return (drive.lambda(s) * std::polar(1.0, w * s)).imag(); }, 0.0, t, cuts);
    return {re, im};
}

Complex driven_alpha(const DriveSpec& drive, double t) {
    return -kI * std::polar(1.0, -drive.omega() * t) * drive_integral(drive, t);
}

void require_grid(const std::vector<double>& t_grid) {
    if (t_grid.empty()) throw Error(Errc::invalid_argument, "time grid is empty");
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!std::isfinite(t_grid[k])) throw Error(Errc::non_finite, "non-finite time");
        if (k && t_grid[k] < t_grid[k - 1]) throw Error(Errc::invalid_argument, "time grid must be ascending");
    }
}

double unwrap(double previous, double raw) {
    double value = raw;
    while (value - previous > kPi) value -= 2.0 * kPi;
    while (value - previous < -kPi) value += 2.0 * kPi;
    return value;
}

}  // namespace

DriveSpec::DriveSpec(double omega, Shape shape) : omega_(omega), shape_(std::move(shape)) {
    if (!(omega > 0.0) || !std::isfinite(omega)) throw Error(Errc::invalid_argument, "omega must be positive");
    std::visit(overloaded{
                   [](const ConstantDrive& d) {
                       if (!finite(d.lambda)) throw Error(Errc::non_finite, "non-finite drive");
                   },
                   [](const RotatingDrive& d) {
                       if (!finite(d.amplitude) || !std::isfinite(d.frequency))
                           throw Error(Errc::non_finite, "non-finite drive");
                   },
                   [](const CosineDrive& d) {
                       if (!finite(d.amplitude) || !std::isfinite(d.frequency))
                           throw Error(Errc::non_finite, "non-finite drive");
                   },
                   [](const SampledDrive& d) {
                       if (d.times.size() != d.values.size() || d.times.size() < 2)
                           throw Error(Errc::invalid_argument, "sampled drive needs matching times and values");
                       for (std::size_t k = 0; k < d.times.size(); ++k) {
                           if (!std::isfinite(d.times[k]) || !finite(d.values[k]))
                               throw Error(Errc::non_finite, "non-finite drive sample");
                           if (k && !(d.times[k] > d.times[k - 1]))
                               throw Error(Errc::invalid_argument, "drive sample times must increase");
                       }
                   },
               },
               shape_);
}

Complex DriveSpec::lambda(double t) const {
    return std::visit(overloaded{
                          [](const ConstantDrive& d) { return d.lambda; },
                          [t](const RotatingDrive& d) { return d.amplitude * std::polar(1.0, -d.frequency * t); },
                          [t](const CosineDrive& d) { return d.amplitude * std::cos(d.frequency * t); },
                          [t](const SampledDrive& d) {
                              if (t < d.times.front() || t > d.times.back())
                                  throw Error(Errc::invalid_argument, "time outside the sampled drive table");
                              const auto hi = std::upper_bound(d.times.begin(), d.times.end(), t);
                              if (hi == d.times.end()) return d.values.back();
                              const auto k = static_cast<std::size_t>(hi - d.times.begin());
                              const double w = (t - d.times[k - 1]) / (d.times[k] - d.times[k - 1]);
                              return (1.0 - w) * d.values[k - 1] + w * d.values[k];
                          },
                      },
                      shape_);
}

std::vector<double> DriveSpec::breakpoints(double t) const {
    std::vector<double> cuts;
    if (const auto* d = std::get_if<SampledDrive>(&shape_))
        for (double s : d->times)
            if (s > 0.0 && s < t) cuts.push_back(s);
    return cuts;
}

AlphaEta alpha_eta_of_t(const DriveSpec& drive, double t) {
    if (!(t >= 0.0)) throw Error(Errc::invalid_argument, "time must be non-negative");
    const Complex alpha = driven_alpha(drive, t);
    double drive_phase = 0.0;
    if (t > 0.0) {
        drive_phase = integrate(
            [&](double s) { return (std::conj(drive.lambda(s)) * driven_alpha(drive, s)).real(); }, 0.0, t,
            drive.breakpoints(t));
    }
    return {alpha, -0.5 * drive.omega() * t - drive_phase};
}

LinearOperator fock_hamiltonian(const DriveSpec& drive, double t, int cutoff) {
    const auto [a, adag] = fock::ladder_ops(cutoff);
    const Complex lam = drive.lambda(t);
    CMatrix h = drive.omega() * fock::number_op(cutoff).matrix() + lam * adag.matrix() + std::conj(lam) * a.matrix();
    h = (0.5 * (h + h.adjoint())).eval();
    return LinearOperator(a.space(), std::move(h), true);
}

double default_step(double omega) { return (2.0 * kPi / omega) / 400.0; }

CsOverlap cs_fidelity(const StateVector& state, Complex alpha_ref) {
    if (state.space().num_factors() != 1 || state.space().factor(0).kind != Factor::Kind::fock)
        throw Error(Errc::space_mismatch, "cs_fidelity needs a single-mode Fock state");
    const auto reference = fock::glauber_cs(alpha_ref, state.space().factor(0).cutoff());
    const Complex ov = overlap(reference, state);
    return {std::abs(ov), ov};
}

Trajectory evolve_fock(const DriveSpec& drive, const std::vector<double>& t_grid, int cutoff,
                       const StateVector& initial, double max_step) {
    require_grid(t_grid);
    if (!(initial.space() == SpaceDescriptor::fock(cutoff)))
        throw Error(Errc::space_mismatch, "initial state is not on the requested Fock space");
    const double step = max_step > 0.0 ? max_step : default_step(drive.omega());

    const auto [a, adag] = fock::ladder_ops(cutoff);
    const auto [q, p] = fock::quadrature_ops(cutoff);

    // Expected amplitude: free rotation of <a> plus the driven response.
    const double start_amp = std::abs(moments(a, initial).mean);
    double expected = start_amp;
    for (double t : t_grid)
        expected = std::max(expected, start_amp + std::abs(driven_alpha(drive, t - t_grid.front())));
    fock::require_tail(expected, cutoff);

    Trajectory traj;
    CVector psi = initial.amps();
    double t_now = t_grid.front();
    double previous_phase = 0.0;
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        const double span = t_grid[k] - t_now;
        if (span > 0.0) {
            const auto steps = static_cast<long>(std::ceil(span / step - 1e-12));
            const double dt = span / static_cast<double>(steps);
            for (long s = 0; s < steps; ++s) {
                const double mid = t_now + (static_cast<double>(s) + 0.5) * dt;
                const CMatrix u = expm((-kI * dt) * fock_hamiltonian(drive, mid, cutoff).matrix());
                psi = u * psi;
            }
            t_now = t_grid[k];
            if (std::abs(psi.norm() - 1.0) > 1e-8)
                throw Error(Errc::step_size_too_large, "norm drift beyond 1e-8");
        }
        StateVector state(initial.space(), psi);
        const Complex mean_a = moments(a, state).mean;
        const Complex quad = (moments(q, state).mean + kI * moments(p, state).mean) / std::sqrt(2.0);
        const CsOverlap fit = cs_fidelity(state, mean_a);
        const double phase = unwrap(previous_phase, std::arg(fit.overlap));
        previous_phase = phase;

        traj.times.push_back(t_grid[k]);
        traj.alpha_track.push_back(mean_a);
        traj.alpha_quadrature.push_back(quad);
        traj.eta_track.push_back(phase);
        traj.cs_fidelity.push_back(fit.fidelity);
        traj.states.push_back(std::move(state));
    }
    return traj;
}

EtaConventionReport eta_convention(const Trajectory& trajectory, const DriveSpec& drive) {
    const double w = drive.omega();
    double num = 0.0;
    double den = 0.0;
    std::vector<double> offsets;
    std::vector<double> closed;
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const double t = trajectory.times[k] - trajectory.times.front();
        const double eta_closed = alpha_eta_of_t(drive, t).eta;
        const double eta_drive = eta_closed + 0.5 * w * t;  // drive-induced part only
        const double d = trajectory.eta_track[k] - eta_drive;
        offsets.push_back(d);
        closed.push_back(eta_closed);
        num += d * w * t;
        den += (w * t) * (w * t);
    }
    const double rate = den > 0.0 ? num / den : 0.0;
    EtaConventionReport report{rate, std::abs(rate) < std::abs(rate + 0.5) ? "omega*adag*a" : "omega*(adag*a+1/2)",
                               0.0, true};
    for (std::size_t k = 0; k < offsets.size(); ++k) {
        const double t = trajectory.times[k] - trajectory.times.front();
        report.max_residual = std::max(report.max_residual, std::abs(offsets[k] - rate * w * t));
        if (std::abs(trajectory.eta_track[k] - closed[k]) > 1e-6) report.matches_closed_form = false;
    }
    return report;
}

LinearOperator LinearSpinHamiltonian::matrix(Spin j) const {
    if (std::abs(beta_minus - std::conj(beta_plus)) > 1e-12)
        throw Error(Errc::invalid_argument, "Hermiticity requires beta- = conj(beta+)");
    const auto ops = spin::spin_ops(j);
    CMatrix h = beta0 * ops.j0.matrix() + beta_plus * ops.jplus.matrix() + beta_minus * ops.jminus.matrix();
    h = (0.5 * (h + h.adjoint())).eval();
    return LinearOperator(ops.j0.space(), std::move(h), true);
}

double LinearSpinHamiltonian::rate() const { return std::sqrt(beta0 * beta0 + 4.0 * std::norm(beta_plus)); }

SpinTrajectory evolve_spin(const LinearSpinHamiltonian& h, Spin j, const std::vector<double>& t_grid,
                           const StateVector& initial, double max_step) {
    require_grid(t_grid);
    if (!(initial.space() == SpaceDescriptor::spin(j)))
        throw Error(Errc::space_mismatch, "initial state is not on the requested spin space");
    const CMatrix hm = h.matrix(j).matrix();
    const double rate = h.rate();
    const double step = max_step > 0.0 ? max_step : (rate > 0.0 ? default_step(rate) : 1.0);

    SpinTrajectory traj;
    CVector psi = initial.amps();
    double t_now = t_grid.front();
    std::optional<spin::SphereAngles> warm;
    for (double t : t_grid) {
        const double span = t - t_now;
        if (span > 0.0) {
            const auto steps = static_cast<long>(std::ceil(span / step - 1e-12));
            const double dt = span / static_cast<double>(steps);
            const CMatrix u = expm((-kI * dt) * hm);
            for (long s = 0; s < steps; ++s) psi = u * psi;
            t_now = t;
            if (std::abs(psi.norm() - 1.0) > 1e-8)
                throw Error(Errc::step_size_too_large, "norm drift beyond 1e-8");
        }
        StateVector state(initial.space(), psi);
        const auto fit = spin::fit_spin_cs(state, warm ? &*warm : nullptr);
        warm = fit.angles;
        traj.times.push_back(t);
        traj.zeta_track.push_back(fit.zeta);
        traj.angles.push_back(fit.angles);
        traj.cs_fidelity.push_back(fit.fidelity);
        traj.states.push_back(std::move(state));
    }
    return traj;
}

}  // namespace coherence::dynamics
