#include <coherence/parallel.hpp>
#include <coherence/random.hpp>
#include <coherence/spin.hpp>
#include <coherence/splitting.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace coherence::splitting {

FactorizationReport factorization_report(const StateVector& s) {
    if (s.space().num_factors() != 2) throw Error(Errc::not_composite, "factorization needs a two-factor state");
    const auto schmidt = schmidt_cut(s, 1);
    const double leading = schmidt.coefficients.front();

    const CVector u = schmidt.left_vectors.col(0);
    const CVector v = schmidt.right_vectors.col(0);
    FactorizationReport report{schmidt.entropy_bits, schmidt.is_product, std::nullopt, std::nullopt, 0.0};
    if (schmidt.is_product && leading >= kLeadingCoefficientFloor) {
        report.factor_b.emplace(schmidt.left_space, u);
        report.factor_c.emplace(schmidt.right_space, v);
        report.residual = (s.amps() - tensor_state(*report.factor_b, *report.factor_c).amps()).norm();
    } else {
        report.is_product = false;
        report.residual = std::sqrt(std::max(0.0, 1.0 - leading * leading));
    }
    return report;
}

std::string ScanSystem::describe() const {
    std::ostringstream out;
    if (kind == Kind::fock) {
        out << "fock(N=" << cutoff << ")";
    } else {
        out << "spin(jA=" << ja().value() << ",jB=" << jb.value() << ",jC=" << jc.value() << ")";
    }
    return out.str();
}

namespace {

struct SampleOutcome {
    double entropy;
    double cs_distance;
};

double split_entropy(const ScanSystem& system, const StateVector& s) {
    if (system.kind == ScanSystem::Kind::fock)
        return schmidt_cut(fock::split_fock(s, fock::SplitSpec::balanced()), 1).entropy_bits;
    return schmidt_cut(spin::split_spin(s, system.jb, system.jc), 1).entropy_bits;
}

SampleOutcome run_sample(const ScanSystem& system, const SpaceDescriptor& space, std::uint64_t seed,
                         std::size_t index) {
    CounterRng rng(seed, index);
    const StateVector psi = haar_state(space, rng);
    const double distance = system.kind == ScanSystem::Kind::fock
                                ? phase_aligned_distance(psi, fock::fit_glauber_cs(psi).nearest)
                                : phase_aligned_distance(psi, spin::fit_spin_cs(psi).nearest);
    return {split_entropy(system, psi), distance};
}

std::vector<StateVector> cs_grid(const ScanSystem& system) {
    constexpr double pi = std::numbers::pi;
    std::vector<StateVector> grid;
    if (system.kind == ScanSystem::Kind::spin) {
        for (int t = 0; t <= 8; ++t)
            for (int p = 0; p < 8; ++p) {
                grid.push_back(spin::spin_cs(system.ja(), spin::SphereAngles{t * pi / 8, p * pi / 4}));
                if (t == 0 || t == 8) break;
            }
        return grid;
    }
    for (int r = 0;; ++r) {
        const double radius = 0.25 * r;
        if (fock::minimum_cutoff(radius) > system.cutoff) break;
        for (int p = 0; p < 8; ++p) {
            grid.push_back(fock::glauber_cs(std::polar(radius, p * pi / 4), system.cutoff));
            if (r == 0) break;
        }
    }
    return grid;
}

}  // namespace

ScanStats uniqueness_scan(const ScanSystem& system, std::size_t n_samples, std::uint64_t seed, unsigned threads) {
    if (n_samples < 1) throw Error(Errc::invalid_argument, "scan needs at least one sample");
    const SpaceDescriptor space = system.kind == ScanSystem::Kind::fock ? SpaceDescriptor::fock(system.cutoff)
                                                                        : SpaceDescriptor::spin(system.ja());

    std::vector<SampleOutcome> outcomes(n_samples);
    parallel_for(n_samples, threads, [&](std::size_t i) { outcomes[i] = run_sample(system, space, seed, i); });

    const auto grid = cs_grid(system);
    std::vector<double> grid_entropy(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) { grid_entropy[i] = split_entropy(system, grid[i]); });

    ScanStats stats{system, n_samples, seed, std::numeric_limits<double>::infinity(), 0.0, 0, 0,
                    std::numeric_limits<double>::infinity()};
    for (const auto& o : outcomes) {
        stats.min_cs_distance = std::min(stats.min_cs_distance, o.cs_distance);
        if (o.cs_distance < kCsGuardBand) {
            ++stats.n_excluded;
            continue;
        }
        ++stats.n_non_cs;
        stats.min_entropy_non_cs = std::min(stats.min_entropy_non_cs, o.entropy);
    }
    for (double h : grid_entropy) stats.cs_max_entropy = std::max(stats.cs_max_entropy, h);
    return stats;
}

}  // namespace coherence::splitting
