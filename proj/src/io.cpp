#include <coherence/io.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace coherence::io {

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(Errc::invalid_argument, "complex number must be a [re, im] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const SpaceDescriptor& space) {
    json factors = json::array();
    for (const auto& f : space.factors()) {
        if (f.kind == Factor::Kind::fock)
            factors.push_back({{"kind", "fock"}, {"cutoff", f.label}});
        else
            factors.push_back({{"kind", "spin"}, {"twice_j", f.label}});
    }
    return {{"factors", factors}};
}

SpaceDescriptor space_from_json(const json& j) {
    try {
        std::vector<Factor> factors;
        for (const auto& f : j.at("factors")) {
            const auto kind = f.at("kind").get<std::string>();
            if (kind == "fock")
                factors.push_back(Factor::fock(f.at("cutoff").get<int>()));
            else if (kind == "spin")
                factors.push_back(Factor::spin(Spin(f.at("twice_j").get<int>())));
            else
                throw Error(Errc::invalid_argument, "unknown factor kind '" + kind + "'");
        }
        return SpaceDescriptor(std::move(factors));
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("malformed space: ") + e.what());
    }
}

json to_json(const StateVector& s) {
    json amps = json::array();
    for (Index i = 0; i < s.dim(); ++i) amps.push_back(to_json(s[i]));
    return {{"space", to_json(s.space())}, {"amps", amps}};
}

StateVector state_from_json(const json& j) {
    try {
        SpaceDescriptor space = space_from_json(j.at("space"));
        const auto& amps = j.at("amps");
        CVector v(static_cast<Index>(amps.size()));
        for (std::size_t i = 0; i < amps.size(); ++i) v(static_cast<Index>(i)) = complex_from_json(amps[i]);
        return StateVector(std::move(space), std::move(v));
    } catch (const json::exception& e) {
        throw Error(Errc::invalid_argument, std::string("malformed state: ") + e.what());
    }
}

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json series_json(const splitting::SeriesPoly& f) {
    json out = json::array();
    for (const auto& c : f.coeffs) out.push_back(to_json(c));
    return out;
}

}  // namespace

json to_json(const splitting::ScanStats& stats) {
    return {{"schema_version", kSchemaVersion},
            {"system", stats.system.describe()},
            {"n_samples", stats.n_samples},
            {"seed", stats.seed},
            {"min_entropy_non_cs", finite_or_null(stats.min_entropy_non_cs)},
            {"cs_max_entropy", stats.cs_max_entropy},
            {"n_non_cs", stats.n_non_cs},
            {"n_excluded", stats.n_excluded},
            {"min_cs_distance", finite_or_null(stats.min_cs_distance)}};
}

json to_json(const splitting::FactorizationReport& report) {
    json out{{"entropy_bits", report.entropy_bits}, {"is_product", report.is_product}, {"residual", report.residual}};
    out["factor_b"] = report.factor_b ? to_json(*report.factor_b) : json(nullptr);
    out["factor_c"] = report.factor_c ? to_json(*report.factor_c) : json(nullptr);
    return out;
}

json to_json(const splitting::SeriesSolution& solution) {
    return {{"f_a", series_json(solution.fa)},
            {"f_b", series_json(solution.fb)},
            {"f_c", series_json(solution.fc)},
            {"tau_a", to_json(solution.tau_a)},
            {"tau_b", to_json(solution.tau_b)},
            {"tau_c", to_json(solution.tau_c)},
            {"exponential_deviation", solution.exponential_deviation},
            {"residual_by_order", solution.residual}};
}

std::string strategy_name(bell::Strategy strategy) {
    return strategy == bell::Strategy::analytic_qubit ? "analytic-qubit" : "multistart";
}

json chsh_to_json(const std::string& state_id, const bell::ChshResult& result) {
    json settings = json::array();
    if (result.settings) {
        for (const auto* o : {&result.settings->b, &result.settings->b_prime, &result.settings->c,
                              &result.settings->c_prime})
            settings.push_back(o->angles());
    }
    return {{"schema_version", kSchemaVersion},
            {"state_id", state_id},
            {"strategy", strategy_name(result.strategy)},
            {"max_value", result.max_value},
            {"settings", settings},
            {"n_starts", result.n_starts},
            {"seed", result.seed}};
}

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string trajectory_csv(const dynamics::Trajectory& trajectory) {
    std::ostringstream out;
    out << "t,re_alpha,im_alpha,eta,fidelity\n";
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        out << format_double(trajectory.times[k]) << ',' << format_double(trajectory.alpha_track[k].real()) << ','
            << format_double(trajectory.alpha_track[k].imag()) << ',' << format_double(trajectory.eta_track[k]) << ','
            << format_double(trajectory.cs_fidelity[k]) << '\n';
    }
    return out.str();
}

std::string trajectory_csv(const dynamics::SpinTrajectory& trajectory) {
    std::ostringstream out;
    out << "t,re_zeta,im_zeta,theta,phi,fidelity\n";
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        out << format_double(trajectory.times[k]) << ',' << format_double(trajectory.zeta_track[k].real()) << ','
            << format_double(trajectory.zeta_track[k].imag()) << ',' << format_double(trajectory.angles[k].theta)
            << ',' << format_double(trajectory.angles[k].phi) << ',' << format_double(trajectory.cs_fidelity[k])
            << '\n';
    }
    return out.str();
}

}  // namespace coherence::io
