// coherence_lab: experiment runner for splitting, CHSH, evolution, scans and
// the series solver. Exit codes: 0 success, 2 invalid input, 3 numerical failure.

#include <coherence/bell.hpp>
#include <coherence/dynamics.hpp>
#include <coherence/fock.hpp>
#include <coherence/io.hpp>
#include <coherence/parallel.hpp>
#include <coherence/spin.hpp>
#include <coherence/splitting.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace coherence;
using io::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

double parse_real(const std::string& text, const std::string& whole) {
    try {
        return std::stod(text);
    } catch (const std::out_of_range&) {
        throw ConfigError("number out of range in '" + whole + "'");
    }
}

// Accepts "a", "a+bi", "a-bi", "bi" and "i" (j also allowed for the unit).
Complex parse_complex(const std::string& text) {
    static const std::string num = R"((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)";
    static const std::regex both("^([+-]?" + num + ")([+-])(" + num + ")?[ij]$");
    static const std::regex real_only("^([+-]?" + num + ")$");
    static const std::regex imag_only("^([+-]?)(" + num + ")?[ij]$");
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
    std::smatch m;
    if (std::regex_match(t, m, real_only)) return {parse_real(m[1].str(), text), 0.0};
    if (std::regex_match(t, m, both)) {
        const double im = m[3].matched ? parse_real(m[3].str(), text) : 1.0;
        return {parse_real(m[1].str(), text), m[2].str() == "-" ? -im : im};
    }
    if (std::regex_match(t, m, imag_only)) {
        const double im = m[2].matched ? parse_real(m[2].str(), text) : 1.0;
        return {0.0, m[1].str() == "-" ? -im : im};
    }
    throw ConfigError("cannot parse complex number '" + text + "' (expected a+bi)");
}

std::optional<Complex> complex_opt(const std::string& text) {
    if (text.empty()) return std::nullopt;
    return parse_complex(text);
}

Spin spin_from(double j, const char* name) {
    try {
        return Spin::from_value(j);
    } catch (const Error&) {
        throw ConfigError(std::string(name) + " must be a non-negative half-integer");
    }
}

struct Output {
    std::string path;
    std::string format = "json";

    void emit(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot open output file '" + path + "'");
        out << text;
    }
    void emit(const json& j) const { emit(j.dump(2) + "\n"); }
};

StateVector load_state_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open state file '" + path + "'");
    try {
        return io::state_from_json(json::parse(in));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("state file is not valid JSON: ") + e.what());
    }
}

// ---- split -------------------------------------------------------------------

struct SplitArgs {
    std::string system = "spin";
    double ja = 1.0, jb = 0.5, jc = 0.5;
    std::string zeta;
    std::optional<double> theta, phi, m;
    int cutoff = 40;
    std::string alpha;
    std::optional<int> number;
    std::string mu, nu;
    std::string state_file;
    bool include_state = false;
};

json run_split(const SplitArgs& a) {
    StateVector input = fock::number_state(0, 1);
    StateVector split = input;
    json params;
    if (a.system == "spin") {
        const Spin ja = spin_from(a.ja, "jA"), jb = spin_from(a.jb, "jB"), jc = spin_from(a.jc, "jC");
        if (!a.state_file.empty()) {
            input = load_state_file(a.state_file);
        } else if (a.m) {
            input = spin::basis_state(ja, static_cast<int>(std::lround(2.0 * *a.m)));
        } else if (a.theta || a.phi) {
            input = spin::spin_cs(ja, spin::SphereAngles{a.theta.value_or(0.0), a.phi.value_or(0.0)});
        } else {
            input = spin::spin_cs(ja, complex_opt(a.zeta).value_or(0.0));
        }
        split = spin::split_spin(input, jb, jc);
        params = {{"system", "spin"}, {"jA", ja.value()}, {"jB", jb.value()}, {"jC", jc.value()}};
    } else if (a.system == "fock") {
        const Complex mu = complex_opt(a.mu).value_or(1.0 / std::sqrt(2.0));
        const Complex nu = complex_opt(a.nu).value_or(std::sqrt(std::max(0.0, 1.0 - std::norm(mu))));
        if (!a.state_file.empty())
            input = load_state_file(a.state_file);
        else if (a.number)
            input = fock::number_state(*a.number, a.cutoff);
        else
            input = fock::glauber_cs(complex_opt(a.alpha).value_or(0.0), a.cutoff);
        split = fock::split_fock(input, fock::SplitSpec(mu, nu));
        params = {{"system", "fock"}, {"N", input.space().factor(0).cutoff()}, {"mu", io::to_json(mu)},
                  {"nu", io::to_json(nu)}};
    } else {
        throw ConfigError("--system must be 'spin' or 'fock'");
    }
    json report = io::to_json(splitting::factorization_report(split));
    report["schema_version"] = io::kSchemaVersion;
    report["command"] = "split";
    report["parameters"] = params;
    if (a.include_state) report["split_state"] = io::to_json(split);
    return report;
}

// ---- chsh --------------------------------------------------------------------

struct ChshArgs {
    std::string state;
    std::string state_file;
    std::string zeta;
    std::string strategy = "analytic-qubit";
    int n_starts = 32;
    std::optional<std::uint64_t> seed;
    double tol = 1e-7;
};

StateVector named_state(const std::string& name, const std::string& zeta) {
    if (name == "split-spin1-m0") return spin::split_spin(spin::basis_state(Spin(2), 0), Spin(1), Spin(1));
    if (name == "split-spin1-cs")
        return spin::split_spin(spin::spin_cs(Spin(2), complex_opt(zeta).value_or(1.0)), Spin(1), Spin(1));
    if (name == "split-fock-n1") return fock::split_fock(fock::number_state(1, 1), fock::SplitSpec::balanced());
    if (name == "split-spin2-m0") return spin::split_spin(spin::basis_state(Spin(4), 0), Spin(2), Spin(2));
    throw ConfigError("unknown state '" + name +
                      "' (known: split-spin1-m0, split-spin1-cs, split-fock-n1, split-spin2-m0)");
}

json run_chsh(const ChshArgs& a) {
    if (a.state.empty() == a.state_file.empty()) throw ConfigError("give exactly one of --state or --state-file");
    const StateVector s = a.state_file.empty() ? named_state(a.state, a.zeta) : load_state_file(a.state_file);
    const std::string id = a.state_file.empty() ? a.state : a.state_file;
    bell::MultistartOptions opts;
    bell::Strategy strategy;
    if (a.strategy == "analytic-qubit") {
        strategy = bell::Strategy::analytic_qubit;
    } else if (a.strategy == "multistart") {
        strategy = bell::Strategy::multistart;
        if (!a.seed) throw ConfigError("--seed is required for the multistart strategy");
        opts.seed = *a.seed;
        opts.n_starts = a.n_starts;
        opts.tol = a.tol;
        opts.threads = threads_from_env();
    } else {
        throw ConfigError("--strategy must be 'analytic-qubit' or 'multistart'");
    }
    const auto result = bell::chsh_maximize(s, strategy, opts);
    json report = io::chsh_to_json(id, result);
    report["command"] = "chsh";
    report["entropy_bits"] = schmidt_cut(s, 1).entropy_bits;
    if (strategy == bell::Strategy::multistart && result.max_value <= 2.0 + a.tol &&
        !schmidt_cut(s, 1).is_product)
        report["note"] = "no violation found";
    return report;
}

// ---- evolve ------------------------------------------------------------------

struct EvolveArgs {
    std::string system = "fock";
    std::string drive = "constant";
    std::string lambda = "0";
    double drive_frequency = 1.0;
    std::string drive_file;
    double omega = 1.0;
    double tmax = 2.0 * 3.14159265358979323846;
    int points = 101;
    double step = 0.0;
    int cutoff = 40;
    std::string alpha0 = "0";
    double j = 0.5;
    double beta0 = 0.0;
    std::string beta_plus = "0";
    std::string zeta0 = "0";
};

std::vector<double> time_grid(double tmax, int points) {
    if (!(tmax >= 0.0) || !std::isfinite(tmax)) throw ConfigError("--tmax must be non-negative");
    if (points < 2) throw ConfigError("--points must be at least 2");
    std::vector<double> t(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) t[static_cast<std::size_t>(k)] = tmax * k / (points - 1);
    t.back() = tmax;
    return t;
}

dynamics::DriveSpec make_drive(const EvolveArgs& a) {
    const Complex lam = parse_complex(a.lambda);
    if (a.drive == "constant") return {a.omega, dynamics::ConstantDrive{lam}};
    if (a.drive == "rotating") return {a.omega, dynamics::RotatingDrive{lam, a.drive_frequency}};
    if (a.drive == "cosine") return {a.omega, dynamics::CosineDrive{lam, a.drive_frequency}};
    if (a.drive == "sampled") {
        if (a.drive_file.empty()) throw ConfigError("--drive sampled needs --drive-file");
        std::ifstream in(a.drive_file);
        if (!in) throw ConfigError("cannot open drive file '" + a.drive_file + "'");
        dynamics::SampledDrive table;
        try {
            const json j = json::parse(in);
            for (const auto& row : j.at("samples")) {
                table.times.push_back(row.at(0).get<double>());
                table.values.push_back(io::complex_from_json(row.at(1)));
            }
        } catch (const json::exception& e) {
            throw ConfigError(std::string("malformed drive file: ") + e.what());
        }
        return {a.omega, std::move(table)};
    }
    throw ConfigError("--drive must be constant, rotating, cosine or sampled");
}

std::string run_evolve(const EvolveArgs& a, const std::string& format) {
    const auto grid = time_grid(a.tmax, a.points);
    if (a.system == "fock") {
        const auto drive = make_drive(a);
        const auto traj =
            dynamics::evolve_fock(drive, grid, a.cutoff, fock::glauber_cs(parse_complex(a.alpha0), a.cutoff), a.step);
        if (format == "csv") return io::trajectory_csv(traj);
        json j{{"schema_version", io::kSchemaVersion}, {"command", "evolve"}, {"system", "fock"}};
        const auto closed = dynamics::alpha_eta_of_t(drive, a.tmax);
        j["final_alpha"] = io::to_json(traj.alpha_track.back());
        j["closed_form_alpha"] = io::to_json(closed.alpha + parse_complex(a.alpha0) * std::polar(1.0, -a.omega * a.tmax));
        double min_fid = 1.0;
        for (double f : traj.cs_fidelity) min_fid = std::min(min_fid, f);
        j["min_cs_fidelity"] = min_fid;
        if (parse_complex(a.alpha0) == Complex(0.0)) {
            const auto conv = dynamics::eta_convention(traj, drive);
            j["eta_convention"] = {{"convention", conv.convention},
                                   {"rate_offset", conv.rate_offset},
                                   {"max_residual", conv.max_residual},
                                   {"matches_closed_form", conv.matches_closed_form}};
        }
        return j.dump(2) + "\n";
    }
    if (a.system == "spin") {
        const Spin j = spin_from(a.j, "j");
        const Complex bp = parse_complex(a.beta_plus);
        const dynamics::LinearSpinHamiltonian h{a.beta0, bp, std::conj(bp)};
        const auto traj = dynamics::evolve_spin(h, j, grid, spin::spin_cs(j, parse_complex(a.zeta0)), a.step);
        if (format == "csv") return io::trajectory_csv(traj);
        double min_fid = 1.0;
        for (double f : traj.cs_fidelity) min_fid = std::min(min_fid, f);
        json out{{"schema_version", io::kSchemaVersion}, {"command", "evolve"}, {"system", "spin"},
                 {"final_zeta", io::to_json(traj.zeta_track.back())}, {"min_cs_fidelity", min_fid}};
        return out.dump(2) + "\n";
    }
    throw ConfigError("--system must be 'fock' or 'spin'");
}

// ---- scan / series -------------------------------------------------------------

struct ScanArgs {
    std::string system = "spin";
    double jb = 0.5, jc = 0.5;
    int cutoff = 14;
    std::size_t samples = 500;
    std::optional<std::uint64_t> seed;
};

json run_scan(const ScanArgs& a) {
    if (!a.seed) throw ConfigError("--seed is required for scan");
    if (a.samples < 1) throw ConfigError("--samples must be positive");
    splitting::ScanSystem system = splitting::ScanSystem::fock(a.cutoff);
    if (a.system == "spin")
        system = splitting::ScanSystem::spin(spin_from(a.jb, "jB"), spin_from(a.jc, "jC"));
    else if (a.system != "fock")
        throw ConfigError("--system must be 'spin' or 'fock'");
    json report = io::to_json(splitting::uniqueness_scan(system, a.samples, *a.seed, threads_from_env()));
    report["command"] = "scan";
    return report;
}

struct SeriesArgs {
    int order = 8;
    std::string tau = "1";
    std::string mu, nu;
};

json run_series(const SeriesArgs& a) {
    if (a.order < 2) throw ConfigError("--order must be at least 2");
    splitting::FunctionalEquation eq = splitting::FunctionalEquation::semisimple();
    if (!a.mu.empty() || !a.nu.empty()) {
        if (a.mu.empty() || a.nu.empty()) throw ConfigError("give both --mu and --nu for the beamsplitter case");
        eq = splitting::FunctionalEquation::beamsplitter(fock::SplitSpec(parse_complex(a.mu), parse_complex(a.nu)));
    }
    json report = io::to_json(splitting::aflp_series_solve(a.order, eq, parse_complex(a.tau)));
    report["schema_version"] = io::kSchemaVersion;
    report["command"] = "series";
    report["equation"] = {{"mu", io::to_json(eq.mu)}, {"nu", io::to_json(eq.nu)}};
    return report;
}

// ---- config file -------------------------------------------------------------

std::string scalar_text(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_array() && v.size() == 2 && v[0].is_number()) {
        std::ostringstream out;
        out << io::format_double(v[0].get<double>()) << (v[1].get<double>() < 0 ? "-" : "+")
            << io::format_double(std::abs(v[1].get<double>())) << "i";
        return out.str();
    }
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return io::format_double(v.get<double>());
    throw ConfigError("config values must be scalars or [re, im] pairs");
}

// Turns {"command": ..., "key": value} into leading flags so explicit flags,
// which come later on the line, take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 == args.size()) throw ConfigError("--config needs a file");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (path.empty()) return rest;

    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json cfg;
    try {
        cfg = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
    }
    if (!cfg.is_object()) throw ConfigError("config file must hold a JSON object");

    static const std::vector<std::string> commands{"split", "chsh", "evolve", "scan", "series"};
    std::string command;
    std::size_t command_at = rest.size();
    for (std::size_t i = 0; i < rest.size(); ++i)
        if (std::find(commands.begin(), commands.end(), rest[i]) != commands.end()) {
            command = rest[i];
            command_at = i;
            break;
        }
    if (command.empty()) {
        if (!cfg.contains("command")) throw ConfigError("no subcommand given on the line or in the config file");
        command = cfg["command"].get<std::string>();
    }

    std::vector<std::string> out(rest.begin(), rest.begin() + static_cast<long>(command_at));
    out.push_back(command);
    for (const auto& [key, value] : cfg.items()) {
        if (key == "command") continue;
        out.push_back("--" + key);
        out.push_back(scalar_text(value));
    }
    if (command_at < rest.size()) out.insert(out.end(), rest.begin() + static_cast<long>(command_at) + 1, rest.end());
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coherence_lab: coherent-state splitting, Bell tests and dynamics"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Output output;
    app.add_option("--out", output.path, "Report file (stdout when omitted)");
    app.add_option("--format", output.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    SplitArgs split;
    auto* split_cmd = app.add_subcommand("split", "Split a state and report its factorization");
    split_cmd->add_option("--system", split.system, "spin or fock");
    split_cmd->add_option("--jA", split.ja, "Input spin");
    split_cmd->add_option("--jB", split.jb, "First output spin");
    split_cmd->add_option("--jC", split.jc, "Second output spin");
    split_cmd->add_option("--zeta", split.zeta, "Spin coherent label a+bi");
    split_cmd->add_option("--theta", split.theta, "Polar angle (spin)");
    split_cmd->add_option("--phi", split.phi, "Azimuth (spin)");
    split_cmd->add_option("--m", split.m, "Split the basis state |jA, m> instead");
    split_cmd->add_option("--N", split.cutoff, "Fock cutoff");
    split_cmd->add_option("--alpha", split.alpha, "Glauber amplitude a+bi");
    split_cmd->add_option("--n", split.number, "Split the number state |n> instead");
    split_cmd->add_option("--mu", split.mu, "Beamsplitter mu (default 1/sqrt2)");
    split_cmd->add_option("--nu", split.nu, "Beamsplitter nu");
    split_cmd->add_option("--state-file", split.state_file, "Input state JSON");
    split_cmd->add_flag("--include-state", split.include_state, "Embed the split state in the report");

    ChshArgs chsh;
    auto* chsh_cmd = app.add_subcommand("chsh", "Maximize the CHSH quantity of a bipartite state");
    chsh_cmd->add_option("--state", chsh.state, "Named state");
    chsh_cmd->add_option("--state-file", chsh.state_file, "State JSON");
    chsh_cmd->add_option("--zeta", chsh.zeta, "Label for split-spin1-cs");
    chsh_cmd->add_option("--strategy", chsh.strategy, "analytic-qubit or multistart");
    chsh_cmd->add_option("--n-starts", chsh.n_starts, "Multistart count");
    chsh_cmd->add_option("--seed", chsh.seed, "Seed for multistart");
    chsh_cmd->add_option("--tol", chsh.tol, "Convergence tolerance");

    EvolveArgs evolve;
    auto* evolve_cmd = app.add_subcommand("evolve", "Integrate a driven oscillator or a spin Hamiltonian");
    evolve_cmd->add_option("--system", evolve.system, "fock or spin");
    evolve_cmd->add_option("--drive", evolve.drive, "constant, rotating, cosine or sampled");
    evolve_cmd->add_option("--lambda", evolve.lambda, "Drive amplitude a+bi");
    evolve_cmd->add_option("--drive-frequency", evolve.drive_frequency, "Frequency of rotating or cosine drives");
    evolve_cmd->add_option("--drive-file", evolve.drive_file, "JSON {\"samples\": [[t, [re, im]], ...]}");
    evolve_cmd->add_option("--omega", evolve.omega, "Oscillator frequency");
    evolve_cmd->add_option("--tmax", evolve.tmax, "Final time");
    evolve_cmd->add_option("--points", evolve.points, "Output grid points");
    evolve_cmd->add_option("--step", evolve.step, "Maximum integration step (0 = default)");
    evolve_cmd->add_option("--N", evolve.cutoff, "Fock cutoff");
    evolve_cmd->add_option("--alpha0", evolve.alpha0, "Initial Glauber amplitude");
    evolve_cmd->add_option("--j", evolve.j, "Spin");
    evolve_cmd->add_option("--beta0", evolve.beta0, "J0 coefficient");
    evolve_cmd->add_option("--beta-plus", evolve.beta_plus, "J+ coefficient a+bi");
    evolve_cmd->add_option("--zeta0", evolve.zeta0, "Initial spin coherent label");

    ScanArgs scan;
    auto* scan_cmd = app.add_subcommand("scan", "Randomized uniqueness scan");
    scan_cmd->add_option("--system", scan.system, "spin or fock");
    scan_cmd->add_option("--jB", scan.jb, "First output spin");
    scan_cmd->add_option("--jC", scan.jc, "Second output spin");
    scan_cmd->add_option("--N", scan.cutoff, "Fock cutoff");
    scan_cmd->add_option("--samples", scan.samples, "Haar samples");
    scan_cmd->add_option("--seed", scan.seed, "Seed");

    SeriesArgs series;
    auto* series_cmd = app.add_subcommand("series", "Solve the splitting functional equation order by order");
    series_cmd->add_option("--order", series.order, "Truncation order");
    series_cmd->add_option("--tau", series.tau, "First-order rate a+bi");
    series_cmd->add_option("--mu", series.mu, "Beamsplitter mu (semisimple when omitted)");
    series_cmd->add_option("--nu", series.nu, "Beamsplitter nu");

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        const bool csv_requested = app.get_option("--format")->count() > 0 && output.format == "csv";
        if (csv_requested && !*evolve_cmd) throw ConfigError("csv output is only available for evolve");
        if (*split_cmd) output.emit(run_split(split));
        if (*chsh_cmd) output.emit(run_chsh(chsh));
        if (*scan_cmd) output.emit(run_scan(scan));
        if (*series_cmd) output.emit(run_series(series));
        if (*evolve_cmd) output.emit(run_evolve(evolve, app.get_option("--format")->count() ? output.format : "csv"));
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return is_numerical(e.code()) ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
