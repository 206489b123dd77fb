#include "qthermo/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"

#include "qthermo/io.hpp"
#include "qthermo/qwalk.hpp"

#ifndef QTHERMO_VERSION
#define QTHERMO_VERSION "0.0.0"
#endif

namespace qthermo::cli {

namespace {

using nlohmann::json;

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::stringstream        ss(text);
    std::string              item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

double parse_number(const std::string &text, const std::string &what) {
    try {
        std::size_t used  = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception &) {
        throw Error(ErrorCode::ParseError, "cannot parse " + what + " '" + text + "'");
    }
}

// "re" or "re,im"
Complex parse_complex(const std::string &text, const std::string &what) {
    const auto parts = split(text, ',');
    if (parts.size() == 1) return {parse_number(parts[0], what), 0.0};
    if (parts.size() == 2) return {parse_number(parts[0], what), parse_number(parts[1], what)};
    throw Error(ErrorCode::ParseError, what + " must be 're' or 're,im', got '" + text + "'");
}

void apply_tolerances(const std::vector<std::string> &overrides, Tolerances &tol) {
    for (const auto &item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "--tol expects name=value, got '" + item + "'");
        tol.set(item.substr(0, eq), parse_number(item.substr(eq + 1), "tolerance"));
    }
}

// An observable argument is a Gell-Mann label (O1..O8) or a JSON matrix file.
Observable load_observable(const std::string &spec) {
    if (!std::filesystem::exists(spec)) {
        try {
            return gell_mann_by_label(spec);
        } catch (const Error &) {
            throw Error(ErrorCode::ParseError, "observable '" + spec + "' is neither a built-in label nor a file");
        }
    }
    return {std::filesystem::path(spec).stem().string(), io::read_matrix_file(spec)};
}

std::string row_string(const RealVector &v) {
    std::string s;
    for (Eigen::Index j = 0; j < v.size(); ++j) {
        if (j) s += ' ';
        s += io::format_double(v(j));
    }
    return s;
}

// Writes CSV either to --out (plus manifest) or to `out`.
template <class Body>
void emit_csv(const std::string &path, std::ostream &out, const io::RunManifest &manifest, Body &&body) {
    if (path.empty()) {
        body(out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
    body(file);
    file.close();
    io::write_manifest(path, manifest);
}

struct TempArgs {
    std::string              state;
    std::string              hamiltonian;
    std::vector<std::string> observables;
};

int cmd_temp(const TempArgs &args, const Tolerances &tol, std::ostream &out) {
    const DensityMatrix rho = DensityMatrix::from_matrix(io::read_matrix_file(args.state), tol);
    ComplexMatrix       h   = io::read_matrix_file(args.hamiltonian);
    std::vector<Observable> obs;
    for (const auto &o : args.observables) obs.push_back(load_observable(o));
    const ThermoContext ctx = ThermoContext::make(h, obs, tol);

    const RealVector gamma = constraint_vector(rho, ctx);
    out << "dim: " << rho.dim() << '\n';
    out << "E: " << io::format_double(gamma(0)) << '\n';
    out << "S: " << io::format_double(vn_entropy(rho, tol)) << '\n';

    const EigenDecomposition basis = natural_basis(rho, ctx, tol);
    const MMatrix            mm    = build_m(basis, ctx, tol);
    out << "det_M: " << io::format_double(mm.det) << '\n';
    out << "populations: " << row_string(basis.eigenvalues) << '\n';

    const TemperatureResult t = temperature_general(rho, ctx, tol);
    out << "kind: " << to_string(t.kind) << '\n';
    out << "T: " << io::temperature_cell(t) << '\n';
    out << "condition_M: " << io::format_double(t.diagnostics.condition) << '\n';
    if (t.diagnostics.degenerate_subspace) out << "note: degenerate eigenspace of rho, basis fixed by tie-break\n";
    if (rho.dim() == 2) out << "T_qubit: " << io::temperature_cell(temperature_qubit(rho, h, tol)) << '\n';
    if (rho.dim() == 3 && obs.size() == 1) {
        out << "T_qutrit: " << io::temperature_cell(temperature_qutrit(rho, h, obs[0].matrix, tol)) << '\n';
    }
    return kOk;
}

int cmd_spectral(const TempArgs &args, const Tolerances &tol, std::ostream &out) {
    const DensityMatrix rho = DensityMatrix::from_matrix(io::read_matrix_file(args.state), tol);
    const ComplexMatrix h   = io::read_matrix_file(args.hamiltonian);
    const double        tau = temperature_spectral(rho, h, tol);
    out << "tau: " << io::format_double(tau) << '\n';

    std::vector<Observable> obs;
    for (const auto &o : args.observables) obs.push_back(load_observable(o));
    if (static_cast<Eigen::Index>(obs.size()) + 2 != rho.dim()) {
        out << "T: n/a (needs " << rho.dim() - 2 << " complementary observables)\n";
        return kOk;
    }
    const TemperatureResult t = temperature_general(rho, ThermoContext::make(h, obs, tol), tol);
    out << "kind: " << to_string(t.kind) << '\n';
    out << "T: " << io::temperature_cell(t) << '\n';
    return kOk;
}

struct WalkArgs {
    double      sigma = 10.0;
    std::string a0;
    std::string b0;
    std::string c0;
    int         steps      = 400;
    int         half_width = 0;
    std::string observables = "1,2,3,4,5,6,7,8";
    std::string out;
};

int cmd_walk(const WalkArgs &args, const Tolerances &tol, std::ostream &out, std::ostream &err) {
    WalkConfig cfg = WalkConfig::defaults();
    cfg.sigma      = args.sigma;
    cfg.steps      = args.steps;
    if (!args.a0.empty()) cfg.a0 = parse_complex(args.a0, "--a0");
    cfg.c0 = args.c0.empty() ? cfg.a0 : parse_complex(args.c0, "--c0");
    if (!args.b0.empty()) {
        cfg.b0 = parse_complex(args.b0, "--b0");
    } else {
        const double rest = 1.0 - std::norm(cfg.a0) - std::norm(cfg.c0);
        if (rest < 0.0) throw Error(ErrorCode::InvalidArgument, "|a0|^2 + |c0|^2 exceeds 1");
        cfg.b0 = Complex(std::sqrt(rest), 0.0);
    }
    cfg.lattice_half_width = args.half_width > 0 ? args.half_width : cfg.minimum_half_width();

    std::vector<std::string> labels;
    for (const auto &l : split(args.observables, ',')) labels.push_back(gell_mann_by_label(l).label);

    const CoinTrajectory traj = run_experiment(cfg, labels, tol);

    for (std::size_t k = 0; k < labels.size(); ++k) {
        std::size_t singular = 0;
        for (const auto &rec : traj.records) singular += rec.temperatures[k].singular ? 1 : 0;
        if (singular) {
            err << "warning: " << labels[k] << " singular (det M = 0) at " << singular << " of " << traj.records.size()
                << " steps; it cannot fix the state together with the energy\n";
        }
    }

    io::RunManifest manifest{"walk",
                             {{"sigma", cfg.sigma},
                              {"a0", {cfg.a0.real(), cfg.a0.imag()}},
                              {"b0", {cfg.b0.real(), cfg.b0.imag()}},
                              {"c0", {cfg.c0.real(), cfg.c0.imag()}},
                              {"steps", cfg.steps},
                              {"half_width", cfg.lattice_half_width},
                              {"observables", labels},
                              {"x_infinity", traj.records.size() >= 50 ? estimate_x_infinity(traj) : 0.0}},
                             QTHERMO_VERSION,
                             tol};

    emit_csv(args.out, out, manifest, [&](std::ostream &os) {
        std::vector<std::string> header{"t", "E", "S", "x_offdiag_mean"};
        for (const auto &l : labels) header.push_back("T_" + l);
        io::CsvWriter csv(os, header);
        for (const auto &rec : traj.records) {
            std::vector<std::string> cells{std::to_string(rec.t), io::format_double(rec.energy),
                                           io::format_double(rec.entropy), io::format_double(rec.x_offdiag)};
            for (const auto &ot : rec.temperatures) {
                cells.push_back(ot.singular ? io::kSingularCell : io::temperature_cell(ot.result));
            }
            csv.row(cells);
        }
    });
    return kOk;
}

struct IsothermArgs {
    std::string temps   = "0.5,-2";
    double      epsilon = 1.0;
    int         samples = 200;
    std::string out;
};

int cmd_isotherm(const IsothermArgs &args, const Tolerances &tol, std::ostream &out) {
    std::vector<double> temps;
    for (const auto &t : split(args.temps, ',')) temps.push_back(parse_number(t, "--temps"));
    if (temps.empty()) throw Error(ErrorCode::InvalidArgument, "--temps is empty");

    std::vector<std::pair<double, std::vector<IsothermPoint>>> surfaces;
    for (double t : temps) surfaces.emplace_back(t, isotherm_samples(t, args.epsilon, args.samples));

    io::RunManifest manifest{"isotherm",
                             {{"temps", temps}, {"epsilon", args.epsilon}, {"samples", args.samples}},
                             QTHERMO_VERSION,
                             tol};
    emit_csv(args.out, out, manifest, [&](std::ostream &os) {
        io::CsvWriter csv(os, {"T", "B", "theta"});
        for (const auto &[t, points] : surfaces) {
            for (const auto &p : points) {
                csv.row({io::format_double(t), io::format_double(p.modulus), io::format_double(p.theta)});
            }
        }
    });
    return kOk;
}

struct CapacityArgs {
    double      epsilon = 1.0;
    double      theta   = 0.0;
    double      tmin    = 0.1;
    double      tmax    = 5.0;
    int         samples = 50;
    std::string out;
};

int cmd_capacity(const CapacityArgs &args, const Tolerances &tol, std::ostream &out) {
    if (args.samples < 2) throw Error(ErrorCode::InvalidArgument, "--samples must be at least 2");
    if (!(args.tmax > args.tmin)) throw Error(ErrorCode::InvalidArgument, "--tmax must exceed --tmin");
    io::RunManifest manifest{"capacity",
                             {{"epsilon", args.epsilon},
                              {"theta", args.theta},
                              {"tmin", args.tmin},
                              {"tmax", args.tmax},
                              {"samples", args.samples}},
                             QTHERMO_VERSION,
                             tol};
    emit_csv(args.out, out, manifest, [&](std::ostream &os) {
        io::CsvWriter csv(os, {"T", "C"});
        for (int k = 0; k < args.samples; ++k) {
            const double t = args.tmin + (args.tmax - args.tmin) * k / (args.samples - 1);
            csv.row({io::format_double(t), io::format_double(heat_capacity(args.epsilon, args.theta, t).value)});
        }
    });
    return kOk;
}

} // namespace

int exit_code_for(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::ParseError: return kParse;
    case ErrorCode::SingularM:
    case ErrorCode::SingularMatrix: return kSingular;
    case ErrorCode::NoConvergence:
    case ErrorCode::NoSolution:
    case ErrorCode::ZeroPopulation:
    case ErrorCode::InfiniteT:
    case ErrorCode::BoundaryOverflow: return kNumeric;
    default: return kValidation;
    }
}

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Out-of-equilibrium temperature of finite-dimensional quantum systems", "qthermo"};
    app.set_version_flag("--version", QTHERMO_VERSION);
    app.require_subcommand(1);

    std::vector<std::string> tol_overrides;
    app.add_option("--tol", tol_overrides, "Override a tolerance, name=value (repeatable)");

    TempArgs temp_args;
    auto    *temp = app.add_subcommand("temp", "Temperature of a state for a Hamiltonian and observables");
    temp->add_option("--state", temp_args.state, "JSON density matrix")->required();
    temp->add_option("--hamiltonian", temp_args.hamiltonian, "JSON Hamiltonian")->required();
    temp->add_option("--observable", temp_args.observables, "Gell-Mann label (O1..O8) or JSON matrix; repeatable");

    TempArgs spectral_args;
    auto    *spectral = app.add_subcommand("spectral", "Spectral temperature next to the entropic temperature");
    spectral->add_option("--state", spectral_args.state, "JSON density matrix")->required();
    spectral->add_option("--hamiltonian", spectral_args.hamiltonian, "JSON Hamiltonian")->required();
    spectral->add_option("--observable", spectral_args.observables, "Complementary observable; repeatable");

    WalkArgs walk_args;
    auto    *walk = app.add_subcommand("walk", "Three-state Grover walk: coin temperatures over time (CSV)");
    walk->add_option("--sigma", walk_args.sigma, "Gaussian width in sites")->capture_default_str();
    walk->add_option("--a0", walk_args.a0, "R amplitude, 're' or 're,im' (default -0.192743)");
    walk->add_option("--b0", walk_args.b0, "N amplitude (default: from normalization)");
    walk->add_option("--c0", walk_args.c0, "L amplitude (default: equal to a0)");
    walk->add_option("--steps", walk_args.steps, "Number of walk steps")->capture_default_str();
    walk->add_option("--half-width", walk_args.half_width, "Lattice half width L (default steps + ceil(6 sigma))");
    walk->add_option("--observables", walk_args.observables, "Comma-separated Gell-Mann indices")
        ->capture_default_str();
    walk->add_option("--out", walk_args.out, "CSV output path (stdout if omitted)");

    IsothermArgs iso_args;
    auto        *iso = app.add_subcommand("isotherm", "Isothermal surfaces in the Bloch ball (CSV)");
    iso->add_option("--temps", iso_args.temps, "Comma-separated temperatures")->capture_default_str();
    iso->add_option("--epsilon", iso_args.epsilon, "Level half-splitting")->capture_default_str();
    iso->add_option("--samples", iso_args.samples, "Bloch moduli sampled per surface")->capture_default_str();
    iso->add_option("--out", iso_args.out, "CSV output path (stdout if omitted)");

    CapacityArgs cap_args;
    auto        *cap = app.add_subcommand("capacity", "Qubit heat capacity C(T) (CSV)");
    cap->add_option("--epsilon", cap_args.epsilon, "Level half-splitting")->capture_default_str();
    cap->add_option("--theta", cap_args.theta, "Polar angle of the Bloch vector, radians")->capture_default_str();
    cap->add_option("--tmin", cap_args.tmin, "Lowest temperature")->capture_default_str();
    cap->add_option("--tmax", cap_args.tmax, "Highest temperature")->capture_default_str();
    cap->add_option("--samples", cap_args.samples, "Number of temperatures")->capture_default_str();
    cap->add_option("--out", cap_args.out, "CSV output path (stdout if omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForVersion &) {
        out << QTHERMO_VERSION << '\n';
        return kOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kParse;
    }

    try {
        Tolerances tol;
        apply_tolerances(tol_overrides, tol);
        if (temp->parsed()) return cmd_temp(temp_args, tol, out);
        if (spectral->parsed()) return cmd_spectral(spectral_args, tol, out);
        if (walk->parsed()) return cmd_walk(walk_args, tol, out, err);
        if (iso->parsed()) return cmd_isotherm(iso_args, tol, out);
        if (cap->parsed()) return cmd_capacity(cap_args, tol, out);
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    }
    return kOk;
}

} // namespace qthermo::cli
