// cgbath: coefficients, witnesses, sweeps and trajectories from the command line.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cgbath/coefficients.hpp"
#include "cgbath/dynamics.hpp"
#include "cgbath/errors.hpp"
#include "cgbath/sweep.hpp"
#include "cgbath/witness.hpp"

namespace {

using namespace cgbath;

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kIo = 3, kNumerical = 4 };

struct Params {
    std::optional<double> omega1, omega2, beta, omega_c, delta_t, lambda, omega_mean, delta_omega;
    std::string format = "csv";
    std::string out = "-";

    double require(const std::optional<double>& v, const char* flag) const {
        if (!v) throw DomainError(std::string("missing required parameter ") + flag);
        return *v;
    }
    BathSpectrum bath() const { return {require(beta, "--beta"), require(omega_c, "--omega-c")}; }
    SystemConfig sys() const {
        SystemConfig s;
        if (delta_omega) {
            const double mean = require(omega_mean, "--omega-mean");
            s.omega1 = mean - *delta_omega;
            s.omega2 = mean + *delta_omega;
        } else {
            s.omega1 = require(omega1, "--omega1");
            s.omega2 = require(omega2, "--omega2");
        }
        s.delta_t = require(delta_t, "--delta-t");
        s.lambda = lambda.value_or(0.0);
        return s;
    }
};

// "name=a:b:n" (linear), "name=a:b:n:log" (geometric) or "name=v1,v2,...".
Axis parse_axis(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw DomainError("axis '" + text + "' must look like name=values");
    Axis ax{parse_parameter(text.substr(0, eq)), {}};
    const std::string rhs = text.substr(eq + 1);
    auto number = [&](const std::string& s) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || s.empty()) throw DomainError("axis '" + text + "': bad number '" + s + "'");
        return v;
    };
    if (rhs.find(':') != std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(rhs);
        for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
        if (parts.size() < 3 || parts.size() > 4 || (parts.size() == 4 && parts[3] != "log")) {
            throw DomainError("axis '" + text + "': expected start:stop:count[:log]");
        }
        const double a = number(parts[0]), b = number(parts[1]);
        const double n = number(parts[2]);
        if (!(n >= 1.0) || n != std::floor(n)) throw DomainError("axis '" + text + "': count must be a positive integer");
        const bool log = parts.size() == 4;
        if (log && !(a > 0.0 && b > 0.0)) throw DomainError("axis '" + text + "': log grid needs positive bounds");
        const auto count = static_cast<std::size_t>(n);
        for (std::size_t k = 0; k < count; ++k) {
            const double f = count == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(count - 1);
            ax.values.push_back(log ? a * std::pow(b / a, f) : a + (b - a) * f);
        }
        if (count > 1) ax.values.back() = b;
    } else {
        std::stringstream ss(rhs);
        for (std::string p; std::getline(ss, p, ',');) ax.values.push_back(number(p));
    }
    return ax;
}

void emit_coefficients(const CoefficientSet& set, const KossakowskiMatrix& C, const LambShiftInteraction& h,
                       Format format, std::ostream& os) {
    struct Row {
        std::string kind;
        int a, b, i, j;
        cd v;
    };
    std::vector<Row> rows;
    const char* sign[] = {"+", "-"};
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) {
                    rows.push_back({"D", a, b, i, j, set.D(a, b).entries(i, j)});
                    rows.push_back({"H", a, b, i, j, set.H(a, b).entries(i, j)});
                }
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) rows.push_back({"C", k / 2 + 1, l / 2 + 1, k % 2 + 1, l % 2 + 1, C.entries(k, l)});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) rows.push_back({"h", 1, 2, i + 1, j + 1, cd(h.h(i, j), 0.0)});

    // D and H rows index signs (+, -); C and h rows index Pauli matrices (1, 2).
    auto idx = [&](const Row& r, int v) {
        return (r.kind == "D" || r.kind == "H") ? std::string(sign[v]) : std::to_string(v);
    };
    if (format == Format::Csv) {
        os << "kind,a,b,i,j,re,im\n";
        for (const Row& r : rows)
            os << r.kind << ',' << r.a << ',' << r.b << ',' << idx(r, r.i) << ',' << idx(r, r.j) << ','
               << format_double(r.v.real()) << ',' << format_double(r.v.imag()) << '\n';
        return;
    }
    os << '[';
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const Row& r = rows[k];
        os << (k ? ",\n " : "\n ") << "{\"kind\": \"" << r.kind << "\", \"a\": " << r.a << ", \"b\": " << r.b
           << ", \"i\": \"" << idx(r, r.i) << "\", \"j\": \"" << idx(r, r.j)
           << "\", \"re\": " << format_double(r.v.real()) << ", \"im\": " << format_double(r.v.imag()) << '}';
    }
    os << "\n]\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite coarse-graining-time master equation for two qubits in a common Ohmic bath"};
    app.set_config("--config", "", "Key-value file supplying defaults (flags override)");
    app.require_subcommand(1);
    app.fallthrough();

    Params p;
    app.add_option("--omega1", p.omega1, "Frequency of qubit 1");
    app.add_option("--omega2", p.omega2, "Frequency of qubit 2");
    app.add_option("--beta", p.beta, "Inverse temperature");
    app.add_option("--omega-c", p.omega_c, "Bath cutoff frequency");
    app.add_option("--delta-t", p.delta_t, "Coarse-graining time");
    app.add_option("--lambda", p.lambda, "Coupling constant");
    app.add_option("--omega-mean", p.omega_mean, "Mean frequency, used with --delta-omega");
    app.add_option("--delta-omega", p.delta_omega, "Half frequency difference; sets omega1,2 = mean -/+ delta");
    app.add_option("--format", p.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", p.out, "Output path, '-' for standard output");

    auto* coeffs = app.add_subcommand("coeffs", "Dissipative and Hamiltonian blocks, Kossakowski matrix");
    std::string path = "frequency";
    coeffs->add_option("--path", path, "Dissipative integral path")->check(CLI::IsMember({"frequency", "time"}));

    auto* wit = app.add_subcommand("witness", "Entanglement witnesses at one point");
    std::vector<std::string> extras;
    wit->add_option("--extra", extras, "Additional columns");

    auto* sweep = app.add_subcommand("sweep", "Witnesses over a parameter grid");
    std::vector<std::string> axes;
    unsigned threads = 0;
    bool no_h = false;
    sweep->add_option("--axis", axes, "name=start:stop:count[:log] or name=v1,v2,...")->required();
    sweep->add_option("--threads", threads, "Worker threads (0 = all cores)");
    sweep->add_option("--extra", extras, "Additional columns");
    sweep->add_flag("--no-hamiltonian", no_h, "Skip the Hamiltonian integrals (delta reported as nan)");

    auto* evolve_cmd = app.add_subcommand("evolve", "Trajectory from |d>|u>");
    std::size_t steps = 200;
    std::optional<double> t_final;
    bool shift = false;
    evolve_cmd->add_option("--steps", steps, "Number of steps");
    evolve_cmd->add_option("--t-final", t_final, "Final time (default: onset horizon)");
    evolve_cmd->add_flag("--include-single-qubit-shift", shift, "Add single-qubit Lamb shifts");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        const Format format = parse_format(p.format);
        std::vector<ExtraOutput> extra_cols;
        for (const auto& e : extras) extra_cols.push_back(parse_extra_output(e));

        if (*coeffs) {
            const BathSpectrum bath = p.bath();
            SystemConfig sys = p.sys();
            bath.validate();
            sys.validate();
            if (sys.lambda == 0.0) sys.lambda = 1.0;
            const auto dp = path == "time" ? DissipativePath::Time : DissipativePath::Frequency;
            const CoefficientSet set = compute_coefficients(bath, sys, dp);
            const KossakowskiMatrix C = kossakowski_from_blocks(set.dissipative, sys.lambda);
            const LambShiftInteraction h = lamb_shift_from_blocks(set.H(1, 2), set.H(2, 1));
            if (p.lambda.value_or(0.0) == 0.0) std::cerr << "note: C reported with lambda = 1\n";
            std::ostringstream os;
            emit_coefficients(set, C, h, format, os);
            if (p.out.empty() || p.out == "-") {
                std::cout << os.str();
            } else {
                std::ofstream f(p.out, std::ios::binary);
                if (!(f << os.str())) throw IoError("failed writing " + p.out);
            }
        } else if (*wit) {
            const std::vector<SweepRecord> rows{run_point(p.bath(), p.sys())};
            emit_to(rows, format, p.out, extra_cols);
        } else if (*sweep) {
            SweepSpec spec;
            for (const auto& a : axes) spec.axes.push_back(parse_axis(a));
            spec.outputs = extra_cols;
            spec.include_hamiltonian = !no_h;
            const std::pair<Parameter, std::optional<double>> given[] = {
                {Parameter::Omega1, p.omega1},         {Parameter::Omega2, p.omega2},
                {Parameter::Beta, p.beta},             {Parameter::OmegaC, p.omega_c},
                {Parameter::DeltaT, p.delta_t},        {Parameter::Lambda, p.lambda},
                {Parameter::OmegaMean, p.omega_mean},  {Parameter::DeltaOmega, p.delta_omega},
            };
            for (const auto& [param, v] : given) {
                bool on_axis = false;
                for (const Axis& ax : spec.axes) on_axis = on_axis || ax.parameter == param;
                if (v && !on_axis) spec.fixed[param] = *v;
            }
            if (!spec.fixed.count(Parameter::Lambda)) {
                bool on_axis = false;
                for (const Axis& ax : spec.axes) on_axis = on_axis || ax.parameter == Parameter::Lambda;
                if (!on_axis) spec.fixed[Parameter::Lambda] = 0.0;
            }
            SweepOptions so;
            so.threads = threads;
            const auto rows = run_sweep(spec, so);
            std::size_t failed = 0;
            for (const auto& r : rows) failed += r.error.empty() ? 0 : 1;
            if (failed) std::cerr << failed << " of " << rows.size() << " points failed\n";
            emit_to(rows, format, p.out, extra_cols);
        } else if (*evolve_cmd) {
            const BathSpectrum bath = p.bath();
            const SystemConfig sys = p.sys();
            GeneratorOptions go;
            go.include_single_qubit_shift = shift;
            const Liouvillian L = build_generator(bath, sys, go);
            double tf = 0.0;
            if (t_final) {
                tf = *t_final;
            } else {
                if (!(L.kossakowski.max_eigenvalue > 0.0)) throw DomainError("--t-final is required when lambda = 0");
                tf = 0.1 / L.kossakowski.max_eigenvalue;
            }
            const Trajectory traj = evolve(L, initial_state_down_up(), tf, steps);
            emit_trajectory_to(traj, format, p.out);
        }
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}
