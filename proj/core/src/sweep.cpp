#include "cgbath/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "cgbath/errors.hpp"

namespace cgbath {

namespace {

constexpr std::pair<Parameter, std::string_view> kParameterNames[] = {
    {Parameter::Omega1, "omega1"},     {Parameter::Omega2, "omega2"},       {Parameter::DeltaOmega, "delta_omega"},
    {Parameter::OmegaMean, "omega_mean"}, {Parameter::Beta, "beta"},        {Parameter::OmegaC, "omega_c"},
    {Parameter::DeltaT, "delta_t"},    {Parameter::Lambda, "lambda"},
};

constexpr std::pair<ExtraOutput, std::string_view> kExtraNames[] = {
    {ExtraOutput::D12RealPart, "re_d12_mm"},
    {ExtraOutput::HighTempD12, "ht_abs_d12"},
    {ExtraOutput::HighTempDeltaTilde, "ht_delta_tilde"},
    {ExtraOutput::D12Residue, "d12_residue"},
    {ExtraOutput::H12Residue, "h12_residue"},
    {ExtraOutput::AdditivityResidue, "additivity_residue"},
};

std::string normalize(std::string_view s) {
    std::string out(s);
    std::replace(out.begin(), out.end(), '-', '_');
    return out;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double extra_value(const SweepRecord& r, ExtraOutput o) {
    switch (o) {
        case ExtraOutput::D12RealPart: return r.witness.d12_real_part;
        case ExtraOutput::HighTempD12: return r.high_temp_d12;
        case ExtraOutput::HighTempDeltaTilde: return r.high_temp_delta_tilde;
        case ExtraOutput::D12Residue: return r.residuals.d12_residue;
        case ExtraOutput::H12Residue: return r.residuals.h12_residue;
        case ExtraOutput::AdditivityResidue: return r.residuals.additivity_residue;
    }
    return kNaN;
}

// Each record as an ordered list of (key, rendered value, is_string).
struct Field {
    std::string_view key;
    std::string value;
    bool quoted;
};

std::vector<Field> record_fields(const SweepRecord& r, const std::vector<ExtraOutput>& extras) {
    const auto num = [](double x) { return format_double(x); };
    // Empty when the underlying witness was not computed.
    const auto flag = [&](double value) {
        return r.error.empty() && !std::isnan(value) ? std::string(value < 0.0 ? "true" : "false") : std::string();
    };
    const auto& c = record_columns();
    std::vector<Field> f{
        {c[0], num(r.sys.omega1), false},
        {c[1], num(r.sys.omega2), false},
        {c[2], num(r.bath.beta), false},
        {c[3], num(r.bath.omega_c), false},
        {c[4], num(r.sys.delta_t), false},
        {c[5], num(r.sys.lambda), false},
        {c[6], num(r.witness.d11_mm), false},
        {c[7], num(r.witness.d22_pp), false},
        {c[8], num(r.witness.d12.real()), false},
        {c[9], num(r.witness.d12.imag()), false},
        {c[10], num(r.witness.h12.real()), false},
        {c[11], num(r.witness.h12.imag()), false},
        {c[12], num(r.witness.delta), false},
        {c[13], num(r.witness.delta_tilde), false},
        {c[14], flag(r.witness.delta), false},
        {c[15], flag(r.witness.delta_tilde), false},
        {c[16], r.error, true},
    };
    for (ExtraOutput o : extras) f.push_back({extra_output_name(o), num(extra_value(r, o)), false});
    return f;
}

std::string json_value(const Field& f) {
    if (f.quoted) return "\"" + f.value + "\"";
    if (f.value.empty() || f.value == "nan" || f.value == "inf" || f.value == "-inf") return "null";
    return f.value;
}

SweepRecord failed_record(const BathSpectrum& bath, const SystemConfig& sys, std::string code) {
    SweepRecord r;
    r.bath = bath;
    r.sys = sys;
    r.witness.d11_mm = r.witness.d22_pp = r.witness.delta = r.witness.delta_tilde = kNaN;
    r.witness.d12 = r.witness.h12 = cd(kNaN, kNaN);
    r.witness.d12_real_part = kNaN;
    r.residuals = {kNaN, kNaN, kNaN, kNaN};
    r.high_temp_d12 = r.high_temp_delta_tilde = kNaN;
    r.error = std::move(code);
    return r;
}

template <class Writer>
void with_destination(const std::string& path, Writer&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        std::cout.flush();
        if (!std::cout) throw IoError("failed writing to standard output");
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open " + path + " for writing");
    write(file);
    file.flush();
    if (!file) throw IoError("failed writing " + path);
}

}  // namespace

std::string_view parameter_name(Parameter p) {
    for (const auto& [k, v] : kParameterNames)
        if (k == p) return v;
    return "?";
}

Parameter parse_parameter(std::string_view name) {
    const std::string n = normalize(name);
    for (const auto& [k, v] : kParameterNames)
        if (v == n) return k;
    throw DomainError("unknown parameter '" + std::string(name) + "'");
}

std::string_view extra_output_name(ExtraOutput o) {
    for (const auto& [k, v] : kExtraNames)
        if (k == o) return v;
    return "?";
}

ExtraOutput parse_extra_output(std::string_view name) {
    const std::string n = normalize(name);
    for (const auto& [k, v] : kExtraNames)
        if (v == n) return k;
    throw DomainError("unknown output column '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
    std::map<Parameter, int> bound;
    for (const auto& [p, v] : fixed) {
        if (!std::isfinite(v)) throw DomainError("fixed value of " + std::string(parameter_name(p)) + " is not finite");
        ++bound[p];
    }
    for (const Axis& ax : axes) {
        const std::string name(parameter_name(ax.parameter));
        if (ax.values.empty()) throw DomainError("axis " + name + " has no values");
        for (double v : ax.values)
            if (!std::isfinite(v)) throw DomainError("axis " + name + " has a non-finite value");
        if (ax.values.size() > 1) {
            const bool up = ax.values[1] > ax.values[0];
            for (std::size_t k = 1; k < ax.values.size(); ++k) {
                if (up ? !(ax.values[k] > ax.values[k - 1]) : !(ax.values[k] < ax.values[k - 1])) {
                    throw DomainError("axis " + name + " is not strictly monotone");
                }
            }
        }
        ++bound[ax.parameter];
    }
    for (const auto& [p, n] : bound)
        if (n > 1) throw DomainError("parameter " + std::string(parameter_name(p)) + " bound more than once");

    const auto has = [&](Parameter p) { return bound.count(p) > 0; };
    for (Parameter p : {Parameter::Beta, Parameter::OmegaC, Parameter::DeltaT, Parameter::Lambda})
        if (!has(p)) throw DomainError("parameter " + std::string(parameter_name(p)) + " is not bound");
    if (has(Parameter::DeltaOmega)) {
        if (!has(Parameter::OmegaMean)) throw DomainError("delta_omega requires omega_mean");
        if (has(Parameter::Omega1) || has(Parameter::Omega2)) {
            throw DomainError("omega1/omega2 cannot be bound together with delta_omega");
        }
    } else {
        if (has(Parameter::OmegaMean)) throw DomainError("omega_mean is only used with delta_omega");
        if (!has(Parameter::Omega1) || !has(Parameter::Omega2)) throw DomainError("omega1 and omega2 must be bound");
    }
}

std::size_t SweepSpec::size() const {
    std::size_t n = 1;
    for (const Axis& ax : axes) n *= ax.values.size();
    return n;
}

std::pair<BathSpectrum, SystemConfig> sweep_point(const SweepSpec& spec, std::size_t index) {
    std::map<Parameter, double> v = spec.fixed;
    for (auto it = spec.axes.rbegin(); it != spec.axes.rend(); ++it) {
        const std::size_t n = it->values.size();
        v[it->parameter] = it->values[index % n];
        index /= n;
    }
    BathSpectrum bath{v.at(Parameter::Beta), v.at(Parameter::OmegaC)};
    SystemConfig sys;
    if (v.count(Parameter::DeltaOmega)) {
        const double mean = v.at(Parameter::OmegaMean), dw = v.at(Parameter::DeltaOmega);
        sys.omega1 = mean - dw;
        sys.omega2 = mean + dw;
        if (!(sys.omega1 > 0.0) || !(sys.omega2 > 0.0)) {
            throw DomainError("omega_mean -/+ delta_omega must stay positive");
        }
    } else {
        sys.omega1 = v.at(Parameter::Omega1);
        sys.omega2 = v.at(Parameter::Omega2);
    }
    sys.delta_t = v.at(Parameter::DeltaT);
    sys.lambda = v.at(Parameter::Lambda);
    return {bath, sys};
}

SweepRecord run_point(const BathSpectrum& bath, const SystemConfig& sys, const WitnessOptions& opts) {
    bath.validate();
    sys.validate();
    SweepRecord r;
    r.bath = bath;
    r.sys = sys;
    r.witness = witness(bath, sys, opts);
    r.residuals = opts.include_hamiltonian ? orthogonality_residuals(r.witness, sys)
                                           : OrthogonalityResiduals{kNaN, kNaN, kNaN, kNaN};
    r.high_temp_d12 = high_temp_d12_approx(bath, sys);
    r.high_temp_delta_tilde = high_temp_delta_tilde_approx(bath, sys);
    return r;
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const SweepOptions& opts) {
    spec.validate();
    const std::size_t n = spec.size();
    std::vector<SweepRecord> rows(n);
    WitnessOptions wopts = opts.witness;
    wopts.include_hamiltonian = spec.include_hamiltonian;

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            BathSpectrum bath{kNaN, kNaN};
            SystemConfig sys{kNaN, kNaN, kNaN, kNaN};
            try {
                std::tie(bath, sys) = sweep_point(spec, k);
                rows[k] = run_point(bath, sys, wopts);
            } catch (const DomainError&) {
                rows[k] = failed_record(bath, sys, "domain_error");
            } catch (const NumericalError&) {
                rows[k] = failed_record(bath, sys, "numerical_error");
            } catch (const ConsistencyError&) {
                rows[k] = failed_record(bath, sys, "consistency_error");
            } catch (const std::exception&) {
                rows[k] = failed_record(bath, sys, "internal_error");
            }
        }
    };

    unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }
    return rows;
}

Format parse_format(std::string_view name) {
    if (name == "csv") return Format::Csv;
    if (name == "json") return Format::Json;
    throw DomainError("unknown format '" + std::string(name) + "' (expected csv or json)");
}

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols{
        "omega1", "omega2", "beta",   "omega_c", "delta_t", "lambda",      "d11_mm",     "d22_pp",
        "re_d12", "im_d12", "re_h12", "im_h12",  "delta",   "delta_tilde", "entangling", "dissipatively_entangling",
        "error"};
    return cols;
}

void emit(const std::vector<SweepRecord>& table, Format format, std::ostream& out,
          const std::vector<ExtraOutput>& extras) {
    if (format == Format::Csv) {
        std::string header;
        for (const auto& c : record_columns()) header += (header.empty() ? "" : ",") + c;
        for (ExtraOutput o : extras) header += "," + std::string(extra_output_name(o));
        out << header << '\n';
        for (const SweepRecord& r : table) {
            bool first = true;
            for (const Field& f : record_fields(r, extras)) {
                if (!first) out << ',';
                out << f.value;
                first = false;
            }
            out << '\n';
        }
        return;
    }
    out << '[';
    for (std::size_t k = 0; k < table.size(); ++k) {
        out << (k ? ",\n " : "\n ") << '{';
        bool first = true;
        for (const Field& f : record_fields(table[k], extras)) {
            out << (first ? "" : ", ") << '"' << f.key << "\": " << json_value(f);
            first = false;
        }
        out << '}';
    }
    out << (table.empty() ? "]\n" : "\n]\n");
}

void emit_trajectory(const Trajectory& traj, Format format, std::ostream& out) {
    std::vector<std::string> cols{"t", "concurrence", "trace_residual", "min_eigenvalue"};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const std::string ij = std::to_string(i) + std::to_string(j);
            cols.push_back("re_" + ij);
            cols.push_back("im_" + ij);
        }
    const auto values = [&](std::size_t k) {
        std::vector<double> v{traj.times[k], traj.concurrence[k], traj.checks[k].trace_residual,
                              traj.checks[k].min_eigenvalue};
        const auto& m = traj.states[k].entries;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                v.push_back(m(i, j).real());
                v.push_back(m(i, j).imag());
            }
        return v;
    };
    if (format == Format::Csv) {
        for (std::size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
        out << '\n';
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            const auto v = values(k);
            for (std::size_t c = 0; c < v.size(); ++c) out << (c ? "," : "") << format_double(v[c]);
            out << '\n';
        }
        return;
    }
    out << '[';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << (k ? ",\n " : "\n ") << '{';
        const auto v = values(k);
        for (std::size_t c = 0; c < v.size(); ++c) {
            const std::string s = format_double(v[c]);
            out << (c ? ", " : "") << '"' << cols[c] << "\": " << (std::isfinite(v[c]) ? s : "null");
        }
        out << '}';
    }
    out << (traj.times.empty() ? "]\n" : "\n]\n");
}

void emit_to(const std::vector<SweepRecord>& table, Format format, const std::string& path,
             const std::vector<ExtraOutput>& extras) {
    with_destination(path, [&](std::ostream& os) { emit(table, format, os, extras); });
}

void emit_trajectory_to(const Trajectory& traj, Format format, const std::string& path) {
    with_destination(path, [&](std::ostream& os) { emit_trajectory(traj, format, os); });
}

}  // namespace cgbath
