#pragma once

// Parameter sweeps over the witness quantities and the text formats used to
// export them.

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cgbath/bath.hpp"
#include "cgbath/coefficients.hpp"
#include "cgbath/dynamics.hpp"
#include "cgbath/witness.hpp"

namespace cgbath {

enum class Parameter { Omega1, Omega2, DeltaOmega, OmegaMean, Beta, OmegaC, DeltaT, Lambda };

std::string_view parameter_name(Parameter p);
/// Accepts omega1, omega2, delta_omega, omega_mean, beta, omega_c, delta_t,
/// lambda (dashes are treated as underscores). Throws DomainError.
Parameter parse_parameter(std::string_view name);

struct Axis {
    Parameter parameter;
    std::vector<double> values;
};

/// Optional columns appended after the fixed record columns.
enum class ExtraOutput { D12RealPart, HighTempD12, HighTempDeltaTilde, D12Residue, H12Residue, AdditivityResidue };

std::string_view extra_output_name(ExtraOutput o);
ExtraOutput parse_extra_output(std::string_view name);

struct SweepSpec {
    std::vector<Axis> axes;
    std::map<Parameter, double> fixed;
    std::vector<ExtraOutput> outputs;
    bool include_hamiltonian = true;

    /// Throws DomainError unless every parameter is bound exactly once and
    /// every grid is non-empty and strictly monotone. omega1/omega2 are bound
    /// either directly or through (omega_mean, delta_omega).
    void validate() const;
    std::size_t size() const;
};

struct SweepRecord {
    BathSpectrum bath{};
    SystemConfig sys{};
    WitnessReport witness{};
    OrthogonalityResiduals residuals{};
    double high_temp_d12 = 0.0;
    double high_temp_delta_tilde = 0.0;
    /// Empty on success, otherwise one of domain_error, numerical_error,
    /// consistency_error, internal_error.
    std::string error;
};

/// Validates the configs (throws DomainError) then evaluates the witness,
/// residuals and approximations.
SweepRecord run_point(const BathSpectrum& bath, const SystemConfig& sys, const WitnessOptions& opts = {});

/// Resolve grid index -> configuration. Throws DomainError if omega1/omega2
/// derived from (omega_mean, delta_omega) are not positive.
std::pair<BathSpectrum, SystemConfig> sweep_point(const SweepSpec& spec, std::size_t index);

struct SweepOptions {
    /// 0 selects std::thread::hardware_concurrency().
    unsigned threads = 0;
    WitnessOptions witness{};
};

/// Cartesian product of the axes, first axis slowest. Point failures are
/// recorded in the error column; the row count always equals spec.size().
std::vector<SweepRecord> run_sweep(const SweepSpec& spec, const SweepOptions& opts = {});

enum class Format { Csv, Json };
Format parse_format(std::string_view name);

/// 17 significant digits; nan/inf spelled as such.
std::string format_double(double x);

const std::vector<std::string>& record_columns();

void emit(const std::vector<SweepRecord>& table, Format format, std::ostream& out,
          const std::vector<ExtraOutput>& extras = {});
void emit_trajectory(const Trajectory& traj, Format format, std::ostream& out);

/// Writes to `path`, or standard output when path is empty or "-". Throws
/// IoError naming the path.
void emit_to(const std::vector<SweepRecord>& table, Format format, const std::string& path,
             const std::vector<ExtraOutput>& extras = {});
void emit_trajectory_to(const Trajectory& traj, Format format, const std::string& path);

}  // namespace cgbath
