#pragma once

// Cooperativity and detuning sweeps of the effective occupation of mode a,
// and location of the cooling optimum.

#include <optional>
#include <string>
#include <vector>

#include "omcool/model.hpp"
#include "omcool/rwa.hpp"
#include "omcool/spectral.hpp"

namespace omcool {

// One evaluation of the cooled occupation of mode a.
//   rwa  : closed form (weighted bath average, detuning-aware)
//   full : integrated spectrum of the counter-rotating six-component model
struct CoolingPoint {
    double n_eff = 0.0;
    double T_ratio = 0.0;    // T_eff / T_a
    double linewidth = 0.0;  // rad/s
    RegimeFlags flags;
};

CoolingPoint evaluate_cooling(const SystemSpec& spec, Fidelity fidelity, const GridOptions& grid = {});

// Spec with Gamma = C_OM * gamma_b set through alpha at fixed kappa and g0.
SystemSpec at_cooperativity(const SystemSpec& spec, double C_OM);

struct SweepResult {
    std::string axis;  // "C_OM" or "detuning"
    std::vector<double> values;
    std::vector<double> n_eff;
    std::vector<double> T_ratio;
    std::vector<double> linewidths;
    std::vector<RegimeFlags> validity_flags;
    // Per-point failure (instability etc.); the numeric entries are NaN there.
    std::vector<std::optional<std::string>> errors;
    // Cooperativity used at each point (differs per point in optimize mode).
    std::vector<double> C_OM;

    std::size_t size() const { return values.size(); }
};

SweepResult sweep_cooperativity(const SystemSpec& spec, const std::vector<double>& C_OM_values,
                                Fidelity fidelity, const GridOptions& grid = {});

struct Optimum {
    double C_OM_star = 0.0;
    double n_eff_star = 0.0;
    double n_ratio = 0.0;  // n_eff_star / nbar_a
};

// Golden-section search in log C_OM to relative tolerance 1e-4. Throws
// no_minimum when the bracket holds no interior minimum.
Optimum find_optimum(const SystemSpec& spec, double C_OM_lo, double C_OM_hi, Fidelity fidelity,
                     const GridOptions& grid = {});

enum class DetuningMode { fixed_cooperativity, optimize };

// Sets w_b = w_a + delta (the cavity stays on b's red sideband). In optimize
// mode each point uses its own optimal C_OM within [optimize_lo, optimize_hi].
SweepResult sweep_detuning(const SystemSpec& spec, const std::vector<double>& deltas, Fidelity fidelity,
                           DetuningMode mode, double C_OM, const GridOptions& grid = {},
                           double optimize_lo = 1e-2, double optimize_hi = 1e3);

// Default C_OM axis: 60 points per decade over [1e-2, 1e3].
std::vector<double> log_spaced(double lo, double hi, int per_decade);
std::vector<double> default_cooperativity_axis();

}  // namespace omcool
