#pragma once

// Randomised stable configurations and the invariants every one of them must
// satisfy. Shared by the unit tests (small sample) and the acceptance run.

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "omcool/errors.hpp"
#include "omcool/model.hpp"
#include "omcool/rwa.hpp"
#include "omcool/spectral.hpp"
#include "omcool/sweep.hpp"
#include "omcool/units.hpp"

namespace property {

struct Draw {
    omcool::SystemSpec spec;
    omcool::Fidelity fidelity = omcool::Fidelity::rwa;
};

inline double log_uniform(std::mt19937_64& rng, double lo, double hi)
{
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    return std::exp(u(rng));
}

// Mechanical frequencies near 1 MHz, dampings spanning four decades,
// couplings at most 1e-2 of the frequency, classical thermal baths. The b
// detuning stays below 2 gamma_b and kappa above 30 gamma_b: beyond
// 4 delta^2 > gamma_b kappa the cavity's dynamical spring pulls b toward a
// and the force-noise factor is no longer monotone in C_OM.
inline Draw draw(std::mt19937_64& rng, int index)
{
    using omcool::kTwoPi;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Draw d;
    d.fidelity = index % 2 == 0 ? omcool::Fidelity::rwa : omcool::Fidelity::full;
    auto& s = d.spec;
    const double wa = kTwoPi * log_uniform(rng, 0.5e6, 2e6);
    const double gb = kTwoPi * log_uniform(rng, 10.0, 3e3);
    const double ga = gb * log_uniform(rng, 1e-4, 1.0);
    const double wb = wa + gb * (u(rng) < 0.5 ? 0.0 : log_uniform(rng, 0.01, 2.0));
    const double T = log_uniform(rng, 1.0, 300.0);
    s.mode_a = {wa, ga, T};
    s.mode_b = {wb, gb, u(rng) < 0.5 ? T : log_uniform(rng, 1.0, 300.0)};
    s.lambda = std::min(0.5 * std::sqrt(log_uniform(rng, 0.1, 500.0) * ga * gb), 1e-2 * wa);
    const double kappa = gb * log_uniform(rng, 30.0, 300.0);
    const double Gamma = gb * log_uniform(rng, 0.01, 30.0);
    const double g0 = kTwoPi * 10.0;
    const double alpha = std::sqrt(Gamma * kappa) / (2.0 * g0);
    s.cavity = omcool::CavityDrive::from_alpha(kappa, -wb, g0, std::min(alpha, 1e-2 * wa / g0));
    return d;
}

struct Outcome {
    bool ok = true;
    std::string failure;
    double max_residual = 0.0;
    double refinement_change = 0.0;
};

// Checks one configuration. The force factor is probed on a short C_OM ladder.
inline Outcome check(const Draw& d)
{
    using namespace omcool;
    Outcome out;
    auto fail = [&out](const std::string& what) {
        if (out.ok) out.failure = what;
        out.ok = false;
    };
    const SystemSpec& s = d.spec;
    const DriftModel model = build_system(s, d.fidelity);
    if (!check_stability(model).stable) {
        fail("drawn configuration is unstable");
        return out;
    }

    const SpectrumResult base = position_spectrum(model, "a");
    const auto& w = base.grid.points();
    for (std::size_t i = 0; i < w.size(); i += std::max<std::size_t>(1, w.size() / 25)) {
        const Eigen::MatrixXcd chi = susceptibility_matrix(model, w[i]);
        out.max_residual = std::max(out.max_residual, susceptibility_residual(model, w[i], chi));
    }
    if (!(out.max_residual <= 1e-10)) fail("susceptibility residual above 1e-10");

    if (!std::all_of(base.values.begin(), base.values.end(), [](double v) { return v >= 0.0; })) {
        fail("negative spectral value");
    }

    const SpectrumResult fine = position_spectrum(model, "a", base.grid.refined());
    out.refinement_change = std::abs(fine.n_eff - base.n_eff) / std::max(base.n_eff, 1.0);
    if (!(out.refinement_change < 1e-3)) fail("grid refinement changes n_eff by 0.1% or more");

    // Thermal weights of a (nbar_a), b (nbar_b) and the cavity (nbar_c).
    const auto baths = bath_occupations(s);
    const double lo = std::min({baths.nbar_a, baths.nbar_b, baths.nbar_c});
    const double hi = std::max({baths.nbar_a, baths.nbar_b, baths.nbar_c});
    // The counter-rotating model adds vacuum contributions of relative size
    // (coupling / omega); allow that on top of the quadrature error.
    const double slack = 1e-4 * hi + (d.fidelity == Fidelity::full ? 1.0 : 1e-6);
    if (!(base.n_eff >= lo - slack && base.n_eff <= hi + slack)) {
        std::ostringstream os;
        os << "n_eff " << base.n_eff << " outside bath range [" << lo << ", " << hi << "]";
        fail(os.str());
    }

    double previous = std::numeric_limits<double>::infinity();
    for (double c : {0.0, 0.3, 1.0, 3.0, 10.0, 30.0}) {
        const SystemSpec at = at_cooperativity(s, c);
        const DriftModel m = build_system(at, d.fidelity);
        const std::vector<double> probe{s.mode_a.omega};
        const double factor = force_spectrum_numeric(m, at, probe).factor_at_resonance;
        if (!(factor < previous * (1.0 + 1e-9))) {
            fail("force-noise factor not decreasing in C_OM");
            break;
        }
        previous = factor;
    }
    return out;
}

}  // namespace property
