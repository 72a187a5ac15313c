#pragma once

#include <cmath>

#include "omcool/model.hpp"
#include "omcool/units.hpp"

namespace fixture {

inline double hz(double f) { return omcool::kTwoPi * f; }

struct Params {
    double f_a = 1e6;       // Hz
    double f_b = 1e6;       // Hz
    double gamma_a = 1.0;   // Hz
    double gamma_b = 1e3;   // Hz
    double C_ab = 50.0;
    double kappa = 1e5;     // Hz
    double g0 = 10.0;       // Hz
    double T = 300.0;       // K, both mechanical baths
};

// Two mechanical modes with the cavity parked on b's red sideband and no
// drive; lambda follows from C_ab.
inline omcool::SystemSpec system(const Params& p = {})
{
    omcool::SystemSpec s;
    s.mode_a = {hz(p.f_a), hz(p.gamma_a), p.T};
    s.mode_b = {hz(p.f_b), hz(p.gamma_b), p.T};
    s.lambda = 0.5 * std::sqrt(p.C_ab * s.mode_a.gamma * s.mode_b.gamma);
    s.cavity = omcool::CavityDrive::from_alpha(hz(p.kappa), -s.mode_b.omega, hz(p.g0), 0.0);
    return s;
}

}  // namespace fixture
