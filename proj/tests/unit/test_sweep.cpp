#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "omcool/errors.hpp"
#include "omcool/rwa.hpp"
#include "omcool/sweep.hpp"
#include "support/fixtures.hpp"

using namespace omcool;
using fixture::hz;

namespace {

SystemSpec with_cab(double C)
{
    fixture::Params p;
    p.C_ab = C;
    return fixture::system(p);
}

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::numerical_failure;
}

}  // namespace

TEST_CASE("no drive means no cooling")
{
    for (Fidelity f : {Fidelity::rwa, Fidelity::full}) {
        const SweepResult r = sweep_cooperativity(with_cab(50.0), {0.0}, f);
        REQUIRE(r.size() == 1);
        CHECK(r.T_ratio[0] == doctest::Approx(1.0).epsilon(1e-3));
        CHECK_FALSE(r.errors[0].has_value());
    }
}

TEST_CASE("rwa sweep equals the closed form pointwise")
{
    const SystemSpec s = with_cab(50.0);
    const std::vector<double> axis = log_spaced(0.1, 100.0, 10);
    const SweepResult r = sweep_cooperativity(s, axis, Fidelity::rwa);
    REQUIRE(r.size() == axis.size());
    const double nbar = bath_occupations(s).nbar_a;
    for (std::size_t i = 0; i < axis.size(); ++i) {
        CHECK(r.n_eff[i] == doctest::Approx(n_eff_closed_form(s, axis[i] * s.mode_b.gamma, nbar).n_eff).epsilon(1e-12));
        CHECK(r.C_OM[i] == axis[i]);
        CHECK(r.T_ratio[i] > 0.0);
        CHECK(r.T_ratio[i] <= 1.0);
    }
    CHECK(r.n_eff.size() == r.linewidths.size());
    CHECK(r.validity_flags.size() == r.size());
}

TEST_CASE("dense sweep minimum sits at the optimum")
{
    const SystemSpec s = with_cab(50.0);
    const SweepResult r = sweep_cooperativity(s, default_cooperativity_axis(), Fidelity::rwa);
    const auto best = std::min_element(r.T_ratio.begin(), r.T_ratio.end()) - r.T_ratio.begin();
    CHECK(r.values[static_cast<std::size_t>(best)] == doctest::Approx(std::sqrt(51.0)).epsilon(5e-2));
    CHECK(default_cooperativity_axis().size() == 301);
}

TEST_CASE("sweep points do not depend on order")
{
    const SystemSpec s = with_cab(20.0);
    const SweepResult a = sweep_cooperativity(s, {0.5, 2.0, 9.0}, Fidelity::full);
    const SweepResult b = sweep_cooperativity(s, {2.0}, Fidelity::full);
    CHECK(a.n_eff[1] == b.n_eff[0]);
    CHECK_THROWS_AS(sweep_cooperativity(s, {2.0, 1.0}, Fidelity::rwa), Error);
    CHECK_THROWS_AS(sweep_cooperativity(s, {-1.0}, Fidelity::rwa), Error);
}

TEST_CASE("unstable points are reported and the sweep continues")
{
    SystemSpec s = with_cab(8.0);
    // pump on the blue sideband: strong drive is unstable
    s.cavity.detuning = +s.mode_b.omega;
    const SweepResult r = sweep_cooperativity(s, {0.0, 1e-3, 50.0}, Fidelity::full);
    REQUIRE(r.size() == 3);
    CHECK_FALSE(r.errors[0].has_value());
    REQUIRE(r.errors[2].has_value());
    CHECK(std::isnan(r.n_eff[2]));
}

TEST_CASE("optimum for C_ab = 8")
{
    const SystemSpec s = with_cab(8.0);
    const Optimum o = find_optimum(s, 1e-2, 1e3, Fidelity::rwa);
    CHECK(o.C_OM_star == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(o.n_ratio == doctest::Approx(0.5).epsilon(1e-3));
    CHECK(kind_of([&] { find_optimum(s, 1e3, 1e4, Fidelity::rwa); }) == ErrorKind::no_minimum);
    CHECK_THROWS_AS(find_optimum(s, 10.0, 1.0, Fidelity::rwa), Error);

    // both neighbours on a 1e-3 stencil are higher
    const double lo = evaluate_cooling(at_cooperativity(s, o.C_OM_star * (1 - 1e-3)), Fidelity::rwa).n_eff;
    const double hi = evaluate_cooling(at_cooperativity(s, o.C_OM_star * (1 + 1e-3)), Fidelity::rwa).n_eff;
    CHECK(lo > o.n_eff_star);
    CHECK(hi > o.n_eff_star);
}

TEST_CASE("full-fidelity optimum for C_ab = 50")
{
    fixture::Params p;
    p.C_ab = 50.0;
    p.gamma_b = 4.0 * std::pow(1e-4 * p.f_a, 2) / (p.C_ab * p.gamma_a);
    p.kappa = 2e5;
    p.g0 = 100.0;
    const SystemSpec s = fixture::system(p);
    CHECK(s.lambda / s.mode_a.omega == doctest::Approx(1e-4).epsilon(1e-9));
    const Optimum o = find_optimum(s, 0.1, 1e3, Fidelity::full);
    CHECK(o.C_OM_star == doctest::Approx(std::sqrt(51.0)).epsilon(5e-2));
}

TEST_CASE("detuning sweep")
{
    // gamma_a << lambda << gamma_b + Gamma
    fixture::Params p;
    p.C_ab = 50.0;
    const SystemSpec s = fixture::system(p);
    const double C_OM = 5.0;
    std::vector<double> deltas;
    for (int i = 0; i <= 40; ++i) deltas.push_back(s.mode_b.gamma * 0.25 * i);
    for (Fidelity f : {Fidelity::rwa, Fidelity::full}) {
        const SweepResult r = sweep_detuning(s, deltas, f, DetuningMode::fixed_cooperativity, C_OM);
        REQUIRE(r.size() == deltas.size());
        CHECK(r.axis == "detuning");
        const SweepResult ref = sweep_cooperativity(s, {C_OM}, f);
        CHECK(r.n_eff[0] == doctest::Approx(ref.n_eff[0]).epsilon(1e-9));
        for (std::size_t i = 1; i < r.size(); ++i) CHECK(r.n_eff[i] >= r.n_eff[i - 1] * (1.0 - 1e-6));
    }

    const double nbar = bath_occupations(s).nbar_a;
    const SweepResult far = sweep_detuning(s, {1e3 * (s.mode_b.gamma + C_OM * s.mode_b.gamma)}, Fidelity::rwa,
                                           DetuningMode::fixed_cooperativity, C_OM);
    CHECK(far.n_eff[0] / nbar == doctest::Approx(1.0).epsilon(1e-3));

    const SweepResult opt = sweep_detuning(s, {0.0, s.mode_b.gamma}, Fidelity::rwa, DetuningMode::optimize, C_OM);
    CHECK(opt.C_OM[0] == doctest::Approx(std::sqrt(51.0)).epsilon(1e-3));
    const double fixed0 = sweep_cooperativity(s, {C_OM}, Fidelity::rwa).n_eff[0];
    CHECK(opt.n_eff[0] <= fixed0);
    CHECK_THROWS_AS(sweep_detuning(s, {-1.0}, Fidelity::rwa, DetuningMode::fixed_cooperativity, C_OM), Error);
}
