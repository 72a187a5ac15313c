#include <doctest.h>

#include <cmath>
#include <string>

#include "omcool/config.hpp"
#include "omcool/errors.hpp"
#include "omcool/rwa.hpp"
#include "omcool/run.hpp"

using namespace omcool;

namespace {

const char* kMinimal = R"(task = spectrum

[mode_a]
frequency = 1e6
gamma = 1

[mode_b]
frequency = 1e6
gamma = 1000

[cavity]
kappa = 1e5

[coupling]
lambda = 100
)";

std::string config_error(const std::string& text, std::optional<Task> task = std::nullopt)
{
    try {
        parse_config(text, task);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::config) return e.what();
        return std::string("wrong kind: ") + e.what();
    }
    return "";
}

std::string replace(std::string text, const std::string& from, const std::string& to)
{
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

}  // namespace

TEST_CASE("minimal spectrum config fills defaults")
{
    const RunConfig c = parse_config(kMinimal);
    CHECK(c.task == Task::spectrum);
    CHECK(c.fidelity == Fidelity::rwa);
    CHECK(c.has_system);
    CHECK(c.system.mode_a.omega == doctest::Approx(kTwoPi * 1e6));
    CHECK(c.system.mode_a.bath_temperature == 300.0);
    CHECK(c.system.lambda == doctest::Approx(kTwoPi * 100.0));
    CHECK(c.system.cavity.detuning == -c.system.mode_b.omega);
    CHECK(c.system.cavity.alpha == cdouble(0.0, 0.0));
    CHECK(c.system.cavity.g0 == doctest::Approx(kTwoPi));
    CHECK(c.grid == GridOptions{});
    CHECK(c.spectrum.mode == "a");
    CHECK(c.spectrum.fit);
    CHECK(c.format == OutputFormat::csv);
    CHECK(c.system.mass_a == 1e-15);
}

TEST_CASE("rad_s units skip the 2 pi")
{
    const RunConfig c = parse_config(std::string("units = rad_s\n") + kMinimal);
    CHECK(c.system.mode_a.omega == 1e6);
    CHECK(c.system.lambda == 100.0);
}

TEST_CASE("c_ab and c_om set the couplings")
{
    std::string t = replace(kMinimal, "lambda = 100", "c_ab = 8");
    t = replace(t, "kappa = 1e5", "kappa = 1e5\ng0 = 10\nc_om = 3");
    const RunConfig c = parse_config(t);
    CHECK(ab_cooperativity(c.system) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(optical_damping(c.system) / c.system.mode_b.gamma == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("validation errors name the field")
{
    const std::string neg = config_error(replace(kMinimal, "gamma = 1\n", "gamma = -1\n"));
    CHECK(neg.find("mode_a.gamma") != std::string::npos);
    CHECK(neg.find("gamma must be >= 0") != std::string::npos);

    const std::string typo = config_error(replace(kMinimal, "lambda = 100", "lamda = 100"));
    CHECK(typo.find("unknown key") != std::string::npos);
    CHECK(typo.find("did you mean 'lambda'") != std::string::npos);

    CHECK(config_error(replace(kMinimal, "[coupling]", "[coupling]\nc_ab = 3")).find("exactly one") != std::string::npos);
    CHECK(config_error(replace(kMinimal, "[mode_a]", "[mode_q]")).find("unknown section") != std::string::npos);
    CHECK(config_error(replace(kMinimal, "gamma = 1000", "gamma = abc")).find("expected a number") != std::string::npos);
    CHECK(config_error(replace(kMinimal, "task = spectrum", "task = plot")).find("task") != std::string::npos);
    CHECK(config_error(kMinimal, Task::sweep).find("task") != std::string::npos);
    CHECK(config_error(replace(kMinimal, "[cavity]\nkappa = 1e5\n", "")).find("missing section [cavity]") !=
          std::string::npos);

    // duplicate keys are a syntax error with a line number
    const std::string dup = config_error(replace(kMinimal, "gamma = 1\n", "gamma = 1\ngamma = 2\n"));
    CHECK(dup.find("line") != std::string::npos);
}

TEST_CASE("sweep and design sections")
{
    std::string t = replace(kMinimal, "task = spectrum", "task = sweep");
    t += "\n[sweep]\nc_om_values = 0, 1, 2.5\n";
    const RunConfig c = parse_config(t);
    CHECK(c.sweep.c_om_values == std::vector<double>{0.0, 1.0, 2.5});
    CHECK(config_error(t + "c_om_min = 1\n").empty());
    CHECK_FALSE(config_error(replace(t, "0, 1, 2.5", "2, 1")).empty());
    CHECK_FALSE(config_error(replace(t, "c_om_values = 0, 1, 2.5", "axis = detuning")).empty());

    const RunConfig d = parse_config("task = design\n[design]\nl_left = 20.5e-6\nl_right = 19.5e-6\n");
    CHECK_FALSE(d.has_system);
    CHECK(d.design.geometry.L_left == 20.5e-6);
    CHECK(d.design.geometry.h == 0.3e-6);
    CHECK(config_error("task = design\n[design]\nmaterial_file = no/such/file.ini\n").find("material_file") !=
          std::string::npos);
}

TEST_CASE("canonical text round trip")
{
    std::string t = replace(kMinimal, "kappa = 1e5", "kappa = 1e5\nalpha = 12.5\nalpha_im = -3\ntemperature = 4");
    t = replace(t, "task = spectrum", "task = sweep\nfidelity = full");
    t += "\n[grid]\ngrowth = 1.05\n[sweep]\naxis = detuning\ndetunings = 0, 100, 1000\noptimize = true\n"
         "[output]\nformat = json\n";
    const RunConfig c = parse_config(t);
    const RunConfig back = parse_config(to_ini(c), std::nullopt, c.base_dir);
    CHECK(back == c);
    CHECK(to_ini(back) == to_ini(c));

    const RunConfig p = parse_config(replace(kMinimal, "kappa = 1e5", "kappa = 1e5\npump_re = -1e5\npump_im = 2e4"));
    CHECK(p.drive_input == DriveInput::pump);
    CHECK(parse_config(to_ini(p)) == p);

    const RunConfig d = parse_config("task = design\n[design]\nl_left = 20.5e-6\ntemperature = 77\n");
    CHECK(parse_config(to_ini(d)) == d);
}

TEST_CASE("error documents")
{
    const std::string j = error_json("unstable_system", "eigenvalue 1+2i", 2);
    CHECK(j.find("\"kind\":\"unstable_system\"") != std::string::npos);
    CHECK(j.find("\"exit_code\":2") != std::string::npos);
    CHECK(kind_name(ErrorKind::unstable_system) == "unstable_system");
    CHECK(exit_code(ErrorKind::config) == 1);
    CHECK(exit_code(ErrorKind::fit_failure) == 2);
    CHECK(exit_code(ErrorKind::singular_matrix) == 3);
}
