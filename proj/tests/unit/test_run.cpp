#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "omcool/config.hpp"
#include "omcool/errors.hpp"
#include "omcool/run.hpp"

using namespace omcool;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path)
{
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig load(const std::string& name)
{
    const std::string path = std::string(OMCOOL_TEST_DATA) + "/" + name;
    return parse_config(slurp(path), std::nullopt, OMCOOL_TEST_DATA);
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream ss(text);
    for (std::string l; std::getline(ss, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("sweep run for C_ab = 8")
{
    const RunArtifacts a = run(load("sweep_cab8.ini"));
    const json s = json::parse(a.summary_json);
    CHECK(s["tool"] == "omcool");
    CHECK(s["task"] == "sweep");
    CHECK(s["results"]["C_OM_star"].get<double>() == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(s["results"]["n_ratio_min"].get<double>() == doctest::Approx(0.5).epsilon(1e-2));
    const auto rows = lines(a.csv);
    REQUIRE(rows.size() == 62);  // header plus 3 decades at 20 per decade, inclusive
    CHECK(rows[0].find("C_OM_dimless") != std::string::npos);
    CHECK(rows[0].find("n_eff_quanta") != std::string::npos);
}

TEST_CASE("spectrum run")
{
    const RunArtifacts a = run(load("spectrum.ini"));
    const json s = json::parse(a.summary_json);
    const auto& r = s["results"];
    CHECK(r["C_ab"].get<double>() == doctest::Approx(50.0).epsilon(1e-9));
    CHECK(r["C_OM"].get<double>() == doctest::Approx(std::sqrt(51.0)).epsilon(1e-9));
    CHECK(r["n_eff"].get<double>() > 0.0);
    const auto rows = lines(a.csv);
    CHECK(rows[0] == "omega_rad_s,Sxx_per_rad_s,Sxx_rescaled_dimless");
    // Against the undriven line (width 51 gamma_a, full occupation) the cooled
    // line carries 2/(1 + sqrt 51) of the area in sqrt(51) gamma_a.
    double peak = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) peak = std::max(peak, std::stod(rows[i].substr(rows[i].rfind(',') + 1)));
    CHECK(peak == doctest::Approx(2.0 * std::sqrt(51.0) / (1.0 + std::sqrt(51.0))).epsilon(2e-2));
}

TEST_CASE("every numeric column carries a unit suffix")
{
    for (const char* name : {"spectrum.ini", "sweep_cab8.ini", "design.ini"}) {
        const auto header = lines(run(load(name)).csv)[0];
        std::istringstream ss(header);
        for (std::string col; std::getline(ss, col, ',');) {
            const bool suffixed = col.ends_with("_rad_s") || col.ends_with("_dimless") || col.ends_with("_quanta") ||
                                  col.ends_with("_per_rad_s") || col.ends_with("_bitmask") || col.ends_with("_Hz") ||
                                  col == "error";
            CHECK_MESSAGE(suffixed, col);
        }
    }
}

TEST_CASE("design run")
{
    const RunArtifacts a = run(load("design.ini"));
    const json s = json::parse(a.summary_json);
    const double w0 = s["results"]["omega0_rad_s"].get<double>();
    CHECK(w0 == doctest::Approx(kTwoPi * 1.102e6).epsilon(0.1));
}

TEST_CASE("runs are deterministic and echo their config")
{
    const RunConfig c = load("sweep_cab8.ini");
    const RunArtifacts a = run(c);
    const RunArtifacts b = run(c);
    CHECK(a.csv == b.csv);
    CHECK(a.summary_json == b.summary_json);
    CHECK(a.json == b.json);
    const json s = json::parse(a.summary_json);
    const RunConfig echoed = parse_config(s["config"].get<std::string>(), std::nullopt, c.base_dir);
    CHECK(echoed == c);
}

TEST_CASE("unstable configuration")
{
    RunConfig c = load("spectrum.ini");
    c.fidelity = Fidelity::full;
    c.system.cavity.detuning = +c.system.mode_b.omega;
    c.system.cavity = CavityDrive::from_alpha(c.system.cavity.kappa, c.system.cavity.detuning, c.system.cavity.g0,
                                              50.0 * c.system.cavity.alpha);
    try {
        run(c);
        FAIL("expected unstable_system");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::unstable_system);
    }
}

TEST_CASE("optimize and sense tasks")
{
    RunConfig oc = load("sweep_cab8.ini");
    oc.task = Task::optimize;
    const json o = json::parse(run(oc).summary_json);
    CHECK(o["task"] == "optimize");
    CHECK(o["results"]["C_OM_star"].get<double>() == doctest::Approx(3.0).epsilon(1e-3));

    RunConfig sc = load("spectrum.ini");
    sc.task = Task::sense;
    const json s = json::parse(run(sc).summary_json);
    const auto& r = s["results"];
    CHECK(r["factor_at_resonance"].get<double>() ==
          doctest::Approx(r["factor_closed_form"].get<double>()).epsilon(5e-2));
    CHECK(r["improvement_over_conventional"].get<double>() == doctest::Approx(29.1).epsilon(5e-2));
}
