#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int status = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch()
{
    const fs::path dir = fs::temp_directory_path() / ("omcool_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir;
}

Result omcool(const std::string& args)
{
    const fs::path dir = scratch();
    const fs::path out = dir / "stdout.txt", err = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + OMCOOL_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

std::string data(const std::string& name) { return std::string(OMCOOL_TEST_DATA) + "/" + name; }

fs::path write_config(const std::string& name, const std::string& text)
{
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p;
}

}  // namespace

TEST_CASE("version")
{
    const Result r = omcool("--version");
    CHECK(r.status == 0);
    CHECK(r.out.find("0.1.0") != std::string::npos);
}

TEST_CASE("sweep writes a table and a summary")
{
    const fs::path out = scratch() / "sweep.csv";
    const Result r = omcool("sweep --config " + data("sweep_cab8.ini") + " --out " + out.string());
    REQUIRE(r.status == 0);
    const json s = json::parse(slurp(out.string() + ".summary.json"));
    CHECK(s["results"]["C_OM_star"].get<double>() == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(s["results"]["n_ratio_min"].get<double>() == doctest::Approx(0.5).epsilon(1e-2));
    CHECK(slurp(out).rfind("C_OM_dimless", 0) == 0);

    // identical runs produce identical bytes
    const std::string table = slurp(out), summary = slurp(out.string() + ".summary.json");
    REQUIRE(omcool("sweep --config " + data("sweep_cab8.ini") + " --out " + out.string()).status == 0);
    CHECK(slurp(out) == table);
    CHECK(slurp(out.string() + ".summary.json") == summary);

    // the echoed config runs to the same result
    const fs::path echo = write_config("echo.ini", s["config"].get<std::string>());
    const fs::path third = scratch() / "third.csv";
    REQUIRE(omcool("sweep --config " + echo.string() + " --out " + third.string()).status == 0);
    CHECK(slurp(out) == slurp(third));
}

TEST_CASE("json format and fidelity override")
{
    const Result r = omcool("sweep --config " + data("sweep_cab8.ini") + " --format json --fidelity full");
    REQUIRE(r.status == 0);
    const json s = json::parse(r.out);
    CHECK(s["fidelity"] == "full");
    CHECK(s["table"]["rows"].size() == 61);
    CHECK(s["results"]["C_OM_star"].get<double>() == doctest::Approx(3.0).epsilon(5e-2));
}

TEST_CASE("design")
{
    const Result r = omcool("design --config " + data("design.ini") + " --format json");
    REQUIRE(r.status == 0);
    const json s = json::parse(r.out);
    CHECK(s["results"]["omega0_rad_s"].get<double>() == doctest::Approx(2.0 * 3.141592653589793 * 1.102e6).epsilon(0.1));
}

TEST_CASE("unstable configuration exits with 2")
{
    std::string text = slurp(data("spectrum.ini"));
    text.replace(text.find("c_om = 7.14142842854285"), 23, "alpha = 3000\ndetuning = 1e6");
    text.replace(text.find("fidelity = rwa"), 14, "fidelity = full");
    const fs::path cfg = write_config("unstable.ini", text);
    const Result r = omcool("spectrum --config " + cfg.string());
    CHECK(r.status == 2);
    const json e = json::parse(r.err);
    CHECK(e["error"]["kind"] == "unstable_system");
    CHECK(e["error"]["exit_code"] == 2);
}

TEST_CASE("config errors exit with 1 and suggest fixes")
{
    std::string text = slurp(data("spectrum.ini"));
    text.replace(text.find("c_ab"), 4, "lamda");
    const fs::path cfg = write_config("typo.ini", text);
    const Result r = omcool("spectrum --config " + cfg.string());
    CHECK(r.status == 1);
    const json e = json::parse(r.err);
    CHECK(e["error"]["kind"] == "config_error");
    CHECK(e["error"]["message"].get<std::string>().find("did you mean 'lambda'") != std::string::npos);

    CHECK(omcool("spectrum --config /no/such/file.ini").status == 1);
    CHECK(omcool("sweep --config " + data("spectrum.ini")).status == 1);
    CHECK(omcool("frobnicate").status == 1);
}
