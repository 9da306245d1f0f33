#include "commands.hpp"
#include "reur/io.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace reur;
using io::Json;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        auto p = fs::temp_directory_path() / ("reur_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write(const std::string &name, const std::string &text) {
    const auto path = (scratch() / name).string();
    std::ofstream(path) << text;
    return path;
}

std::string slurp(const std::string &path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("exit code contract") {
    CHECK(run({}).code == cli::kExitUsage);
    CHECK(run({"bogus"}).code == cli::kExitUsage);
    CHECK(run({"--help"}).code == cli::kExitOk);
    CHECK(run({"verify", "--no-such-flag"}).code == cli::kExitUsage);
    CHECK(run({"verify", "--dims", "1..3"}).code == cli::kExitUsage);
    CHECK(run({"verify", "--models", "cauchy"}).code == cli::kExitUsage);
    CHECK(run({"verify", "--instances", "-4"}).code == cli::kExitUsage);
    CHECK(run({"continuous", "--preset", "nonsense"}).code == cli::kExitUsage);
    CHECK(run({"maxent-fit", "--input", "/nonexistent.csv", "--family", "uniform"}).code == cli::kExitUsage);
}

TEST_CASE("verify passes, replays byte-identically and catches the injected bug") {
    const auto a = run({"verify", "--instances", "40", "--seed", "99"});
    CHECK(a.code == cli::kExitOk);
    const auto b = run({"verify", "--instances", "40", "--seed", "99", "--threads", "1"});
    CHECK(a.out == b.out);
    const auto j = Json::parse(a.out);
    CHECK(j.at("violations") == 0);
    CHECK(j.at("evaluations") == 40 * 7 * 3);

    for (const char *models : {"boltzmann", "moments"})
        CHECK(run({"verify", "--instances", "20", "--models", models}).code == cli::kExitOk);

    const auto bug = run({"verify", "--instances", "20", "--inject-bug"});
    CHECK(bug.code == cli::kExitViolation);
    CHECK(Json::parse(bug.out).at("violations").get<int>() > 0);
    CHECK(bug.err.find("--seed") != std::string::npos);

    const auto path = (scratch() / "verify.csv").string();
    CHECK(run({"verify", "--instances", "5", "--format", "csv", "--out", path}).code == cli::kExitOk);
    CHECK(slurp(path).rfind("index,seed,", 0) == 0);
}

TEST_CASE("config files, with flags taking precedence") {
    const auto cfg = write("cfg.json", R"({"command": "verify", "instances": 7, "dims": "2..3", "seed": 5})");
    auto r = run({"--config", cfg});
    CHECK(r.code == cli::kExitOk);
    auto j = Json::parse(r.out);
    CHECK(j.at("instances_per_dimension") == 7);
    CHECK(j.at("seed") == 5);

    r = run({"verify", "--config", cfg, "--instances", "3"});
    CHECK(r.code == cli::kExitOk);
    j = Json::parse(r.out);
    CHECK(j.at("instances_per_dimension") == 3);
    CHECK(j.at("dimensions").size() == 2);

    const auto flag_cfg = write("flag.json", R"({"command": "verify", "instances": 4, "inject-bug": true})");
    CHECK(run({"--config", flag_cfg}).code == cli::kExitViolation);

    const auto unknown = write("unknown.json", R"({"command": "verify", "instancez": 7})");
    CHECK(run({"--config", unknown}).code == cli::kExitUsage);
    const auto wrong = write("wrong.json", R"({"command": "angular"})");
    CHECK(run({"verify", "--config", wrong}).code == cli::kExitUsage);
    CHECK(run({"--config", write("broken.json", "{")}).code == cli::kExitUsage);
}

TEST_CASE("continuous presets") {
    const auto g = Json::parse(run({"continuous", "--preset", "gaussian"}).out);
    const auto s = Json::parse(run({"continuous", "--preset", "squeezed", "--alpha", "4"}).out);
    const auto reports = g.at("reports");
    REQUIRE(reports.size() == 3);
    CHECK(reports.at(0).at("relation_id") == "birula");
    CHECK(std::abs(io::to_double(reports.at(0).at("gap"))) <= 1e-5);
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::abs(io::to_double(reports.at(i).at("gap")) - io::to_double(s.at("reports").at(i).at("gap"))) <= 1e-8);

    const auto h = run({"continuous", "--preset", "hermite-1"});
    CHECK(h.code == cli::kExitOk);
    CHECK(io::to_double(Json::parse(h.out).at("strengthened_bound")) > 0.55);
    CHECK(run({"continuous", "--preset", "gaussian-superposition"}).code == cli::kExitOk);
    CHECK(run({"continuous", "--preset", "thermal", "--beta", "0.5"}).code == cli::kExitOk);
}

TEST_CASE("angular sweeps") {
    const auto path = (scratch() / "sweep.csv").string();
    const auto r = run({"angular", "--j-values", "2,4,8,16,32", "--out", path});
    CHECK(r.code == cli::kExitOk);
    const auto csv = slurp(path);
    CHECK(csv.rfind("J,mode,c,S_rho,lhs,rhs,gap,satisfied", 0) == 0);
    CHECK(fs::exists(scratch() / "sweep.csv.json"));

    const auto mixed = run({"angular", "--family", "mixed", "--j-values", "1/2,1,5", "--format", "json"});
    CHECK(mixed.code == cli::kExitOk);
    for (const auto &row : Json::parse(mixed.out)) {
        CHECK(std::abs(io::to_double(row.at("discrete_pvm").at("lhs"))) <= 1e-12);
        CHECK(std::abs(io::to_double(row.at("continuous_povm").at("lhs"))) <= 1e-12);
    }
    CHECK(run({"angular", "--j-values", "1/3"}).code == cli::kExitUsage);
}

TEST_CASE("maxent-fit examples") {
    auto fit = [](const std::string &csv, const std::string &family) {
        const auto r = run({"maxent-fit", "--input", write("h.csv", csv), "--family", family});
        REQUIRE(r.code == cli::kExitOk);
        return Json::parse(r.out);
    };
    auto j = fit("x,count\n0,5\n1,5\n2,5\n3,5\n", "boltzmann");
    CHECK(std::abs(io::to_double(j.at("parameters").at(0))) <= 1e-10);

    const double e = std::exp(1.0);
    j = fit("x,p\n0," + io::format_double(e / (1 + e)) + "\n1," + io::format_double(1 / (1 + e)) + "\n", "boltzmann");
    CHECK(std::abs(io::to_double(j.at("parameters").at(0)) - 1.0) <= 1e-6);

    const double a = std::cyl_bessel_i(1.0, 1.0) / std::cyl_bessel_i(0.0, 1.0);
    j = fit("theta,p\n0," + io::format_double((1 + a) / 2) + "\n3.141592653589793," + io::format_double((1 - a) / 2) + "\n",
            "von_mises");
    CHECK(std::abs(io::to_double(j.at("parameters").at(0)) - 1.0) <= 1e-6);

    j = fit("x,p\n-1,1\n0,1\n1,1\n", "moments");
    CHECK(j.at("family") == "general_moment");

    const auto out = (scratch() / "model.json").string();
    CHECK(run({"maxent-fit", "--input", write("g.csv", "0,1\n1,2\n"), "--family", "uniform", "--out", out}).code ==
          cli::kExitOk);
    CHECK(io::read_json_file(out).at("family") == "uniform");

    const auto dens = write("d.json", io::dump(io::density_to_json(to_density(fit_gaussian(0.3, 0.8), GridSpec{-10, 0.05, 401, Topology::line}))));
    const auto g = run({"maxent-fit", "--input", dens, "--family", "gaussian"});
    CHECK(g.code == cli::kExitOk);
    CHECK(io::to_double(Json::parse(g.out).at("parameters").at(1)) == doctest::Approx(0.8).epsilon(1e-9));
    CHECK(run({"maxent-fit", "--input", dens, "--family", "boltzmann"}).code == cli::kExitUsage);
}
