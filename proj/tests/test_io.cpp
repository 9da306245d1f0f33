#include "reur/error.hpp"
#include "reur/io.hpp"

#include <doctest.h>

#include <bit>
#include <charconv>
#include <cmath>
#include <random>
#include <sstream>

using namespace reur;
using io::Json;

TEST_CASE("doubles round-trip through text") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 10000; ++t) {
        double x = std::bit_cast<double>(rng());
        if (!std::isfinite(x)) continue;
        const auto s = io::format_double(x);
        double back = 0.0;
        std::from_chars(s.data(), s.data() + s.size(), back);
        CHECK(std::bit_cast<std::uint64_t>(back) == std::bit_cast<std::uint64_t>(x));
        const Json j = Json::parse(io::dump(io::number(x)));
        CHECK(std::bit_cast<std::uint64_t>(io::to_double(j)) == std::bit_cast<std::uint64_t>(x));
    }
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(kInfinity) == "inf");
    CHECK(io::format_double(-kInfinity) == "-inf");
    CHECK(io::number(kInfinity) == "inf");
    CHECK(io::to_double(Json("-inf")) == -kInfinity);
    CHECK(std::isnan(io::to_double(Json("nan"))));
    CHECK_THROWS(io::to_double(Json("abc")));
}

TEST_CASE("histogram CSV") {
    std::istringstream in("outcome,count\n# comment\n2,6\n\n0,2\n1,2 # trailing\n");
    const auto p = io::parse_histogram_csv(in);
    REQUIRE(p.size() == 3);
    CHECK(p.outcome(0) == 0.0);
    CHECK(p.prob(0) == doctest::Approx(0.2));
    CHECK(p.prob(2) == doctest::Approx(0.6));

    std::istringstream headerless("0,1\n1,3\n");
    CHECK(io::parse_histogram_csv(headerless).prob(1) == doctest::Approx(0.75));

    std::istringstream negative("x,w\n0,1\n1,-2\n");
    CHECK_THROWS_AS(io::parse_histogram_csv(negative), InvalidArgument);
    std::istringstream garbage("x,w\n0,1\n1,two\n");
    CHECK_THROWS_AS(io::parse_histogram_csv(garbage), InvalidArgument);
    std::istringstream empty("x,w\n");
    CHECK_THROWS(io::parse_histogram_csv(empty));
    CHECK_THROWS(io::read_histogram_csv("/nonexistent/file.csv"));
}

TEST_CASE("densities round-trip") {
    const GriddedDensity f(-2.0, 1.0, {0.0, 0.25, 0.5, 0.25, 0.0}, Topology::line);
    const auto j = io::density_to_json(f);
    const auto g = io::density_from_json(Json::parse(io::dump(j)));
    CHECK(g.same_grid(f));
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(g.value(i) == f.value(i));

    const auto c = io::density_from_json(Json::parse(R"({"grid_start": 0, "spacing": 1.5707963267948966,
        "topology": "circle", "values": [0.2, 0.11830988618379067, 0.2, 0.11830988618379067]})"));
    CHECK(c.integral() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.topology() == Topology::circle);
    CHECK_THROWS(io::density_from_json(Json::parse(R"({"grid_start": 0, "values": [1]})")));
}

TEST_CASE("models round-trip bit-exactly") {
    std::vector<MaxEntModel> models{
        fit_uniform(std::size_t{5}),
        fit_uniform(std::vector<double>{-1, 0.5, 2}),
        fit_uniform_interval(-0.3, 1.7),
        fit_uniform_circle(6.283185307179586),
        fit_boltzmann({0, 1, 2, 3}, 1.1),
        fit_general_moments({-2, -1, 0, 1, 2}, {{MomentFunction::power(1), 0.1},
                                                {MomentFunction::power(2), 1.3},
                                                {MomentFunction::indicator(0.0), 0.3}}),
        fit_general_moments({0, 1.5, 3, 4.5}, {{MomentFunction::circular(1), std::polar(0.3, 0.2)}}),
        fit_gaussian(0.25, 1.0 / 3.0),
        fit_von_mises(std::polar(0.7, -1.0)),
    };
    for (const auto &m : models) {
        const auto back = io::model_from_json(Json::parse(io::dump(io::model_to_json(m))));
        CHECK(back.family == m.family);
        CHECK(back.parameters == m.parameters);
        CHECK(back.entropy == m.entropy);
        CHECK(back.support.kind == m.support.kind);
        CHECK(back.support.outcomes == m.support.outcomes);
        CHECK(back.support.lo == m.support.lo);
        CHECK(back.support.hi == m.support.hi);
        CHECK(back.targets == m.targets);
        REQUIRE(back.moments.size() == m.moments.size());
        for (std::size_t i = 0; i < m.moments.size(); ++i) CHECK(back.moments[i].name() == m.moments[i].name());
        CHECK(io::dump(io::model_to_json(back)) == io::dump(io::model_to_json(m)));
    }
    CHECK_THROWS(io::model_from_json(Json::parse(R"({"family": "cauchy", "parameters": [], "entropy": 0})")));
}

TEST_CASE("report serialization") {
    const auto r = make_report(RelationId::reur_discrete, BoundDirection::upper, {{"S(p||p_max)", kInfinity}},
                               {{"S(p_max)", 0.5}}, 0.25, 1e-9);
    const auto j = io::report_to_json(r);
    CHECK(j.at("relation_id") == "reur_discrete");
    CHECK(j.at("lhs") == "inf");
    CHECK(j.at("status") == "model_inadmissible");
    CHECK(j.at("satisfied") == false);
    CHECK(j.at("lhs_terms").at(0).at("name") == "S(p||p_max)");
    CHECK(io::to_double(j.at("c")) == 0.25);
    for (const char *key : {"relation_id", "direction", "lhs_terms", "rhs_terms", "lhs", "rhs", "gap", "satisfied",
                            "tolerance", "c", "status", "fingerprint"})
        CHECK(j.contains(key));
}

TEST_CASE("sweep tables") {
    SweepOptions opts;
    const auto rows = continuum_sweep([](const AngularSystem &s) { return phase_state(s, 1.0, 0.5); }, {3, 4}, opts);
    const auto csv = io::sweep_to_csv(rows);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "J,mode,c,S_rho,lhs,rhs,gap,satisfied,lhs_difference,completeness_residual");
    std::getline(in, line);
    CHECK(line.rfind("3/2,discrete_pvm,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("3/2,continuous_povm,", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("2,discrete_pvm,", 0) == 0);
    const auto j = io::sweep_to_json(rows);
    CHECK(j.is_array());
    CHECK(j.size() == 2);
}
