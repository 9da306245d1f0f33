#include "reur/io.hpp"

#include "reur/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace reur::io {

namespace {

const char *kind_name(MomentFunction::Kind k) {
    switch (k) {
    case MomentFunction::Kind::power: return "power";
    case MomentFunction::Kind::indicator: return "indicator";
    case MomentFunction::Kind::cosine: return "cosine";
    case MomentFunction::Kind::sine: return "sine";
    case MomentFunction::Kind::circular: return "circular";
    }
    return "";
}

MomentFunction::Kind kind_from_name(const std::string &s) {
    using K = MomentFunction::Kind;
    for (K k : {K::power, K::indicator, K::cosine, K::sine, K::circular})
        if (s == kind_name(k)) return k;
    throw InvalidArgument("unknown moment function '" + s + "'");
}

const char *support_name(ModelSupport::Kind k) {
    switch (k) {
    case ModelSupport::Kind::discrete: return "discrete";
    case ModelSupport::Kind::interval: return "interval";
    case ModelSupport::Kind::circle: return "circle";
    case ModelSupport::Kind::real_line: return "real_line";
    }
    return "";
}

ModelSupport::Kind support_from_name(const std::string &s) {
    using K = ModelSupport::Kind;
    for (K k : {K::discrete, K::interval, K::circle, K::real_line})
        if (s == support_name(k)) return k;
    throw InvalidArgument("unknown support kind '" + s + "'");
}

Json numbers(std::span<const double> xs) {
    Json a = Json::array();
    for (double x : xs) a.push_back(number(x));
    return a;
}

std::vector<double> doubles(const Json &j) {
    if (!j.is_array()) throw InvalidArgument("expected an array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto &e : j) v.push_back(to_double(e));
    return v;
}

Json terms_json(const std::vector<Term> &terms) {
    Json a = Json::array();
    for (const auto &t : terms) a.push_back(Json{{"name", t.name}, {"value", number(t.value)}});
    return a;
}

std::string trim(const std::string &s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string &s, double &out) {
    const auto t = trim(s);
    const auto *first = t.data();
    const auto *last = t.data() + t.size();
    const auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last && !t.empty();
}

} // namespace

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Json number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

double to_double(const Json &j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return kInfinity;
        if (s == "-inf") return -kInfinity;
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw InvalidArgument("expected a number, got " + j.dump());
}

DiscreteDistribution parse_histogram_csv(std::istream &in) {
    std::vector<double> outcomes, weights;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidArgument("line " + std::to_string(lineno) + ": expected two columns");
        double x = 0.0, w = 0.0;
        const bool ok = parse_number(line.substr(0, comma), x) && parse_number(line.substr(comma + 1), w);
        if (!ok) {
            if (outcomes.empty() && lineno == 1) continue;  // header
            throw InvalidArgument("line " + std::to_string(lineno) + ": not a number");
        }
        outcomes.push_back(x);
        weights.push_back(w);
    }
    if (outcomes.empty()) throw InvalidArgument("histogram has no rows");
    for (double w : weights)
        if (w < 0.0) throw InvalidArgument("histogram weights must be non-negative");
    return DiscreteDistribution::from_weights(std::move(outcomes), std::move(weights));
}

DiscreteDistribution read_histogram_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    return parse_histogram_csv(in);
}

GriddedDensity density_from_json(const Json &j) {
    for (const char *key : {"grid_start", "spacing", "topology", "values"})
        if (!j.contains(key)) throw InvalidArgument(std::string("density JSON lacks '") + key + "'");
    const auto topo = j.at("topology").get<std::string>();
    Topology t;
    if (topo == "line") t = Topology::line;
    else if (topo == "circle") t = Topology::circle;
    else throw InvalidArgument("topology must be line or circle");
    return GriddedDensity(to_double(j.at("grid_start")), to_double(j.at("spacing")), doubles(j.at("values")), t);
}

GriddedDensity read_density_json(const std::string &path) { return density_from_json(read_json_file(path)); }

Json density_to_json(const GriddedDensity &f) {
    return Json{{"grid_start", number(f.start())},
                {"spacing", number(f.spacing())},
                {"topology", f.topology() == Topology::line ? "line" : "circle"},
                {"values", numbers(f.values())}};
}

Json model_to_json(const MaxEntModel &model) {
    Json support{{"kind", support_name(model.support.kind)}};
    switch (model.support.kind) {
    case ModelSupport::Kind::discrete: support["outcomes"] = numbers(model.support.outcomes); break;
    case ModelSupport::Kind::interval:
    case ModelSupport::Kind::circle:
        support["lo"] = number(model.support.lo);
        support["hi"] = number(model.support.hi);
        break;
    case ModelSupport::Kind::real_line: break;
    }
    Json j{{"family", to_string(model.family)},
           {"parameters", numbers(model.parameters)},
           {"entropy", number(model.entropy)},
           {"support", support}};
    if (!model.moments.empty()) {
        Json ms = Json::array();
        for (const auto &m : model.moments) ms.push_back(Json{{"kind", kind_name(m.kind)}, {"order", m.order}, {"point", number(m.point)}});
        j["moments"] = ms;
        j["targets"] = numbers(model.targets);
    }
    return j;
}

MaxEntModel model_from_json(const Json &j) {
    MaxEntModel m;
    m.family = family_from_string(j.at("family").get<std::string>());
    m.parameters = doubles(j.at("parameters"));
    m.entropy = to_double(j.at("entropy"));
    const auto &s = j.at("support");
    m.support.kind = support_from_name(s.at("kind").get<std::string>());
    if (s.contains("outcomes")) m.support.outcomes = doubles(s.at("outcomes"));
    if (s.contains("lo")) m.support.lo = to_double(s.at("lo"));
    if (s.contains("hi")) m.support.hi = to_double(s.at("hi"));
    if (j.contains("moments")) {
        for (const auto &e : j.at("moments"))
            m.moments.push_back({kind_from_name(e.at("kind").get<std::string>()), e.at("order").get<int>(), to_double(e.at("point"))});
        m.targets = doubles(j.at("targets"));
        if (m.targets.size() != m.moments.size()) throw InvalidArgument("moments and targets differ in length");
    }
    return m;
}

Json report_to_json(const ReurReport &r) {
    Json j{{"relation_id", to_string(r.relation)},
           {"direction", r.direction == BoundDirection::upper ? "lhs<=rhs" : "lhs>=rhs"},
           {"lhs_terms", terms_json(r.lhs_terms)},
           {"rhs_terms", terms_json(r.rhs_terms)},
           {"lhs", number(r.lhs)},
           {"rhs", number(r.rhs)},
           {"gap", number(r.gap)},
           {"satisfied", r.satisfied},
           {"tolerance", number(r.tolerance)},
           {"c", number(r.c)},
           {"status", r.status == ReportStatus::ok ? "ok" : "model_inadmissible"}};
    if (r.trivial_bound) j["trivial_bound"] = number(*r.trivial_bound);
    Json fp{{"dimension", r.fingerprint.dimension}, {"model_families", r.fingerprint.model_families}};
    if (r.fingerprint.seed) fp["seed"] = *r.fingerprint.seed;
    j["fingerprint"] = fp;
    return j;
}

std::string sweep_to_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream out;
    out << "J,mode,c,S_rho,lhs,rhs,gap,satisfied,lhs_difference,completeness_residual\n";
    for (const auto &row : rows) {
        const std::string j = row.two_j % 2 == 0 ? std::to_string(row.two_j / 2) : std::to_string(row.two_j) + "/2";
        for (const auto *r : {&row.discrete, &row.continuous}) {
            out << j << ',' << (r == &row.discrete ? "discrete_pvm" : "continuous_povm") << ',' << format_double(r->c) << ','
                << format_double(row.von_neumann_entropy) << ',' << format_double(r->lhs) << ',' << format_double(r->rhs)
                << ',' << format_double(r->gap) << ',' << (r->satisfied ? "true" : "false") << ','
                << format_double(row.lhs_difference) << ',' << format_double(row.completeness_residual) << '\n';
        }
    }
    return out.str();
}

Json sweep_to_json(const std::vector<SweepRow> &rows) {
    Json a = Json::array();
    for (const auto &row : rows) {
        a.push_back(Json{{"two_j", row.two_j},
                         {"S_rho", number(row.von_neumann_entropy)},
                         {"lhs_difference", number(row.lhs_difference)},
                         {"completeness_residual", number(row.completeness_residual)},
                         {"discrete_pvm", report_to_json(row.discrete)},
                         {"continuous_povm", report_to_json(row.continuous)}});
    }
    return a;
}

std::string dump(const Json &j) { return j.dump(2) + "\n"; }

Json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw InvalidArgument(path + ": " + e.what());
    }
}

void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write " + path);
    out << text;
}

} // namespace reur::io
