#include "commands.hpp"

#include "reur/angular.hpp"
#include "reur/error.hpp"
#include "reur/io.hpp"
#include "reur/maxent.hpp"
#include "reur/quantum_core.hpp"
#include "reur/reur.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace reur::cli {

namespace {

using io::Json;

struct VerifyOptions {
    std::uint64_t seed = 12345;
    int instances = 1000;
    std::string dims = "2..8";
    std::string models = "uniform";
    double tolerance = kDiscreteTolerance;
    std::string out;
    std::string format = "json";
    bool inject_bug = false;
    int threads = 0;
};

struct ContinuousOptions {
    std::string preset = "gaussian";
    double alpha = 4.0;
    double separation = 2.0;
    double beta = 1.0;
    int levels = 64;
    int grid = 4096;
    double tolerance = kContinuousTolerance;
    std::string out;
    std::string format = "json";
};

struct AngularOptions {
    std::string j_values = "2,4,8,16,32";
    std::string family = "phase";
    double width = 0.5;
    double center = 1.0;
    std::string angle_model = "uniform";
    std::string momentum_model = "uniform";
    double scale_r = 1.0;
    int grid = 4096;
    double theta0 = 0.0;
    std::string out;
    std::string format = "csv";
};

struct FitOptions {
    std::string input;
    std::string family = "boltzmann";
    std::string moments = "power1,power2";
    std::string out;
};

std::vector<std::string> split(const std::string &s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        if (!cur.empty()) parts.push_back(cur);
    return parts;
}

int parse_int(const std::string &s) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception &) {
        throw InvalidArgument("'" + s + "' is not an integer");
    }
    if (pos != s.size()) throw InvalidArgument("'" + s + "' is not an integer");
    return v;
}

std::vector<int> parse_dims(const std::string &spec) {
    std::vector<int> dims;
    if (const auto dots = spec.find(".."); dots != std::string::npos) {
        const int lo = parse_int(spec.substr(0, dots)), hi = parse_int(spec.substr(dots + 2));
        if (lo > hi) throw InvalidArgument("empty dimension range " + spec);
        for (int d = lo; d <= hi; ++d) dims.push_back(d);
    } else {
        for (const auto &p : split(spec, ',')) dims.push_back(parse_int(p));
    }
    if (dims.empty()) throw InvalidArgument("no dimensions given");
    for (int d : dims)
        if (d < 2 || d > 64) throw InvalidArgument("dimensions must lie in 2..64");
    return dims;
}

// "3", "3/2" or "1.5" -> 2J
int parse_two_j(const std::string &s) {
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        if (parse_int(s.substr(slash + 1)) != 2) throw InvalidArgument("J must be an integer or half-integer: " + s);
        return parse_int(s.substr(0, slash));
    }
    double j = 0.0;
    try {
        j = std::stod(s);
    } catch (const std::exception &) {
        throw InvalidArgument("'" + s + "' is not a spin value");
    }
    const double two_j = 2.0 * j;
    if (two_j < 0.0 || std::abs(two_j - std::round(two_j)) > 1e-12) throw InvalidArgument("J must be a non-negative half-integer: " + s);
    return static_cast<int>(std::round(two_j));
}

MomentFunction parse_moment(const std::string &s) {
    auto order_of = [&](std::size_t prefix) { return s.size() > prefix ? parse_int(s.substr(prefix)) : 1; };
    if (s.rfind("power", 0) == 0) return MomentFunction::power(order_of(5));
    if (s.rfind("cos", 0) == 0) return MomentFunction::cosine(order_of(3));
    if (s.rfind("sin", 0) == 0) return MomentFunction::sine(order_of(3));
    if (s.rfind("circular", 0) == 0) return MomentFunction::circular(order_of(8));
    if (s.rfind("indicator:", 0) == 0) return MomentFunction::indicator(std::stod(s.substr(10)));
    throw InvalidArgument("unknown moment function '" + s + "'");
}

MaxEntModel fit_discrete(const std::string &models, const DiscreteDistribution &p) {
    std::vector<double> outcomes(p.outcomes().begin(), p.outcomes().end());
    if (models == "uniform") return fit_uniform(std::move(outcomes));
    if (models == "boltzmann") return fit_boltzmann(std::move(outcomes), p.mean());
    // first two power moments, or just the mean when d = 2
    std::vector<MomentConstraint> cs;
    const int k = std::min<int>(2, static_cast<int>(p.size()) - 1);
    for (int order = 1; order <= k; ++order) {
        double t = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) t += p.prob(i) * std::pow(p.outcome(i), order);
        cs.push_back({MomentFunction::power(order), t});
    }
    return fit_general_moments(std::move(outcomes), cs);
}

// Entropies taken with the wrong sign; used only as a negative control.
ReurReport buggy_maassen_uffink(const DensityMatrix &rho, const OrthonormalBasis &a, const OrthonormalBasis &b, double tol) {
    const auto p = measure_projective(rho, a);
    const auto q = measure_projective(rho, b);
    const double c = max_overlap(a, b);
    auto r = make_report(RelationId::maassen_uffink, BoundDirection::lower,
                         {{"S(p)", -shannon_entropy(p)}, {"S(q)", -shannon_entropy(q)}},
                         {{"ln(1/c)", -std::log(c)}, {"S(rho)", -von_neumann_entropy(rho)}}, c, tol);
    r.fingerprint.dimension = rho.dim();
    return r;
}

struct Instance {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    int dim = 0;
    std::vector<ReurReport> reports;
};

Instance run_instance(std::size_t index, std::uint64_t seed, int d, const VerifyOptions &o) {
    std::mt19937_64 rng(seed);
    const int rank = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(d));
    const auto rho = random_density_matrix(d, rank, rng());
    const auto a = OrthonormalBasis::random(d, rng());
    const auto b = OrthonormalBasis::random(d, rng());

    const auto mp = fit_discrete(o.models, measure_projective(rho, a));
    const auto mq = fit_discrete(o.models, measure_projective(rho, b));

    Instance inst{index, seed, d, {}};
    inst.reports.push_back(o.inject_bug ? buggy_maassen_uffink(rho, a, b, o.tolerance)
                                        : evaluate_maassen_uffink(rho, a, b, o.tolerance));
    inst.reports.push_back(evaluate_reur_discrete(rho, a, b, mp, mq, o.tolerance));
    inst.reports.push_back(evaluate_reur_relative_only(rho, a, b, mp, mq, o.tolerance));
    for (auto &r : inst.reports) {
        r.fingerprint.seed = seed;
        r.fingerprint.dimension = d;
        if (r.fingerprint.model_families.empty()) r.fingerprint.model_families = {to_string(mp.family), to_string(mq.family)};
    }
    return inst;
}

void emit(const std::string &text, const std::string &path, std::ostream &out) {
    if (path.empty()) out << text;
    else io::write_text_file(path, text);
}

int cmd_verify(const VerifyOptions &o, std::ostream &out, std::ostream &err) {
    if (o.instances < 1 || o.instances > 1000000) throw InvalidArgument("instances must lie in 1..1000000");
    if (o.models != "uniform" && o.models != "boltzmann" && o.models != "moments")
        throw InvalidArgument("models must be uniform, boltzmann or moments");
    if (!(o.tolerance >= 0.0)) throw InvalidArgument("tolerance must be non-negative");
    if (o.format != "json" && o.format != "csv") throw InvalidArgument("format must be json or csv");
    const auto dims = parse_dims(o.dims);

    struct Job {
        std::size_t index;
        int dim;
    };
    std::vector<Job> jobs;
    for (std::size_t k = 0; k < dims.size(); ++k)
        for (int i = 0; i < o.instances; ++i) jobs.push_back({jobs.size(), dims[k]});

    std::vector<Instance> results(jobs.size());
    std::vector<std::string> failures(jobs.size());
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned nthreads = o.threads > 0 ? static_cast<unsigned>(o.threads) : hw;
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t] {
                for (std::size_t k = t; k < jobs.size(); k += nthreads) {
                    try {
                        results[k] = run_instance(jobs[k].index, o.seed + jobs[k].index, jobs[k].dim, o);
                    } catch (const std::exception &e) {
                        failures[k] = e.what();
                    }
                }
            });
        }
    }
    for (std::size_t k = 0; k < jobs.size(); ++k)
        if (!failures[k].empty())
            throw std::runtime_error("instance " + std::to_string(k) + " (seed " + std::to_string(o.seed + k) + "): " + failures[k]);

    std::size_t violations = 0;
    const ReurReport *worst = nullptr;
    const Instance *worst_inst = nullptr;
    std::vector<std::uint64_t> violating_seeds;
    const Instance *first_bad = nullptr;
    for (const auto &inst : results) {
        bool bad = false;
        for (const auto &r : inst.reports) {
            if (!r.satisfied) {
                ++violations;
                bad = true;
            }
            if (!worst || r.gap < worst->gap) {
                worst = &r;
                worst_inst = &inst;
            }
        }
        if (bad) {
            violating_seeds.push_back(inst.seed);
            if (!first_bad) first_bad = &inst;
        }
    }

    Json summary{{"command", "verify"},
                 {"seed", o.seed},
                 {"instances_per_dimension", o.instances},
                 {"dimensions", dims},
                 {"models", o.models},
                 {"tolerance", io::number(o.tolerance)},
                 {"inject_bug", o.inject_bug},
                 {"evaluations", results.size() * 3},
                 {"violations", violations},
                 {"violating_seeds", violating_seeds}};
    if (worst)
        summary["worst"] = Json{{"seed", worst_inst->seed}, {"dimension", worst_inst->dim}, {"report", io::report_to_json(*worst)}};

    if (o.format == "json") {
        Json doc = summary;
        Json list = Json::array();
        for (const auto &inst : results) {
            Json reps = Json::array();
            for (const auto &r : inst.reports) reps.push_back(io::report_to_json(r));
            list.push_back(Json{{"index", inst.index}, {"seed", inst.seed}, {"dimension", inst.dim}, {"reports", reps}});
        }
        doc["instances"] = list;
        if (o.out.empty()) out << io::dump(doc);
        else {
            io::write_text_file(o.out, io::dump(doc));
            out << io::dump(summary);
        }
    } else {
        std::ostringstream csv;
        csv << "index,seed,dimension,relation,lhs,rhs,gap,satisfied\n";
        for (const auto &inst : results)
            for (const auto &r : inst.reports)
                csv << inst.index << ',' << inst.seed << ',' << inst.dim << ',' << to_string(r.relation) << ','
                    << io::format_double(r.lhs) << ',' << io::format_double(r.rhs) << ',' << io::format_double(r.gap) << ','
                    << (r.satisfied ? "true" : "false") << '\n';
        emit(csv.str(), o.out, out);
        if (!o.out.empty()) out << io::dump(summary);
    }
    if (violations > 0) {
        err << "verify: " << violations << " violated relation(s); replay with --seed " << first_bad->seed
            << " --instances 1 --dims " << first_bad->dim << "\n";
        return kExitViolation;
    }
    return kExitOk;
}

std::vector<std::complex<double>> preset_wavefunction(const ContinuousOptions &o, const GridSpec &grid) {
    std::vector<std::complex<double>> psi(grid.size);
    const auto &p = o.preset;
    if (p == "gaussian" || p == "squeezed") {
        const double a = p == "squeezed" ? o.alpha : 1.0;
        if (!(a > 0.0)) throw InvalidArgument("alpha must be positive");
        const double norm = std::pow(std::numbers::pi * a * a, -0.25);
        for (std::size_t i = 0; i < grid.size; ++i) psi[i] = norm * std::exp(-0.5 * grid.x(i) * grid.x(i) / (a * a));
    } else if (p.rfind("hermite-", 0) == 0) {
        const int n = parse_int(p.substr(8));
        if (n < 0 || n > 40) throw InvalidArgument("hermite level must lie in 0..40");
        const auto v = oscillator_eigenfunction(n, grid);
        std::copy(v.begin(), v.end(), psi.begin());
    } else if (p == "gaussian-superposition") {
        double norm = 0.0;
        for (std::size_t i = 0; i < grid.size; ++i) {
            const double x = grid.x(i), s = 0.5 * o.separation;
            psi[i] = std::exp(-0.5 * (x - s) * (x - s)) + std::exp(-0.5 * (x + s) * (x + s));
            norm += std::norm(psi[i]) * grid.spacing;
        }
        for (auto &v : psi) v /= std::sqrt(norm);
    } else {
        throw InvalidArgument("unknown preset '" + p + "'");
    }
    return psi;
}

int cmd_continuous(const ContinuousOptions &o, std::ostream &out) {
    if (o.format != "json" && o.format != "csv") throw InvalidArgument("format must be json or csv");
    if (o.grid < 64 || o.grid > (1 << 22)) throw InvalidArgument("grid must lie in 64..4194304");
    const auto grid = balanced_grid(static_cast<std::size_t>(o.grid));

    const auto [dens, s_rho] = [&]() -> std::pair<PhaseSpaceDensities, double> {
        if (o.preset == "thermal") {
            auto t = thermal_oscillator(o.beta, o.levels, grid);
            return {std::move(t.densities), t.von_neumann_entropy};
        }
        return {wavefunction_to_densities(preset_wavefunction(o, grid), grid), 0.0};
    }();
    const auto mf = fit_to_density(MaxEntFamily::gaussian, dens.position);
    const auto mg = fit_to_density(MaxEntFamily::gaussian, dens.momentum);
    const auto birula = evaluate_reur_continuous(dens.position, dens.momentum, s_rho, mf, mg, ContinuousVariant::birula, o.tolerance);
    const auto fl = evaluate_reur_continuous(dens.position, dens.momentum, s_rho, mf, mg, ContinuousVariant::frank_lieb, o.tolerance);
    const auto rs = robertson_strengthened(dens.position, dens.momentum);
    const auto rob = make_report(RelationId::robertson, BoundDirection::lower, {{"sigma_x*sigma_k", rs.sigma_product}},
                                 {{"exp(S(f||f_max)+S(g||g_max))/2", rs.strengthened_bound}}, 1.0 / (2.0 * std::numbers::pi),
                                 o.tolerance);
    const std::vector<const ReurReport *> reports{&birula, &fl, &rob};

    if (o.format == "json") {
        Json reps = Json::array();
        for (const auto *r : reports) reps.push_back(io::report_to_json(*r));
        Json doc{{"command", "continuous"},
                 {"preset", o.preset},
                 {"grid_points", o.grid},
                 {"S_rho", io::number(s_rho)},
                 {"sigma_x", io::number(rs.sigma_x)},
                 {"sigma_k", io::number(rs.sigma_k)},
                 {"divergence_sum", io::number(rs.divergence_sum)},
                 {"strengthened_bound", io::number(rs.strengthened_bound)},
                 {"robertson_bound", io::number(rs.robertson_bound)},
                 {"reports", reps}};
        emit(io::dump(doc), o.out, out);
    } else {
        std::ostringstream csv;
        csv << "relation,lhs,rhs,gap,satisfied,sigma_x,sigma_k\n";
        for (const auto *r : reports)
            csv << to_string(r->relation) << ',' << io::format_double(r->lhs) << ',' << io::format_double(r->rhs) << ','
                << io::format_double(r->gap) << ',' << (r->satisfied ? "true" : "false") << ','
                << io::format_double(rs.sigma_x) << ',' << io::format_double(rs.sigma_k) << '\n';
        emit(csv.str(), o.out, out);
    }
    for (const auto *r : reports)
        if (!r->satisfied) return kExitViolation;
    return kExitOk;
}

int cmd_angular(const AngularOptions &o, std::ostream &out) {
    if (o.format != "json" && o.format != "csv") throw InvalidArgument("format must be json or csv");
    std::vector<int> two_js;
    for (const auto &s : split(o.j_values, ',')) two_js.push_back(parse_two_j(s));
    if (two_js.empty()) throw InvalidArgument("no J values given");
    for (int tj : two_js)
        if (tj > 400) throw InvalidArgument("J must not exceed 200");
    if (o.grid < 8) throw InvalidArgument("grid must have at least 8 points");

    SweepOptions so;
    if (o.angle_model == "uniform") so.angle_family = AngleFamily::uniform;
    else if (o.angle_model == "von_mises") so.angle_family = AngleFamily::von_mises;
    else throw InvalidArgument("angle-model must be uniform or von_mises");
    if (o.momentum_model == "uniform") so.momentum_family = MomentumFamily::uniform;
    else if (o.momentum_model == "boltzmann") so.momentum_family = MomentumFamily::boltzmann;
    else if (o.momentum_model == "moments") so.momentum_family = MomentumFamily::general_moment;
    else throw InvalidArgument("momentum-model must be uniform, boltzmann or moments");
    so.grid_points = static_cast<std::size_t>(o.grid);
    so.scale_R = o.scale_r;
    so.theta0 = o.theta0;

    StateFamily family;
    if (o.family == "phase") family = [&](const AngularSystem &s) { return phase_state(s, o.center, o.width); };
    else if (o.family == "mixed") family = [](const AngularSystem &s) { return DensityMatrix::maximally_mixed(s.dim()); };
    else if (o.family == "angle") family = [&](const AngularSystem &s) { return DensityMatrix::pure(angle_state(s, o.center)); };
    else throw InvalidArgument("family must be phase, mixed or angle");

    const auto rows = continuum_sweep(family, two_js, so);
    const std::string csv = io::sweep_to_csv(rows);
    const std::string sidecar = io::dump(io::sweep_to_json(rows));
    if (o.out.empty()) {
        out << (o.format == "csv" ? csv : sidecar);
    } else {
        io::write_text_file(o.out, o.format == "csv" ? csv : sidecar);
        if (o.format == "csv") io::write_text_file(o.out + ".json", sidecar);
    }
    for (const auto &row : rows)
        if (!row.discrete.satisfied || !row.continuous.satisfied || row.completeness_residual > 1e-12) return kExitViolation;
    return kExitOk;
}

int cmd_maxent_fit(const FitOptions &o, std::ostream &out) {
    if (o.input.empty()) throw InvalidArgument("--input is required");
    const bool is_density = o.input.size() >= 5 && o.input.substr(o.input.size() - 5) == ".json";
    MaxEntModel model;
    if (is_density) {
        model = fit_to_density(family_from_string(o.family), io::read_density_json(o.input));
    } else {
        const auto p = io::read_histogram_csv(o.input);
        std::vector<double> outcomes(p.outcomes().begin(), p.outcomes().end());
        if (o.family == "uniform") {
            model = fit_uniform(std::move(outcomes));
        } else if (o.family == "boltzmann") {
            model = fit_boltzmann(std::move(outcomes), p.mean());
        } else if (o.family == "moments" || o.family == "general_moment") {
            std::vector<MomentConstraint> cs;
            for (const auto &name : split(o.moments, ',')) {
                const auto fn = parse_moment(name);
                std::complex<double> t = 0.0;
                for (std::size_t i = 0; i < p.size(); ++i) t += p.prob(i) * fn.complex_value(p.outcome(i));
                cs.push_back({fn, t});
            }
            model = fit_general_moments(std::move(outcomes), cs);
        } else if (o.family == "von_mises") {
            std::complex<double> z = 0.0;
            for (std::size_t i = 0; i < p.size(); ++i) z += p.prob(i) * std::polar(1.0, p.outcome(i));
            model = fit_von_mises(z);
        } else {
            throw UnsupportedFamily("family '" + o.family + "' cannot be fitted to a histogram");
        }
    }
    emit(io::dump(io::model_to_json(model)), o.out, out);
    return kExitOk;
}

std::string config_token(const Json &v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
    if (v.is_number_float()) return io::format_double(v.get<double>());
    throw InvalidArgument("config value " + v.dump() + " must be a string or number");
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Numerical checks of relative entropic uncertainty relations", "reur"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    std::string config_path;

    VerifyOptions vo;
    auto *verify = app.add_subcommand("verify", "random-instance check of the discrete relations");
    verify->add_option("--seed", vo.seed, "base seed; instance k uses seed + k");
    verify->add_option("--instances", vo.instances, "instances per dimension");
    verify->add_option("--dims", vo.dims, "dimensions, lo..hi or a comma list");
    verify->add_option("--models", vo.models, "uniform | boltzmann | moments");
    verify->add_option("--tolerance", vo.tolerance);
    verify->add_option("--out", vo.out, "full report file");
    verify->add_option("--format", vo.format, "json | csv");
    verify->add_flag("--inject-bug", vo.inject_bug, "negative control: flip the entropy sign in the Maassen-Uffink check");
    verify->add_option("--threads", vo.threads, "worker threads (0 = all cores)");

    ContinuousOptions co;
    auto *cont = app.add_subcommand("continuous", "position/momentum relations for a preset state");
    cont->add_option("--preset", co.preset, "gaussian | squeezed | hermite-N | gaussian-superposition | thermal");
    cont->add_option("--alpha", co.alpha, "squeeze factor");
    cont->add_option("--separation", co.separation, "distance between superposed Gaussians");
    cont->add_option("--beta", co.beta, "inverse temperature (thermal)");
    cont->add_option("--levels", co.levels, "oscillator truncation (thermal)");
    cont->add_option("--grid", co.grid, "grid points (power of two)");
    cont->add_option("--tolerance", co.tolerance);
    cont->add_option("--out", co.out);
    cont->add_option("--format", co.format, "json | csv");

    AngularOptions ao;
    auto *ang = app.add_subcommand("angular", "angle / angular momentum sweep over J");
    ang->add_option("--j-values", ao.j_values, "comma list of J (integers or halves, e.g. 3/2)");
    ang->add_option("--family", ao.family, "phase | mixed | angle");
    ang->add_option("--width", ao.width, "angular width of the phase state");
    ang->add_option("--center", ao.center, "peak angle of the phase or angle state");
    ang->add_option("--angle-model", ao.angle_model, "uniform | von_mises");
    ang->add_option("--momentum-model", ao.momentum_model, "uniform | boltzmann | moments");
    ang->add_option("--scale-r", ao.scale_r, "length scale R");
    ang->add_option("--grid", ao.grid, "angle grid points");
    ang->add_option("--theta0", ao.theta0);
    ang->add_option("--out", ao.out, "table file; a .json sidecar is written next to it");
    ang->add_option("--format", ao.format, "csv | json");

    FitOptions fo;
    auto *fit = app.add_subcommand("maxent-fit", "fit a maximum-entropy model to a histogram or density");
    fit->add_option("--input", fo.input, "histogram CSV or density JSON");
    fit->add_option("--family", fo.family, "uniform | boltzmann | moments | gaussian | von_mises");
    fit->add_option("--moments", fo.moments, "constraint functions for moments, e.g. power1,power2,cos1");
    fit->add_option("--out", fo.out);

    for (auto *sub : {verify, cont, ang, fit}) sub->add_option("--config", config_path, "JSON config; flags override it");

    try {
        // strip --config, read it and splice its entries in front of the flags
        std::vector<std::string> rest;
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config") {
                if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file");
                config_path = args[++i];
            } else if (args[i].rfind("--config=", 0) == 0) {
                config_path = args[i].substr(9);
            } else {
                rest.push_back(args[i]);
            }
        }
        std::string command;
        if (!rest.empty() && rest.front().rfind("-", 0) != 0) {
            command = rest.front();
            rest.erase(rest.begin());
        }
        std::vector<std::string> config_tokens;
        if (!config_path.empty()) {
            const auto cfg = io::read_json_file(config_path);
            if (!cfg.is_object()) throw InvalidArgument("config must be a JSON object");
            if (cfg.contains("command")) {
                const auto c = cfg.at("command").get<std::string>();
                if (command.empty()) command = c;
                else if (command != c) throw InvalidArgument("config is for '" + c + "', not '" + command + "'");
            }
            CLI::App *sub = command.empty() ? nullptr : app.get_subcommand_no_throw(command);
            if (!sub) throw InvalidArgument("unknown or missing command '" + command + "'");
            for (const auto &[key, value] : cfg.items()) {
                if (key == "command") continue;
                const auto *opt = sub->get_option_no_throw("--" + key);
                if (!opt || key == "config") throw InvalidArgument("unknown config key '" + key + "'");
                if (value.is_boolean()) {
                    if (opt->get_expected_min() != 0) throw InvalidArgument("config key '" + key + "' needs a value");
                    if (value.get<bool>()) config_tokens.push_back("--" + key);
                    continue;
                }
                config_tokens.push_back("--" + key);
                config_tokens.push_back(config_token(value));
            }
        }
        std::vector<std::string> argv;
        if (!command.empty()) argv.push_back(command);
        argv.insert(argv.end(), config_tokens.begin(), config_tokens.end());
        argv.insert(argv.end(), rest.begin(), rest.end());
        std::reverse(argv.begin(), argv.end());
        app.parse(argv);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "reur: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        err << "reur: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (verify->parsed()) return cmd_verify(vo, out, err);
        if (cont->parsed()) return cmd_continuous(co, out);
        if (ang->parsed()) return cmd_angular(ao, out);
        if (fit->parsed()) return cmd_maxent_fit(fo, out);
    } catch (const std::exception &e) {
        err << "reur: " << e.what() << "\n";
        return kExitUsage;
    }
    err << app.help();
    return kExitUsage;
}

} // namespace reur::cli
