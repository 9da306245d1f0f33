#pragma once

#include "reur/angular.hpp"
#include "reur/entropy.hpp"
#include "reur/maxent.hpp"
#include "reur/reur.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace reur::io {

using Json = nlohmann::ordered_json;

/// Shortest decimal form that parses back to the same double; inf/nan as "inf", "-inf", "nan".
std::string format_double(double x);
/// Number for finite values, string otherwise.
Json number(double x);
double to_double(const Json &j);

/// Two-column CSV "outcome,weight". Weights may be counts. A header line
/// and blank lines are skipped; '#' starts a comment.
DiscreteDistribution parse_histogram_csv(std::istream &in);
DiscreteDistribution read_histogram_csv(const std::string &path);

/// {"grid_start": x0, "spacing": dx, "topology": "line"|"circle", "values": [...]}
GriddedDensity density_from_json(const Json &j);
GriddedDensity read_density_json(const std::string &path);
Json density_to_json(const GriddedDensity &f);

Json model_to_json(const MaxEntModel &model);
MaxEntModel model_from_json(const Json &j);

Json report_to_json(const ReurReport &report);

std::string sweep_to_csv(const std::vector<SweepRow> &rows);
Json sweep_to_json(const std::vector<SweepRow> &rows);

/// Pretty-printed JSON followed by a newline.
std::string dump(const Json &j);

Json read_json_file(const std::string &path);
void write_text_file(const std::string &path, const std::string &text);

} // namespace reur::io
