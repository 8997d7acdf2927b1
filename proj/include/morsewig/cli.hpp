#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "morsewig/states.hpp"
#include "morsewig/wigner.hpp"

namespace morsewig::cli {

enum class RecipeKind { eigen, docs, dpacs };

struct StateRecipe {
  RecipeKind kind = RecipeKind::eigen;
  int level = 0;  // n for eigen, m for dpacs
  std::optional<Complex> zeta;
  std::optional<double> nbar;
  double phase = 0.0;
};

/// One fully resolved command. Every field has a flat JSON key equal to its
/// flag name without dashes.
struct JobSpec {
  int n_bound = 0;
  double hbar = 1.0;
  double omega = 1.0;
  double mass = 1.0;
  StateRecipe state;
  std::optional<std::string> time;  // as written: "0.5", "3/4 tau", ...
  std::optional<double> x_min, x_max, p_min, p_max;
  int nx = 201;
  int np = 201;
  WignerConfig config;
  double max_boundary = 1e-12;
  std::vector<std::string> outputs;
};

/// Flat-key form; the inverse of job_from_json.
nlohmann::json job_to_json(const JobSpec& job);

/// Throws DomainError on unknown keys, wrong types, or anything other than
/// exactly one state recipe.
JobSpec job_from_json(const nlohmann::json& j);

/// "1.25", "tau", "tau/4", "3/4 tau", "3tau/4". Fractions need q <= 64.
double parse_time(const std::string& text, double tau);

/// Output format from the file extension: csv, json, ppm or svg.
std::string output_format(const std::string& path);

/// The recipe's state, evolved to the job's time when one is given.
BoundState build_state(const JobSpec& job);

/// Runs one command line (without the program name). Returns the exit
/// status: 0 ok, 1 usage or domain, 2 accuracy or failed check, 3 coverage.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace morsewig::cli
