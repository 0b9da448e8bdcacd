#pragma once

// JSON problem files and command dispatch for the command-line tool.

#include "intb/verify.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace intb {

/// Invalid problem data; path() is the JSON path of the offending value.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(const std::string& path, const std::string& what)
        : std::invalid_argument(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct ProblemFile {
    std::optional<FormalBracket> bracket;
    std::vector<VectorFieldSpec> field_specs;
    Fields fields;
    std::optional<Vec> x;
    std::optional<Times> t;
    OdeConfig ode;
    QuadratureConfig quadrature;
    Json scenario = Json::object();

    /// Bracket, base point and times, or ValidationError naming what is missing.
    MultiflowProblem multiflow() const;
};

ProblemFile load_problem(const Json& j);
ProblemFile load_problem_file(const std::string& path);

struct RunOptions {
    std::optional<double> ode_tol;
    std::optional<int> quad_nodes;
    std::optional<double> delta;
};

struct CommandOutput {
    std::vector<VerificationReport> reports;
    Json results = Json::object();
    std::vector<std::string> lines;  ///< human-readable summary

    Json to_json(const std::string& command) const;
    std::string to_csv() const;
};

/// Commands: psi, ibracket, verify-integral, verify-asymptotic, verify-lemma2,
/// verify-v, example51, rank, steer.
CommandOutput run_command(const ProblemFile& problem, const std::string& command, const RunOptions& opts);

const std::vector<std::string>& known_commands();

}  // namespace intb
