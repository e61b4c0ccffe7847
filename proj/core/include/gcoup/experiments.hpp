#pragma once

#include <optional>
#include <string>

#include "gcoup/problem_file.hpp"
#include "gcoup/report.hpp"

namespace gcoup {

struct ExperimentOptions {
    std::optional<double> tol;
    std::optional<double> radius;
    std::optional<int> points;
    std::string format = "json";  // json | csv
    bool timings = false;         // wall time is opt-in so default reports stay byte-stable
};

struct ExperimentResult {
    std::string text;
    bool ok = true;  // drives the process exit code
};

// cmd is one of: validate, conjugate, duality, recession, lagrangian,
// perturb, ep, cp. paper-suite runs the canonical regressions and needs no
// problem file.
ExperimentResult run_experiment(const std::string& cmd, const ProblemFile& file,
                                const ExperimentOptions& opt = {});

ExperimentResult run_paper_suite(const ExperimentOptions& opt = {});

std::string list_builtins_text();

}  // namespace gcoup
