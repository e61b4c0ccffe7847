#pragma once

#include <optional>
#include <string>

#include "gcoup/complementarity.hpp"
#include "gcoup/coupling.hpp"
#include "gcoup/duality_schemes.hpp"
#include "gcoup/equilibrium.hpp"
#include "gcoup/grid.hpp"
#include "gcoup/proper_fn.hpp"

namespace gcoup {

struct NumericDefaults {
    double tol = 1e-6;
    double radius = 20.0;
    int points_per_dim = 201;
    int refinement_rounds = 0;
    unsigned seed = 0;
};

// Parsed problem document. Which optional blocks are present decides which
// experiments the file supports.
struct ProblemFile {
    std::string name = "problem";
    int n = 1;
    int m = 1;
    NumericDefaults numeric;

    std::optional<ProperFn> f;
    std::optional<Coupling> g;
    std::optional<ConstrainedProblem> lagrangian;
    std::optional<PerturbationScheme> perturbation;
    std::optional<EPInstance> ep;
    std::optional<VIPInstance> vip;
    std::optional<EPVIPInstance> epvip;
    std::optional<CPInstance> cp;

    GridSpec xgrid() const;  // centered n-dim window from the numeric block
    GridSpec cgrid() const;  // centered m-dim window
};

// Throws SchemaError with a JSON path on malformed input.
ProblemFile load_problem_file(const std::string& path);
ProblemFile parse_problem_text(const std::string& text);

}  // namespace gcoup
