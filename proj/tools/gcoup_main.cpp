// Command line front end: every subcommand maps to one experiment over a
// problem file, emitting a deterministic report on stdout or into --out.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "gcoup/errors.hpp"
#include "gcoup/experiments.hpp"

namespace {

struct Cli {
    std::string file;
    std::string out;
    std::string format = "json";
    double tol = 0.0;
    double radius = 0.0;
    int points = 0;
    bool timings = false;
};

void attach_report_flags(CLI::App* sub, Cli& c) {
    sub->add_option("--out", c.out, "write the report here instead of stdout");
    sub->add_option("--format", c.format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_flag("--timings", c.timings, "embed wall time (breaks byte stability)");
}

void attach_numeric_flags(CLI::App* sub, Cli& c) {
    sub->add_option("--tol", c.tol, "override the file's tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--radius", c.radius, "override the grid half width")
        ->check(CLI::PositiveNumber);
    sub->add_option("--points", c.points, "override points per dimension")
        ->check(CLI::Range(2, 100000));
}

int emit(const gcoup::ExperimentResult& r, const Cli& c) {
    if (c.out.empty()) {
        std::fputs(r.text.c_str(), stdout);
    } else {
        std::ofstream f(c.out, std::ios::binary);
        if (!f) {
            std::fprintf(stderr, "error: cannot open %s for writing\n", c.out.c_str());
            return 2;
        }
        f << r.text;
    }
    return r.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid-backed generalized conjugation experiments"};
    app.require_subcommand(1);
    Cli c;

    const std::vector<std::pair<std::string, std::string>> file_cmds = {
        {"validate", "check a coupling against its defining conditions"},
        {"conjugate", "tabulate the conjugate and biconjugate of f"},
        {"duality", "membership, value identities, and dual attainment"},
        {"recession", "recession directions and compactness of the gap level sets"},
        {"lagrangian", "primal and dual values of a constrained problem"},
        {"perturb", "value function and conjugate bounds of a perturbation scheme"},
        {"ep", "equilibrium, variational, or mixed instance diagnostics"},
        {"cp", "complementarity enumeration and conjugate cross-checks"},
    };
    for (const auto& [name, desc] : file_cmds) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("file", c.file, "problem file (JSON)")
            ->required()
            ->check(CLI::ExistingFile);
        attach_numeric_flags(sub, c);
        attach_report_flags(sub, c);
    }
    CLI::App* suite = app.add_subcommand("paper-suite", "run the canonical regression table");
    attach_report_flags(suite, c);
    app.add_subcommand("list-builtins", "list the built-in coupling catalog");

    CLI11_PARSE(app, argc, argv);
    CLI::App* sub = app.get_subcommands().front();

    try {
        if (sub->get_name() == "list-builtins") {
            std::fputs(gcoup::list_builtins_text().c_str(), stdout);
            return 0;
        }
        gcoup::ExperimentOptions opt;
        opt.format = c.format;
        opt.timings = c.timings;
        auto counted = [&](const std::string& name) {
            const CLI::Option* o = sub->get_option_no_throw(name);
            return o != nullptr && o->count() > 0;
        };
        if (counted("--tol")) opt.tol = c.tol;
        if (counted("--radius")) opt.radius = c.radius;
        if (counted("--points")) opt.points = c.points;
        if (sub->get_name() == "paper-suite")
            return emit(gcoup::run_paper_suite(opt), c);
        gcoup::ProblemFile pf = gcoup::load_problem_file(c.file);
        return emit(gcoup::run_experiment(sub->get_name(), pf, opt), c);
    } catch (const gcoup::SchemaError& e) {
        std::fprintf(stderr, "problem file error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
