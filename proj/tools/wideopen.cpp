#include <iostream>

#include <CLI11.hpp>

#include "wideopen/io.hpp"

using namespace wideopen;

int main(int argc, char** argv) {
    CLI::App app{"p-adic residues and Mittag-Leffler problems on genus-0 wide opens"};
    app.require_subcommand(1);
    RunOptions opt;
    std::string file;
    long depth = 0;
    unsigned long seed = 0;
    std::string mode, semantics, diff_mode;
    bool l1 = false, ld = false;

    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"residue", "residue of an annular differential"},
        {"pullback", "pull back along a Laurent polynomial map"},
        {"check-residue-theorem", "sum of end residues of a rational differential"},
        {"check-inside-outside", "inner and outer residue sums for a subcurve"},
        {"check-splitting", "residue sums on the two sides of an annulus"},
        {"basis", "l1 or ld basis of a divisor"},
        {"solve-classical", "classical jet problem on the projective line"},
        {"solve", "boundary Mittag-Leffler problem"},
        {"complete", "complete data on free ends, then solve"},
        {"decompose", "split a series into nonnegative and negative parts"},
        {"approx", "rational approximation with prescribed poles"},
    };
    for (auto& [name, help] : cmds) {
        CLI::App* sc = app.add_subcommand(name, help);
        sc->add_option("file", file, "input JSON")->required()->check(CLI::ExistingFile);
        sc->add_option("--seed", seed, "seed echoed in the report");
        if (name == "solve" || name == "complete") {
            sc->add_option("--depth", depth, "truncation steps");
            sc->add_flag("--oracle", opt.oracle, "cross-check with the coefficient-matching oracle");
            sc->add_option("--mode", mode)->check(CLI::IsMember({"functions", "differentials"}));
            sc->add_option("--semantics", semantics)->check(CLI::IsMember({"jet", "exact"}));
            sc->add_option("--diff-mode", diff_mode)->check(CLI::IsMember({"principal", "generalized"}));
        }
        if (name == "solve-classical") {
            sc->add_option("--mode", diff_mode)->check(CLI::IsMember({"principal", "generalized"}));
            sc->add_flag("--functions", l1);
            sc->add_flag("--differentials", ld);
        }
        if (name == "basis") {
            sc->add_flag("--l1", l1);
            sc->add_flag("--ld", ld);
        }
    }
    CLI11_PARSE(app, argc, argv);
    CLI::App* sc = app.get_subcommands().front();
    std::string cmd = sc->get_name();
    auto given = [&](const std::string& name) {
        auto* o = sc->get_option_no_throw(name);
        return o && o->count() > 0;
    };
    if (given("--depth")) opt.depth = depth;
    if (given("--seed")) opt.seed = seed;
    if (!semantics.empty()) opt.semantics = semantics;
    if (!diff_mode.empty()) opt.diff_mode = diff_mode;
    if (cmd == "basis") {
        if (l1) opt.basis_kind = "l1";
        if (ld) opt.basis_kind = "ld";
    } else if (cmd == "solve-classical") {
        if (l1) opt.mode = "functions";
        if (ld) opt.mode = "differentials";
    } else if (!mode.empty()) {
        opt.mode = mode;
    }

    RunResult res;
    try {
        res = run_command(cmd, load_json(file), opt);
    } catch (const Error& e) {
        res.report = {{"command", cmd}, {"error", error_name(e.code())}, {"message", e.what()}};
        res.exit_code = 1;
    }
    std::cout << res.report.dump(2) << "\n";
    return res.exit_code;
}
