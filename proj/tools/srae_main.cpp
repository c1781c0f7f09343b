// Command-line reproduction harness: emits the toolkit's figure data, the
// W-state indicator table, the worked discussion cases and the lemma
// certification report as CSV/JSON.
//
// Exit codes: 0 success, 1 internal error, 2 window violation,
//             3 invalid state file, 4 missing squared-concurrence source.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srae/repro.hpp"

namespace {

int run(int argc, char** argv) {
    CLI::App app{"squared Renyi-alpha entanglement monogamy toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "deterministic run seed, recorded in the manifest");

    // fig1
    auto* fig1 = app.add_subcommand("fig1", "three-tangle vs indicator sweep for the GHZ/W superposition");
    std::string fig1_out = "fig1.csv";
    std::size_t fig1_steps = 201;
    std::vector<double> fig1_alphas = {0.83, 1.0, 1.1};
    fig1->add_option("--out", fig1_out, "output CSV path");
    fig1->add_option("--steps", fig1_steps, "number of p samples");
    fig1->add_option("--alpha", fig1_alphas, "indicator orders")->delimiter(',');

    // fig2
    auto* fig2 = app.add_subcommand("fig2", "indicator surface for the GHZ/W mixture");
    std::string fig2_out = "fig2.csv";
    std::size_t fig2_steps = 64;
    fig2->add_option("--out", fig2_out, "output CSV path");
    fig2->add_option("--steps", fig2_steps, "grid steps per axis");

    // table1
    auto* table1 = app.add_subcommand("table1", "hierarchical indicator table for the 7-qubit W state");
    std::string table1_out = "table1.csv";
    table1->add_option("--out", table1_out, "output CSV path");

    // examples
    auto* examples = app.add_subcommand("examples", "worked discussion cases as a JSON report");
    std::string examples_out = "examples.json";
    examples->add_option("--out", examples_out, "output JSON path");

    // lemmas
    auto* lemmas = app.add_subcommand("lemmas", "derivative/convexity certification suite");
    std::string lemmas_out = "lemmas.json";
    lemmas->add_option("--out", lemmas_out, "output JSON path (curve CSVs land next to it)");

    // residual
    auto* residual = app.add_subcommand("residual", "evaluate one monogamy residual on a state file");
    std::string residual_state;
    std::string residual_family;
    std::string residual_out = "residual.json";
    std::size_t residual_focus = 0;
    double residual_alpha = 1.0;
    double residual_mu = 2.0;
    std::size_t residual_k = 0;
    residual->add_option("state", residual_state, "state file (JSON schema)")->required();
    residual->add_option("family", residual_family, "SC | SEF | SRAE | MU | TAU2")->required();
    residual->add_option("--out", residual_out, "output JSON path");
    residual->add_option("--focus", residual_focus, "focus subsystem index");
    residual->add_option("--alpha", residual_alpha, "Renyi order");
    residual->add_option("--mu", residual_mu, "power for the MU family");
    residual->add_option("--k", residual_k, "party count for the TAU2 family");

    CLI11_PARSE(app, argc, argv);

    if (fig1->parsed()) {
        srae::repro::cmd_fig1(fig1_out, fig1_steps, fig1_alphas, seed);
    } else if (fig2->parsed()) {
        srae::repro::cmd_fig2(fig2_out, fig2_steps, 0.83, 3.0, seed);
    } else if (table1->parsed()) {
        srae::repro::cmd_table1(table1_out, seed);
    } else if (examples->parsed()) {
        srae::repro::cmd_examples(examples_out, seed);
    } else if (lemmas->parsed()) {
        const auto result = srae::repro::cmd_lemmas(lemmas_out, seed);
        if (!result.failures.empty()) {
            for (const auto& name : result.failures)
                std::cerr << "certification failure: " << name << "\n";
            return 1;
        }
    } else if (residual->parsed()) {
        srae::repro::cmd_residual(residual_state, residual_family, residual_out, residual_focus,
                                  residual_alpha, residual_mu, residual_k, seed);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const srae::window_error& e) {
        std::cerr << "window violation: " << e.what() << "\n";
        return 2;
    } catch (const srae::state_error& e) {
        std::cerr << "invalid state: " << e.what() << "\n";
        return 3;
    } catch (const srae::missing_concurrence_error& e) {
        std::cerr << "missing squared concurrence: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
