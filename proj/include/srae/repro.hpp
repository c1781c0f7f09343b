#pragma once

#include <cstdint>
#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "srae/lemma_verifier.hpp"
#include "srae/monogamy.hpp"
#include "srae/state_factory.hpp"

namespace srae::repro {

inline constexpr const char* kToolVersion = "srae 1.0.0";

/// Record of one CLI run; the canonical string feeds the manifest hash that
/// every output file carries, so reruns are byte-checkable.
struct RunManifest {
    std::string command;
    std::vector<std::pair<std::string, std::string>> parameters; // key sorted
    std::uint64_t seed = 0;
    std::vector<std::string> output_paths;
    std::string tool_version = kToolVersion;

    void add(std::string key, std::string value) {
        parameters.emplace_back(std::move(key), std::move(value));
    }

    std::string canonical() const {
        std::vector<std::pair<std::string, std::string>> sorted = parameters;
        std::sort(sorted.begin(), sorted.end());
        std::string s = "cmd=" + command;
        for (const auto& [k, v] : sorted) s += " " + k + "=" + v;
        s += " seed=" + std::to_string(seed);
        for (const auto& p : output_paths) s += " out=" + p;
        s += " version=" + tool_version;
        return s;
    }

    std::uint64_t hash() const {
        // FNV-1a 64-bit over the canonical string.
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : canonical()) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    std::string hash_hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
        return buf;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["command"] = command;
        nlohmann::ordered_json params = nlohmann::ordered_json::object();
        std::vector<std::pair<std::string, std::string>> sorted = parameters;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [k, v] : sorted) params[k] = v;
        j["parameters"] = params;
        j["seed"] = seed;
        j["output_paths"] = output_paths;
        j["tool_version"] = tool_version;
        j["hash"] = hash_hex();
        return j;
    }
};

inline std::string g6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string f4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

namespace detail {

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // fixed newlines on every platform
    if (!out) throw error("cannot open output file: " + path);
    return out;
}

inline void write_csv(const std::string& path, const RunManifest& manifest,
                      const std::string& header, const std::vector<std::string>& rows) {
    std::ofstream out = open_output(path);
    out << "# manifest=" << manifest.hash_hex() << " " << manifest.canonical() << "\n";
    out << header << "\n";
    for (const auto& row : rows) out << row << "\n";
}

inline void write_json(const std::string& path, const nlohmann::ordered_json& doc) {
    std::ofstream out = open_output(path);
    out << doc.dump(2) << "\n";
}

inline std::string alpha_column(double alpha) { return "tau1_" + g6(alpha); }

// Deterministic parallel map over row indices: values land in a preallocated
// vector, so the assembly order never depends on scheduling.
template <typename Fn>
void parallel_rows(std::size_t count, Fn&& fn, unsigned threads = 0) {
    unsigned hw = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, count == 0 ? 1 : unsigned(count));
    if (hw <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(hw);
    std::vector<std::thread> pool;
    pool.reserve(hw);
    for (unsigned t = 0; t < hw; ++t)
        pool.emplace_back([&, t]() {
            try {
                for (std::size_t i = t; i < count; i += hw) fn(i);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace detail

// ---------------------------------------------------------------------------
// Commands.
// ---------------------------------------------------------------------------

/// Superposition-family sweep: three-tangle vs the pure-state indicator
/// columns, one row per p.
inline RunManifest cmd_fig1(const std::string& out, std::size_t p_steps = 201,
                            std::vector<double> alphas = {0.83, 1.0, 1.1},
                            std::uint64_t seed = 0) {
    if (p_steps < 2) throw std::invalid_argument("p_steps must be at least 2");
    std::vector<AlphaOrder> orders;
    for (double a : alphas) {
        AlphaOrder order(a);
        if (!order.in_two_qubit_window())
            throw window_error("order below the two-qubit formula window");
        orders.push_back(order);
    }

    RunManifest manifest;
    manifest.command = "fig1";
    manifest.seed = seed;
    manifest.add("p_steps", std::to_string(p_steps));
    std::string alpha_list;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        alpha_list += (i ? "," : "") + g6(alphas[i]);
    manifest.add("alphas", alpha_list);
    manifest.output_paths.push_back(out);

    std::string header = "p,three_tangle";
    for (double a : alphas) header += "," + detail::alpha_column(a);

    std::vector<std::string> rows(p_steps);
    detail::parallel_rows(p_steps, [&](std::size_t i) {
        const double p = double(i) / double(p_steps - 1);
        const PureState psi = ghz_w_superposition(p);
        std::string row = g6(p) + "," + g6(three_tangle(psi));
        for (const AlphaOrder& order : orders) row += "," + g6(tau1(psi, 0, order));
        rows[i] = std::move(row);
    });
    detail::write_csv(out, manifest, header, rows);
    return manifest;
}

/// Indicator surface for the GHZ/W mixture over (p, alpha), evaluated on the
/// known optimal decomposition for p <= 0.627.
inline RunManifest cmd_fig2(const std::string& out, std::size_t steps = 64,
                            double alpha_min = 0.83, double alpha_max = 3.0,
                            std::uint64_t seed = 0) {
    if (steps < 2) throw std::invalid_argument("steps must be at least 2");
    RunManifest manifest;
    manifest.command = "fig2";
    manifest.seed = seed;
    manifest.add("steps", std::to_string(steps));
    manifest.add("alpha_min", g6(alpha_min));
    manifest.add("alpha_max", g6(alpha_max));
    manifest.output_paths.push_back(out);

    std::vector<std::string> rows(steps);
    detail::parallel_rows(steps, [&](std::size_t i) {
        const double p = kSuperpositionTangleZero * double(i) / double(steps - 1);
        const DensityMatrix rho = ghz_w_mixture(p);
        const Ensemble decomposition = ghz_w_mixture_decomposition(p);
        std::string block;
        for (std::size_t j = 0; j < steps; ++j) {
            const double alpha = alpha_min + (alpha_max - alpha_min) * double(j) / double(steps - 1);
            const double tau = tau1(rho, decomposition, 0, AlphaOrder(alpha));
            if (!block.empty()) block += "\n";
            block += g6(p) + "," + g6(alpha) + "," + g6(tau);
        }
        rows[i] = std::move(block);
    });
    detail::write_csv(out, manifest, "p,alpha,tau1", rows);
    return manifest;
}

/// Hierarchical-indicator table for the 7-qubit W state: party counts 3..7
/// against five orders, printed to 4 decimals.
inline RunManifest cmd_table1(const std::string& out, std::uint64_t seed = 0) {
    constexpr std::size_t kQubits = 7;
    const std::vector<double> alphas = {0.95, 1.0, 1.05, 1.10, 1.15};
    const PureState w7 = w_state(kQubits);

    RunManifest manifest;
    manifest.command = "table1";
    manifest.seed = seed;
    manifest.output_paths.push_back(out);

    std::string header = "k";
    for (double a : alphas) header += ",alpha_" + g6(a);

    std::vector<std::string> rows;
    const double n = double(kQubits);
    for (std::size_t k = 3; k <= kQubits; ++k) {
        std::string row = std::to_string(k);
        for (double a : alphas) {
            // Merged-block squared concurrence of the W marginal is analytic.
            std::optional<double> block_c2;
            if (k < kQubits) block_c2 = 4.0 * (n - double(k) + 1.0) / (n * n);
            const ResidualReport report = tau2(w7, 0, k, AlphaOrder(a), block_c2);
            row += "," + f4(report.residual);
        }
        rows.push_back(std::move(row));
    }
    detail::write_csv(out, manifest, header, rows);
    return manifest;
}

/// Worked discussion cases: the antisymmetric qutrit state residual with its
/// certified pair decomposition, and the hypothetical squared-concurrence
/// sets where only the squared Renyi-alpha family stays monogamous.
inline RunManifest cmd_examples(const std::string& out, std::uint64_t seed = 0) {
    RunManifest manifest;
    manifest.command = "examples";
    manifest.seed = seed;
    manifest.output_paths.push_back(out);

    nlohmann::ordered_json doc;
    doc["manifest"] = manifest.to_json();

    // Antisymmetric qutrit state: the A|BC entropy is alpha-independent and
    // both pair terms evaluate on the singlet decomposition, which is taken
    // as the optimal roof (flagged as an assumption).
    {
        const PureState ou = ou_antisymmetric_state();
        const Ensemble pairs = ou_singlet_pair_ensemble();
        nlohmann::ordered_json entries = nlohmann::ordered_json::array();
        const std::vector<double> alphas = {0.83, 1.0, 2.0, 5.0};
        const double expected = std::log2(3.0) * std::log2(3.0) - 2.0;
        for (double a : alphas) {
            const AlphaOrder order(a);
            const double left = e_alpha_pure(ou, Cut({0}, 3), order);
            const PureMeasure measure = [order](const PureState& s, const Cut& c) {
                return e_alpha_pure(s, c, order);
            };
            const double pair_value = evaluate_ensemble(pairs, Cut({0}, 2), measure);
            const double residual = left * left - 2.0 * pair_value * pair_value;
            nlohmann::ordered_json entry;
            entry["alpha"] = a;
            entry["left_term"] = left * left;
            entry["pair_term"] = pair_value * pair_value;
            entry["residual"] = residual;
            entry["expected"] = 0.51211;
            entry["tolerance"] = 5e-5;
            entry["pass"] = std::abs(residual - 0.51211) <= 5e-5;
            entries.push_back(entry);
        }
        nlohmann::ordered_json ou_doc;
        ou_doc["entries"] = entries;
        ou_doc["closed_form"] = expected;
        ou_doc["assumed_optimal_decomposition"] = true;
        doc["antisymmetric_qutrit"] = ou_doc;
    }

    // Hypothetical four-party squared concurrences 0.7 vs 3 x 0.35.
    {
        const double left = 0.7;
        const std::vector<double> pairs = {0.35, 0.35, 0.35};
        nlohmann::ordered_json cases;

        const double sc = residual_sc_values(left, pairs).residual;
        cases["sc"] = {{"residual", sc}, {"expected", -0.35}, {"tolerance", 1e-12},
                       {"pass", std::abs(sc + 0.35) <= 1e-12}};

        const double sef = residual_sef_values(left, pairs).residual;
        cases["sef"] = {{"residual", sef}, {"expected", -0.037}, {"tolerance", 5e-4},
                        {"pass", std::abs(sef + 0.037) <= 5e-4}};

        const double srae = residual_srae_values(left, pairs, AlphaOrder(1.2)).residual;
        cases["srae_alpha_1.2"] = {{"residual", srae}, {"expected", 0.052}, {"tolerance", 5e-4},
                                   {"pass", std::abs(srae - 0.052) <= 5e-4}};
        doc["hypothetical_c2"] = cases;
    }

    detail::write_json(out, doc);
    return manifest;
}

struct LemmaRunResult {
    RunManifest manifest;
    std::vector<std::string> failures;
};

/// Full certification sweep: sign grids, finite-difference cross-checks,
/// boundary limits, critical orders, and the four critical-curve CSVs.
inline LemmaRunResult cmd_lemmas(const std::string& out, std::uint64_t seed = 0) {
    RunManifest manifest;
    manifest.command = "lemmas";
    manifest.seed = seed;
    manifest.output_paths.push_back(out);

    const std::string stem = out.size() > 5 && out.substr(out.size() - 5) == ".json"
                                 ? out.substr(0, out.size() - 5)
                                 : out;
    const std::vector<std::pair<std::string, CurveEquation>> curves = {
        {stem + "_curve_dhdx.csv", CurveEquation::dhdx_zero},
        {stem + "_curve_dhdalpha.csv", CurveEquation::dhdalpha_zero},
        {stem + "_curve_d2sq.csv", CurveEquation::d2_sq_zero},
        {stem + "_curve_d2.csv", CurveEquation::d2_zero},
    };
    for (const auto& [path, eq] : curves) manifest.output_paths.push_back(path);

    std::vector<std::string> failures;
    auto check = [&failures](bool ok, const std::string& name) {
        if (!ok) failures.push_back(name);
        return ok;
    };

    nlohmann::ordered_json doc;
    doc["manifest"] = manifest.to_json();

    auto linspace = [](double lo, double hi, std::size_t n) {
        std::vector<double> v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = lo + (hi - lo) * double(i) / double(n - 1);
        return v;
    };

    // Monotonicity grid: first derivative of the squared entanglement.
    {
        const std::vector<double> alphas = {0.83, 0.9, 0.95, 0.99, 1.0, 1.05,
                                            1.1,  1.3, 1.5,  2.0,  2.5, 3.0};
        double min_value = 1e300;
        for (double x : linspace(0.001, 0.999, 200))
            for (double a : alphas) min_value = std::min(min_value, d1_sq_renyi(x, a));
        doc["monotonicity"] = {{"min_d1_sq", min_value}, {"pass", min_value > 0.0}};
        check(min_value > 0.0, "d1_sq_renyi positivity");
    }

    // Convexity kernel grid on orders >= 1, plus the sub-1 window by finite
    // differences.
    {
        double min_kernel = 1e300;
        for (double x : linspace(0.001, 0.999, 200))
            for (double a : linspace(1.0, 3.0, 100)) min_kernel = std::min(min_kernel, h_alpha(x, a));
        double min_sub1 = 1e300;
        for (double x : linspace(0.001, 0.999, 200))
            for (double a : linspace(0.83, 0.999, 40))
                min_sub1 = std::min(min_sub1, d2_sq_renyi_fd(x, a));
        doc["convexity"] = {{"min_kernel", min_kernel},
                            {"min_d2_sq_below_1", min_sub1},
                            {"pass", min_kernel >= -1e-9 && min_sub1 >= -1e-9}};
        check(min_kernel >= -1e-9, "convexity kernel nonnegativity");
        check(min_sub1 >= -1e-9, "squared-entanglement convexity below order 1");
    }

    // Concavity of the unsquared entanglement inside the concave window
    // (up to the exact critical order; its printed rounding sits outside).
    {
        double max_d2 = -1e300;
        for (double x : linspace(0.001, 0.999, 200))
            for (double a : linspace(0.83, kAlphaConcaveMax, 40))
                max_d2 = std::max(max_d2, d2_renyi_fd(x, a));
        doc["concavity"] = {{"max_d2", max_d2}, {"pass", max_d2 <= 1e-9}};
        check(max_d2 <= 1e-9, "entanglement concavity in window");
    }

    // Finite-difference cross-checks of the analytic expressions.
    {
        double worst = 0.0;
        for (double x : {0.1, 0.3, 0.5, 0.7, 0.9})
            for (double a : {0.83, 0.9, 1.2, 1.5, 2.0, 3.0})
                for (DerivativeFormula id : {DerivativeFormula::d1_sq_renyi,
                                             DerivativeFormula::d1_renyi}) {
                    const FdCheck c = fd_check(id, x, a);
                    worst = std::max(worst, c.rel_err);
                }
        for (double x : {0.1, 0.3, 0.5, 0.7, 0.9})
            for (double a : {1.2, 1.5, 2.0, 3.0}) {
                const FdCheck c = fd_check(DerivativeFormula::h_alpha, x, a);
                worst = std::max(worst, c.rel_err);
            }
        doc["fd_cross_check"] = {{"max_rel_err", worst}, {"pass", worst <= 1e-4}};
        check(worst <= 1e-4, "finite-difference cross-check");
    }

    // Boundary limits of the convexity kernel.
    {
        double worst = 0.0;
        for (double a : {1.5, 2.0, 2.5, 3.0}) {
            const double near0 = h_alpha(1e-8, a);
            const double near1 = h_alpha(1.0 - 1e-8, a);
            worst = std::max(worst, std::abs(near0 - h_alpha_limit_x0(a)) / h_alpha_limit_x0(a));
            worst = std::max(worst, std::abs(near1 - h_alpha_limit_x1(a)) / h_alpha_limit_x1(a));
        }
        doc["boundary_limits"] = {{"max_rel_err", worst}, {"pass", worst <= 1e-3}};
        check(worst <= 1e-3, "kernel boundary limits");
    }

    // Critical orders by bisection vs closed form.
    {
        const double c1 = critical_alpha(CriticalOrder::convexity_onset);
        const double c2 = critical_alpha(CriticalOrder::concavity_end);
        const double c1_closed = critical_alpha_closed_form(CriticalOrder::convexity_onset);
        const double c2_closed = critical_alpha_closed_form(CriticalOrder::concavity_end);
        const bool ok = std::abs(c1 - c1_closed) <= 1e-10 && std::abs(c2 - c2_closed) <= 1e-10 &&
                        std::abs(c1 - 0.764) <= 1e-3;
        doc["critical_orders"] = {{"convexity_onset", c1},
                                  {"convexity_onset_closed_form", c1_closed},
                                  {"concavity_end", c2},
                                  {"concavity_end_closed_form", c2_closed},
                                  {"formula_window_min", kAlphaFormulaMin},
                                  {"pass", ok}};
        check(ok, "critical orders");
    }

    // Critical curves.
    {
        nlohmann::ordered_json curve_doc;
        for (const auto& [path, eq] : curves) {
            const CriticalCurve curve = critical_curve(eq);
            std::vector<std::string> rows;
            rows.reserve(curve.points.size());
            for (const CurvePoint& pt : curve.points) rows.push_back(g6(pt.x) + "," + g6(pt.alpha));
            RunManifest curve_manifest = manifest;
            curve_manifest.output_paths = {path};
            detail::write_csv(path, curve_manifest, "x,alpha", rows);
            nlohmann::ordered_json info;
            info["path"] = path;
            info["points"] = curve.points.size();
            info["gaps"] = curve.gaps.size();
            curve_doc.push_back(info);
        }
        doc["critical_curves"] = curve_doc;
    }

    doc["failures"] = failures;
    doc["pass"] = failures.empty();
    detail::write_json(out, doc);
    return LemmaRunResult{manifest, failures};
}

enum class ResidualFamily { sc, sef, srae, mu, tau2 };

inline ResidualFamily parse_family(const std::string& name) {
    if (name == "SC" || name == "sc") return ResidualFamily::sc;
    if (name == "SEF" || name == "sef") return ResidualFamily::sef;
    if (name == "SRAE" || name == "srae") return ResidualFamily::srae;
    if (name == "MU" || name == "mu") return ResidualFamily::mu;
    if (name == "TAU2" || name == "tau2") return ResidualFamily::tau2;
    throw std::invalid_argument("unknown residual family: " + name);
}

inline nlohmann::ordered_json report_to_json(const ResidualReport& report) {
    nlohmann::ordered_json j;
    j["left_term"] = report.left_term;
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const auto& [label, value] : report.subtracted_terms)
        terms.push_back({{"label", label}, {"value", value}});
    j["subtracted_terms"] = terms;
    j["residual"] = report.residual;
    if (report.alpha)
        j["alpha"] = *report.alpha;
    else
        j["alpha"] = nullptr;
    j["mu"] = report.mu;
    j["validity"] = {{"window_satisfied", report.validity.window_satisfied},
                     {"exact_terms", report.validity.exact_terms}};
    if (report.k_parties)
        j["k_parties"] = *report.k_parties;
    else
        j["k_parties"] = nullptr;
    return j;
}

/// Generic residual front door: load a state file, evaluate one family,
/// serialize the report.
inline RunManifest cmd_residual(const std::string& state_path, const std::string& family_name,
                                const std::string& out, std::size_t focus = 0, double alpha = 1.0,
                                double mu = 2.0, std::size_t k = 0, std::uint64_t seed = 0) {
    const ResidualFamily family = parse_family(family_name);
    const StateVariant loaded = load_state(state_path);

    // Density inputs are accepted when they are pure in disguise; genuinely
    // mixed inputs would need roof machinery the front door does not expose.
    PureState psi = [&loaded]() {
        if (std::holds_alternative<PureState>(loaded)) return std::get<PureState>(loaded);
        const DensityMatrix& rho = std::get<DensityMatrix>(loaded);
        if (auto pure = srae::detail::as_pure(rho)) return *pure;
        throw missing_concurrence_error("mixed state files need analytic concurrence inputs");
    }();

    RunManifest manifest;
    manifest.command = "residual";
    manifest.seed = seed;
    manifest.add("state", state_path);
    manifest.add("family", family_name);
    manifest.add("focus", std::to_string(focus));
    if (family != ResidualFamily::sc) manifest.add("alpha", g6(alpha));
    if (family == ResidualFamily::mu) manifest.add("mu", g6(mu));
    if (family == ResidualFamily::tau2) manifest.add("k", std::to_string(k));
    manifest.output_paths.push_back(out);

    ResidualReport report = [&]() {
        switch (family) {
            case ResidualFamily::sc: return residual_sc(psi, focus);
            case ResidualFamily::sef: return residual_sef(psi, focus);
            case ResidualFamily::srae: return residual_srae_pure(psi, focus, AlphaOrder(alpha));
            case ResidualFamily::mu:
                return residual_mu(psi, focus, AlphaOrder(alpha), mu);
            case ResidualFamily::tau2:
                return tau2(psi, focus, k, AlphaOrder(alpha));
        }
        throw std::invalid_argument("unknown residual family");
    }();

    nlohmann::ordered_json doc;
    doc["manifest"] = manifest.to_json();
    doc["report"] = report_to_json(report);
    detail::write_json(out, doc);
    return manifest;
}

} // namespace srae::repro
