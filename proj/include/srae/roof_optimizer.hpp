#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "srae/measures.hpp"
#include "srae/states.hpp"

namespace srae {

/// Search parameters for the convex-roof minimization.
struct RoofConfig {
    std::size_t ensemble_size = 0;   // 0 -> min(r*r, r+4) for rank r
    std::size_t restarts = 20;
    std::size_t max_iterations = 5000; // search sweeps per restart
    double tolerance = 1e-8;
    std::uint64_t seed = 20250811;
    unsigned threads = 0;            // 0 -> hardware concurrency
};

/// Best decomposition found. The value is an upper bound on the true roof;
/// no global-optimality claim is made.
struct RoofResult {
    double value;
    Ensemble ensemble;
    bool converged;
    std::size_t iterations_used;
};

using PureMeasure = std::function<double(const PureState&, const Cut&)>;

inline double evaluate_ensemble(const Ensemble& ensemble, const Cut& cut,
                                const PureMeasure& measure) {
    double total = 0.0;
    for (const auto& member : ensemble.members())
        if (member.weight > 0.0) total += member.weight * measure(member.state, cut);
    return total;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic standard normal via Box-Muller on splitmix64 output; avoids
// relying on the library's unspecified normal_distribution algorithm.
class NormalSampler {
  public:
    explicit NormalSampler(std::uint64_t seed) : state_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        while (u1 <= 1e-300) u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

  private:
    double uniform01() {
        return double(splitmix64(state_) >> 11) * 0x1.0p-53;
    }
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Decomposition chart shared by every restart: rho = sum_j lambda_j |v_j><v_j|
// with members psi_i = sum_j U_ij sqrt(lambda_j)|v_j> for an m x r matrix U
// with orthonormal columns. This parameterizes all rank-bounded ensembles.
struct RoofChart {
    std::size_t dim = 0;
    std::size_t rank = 0;
    std::size_t members = 0;
    std::vector<cplx> scaled_basis; // rank columns of length dim: sqrt(lambda_j) v_j
};

inline RoofChart build_chart(const DensityMatrix& rho, std::size_t requested_members) {
    const EigResult eig = eig_hermitian(rho.matrix());
    RoofChart chart;
    chart.dim = rho.dimension();
    double kept = 0.0;
    std::vector<double> lambdas;
    for (double l : eig.values)
        if (l > 1e-12) {
            lambdas.push_back(l);
            kept += l;
        }
    chart.rank = lambdas.size();
    if (chart.rank == 0) throw state_error("state has no positive spectrum");
    chart.members = requested_members == 0
                        ? std::min(chart.rank * chart.rank, chart.rank + 4)
                        : requested_members;
    if (chart.members < chart.rank)
        throw std::invalid_argument("ensemble size must be at least the state rank");
    chart.scaled_basis.resize(chart.rank * chart.dim);
    for (std::size_t j = 0; j < chart.rank; ++j) {
        const double w = std::sqrt(lambdas[j] / kept); // renormalized spectrum
        for (std::size_t i = 0; i < chart.dim; ++i)
            chart.scaled_basis[j * chart.dim + i] = w * eig.vectors(i, j);
    }
    return chart;
}

// Orthonormalize the rank columns of the m x r parameter matrix (modified
// Gram-Schmidt, one re-orthogonalization pass). Degenerate columns fall back
// to canonical basis vectors so the map stays total.
inline void orthonormalize_columns(std::vector<cplx>& z, std::size_t m, std::size_t r) {
    for (std::size_t col = 0; col < r; ++col) {
        cplx* v = z.data() + col * m;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < col; ++prev) {
                const cplx* u = z.data() + prev * m;
                cplx overlap{0.0, 0.0};
                for (std::size_t i = 0; i < m; ++i) overlap += std::conj(u[i]) * v[i];
                for (std::size_t i = 0; i < m; ++i) v[i] -= overlap * u[i];
            }
        }
        double norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) norm += std::norm(v[i]);
        norm = std::sqrt(norm);
        if (norm < 1e-8) {
            for (std::size_t basis = 0; basis < m; ++basis) {
                std::fill(v, v + m, cplx{0.0, 0.0});
                v[basis] = 1.0;
                for (std::size_t prev = 0; prev < col; ++prev) {
                    const cplx* u = z.data() + prev * m;
                    cplx overlap{0.0, 0.0};
                    for (std::size_t i = 0; i < m; ++i) overlap += std::conj(u[i]) * v[i];
                    for (std::size_t i = 0; i < m; ++i) v[i] -= overlap * u[i];
                }
                norm = 0.0;
                for (std::size_t i = 0; i < m; ++i) norm += std::norm(v[i]);
                norm = std::sqrt(norm);
                if (norm >= 1e-8) break;
            }
        }
        const double inv = 1.0 / norm;
        for (std::size_t i = 0; i < m; ++i) v[i] *= inv;
    }
}

class RoofObjective {
  public:
    RoofObjective(const RoofChart& chart, const std::vector<std::size_t>& dims, const Cut& cut,
                  const PureMeasure& measure)
        : chart_(chart), dims_(dims), cut_(cut), measure_(measure),
          u_(chart.members * chart.rank), member_(chart.dim) {}

    std::size_t parameter_count() const { return 2 * chart_.members * chart_.rank; }

    double operator()(const std::vector<double>& params) {
        const std::size_t m = chart_.members;
        const std::size_t r = chart_.rank;
        for (std::size_t i = 0; i < m * r; ++i)
            u_[i] = cplx{params[2 * i], params[2 * i + 1]};
        // u_ holds r columns of length m.
        orthonormalize_columns(u_, m, r);

        double total = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::fill(member_.begin(), member_.end(), cplx{0.0, 0.0});
            for (std::size_t j = 0; j < r; ++j) {
                const cplx uij = u_[j * m + i];
                if (uij == cplx{0.0, 0.0}) continue;
                const cplx* basis = chart_.scaled_basis.data() + j * chart_.dim;
                for (std::size_t k = 0; k < chart_.dim; ++k) member_[k] += uij * basis[k];
            }
            double p = 0.0;
            for (const cplx& c : member_) p += std::norm(c);
            if (p <= 1e-14) continue;
            const double inv = 1.0 / std::sqrt(p);
            std::vector<cplx> amp(chart_.dim);
            for (std::size_t k = 0; k < chart_.dim; ++k) amp[k] = member_[k] * inv;
            total += p * measure_(PureState::unchecked(dims_, std::move(amp)), cut_);
        }
        return total;
    }

    // Ensemble for a parameter point, dropping numerically empty members.
    std::vector<EnsembleMember> ensemble(const std::vector<double>& params) {
        const std::size_t m = chart_.members;
        const std::size_t r = chart_.rank;
        for (std::size_t i = 0; i < m * r; ++i)
            u_[i] = cplx{params[2 * i], params[2 * i + 1]};
        orthonormalize_columns(u_, m, r);
        std::vector<EnsembleMember> members;
        double total_weight = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            std::fill(member_.begin(), member_.end(), cplx{0.0, 0.0});
            for (std::size_t j = 0; j < r; ++j) {
                const cplx uij = u_[j * m + i];
                const cplx* basis = chart_.scaled_basis.data() + j * chart_.dim;
                for (std::size_t k = 0; k < chart_.dim; ++k) member_[k] += uij * basis[k];
            }
            double p = 0.0;
            for (const cplx& c : member_) p += std::norm(c);
            if (p <= 1e-14) continue;
            const double inv = 1.0 / std::sqrt(p);
            std::vector<cplx> amp(chart_.dim);
            for (std::size_t k = 0; k < chart_.dim; ++k) amp[k] = member_[k] * inv;
            members.push_back({p, PureState::unchecked(dims_, std::move(amp))});
            total_weight += p;
        }
        // Absorb the dropped weight so the ensemble invariants hold exactly.
        for (auto& member : members) member.weight /= total_weight;
        return members;
    }

  private:
    const RoofChart& chart_;
    const std::vector<std::size_t>& dims_;
    const Cut& cut_;
    const PureMeasure& measure_;
    std::vector<cplx> u_;
    std::vector<cplx> member_;
};

struct RestartOutcome {
    double value = 0.0;
    std::vector<double> params;
    bool converged = false;
    std::size_t sweeps = 0;
};

// Compass search with parabolic line refinement over the flat parameter
// vector, augmented by a few seeded random directions per sweep so descent is
// not limited to coordinate axes. Derivative-free on purpose: indicator
// measures contain Wootters concurrences and are not smooth everywhere.
inline RestartOutcome compass_search(RoofObjective& objective, std::vector<double> x,
                                     std::size_t max_sweeps, double tolerance,
                                     std::uint64_t direction_seed) {
    RestartOutcome out;
    const std::size_t n = x.size();
    std::vector<double> trial(n);
    std::vector<double> direction(n);
    double fx = objective(x);
    double sigma = 0.5;
    NormalSampler normal(direction_seed);

    // Probe x +- sigma * direction plus one parabolic vertex; keep the best.
    auto probe = [&](const std::vector<double>& dir) {
        for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] + sigma * dir[k];
        const double fplus = objective(trial);
        for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] - sigma * dir[k];
        const double fminus = objective(trial);

        double best_f = std::min(fplus, fminus);
        double best_t = fplus <= fminus ? sigma : -sigma;
        const double curvature = fplus - 2.0 * fx + fminus;
        if (curvature > 1e-300) {
            double t = 0.5 * sigma * (fminus - fplus) / curvature;
            t = std::clamp(t, -2.0 * sigma, 2.0 * sigma);
            for (std::size_t k = 0; k < n; ++k) trial[k] = x[k] + t * dir[k];
            const double fvertex = objective(trial);
            if (fvertex < best_f) {
                best_f = fvertex;
                best_t = t;
            }
        }
        if (best_f < fx) {
            fx = best_f;
            for (std::size_t k = 0; k < n; ++k) x[k] += best_t * dir[k];
        }
    };

    const std::size_t random_polls = std::min<std::size_t>(n, 16);
    while (out.sweeps < max_sweeps) {
        ++out.sweeps;
        const double before = fx;
        for (std::size_t k = 0; k < n; ++k) {
            std::fill(direction.begin(), direction.end(), 0.0);
            direction[k] = 1.0;
            probe(direction);
        }
        for (std::size_t r = 0; r < random_polls; ++r) {
            double norm2 = 0.0;
            for (double& d : direction) {
                d = normal();
                norm2 += d * d;
            }
            const double inv = 1.0 / std::sqrt(norm2);
            for (double& d : direction) d *= inv;
            probe(direction);
        }
        if (before - fx < tolerance) {
            sigma *= 0.5;
            if (sigma < 1e-6) {
                out.converged = true;
                break;
            }
        }
    }
    out.value = fx;
    out.params = std::move(x);
    return out;
}

} // namespace detail

/// Convex-roof minimization of an ensemble-averaged pure-state measure over
/// decompositions of rho. Deterministic given the config seed; restarts run
/// concurrently and merge to the lowest value (ties to the lowest restart
/// index). The result is an upper bound on the true roof.
inline RoofResult optimize_roof(const DensityMatrix& rho, const Cut& cut,
                                const PureMeasure& measure, const RoofConfig& config = {}) {
    if (config.restarts < 1) throw std::invalid_argument("restarts must be at least 1");
    if (!(config.tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");

    const detail::RoofChart chart = detail::build_chart(rho, config.ensemble_size);

    if (chart.rank == 1) {
        std::vector<cplx> amp(chart.dim);
        for (std::size_t i = 0; i < chart.dim; ++i) amp[i] = chart.scaled_basis[i];
        PureState psi = PureState::unchecked(rho.dims(), std::move(amp));
        const double value = measure(psi, cut);
        return RoofResult{value, Ensemble({{1.0, std::move(psi)}}), true, 0};
    }

    std::vector<detail::RestartOutcome> outcomes(config.restarts);
    auto run_restart = [&](std::size_t index) {
        detail::RoofObjective objective(chart, rho.dims(), cut, measure);
        std::vector<double> x0(objective.parameter_count(), 0.0);
        if (index == 0) {
            // First restart starts from the eigenbasis ensemble itself.
            for (std::size_t j = 0; j < chart.rank; ++j) x0[2 * (j * chart.members + j)] = 1.0;
        } else {
            std::uint64_t stream = config.seed ^ (0xabcd1234ULL + 0x100000001b3ULL * (index + 1));
            detail::NormalSampler normal(stream);
            for (double& v : x0) v = normal();
        }
        outcomes[index] = detail::compass_search(objective, std::move(x0),
                                                 config.max_iterations, config.tolerance,
                                                 config.seed ^ (0x9d2c5680ULL * (index + 7)));
    };

    unsigned hw = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<unsigned>(hw, unsigned(config.restarts));
    if (hw <= 1) {
        for (std::size_t i = 0; i < config.restarts; ++i) run_restart(i);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(hw);
        for (unsigned t = 0; t < hw; ++t)
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < config.restarts; i += hw) run_restart(i);
            });
        for (auto& th : pool) th.join();
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < config.restarts; ++i)
        if (outcomes[i].value < outcomes[best].value) best = i;

    detail::RoofObjective objective(chart, rho.dims(), cut, measure);
    Ensemble ensemble(objective.ensemble(outcomes[best].params));
    const double value = evaluate_ensemble(ensemble, cut, measure);
    return RoofResult{value, std::move(ensemble), outcomes[best].converged, outcomes[best].sweeps};
}

} // namespace srae
