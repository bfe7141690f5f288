#pragma once

#include "gmfc/control.hpp"
#include "gmfc/model.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace gmfc {

/// Independent random stream for one (label, step) pair of one run.
///
/// The engine is keyed by (seed, purpose, label, step) through std::seed_seq,
/// so every draw depends only on that key and never on thread scheduling.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint32_t purpose, std::size_t label, std::size_t step);

/// Stored trajectories: per label a (nodes*d) x paths matrix of states and a
/// (nodes*m) x paths matrix of controls. Row block k holds node k.
struct PathSet {
    TimeGrid grid;
    std::size_t paths = 0;
    std::size_t state_dim = 0;
    std::size_t control_dim = 0;
    std::vector<Eigen::MatrixXd> states;
    std::vector<Eigen::MatrixXd> controls;

    /// Empirical mean over paths at node k, stacked over labels.
    [[nodiscard]] LabelField empirical_mean(std::size_t k) const;
};

struct SimulationOptions {
    std::size_t paths = 10'000;
    std::uint64_t seed = 0;
    /// Use empirical label means of the running ensemble instead of the mean ODE.
    bool particle_mode = false;
    bool store_paths = false;
    /// Optimal law used for the penalty integral; no penalty when absent.
    const FeedbackLaw* reference = nullptr;
};

/// Per-(label, path) accumulators of one Euler-Maruyama run. Matrices are labels x paths.
struct Ensemble {
    TimeGrid grid;
    std::size_t paths = 0;
    std::uint64_t seed = 0;
    bool particle_mode = false;
    Eigen::MatrixXd running_cost;
    Eigen::MatrixXd terminal_cost;
    Eigen::MatrixXd penalty;
    /// Empirical per-node mean and per-component sample variance, stacked over labels.
    std::vector<LabelField> empirical_mean;
    std::vector<LabelField> empirical_variance;
    /// The mean field the dynamics actually used (mean ODE, or empirical in particle mode).
    std::vector<LabelField> mean_field;
    std::optional<PathSet> path_set;
};

/// Euler-Maruyama simulation of the controlled dynamics, scalar Brownian motion per label.
/// `means` must be the mean flow of `policy` (ignored in particle mode).
Ensemble simulate(const ProblemData& p, const AffinePolicy& policy, const MeanFlow& means, const InitialCondition& init,
                  const SimulationOptions& options);

struct CostEstimate {
    double value = 0.0;
    double standard_error = 0.0;
    double individual = 0.0;
    double mean_field = 0.0;
};

/// J: quadrature over labels, trapezoid in time, Monte Carlo over paths; the
/// mean-mean kernel terms use `means` rather than empirical means.
CostEstimate evaluate_cost(const ProblemData& p, const Ensemble& ens, const MeanFlow& means);

/// sum_{ij} w_i w_j <x_i, G(i,j) x_j>.
double kernel_quadratic(const Kernel& g, const LabelField& x, const LabelGrid& grid);

/// Standard-form cost of stored trajectories, with empirical means in the kernel terms.
double standard_cost_on_paths(const ProblemData& p, const PathSet& paths);

/// Centered-form cost of stored trajectories:
/// sum_i w_i mean_paths[ int <Q(X - int tG_Q Xbar), (.)> + <a, R a> dt + <H(X_T - int tG_H Xbar_T), (.)> ].
double centered_cost_on_paths(const ProblemData& p, const Kernel& tilde_GQ, const Kernel& tilde_GH,
                              const PathSet& paths);

}  // namespace gmfc
