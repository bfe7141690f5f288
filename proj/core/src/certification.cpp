#include "gmfc/certification.hpp"

#include <cmath>
#include <utility>

namespace gmfc {

double value_function(const RiccatiSolution& s, const InitialCondition& init, const ProblemData& p) {
    const std::size_t n = p.labels();
    const auto d = static_cast<Eigen::Index>(p.state_dim());
    const LabelMatrices& K = s.K.nodes.front();
    const LabelField& y = s.Y.nodes.front();
    const Eigen::VectorXd& lambda = s.Lambda.nodes.front();
    const LabelField m = init.stacked_means();
    double v = kernel_quadratic(s.barK.nodes.front(), m, p.grid);
    for (std::size_t i = 0; i < n; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const Eigen::VectorXd mi = m.segment(ii * d, d);
        const double local = mi.dot(K[i] * mi) + (K[i] * init.covariance(i)).trace() +
                             2.0 * y.segment(ii * d, d).dot(mi) + lambda(ii);
        v += p.grid.weight(i) * local;
    }
    return v;
}

RelationReport check_fundamental_relation(const ProblemData& p, const RiccatiSolution& s, const FeedbackLaw& optimal,
                                          const AffinePolicy& policy, const InitialCondition& init,
                                          const CertificationOptions& options, std::string name) {
    const MeanFlow flow = solve_mean_flow(p, policy, init);
    SimulationOptions sim;
    sim.paths = options.paths;
    sim.seed = options.seed;
    sim.reference = &optimal;
    const Ensemble ens = simulate(p, policy, flow, init, sim);
    const CostEstimate cost = evaluate_cost(p, ens, flow);

    RelationReport r;
    r.law = std::move(name);
    r.J = cost.value;
    r.standard_error = cost.standard_error;
    r.V = value_function(s, init, p);
    r.gap = r.J - r.V;
    double penalty = 0.0;
    for (std::size_t i = 0; i < p.labels(); ++i) {
        penalty += p.grid.weight(i) * ens.penalty.row(static_cast<Eigen::Index>(i)).mean();
    }
    r.penalty = penalty;
    r.gap_minus_penalty = r.gap - r.penalty;
    return r;
}

CertificationReport certify(const ProblemData& p, const RiccatiSolution& s, const InitialCondition& init,
                            const CertificationOptions& options) {
    const FeedbackLaw law = build_feedback(s, p);
    std::vector<std::pair<std::string, AffinePolicy>> laws;
    laws.emplace_back("optimal", law.policy);
    laws.emplace_back("shift_plus", shifted(law.policy, options.shift));
    laws.emplace_back("shift_minus", shifted(law.policy, -options.shift));
    laws.emplace_back("gains_x0.5", scaled_gains(law.policy, 0.5));
    laws.emplace_back("gains_x1.5", scaled_gains(law.policy, 1.5));
    laws.emplace_back("no_mean_gain", without_mean_gain(law.policy));

    CertificationReport report;
    report.V = value_function(s, init, p);
    report.optimal_ok = true;
    report.perturbed_ok = true;
    report.relation_ok = true;
    for (std::size_t k = 0; k < laws.size(); ++k) {
        RelationReport r = check_fundamental_relation(p, s, law, laws[k].second, init, options, laws[k].first);
        const double budget = options.sigmas * r.standard_error + options.relative * std::abs(r.V);
        if (k == 0) {
            report.optimal_ok = std::abs(r.gap) <= budget;
        } else if (r.gap < -options.sigmas * r.standard_error) {
            report.perturbed_ok = false;
        }
        if (std::abs(r.gap_minus_penalty) > budget) report.relation_ok = false;
        report.laws.push_back(std::move(r));
    }
    return report;
}

}  // namespace gmfc
