#pragma once

#include "gmfc/control.hpp"
#include "gmfc/riccati_system.hpp"
#include "gmfc/simulation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gmfc {

/// Candidate value at t0:
/// sum_i w_i (m_i^T K_i m_i + tr(K_i Cov_i)) + sum_ij w_i w_j m_i^T Kbar(i,j) m_j
/// + 2 sum_i w_i <Y_i, m_i> + sum_i w_i Lambda_i.
double value_function(const RiccatiSolution& s, const InitialCondition& init, const ProblemData& p);

/// One row of the fundamental-relation report.
struct RelationReport {
    std::string law;
    double J = 0.0;
    double standard_error = 0.0;
    double V = 0.0;
    double gap = 0.0;
    double penalty = 0.0;
    double gap_minus_penalty = 0.0;
};

struct CertificationOptions {
    std::size_t paths = 10'000;
    std::uint64_t seed = 0;
    /// Size of the offset shift used by the shifted laws.
    double shift = 0.5;
    /// Tolerance: |gap| <= sigmas * stderr + relative * |V|.
    double sigmas = 3.0;
    double relative = 0.01;
};

/// Simulate `policy` and compare J with V; the penalty is measured against `optimal`.
RelationReport check_fundamental_relation(const ProblemData& p, const RiccatiSolution& s, const FeedbackLaw& optimal,
                                          const AffinePolicy& policy, const InitialCondition& init,
                                          const CertificationOptions& options, std::string name);

struct CertificationReport {
    double V = 0.0;
    std::vector<RelationReport> laws;  // laws[0] is the optimal law
    bool optimal_ok = false;
    bool perturbed_ok = false;
    bool relation_ok = false;

    [[nodiscard]] bool passed() const noexcept { return optimal_ok && perturbed_ok && relation_ok; }
};

/// Optimal law plus five perturbations: shift +eps, shift -eps, gains x0.5, gains x1.5, no mean gain.
CertificationReport certify(const ProblemData& p, const RiccatiSolution& s, const InitialCondition& init,
                            const CertificationOptions& options);

}  // namespace gmfc
