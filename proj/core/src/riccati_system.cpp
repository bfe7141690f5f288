#include "gmfc/riccati_system.hpp"

namespace gmfc {

RiccatiSolution solve_system(const ProblemData& p, const TimeGrid& tg, const SystemOptions& options) {
    RiccatiSolution s;
    s.grid = tg;
    s.K = solve_standard_riccati(p, tg, options.standard);
    s.barK = solve_abstract_riccati(s.K, p, options.abstract);
    s.Y = solve_Y(s.K, s.barK, p);
    s.Lambda = solve_Lambda(s.K, s.Y, p);
    return s;
}

}  // namespace gmfc
