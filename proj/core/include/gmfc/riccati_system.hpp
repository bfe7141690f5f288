#pragma once

#include "gmfc/linear_closers.hpp"
#include "gmfc/riccati_abstract.hpp"
#include "gmfc/riccati_standard.hpp"

namespace gmfc {

/// The four backward solutions on one shared time grid.
struct RiccatiSolution {
    TimeGrid grid;
    KPath K;
    BarKPath barK;
    YPath Y;
    LambdaPath Lambda;
};

struct SystemOptions {
    StandardRiccatiOptions standard{};
    AbstractRiccatiOptions abstract{};
};

/// K, then Kbar, then Y, then Lambda.
RiccatiSolution solve_system(const ProblemData& p, const TimeGrid& tg, const SystemOptions& options = {});

}  // namespace gmfc
