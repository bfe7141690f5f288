#pragma once

#include "gmfc/control.hpp"
#include "gmfc/model.hpp"

#include <string>

namespace gmfc {

/// Problem files are YAML documents with the sections
///   grid: {n}
///   horizon: {t0, T}
///   dimensions: {state, control}
///   coercivity: c            (optional, defaults to the smallest eigenvalue of R)
///   coefficients: A B C D Q R H beta gamma   (R required, others default to 0)
///   kernels: {form: standard|centered|symmetric, G_A, G_C, G_Q, G_H, ...}
///   initial: {mean, covariance}              (optional, defaults to zero)
/// A coefficient is {value: M} (label-constant), {expr: M} (entries are
/// expressions in u) or {table: [M_1, ..., M_n]}. A kernel is {expr: M} with
/// entries in (u, v) or {table: dense (n*d) x (n*d) rows}. Matrices are lists
/// of rows; a bare scalar is accepted for 1 x 1 data.
struct ProblemFile {
    ProblemData problem;
    InitialCondition initial;
};

/// Throws ParseError with the line and field of the first problem found.
ProblemFile parse_problem(const std::string& yaml_text);
ProblemFile load_problem(const std::string& path);

/// Emits every field as an explicit table with 17 significant digits, so that
/// load(save(p)) reproduces p exactly.
std::string dump_problem(const ProblemData& p, const InitialCondition* initial = nullptr);
void save_problem(const ProblemData& p, const std::string& path, const InitialCondition* initial = nullptr);

}  // namespace gmfc
