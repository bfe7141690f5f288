#include "gmfc/problem_io.hpp"

#include "gmfc/errors.hpp"
#include "gmfc/expression.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace gmfc {

namespace {

std::size_t line_of(const YAML::Node& node) {
    const auto mark = node.Mark();
    return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& field, const std::string& what) {
    const std::size_t line = line_of(node);
    std::ostringstream os;
    os << field << ": " << what;
    if (line > 0) os << " (line " << line << ")";
    throw ParseError(os.str(), line, field);
}

YAML::Node require(const YAML::Node& parent, const std::string& key, const std::string& path) {
    const YAML::Node child = parent[key];
    if (!child) fail(parent, path + key, "missing required field");
    return child;
}

double as_double(const YAML::Node& node, const std::string& field) {
    try {
        return node.as<double>();
    } catch (const YAML::Exception&) {
        fail(node, field, "expected a number");
    }
}

std::size_t as_size(const YAML::Node& node, const std::string& field) {
    const double v = as_double(node, field);
    if (v < 0 || v != static_cast<double>(static_cast<std::size_t>(v))) fail(node, field, "expected a non-negative integer");
    return static_cast<std::size_t>(v);
}

/// Evaluates each entry of a matrix-shaped node through `entry`.
template <class Entry>
Eigen::MatrixXd read_matrix(const YAML::Node& node, Eigen::Index rows, Eigen::Index cols, const std::string& field,
                            Entry entry) {
    Eigen::MatrixXd m(rows, cols);
    if (node.IsScalar()) {
        if (rows != 1 || cols != 1) fail(node, field, "scalar given for a " + std::to_string(rows) + "x" + std::to_string(cols) + " matrix");
        m(0, 0) = entry(node);
        return m;
    }
    if (!node.IsSequence()) fail(node, field, "expected a list of rows");
    // A flat list is accepted for vectors (cols == 1).
    if (cols == 1 && node.size() == static_cast<std::size_t>(rows) && (rows == 0 || node[0].IsScalar())) {
        for (Eigen::Index r = 0; r < rows; ++r) m(r, 0) = entry(node[static_cast<std::size_t>(r)]);
        return m;
    }
    if (node.size() != static_cast<std::size_t>(rows)) fail(node, field, "expected " + std::to_string(rows) + " rows");
    for (Eigen::Index r = 0; r < rows; ++r) {
        const YAML::Node row = node[static_cast<std::size_t>(r)];
        if (!row.IsSequence() || row.size() != static_cast<std::size_t>(cols)) {
            fail(row, field, "expected " + std::to_string(cols) + " columns in row " + std::to_string(r + 1));
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = entry(row[static_cast<std::size_t>(c)]);
    }
    return m;
}

Expression parse_expression(const YAML::Node& node, const std::string& field) {
    try {
        return Expression::parse(node.as<std::string>());
    } catch (const ParseError& e) {
        fail(node, field, e.what());
    } catch (const YAML::Exception&) {
        fail(node, field, "expected an expression string");
    }
}

LabelMatrices read_coefficient(const YAML::Node& node, const LabelGrid& grid, Eigen::Index rows, Eigen::Index cols,
                               const std::string& field) {
    const std::size_t n = grid.size();
    if (!node.IsMap()) fail(node, field, "expected one of {value, expr, table}");
    if (node["value"]) {
        const Eigen::MatrixXd m = read_matrix(node["value"], rows, cols, field, [&](const YAML::Node& x) { return as_double(x, field); });
        return LabelMatrices(n, m);
    }
    if (node["expr"]) {
        const YAML::Node e = node["expr"];
        std::vector<Expression> exprs;
        const Eigen::MatrixXd index = read_matrix(e, rows, cols, field, [&](const YAML::Node& x) {
            exprs.push_back(parse_expression(x, field));
            return static_cast<double>(exprs.size() - 1);
        });
        LabelMatrices out(n, Eigen::MatrixXd(rows, cols));
        for (std::size_t i = 0; i < n; ++i) {
            for (Eigen::Index r = 0; r < rows; ++r) {
                for (Eigen::Index c = 0; c < cols; ++c) {
                    const double v = exprs[static_cast<std::size_t>(index(r, c))](grid.point(i));
                    if (!std::isfinite(v)) fail(e, field, "expression is not finite at label " + std::to_string(i));
                    out[i](r, c) = v;
                }
            }
        }
        return out;
    }
    if (node["table"]) {
        const YAML::Node t = node["table"];
        if (!t.IsSequence() || t.size() != n) fail(t, field, "table needs one entry per label (" + std::to_string(n) + ")");
        LabelMatrices out;
        for (std::size_t i = 0; i < n; ++i) {
            out.push_back(read_matrix(t[i], rows, cols, field, [&](const YAML::Node& x) { return as_double(x, field); }));
        }
        return out;
    }
    fail(node, field, "expected one of {value, expr, table}");
}

std::vector<Eigen::VectorXd> as_vectors(const LabelMatrices& m) {
    std::vector<Eigen::VectorXd> out;
    out.reserve(m.size());
    for (const auto& x : m) out.emplace_back(x.col(0));
    return out;
}

Kernel read_kernel(const YAML::Node& node, const LabelGrid& grid, std::size_t d, const std::string& field) {
    const std::size_t n = grid.size();
    if (!node) return Kernel(n, d, d);
    if (!node.IsMap()) fail(node, field, "expected one of {expr, table}");
    const auto dd = static_cast<Eigen::Index>(d);
    if (node["expr"]) {
        std::vector<Expression> exprs;
        const Eigen::MatrixXd index = read_matrix(node["expr"], dd, dd, field, [&](const YAML::Node& x) {
            exprs.push_back(parse_expression(x, field));
            return static_cast<double>(exprs.size() - 1);
        });
        try {
            return sample_kernel(
                KernelFunction([&](double u, double v) {
                    Eigen::MatrixXd b(dd, dd);
                    for (Eigen::Index r = 0; r < dd; ++r) {
                        for (Eigen::Index c = 0; c < dd; ++c) b(r, c) = exprs[static_cast<std::size_t>(index(r, c))](u, v);
                    }
                    return b;
                }),
                grid);
        } catch (const DomainError& e) {
            fail(node, field, e.what());
        }
    }
    if (node["table"]) {
        const auto nd = static_cast<Eigen::Index>(n * d);
        Eigen::MatrixXd m =
            read_matrix(node["table"], nd, nd, field, [&](const YAML::Node& x) { return as_double(x, field); });
        return Kernel(n, d, d, std::move(m));
    }
    fail(node, field, "expected one of {expr, table}");
}

void emit_matrix(YAML::Emitter& out, const Eigen::MatrixXd& m) {
    out << YAML::Flow << YAML::BeginSeq;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        out << YAML::Flow << YAML::BeginSeq;
        for (Eigen::Index c = 0; c < m.cols(); ++c) out << m(r, c);
        out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
}

void emit_table(YAML::Emitter& out, const std::string& key, const LabelMatrices& m) {
    out << YAML::Key << key << YAML::Value << YAML::BeginMap << YAML::Key << "table" << YAML::Value << YAML::BeginSeq;
    for (const auto& x : m) emit_matrix(out, x);
    out << YAML::EndSeq << YAML::EndMap;
}

LabelMatrices as_columns(const std::vector<Eigen::VectorXd>& v) {
    LabelMatrices out;
    for (const auto& x : v) out.emplace_back(x);
    return out;
}

}  // namespace

ProblemFile parse_problem(const std::string& yaml_text) {
    YAML::Node root;
    try {
        root = YAML::Load(yaml_text);
    } catch (const YAML::ParserException& e) {
        const std::size_t line = e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0;
        throw ParseError("malformed YAML: " + e.msg + " (line " + std::to_string(line) + ")", line);
    }
    if (!root.IsMap()) throw ParseError("problem file must be a YAML mapping", 1);

    const YAML::Node grid_node = require(root, "grid", "");
    const std::size_t n = as_size(require(grid_node, "n", "grid."), "grid.n");
    if (n == 0) fail(grid_node, "grid.n", "must be at least 1");
    const YAML::Node hor = require(root, "horizon", "");
    Horizon horizon;
    horizon.t0 = hor["t0"] ? as_double(hor["t0"], "horizon.t0") : 0.0;
    horizon.T = as_double(require(hor, "T", "horizon."), "horizon.T");
    if (!(horizon.T > horizon.t0)) fail(hor, "horizon.T", "must exceed horizon.t0");
    const YAML::Node dims = require(root, "dimensions", "");
    const std::size_t d = as_size(require(dims, "state", "dimensions."), "dimensions.state");
    const std::size_t m = as_size(require(dims, "control", "dimensions."), "dimensions.control");
    if (d == 0 || m == 0) fail(dims, "dimensions", "state and control dimensions must be at least 1");

    LabelGrid grid = build_grid(n);
    CoefficientField c = CoefficientField::zeros(n, d, m);
    const YAML::Node co = require(root, "coefficients", "");
    const auto di = static_cast<Eigen::Index>(d);
    const auto mi = static_cast<Eigen::Index>(m);
    auto opt = [&](const char* key, Eigen::Index r, Eigen::Index cc, LabelMatrices& target) {
        if (co[key]) target = read_coefficient(co[key], grid, r, cc, std::string("coefficients.") + key);
    };
    opt("A", di, di, c.A);
    opt("B", di, mi, c.B);
    opt("C", di, di, c.C);
    opt("D", di, mi, c.D);
    opt("Q", di, di, c.Q);
    opt("H", di, di, c.H);
    c.R = read_coefficient(require(co, "R", "coefficients."), grid, mi, mi, "coefficients.R");
    if (co["beta"]) c.beta = as_vectors(read_coefficient(co["beta"], grid, di, 1, "coefficients.beta"));
    if (co["gamma"]) c.gamma = as_vectors(read_coefficient(co["gamma"], grid, di, 1, "coefficients.gamma"));

    double coercivity = 0.0;
    if (root["coercivity"]) {
        coercivity = as_double(root["coercivity"], "coercivity");
    } else {
        coercivity = std::numeric_limits<double>::infinity();
        for (const auto& r : c.R) coercivity = std::min(coercivity, min_symmetric_eigenvalue(r));
    }
    if (!(coercivity > 0.0)) fail(root["coercivity"] ? root["coercivity"] : co["R"], "coercivity", "R must be positive definite");

    ProblemFile file;
    try {
        file.problem = make_problem(grid, std::move(c), horizon, coercivity);
    } catch (const DomainError& e) {
        fail(co, "coefficients", e.what());
    }
    ProblemData& p = file.problem;

    const YAML::Node ker = root["kernels"];
    if (ker) {
        const std::string form = ker["form"] ? ker["form"].as<std::string>() : "standard";
        p.G_A = read_kernel(ker["G_A"], p.grid, d, "kernels.G_A");
        p.G_C = read_kernel(ker["G_C"], p.grid, d, "kernels.G_C");
        try {
            if (form == "standard") {
                p.G_Q = read_kernel(ker["G_Q"], p.grid, d, "kernels.G_Q");
                p.G_H = read_kernel(ker["G_H"], p.grid, d, "kernels.G_H");
            } else if (form == "centered") {
                const Kernel tq = read_kernel(ker["tilde_G_Q"], p.grid, d, "kernels.tilde_G_Q");
                const Kernel th = read_kernel(ker["tilde_G_H"], p.grid, d, "kernels.tilde_G_H");
                file.problem = from_centered(tq, th, std::move(file.problem));
            } else if (form == "symmetric") {
                const Kernel tq = read_kernel(ker["tilde_G_Q"], p.grid, d, "kernels.tilde_G_Q");
                const Kernel th = read_kernel(ker["tilde_G_H"], p.grid, d, "kernels.tilde_G_H");
                const LabelMatrices qb = read_coefficient(require(ker, "Q_bar", "kernels."), p.grid, di, di, "kernels.Q_bar");
                const LabelMatrices hb = read_coefficient(require(ker, "H_bar", "kernels."), p.grid, di, di, "kernels.H_bar");
                file.problem = from_symmetric(tq, qb, th, hb, std::move(file.problem));
            } else {
                fail(ker["form"], "kernels.form", "expected standard, centered or symmetric");
            }
        } catch (const DomainError& e) {
            fail(ker, "kernels", e.what());
        }
    }

    std::vector<Eigen::VectorXd> means(n, Eigen::VectorXd::Zero(di));
    std::vector<Eigen::MatrixXd> covs(n, Eigen::MatrixXd::Zero(di, di));
    if (const YAML::Node init = root["initial"]) {
        if (init["mean"]) means = as_vectors(read_coefficient(init["mean"], file.problem.grid, di, 1, "initial.mean"));
        if (init["covariance"]) covs = read_coefficient(init["covariance"], file.problem.grid, di, di, "initial.covariance");
        try {
            file.initial = InitialCondition::gaussian(std::move(means), std::move(covs));
        } catch (const DomainError& e) {
            fail(init, "initial", e.what());
        }
    } else {
        file.initial = InitialCondition::deterministic(std::move(means));
    }
    return file;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

std::string dump_problem(const ProblemData& p, const InitialCondition* initial) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "grid" << YAML::Value << YAML::BeginMap << YAML::Key << "n" << YAML::Value << p.labels()
        << YAML::EndMap;
    out << YAML::Key << "horizon" << YAML::Value << YAML::BeginMap << YAML::Key << "t0" << YAML::Value << p.horizon.t0
        << YAML::Key << "T" << YAML::Value << p.horizon.T << YAML::EndMap;
    out << YAML::Key << "dimensions" << YAML::Value << YAML::BeginMap << YAML::Key << "state" << YAML::Value
        << p.state_dim() << YAML::Key << "control" << YAML::Value << p.control_dim() << YAML::EndMap;
    out << YAML::Key << "coercivity" << YAML::Value << p.coercivity;

    const auto& c = p.coeffs;
    out << YAML::Key << "coefficients" << YAML::Value << YAML::BeginMap;
    emit_table(out, "A", c.A);
    emit_table(out, "B", c.B);
    emit_table(out, "C", c.C);
    emit_table(out, "D", c.D);
    emit_table(out, "Q", c.Q);
    emit_table(out, "R", c.R);
    emit_table(out, "H", c.H);
    emit_table(out, "beta", as_columns(c.beta));
    emit_table(out, "gamma", as_columns(c.gamma));
    out << YAML::EndMap;

    out << YAML::Key << "kernels" << YAML::Value << YAML::BeginMap << YAML::Key << "form" << YAML::Value << "standard";
    const std::pair<const char*, const Kernel*> kernels[] = {{"G_A", &p.G_A}, {"G_C", &p.G_C}, {"G_Q", &p.G_Q}, {"G_H", &p.G_H}};
    for (const auto& [name, k] : kernels) {
        out << YAML::Key << name << YAML::Value << YAML::BeginMap << YAML::Key << "table" << YAML::Value;
        emit_matrix(out, k->dense());
        out << YAML::EndMap;
    }
    out << YAML::EndMap;

    if (initial) {
        std::vector<Eigen::VectorXd> means;
        LabelMatrices covs;
        for (std::size_t i = 0; i < initial->labels(); ++i) {
            means.push_back(initial->mean(i));
            covs.push_back(initial->covariance(i));
        }
        out << YAML::Key << "initial" << YAML::Value << YAML::BeginMap;
        emit_table(out, "mean", as_columns(means));
        emit_table(out, "covariance", covs);
        out << YAML::EndMap;
    }
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

void save_problem(const ProblemData& p, const std::string& path, const InitialCondition* initial) {
    std::ofstream f(path);
    if (!f) throw DomainError("cannot write problem file '" + path + "'");
    f << dump_problem(p, initial);
}

}  // namespace gmfc
