#include <gmfc/kernel_ops.hpp>
#include <gmfc/label_grid.hpp>

#include <benchmark/benchmark.h>

#include <cmath>

namespace {

gmfc::Kernel smooth_kernel(const gmfc::LabelGrid& grid, std::size_t d) {
    return gmfc::sample_kernel(
        gmfc::KernelFunction([d](double u, double v) {
            Eigen::MatrixXd b(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
            for (Eigen::Index r = 0; r < b.rows(); ++r) {
                for (Eigen::Index c = 0; c < b.cols(); ++c) b(r, c) = std::cos(u * static_cast<double>(r + 1) - v * static_cast<double>(c + 1));
            }
            return b;
        }),
        grid);
}

void BM_Compose(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto d = static_cast<std::size_t>(state.range(1));
    const gmfc::LabelGrid grid = gmfc::build_grid(n);
    const gmfc::Kernel a = smooth_kernel(grid, d);
    const gmfc::Kernel b = gmfc::flip_transpose(a);
    for (auto _ : state) benchmark::DoNotOptimize(gmfc::compose(a, b, grid));
    state.SetComplexityN(static_cast<benchmark::IterationCount>(n * d));
}
BENCHMARK(BM_Compose)->ArgsProduct({{16, 64, 256}, {1, 2}})->Unit(benchmark::kMicrosecond);

void BM_OperatorNorm(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const gmfc::LabelGrid grid = gmfc::build_grid(n);
    const gmfc::Kernel g = gmfc::symmetrize(smooth_kernel(grid, 1));
    for (auto _ : state) benchmark::DoNotOptimize(gmfc::operator_norm(g, grid).value);
}
BENCHMARK(BM_OperatorNorm)->Arg(16)->Arg(64)->Arg(256)->Unit(benchmark::kMicrosecond);

}  // namespace
