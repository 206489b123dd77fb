// Parallel walk kernels against their serial references.

#include <benchmark/benchmark.h>

#include "qthermo/qwalk.hpp"

namespace {

qthermo::WalkState make_state(int half_width) {
    qthermo::WalkConfig cfg = qthermo::WalkConfig::defaults();
    cfg.steps               = half_width / 2;
    cfg.lattice_half_width  = half_width;
    return qthermo::init_gaussian(cfg);
}

void BM_step_parallel(benchmark::State &st) {
    const auto in  = make_state(static_cast<int>(st.range(0)));
    auto       out = in;
    for (auto _ : st) {
        qthermo::step_into(in, out);
        benchmark::DoNotOptimize(out.sites().data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(in.size()));
}

void BM_step_serial(benchmark::State &st) {
    const auto in  = make_state(static_cast<int>(st.range(0)));
    auto       out = in;
    for (auto _ : st) {
        qthermo::step_serial_into(in, out);
        benchmark::DoNotOptimize(out.sites().data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(in.size()));
}

void BM_reduce_parallel(benchmark::State &st) {
    const auto in = make_state(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(qthermo::reduce_coin_matrix(in));
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(in.size()));
}

void BM_reduce_serial(benchmark::State &st) {
    const auto in = make_state(static_cast<int>(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(qthermo::reduce_coin_matrix_serial(in));
    st.SetItemsProcessed(st.iterations() * static_cast<int64_t>(in.size()));
}

} // namespace

BENCHMARK(BM_step_parallel)->RangeMultiplier(8)->Range(512, 1 << 18);
BENCHMARK(BM_step_serial)->RangeMultiplier(8)->Range(512, 1 << 18);
BENCHMARK(BM_reduce_parallel)->RangeMultiplier(8)->Range(512, 1 << 18);
BENCHMARK(BM_reduce_serial)->RangeMultiplier(8)->Range(512, 1 << 18);

BENCHMARK_MAIN();
