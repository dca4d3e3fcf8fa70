#include <benchmark/benchmark.h>

#include <vector>

#include "ncfkit/counting.hpp"
#include "ncfkit/ncf.hpp"
#include "ncfkit/rng.hpp"

using namespace ncfkit;

namespace {

std::vector<truth_table> sampled_ncf_tables(uint32_t p, uint32_t n, size_t count) {
    structure_sampler sampler(field_spec::prime(p), n, subset_variant::interval, 1234);
    std::vector<truth_table> tables;
    tables.reserve(count);
    for (size_t i = 0; i < count; ++i) tables.push_back(build_layered(sampler.next()));
    return tables;
}

std::vector<truth_table> random_tables(uint32_t p, uint32_t n, size_t count) {
    const field_spec field = field_spec::prime(p);
    splitmix64 rng(99);
    uint64_t size = 1;
    for (uint32_t i = 0; i < n; ++i) size *= p;
    std::vector<truth_table> tables;
    tables.reserve(count);
    for (size_t i = 0; i < count; ++i) {
        std::vector<uint8_t> values(size);
        for (auto& v : values) v = static_cast<uint8_t>(rng.below(p));
        tables.emplace_back(field, n, std::move(values));
    }
    return tables;
}

void BM_recognize_ncf(benchmark::State& state) {
    const auto tables = sampled_ncf_tables(3, static_cast<uint32_t>(state.range(0)), 64);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(recognize(tables[i % tables.size()], subset_variant::interval));
        ++i;
    }
}
BENCHMARK(BM_recognize_ncf)->Arg(3)->Arg(5)->Arg(7);

void BM_recognize_random(benchmark::State& state) {
    const auto tables = random_tables(3, static_cast<uint32_t>(state.range(0)), 64);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(recognize(tables[i % tables.size()], subset_variant::interval));
        ++i;
    }
}
BENCHMARK(BM_recognize_random)->Arg(3)->Arg(5);

void BM_to_anf(benchmark::State& state) {
    const auto tables = random_tables(3, static_cast<uint32_t>(state.range(0)), 16);
    size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(to_anf(tables[i % tables.size()]));
        ++i;
    }
}
BENCHMARK(BM_to_anf)->Arg(3)->Arg(5);

void BM_count_closed(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(count_ncf_closed(7, static_cast<uint32_t>(state.range(0))).result);
}
BENCHMARK(BM_count_closed)->Arg(8)->Arg(12)->Arg(16);

void BM_count_recursive(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(
            count_ncf_recursive(7, static_cast<uint32_t>(state.range(0))).result);
}
BENCHMARK(BM_count_recursive)->Arg(8)->Arg(12)->Arg(16);

void BM_enumerate_structures(benchmark::State& state) {
    for (auto _ : state) {
        uint64_t count = 0;
        enumerate_structures(field_spec::prime(3), 2, subset_variant::general,
                             [&](const layer_structure& l) {
                                 benchmark::DoNotOptimize(l.arity);
                                 ++count;
                             });
        benchmark::DoNotOptimize(count);
    }
}
BENCHMARK(BM_enumerate_structures);

void BM_brute_force(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(brute_force_count(2, 3, subset_variant::interval).result);
}
BENCHMARK(BM_brute_force);

void BM_sample(benchmark::State& state) {
    structure_sampler sampler(field_spec::prime(5), 6, subset_variant::interval, 77);
    for (auto _ : state) benchmark::DoNotOptimize(sampler.next());
}
BENCHMARK(BM_sample);

} // namespace

BENCHMARK_MAIN();
