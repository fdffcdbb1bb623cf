// Benchmarks the OpenMP kernels against their serial reference
// implementations and checks that both produce identical bits.
//
//   bench [n-exact] [transfer-depth] [chain-sites]
//
// Defaults are sized for a laptop-second per section.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "dyson/exact_measure.hpp"
#include "dyson/local_function.hpp"
#include "dyson/sampler.hpp"
#include "dyson/transfer.hpp"

using namespace dyson;

namespace {

template <typename F>
double timed(F&& body) {
    auto t0 = std::chrono::steady_clock::now();
    body();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    return std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

int main(int argc, char** argv) {
    int n_exact = argc > 1 ? std::atoi(argv[1]) : 16;
    int depth = argc > 2 ? std::atoi(argv[2]) : 18;
    int chain_sites = argc > 3 ? std::atoi(argv[3]) : 4096;
    std::printf("threads: %d (omp_get_max_threads)\n\n", omp_get_max_threads());

    auto J = CouplingFamily::power_law(2.0);
    auto full = InteractionMask::full();
    auto free_bc = BoundaryCondition::free_bc();

    {
        // The reference recomputes every Hamiltonian from scratch, so the
        // speedup here mixes parallelism with the Gray-code increments; the
        // two algorithms agree to rounding, not bit for bit.
        SiteInterval vol{0, n_exact - 1};
        ExactMeasure par, ser;
        double tp = timed([&] { par = boltzmann(vol, 0.3, full, free_bc, J); });
        double ts = timed(
            [&] { ser = boltzmann_reference(vol, 0.3, full, free_bc, J); });
        double rel = 0.0;
        for (std::size_t c = 0; c < par.p.size(); ++c)
            rel = std::max(rel, std::abs(par.p[c] - ser.p[c]) / ser.p[c]);
        std::printf("boltzmann n=%d          gray-code %7.3fs  reference %6.3fs  "
                    "speedup %5.2fx  max rel diff %.2e\n",
                    n_exact, tp, ts, ts / tp, rel);
    }

    {
        TransferTruncation t(depth, 0.3, J);
        std::vector<double> f(t.states(), 1.0), out_p(t.states()), out_s(t.states());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = 1.0 + 1e-6 * (i % 97);
        const int reps = 20;
        double tp = timed([&] {
            for (int r = 0; r < reps; ++r) t.apply(f, out_p);
        });
        double ts = timed([&] {
            for (int r = 0; r < reps; ++r) t.apply_serial(f, out_s);
        });
        bool ok = same_bits(out_p, out_s);
        t.apply_adjoint(f, out_p);
        t.apply_adjoint_serial(f, out_s);
        ok = ok && same_bits(out_p, out_s);
        std::printf("transfer apply m=%d x%d  parallel %8.3fs  serial %8.3fs  "
                    "speedup %5.2fx  bits %s\n",
                    depth, reps, tp, ts, ts / tp, ok ? "equal" : "DIFFER");
    }

    {
        SiteInterval vol{0, 9};
        auto m = boltzmann(vol, 0.3, full, free_bc, J);
        std::vector<int> sites;
        for (int s = 0; s <= 9; ++s) sites.push_back(s);
        auto f = LocalFunction::linear(sites, std::vector<double>(10, 1.0));
        const int reps = 2000;
        double acc = 0.0;
        double tp = timed([&] {
            for (int r = 0; r < reps; ++r) acc += expectation(m, f);
        });
        double acc2 = 0.0;
        double ts = timed([&] {
            for (int r = 0; r < reps; ++r) acc2 += expectation_serial(m, f);
        });
        std::printf("expectation n=10 x%d  parallel %8.3fs  serial %8.3fs  "
                    "speedup %5.2fx  bits %s\n",
                    reps, tp, ts, ts / tp, acc == acc2 ? "equal" : "DIFFER");
    }

    {
        // Monte Carlo chains parallelize across independent seeds, not inside
        // a trajectory: each stream is a pure function of its seed, so any
        // scheduling of the outer loop gives the same ensemble.
        const int chains = 8;
        std::vector<double> mags(chains);
        double tw = timed([&] {
#pragma omp parallel for schedule(dynamic)
            for (int c = 0; c < chains; ++c) {
                ChainState chain(SiteInterval{0, chain_sites - 1}, 0.3, full,
                                 free_bc, J, 1000 + c, 8);
                chain.sweep(200);
                mags[c] = chain.magnetization();
            }
        });
        double mean = 0.0;
        for (double v : mags) mean += v / chains;
        std::printf("mc ensemble %d chains of %d sites: %8.3fs, mean "
                    "magnetization %+.4f\n",
                    chains, chain_sites, tw, mean);
    }

    return 0;
}
