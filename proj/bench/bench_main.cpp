// Wall-clock comparison of the production kernels against their references:
// per-family branch evolution vs the literal event loop, and serial vs
// threaded distance matrices / experiment replicates.
//
// usage: indelphy_bench [k_r] [reps]

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "indelphy/estimator.hpp"
#include "indelphy/experiment.hpp"
#include "indelphy/parallel.hpp"
#include "indelphy/simulator.hpp"
#include "indelphy/tree_gen.hpp"

using namespace indelphy;
using BenchClock = std::chrono::steady_clock;

namespace {

std::size_t g_sink = 0;

double seconds_since(BenchClock::time_point t0) {
    return std::chrono::duration<double>(BenchClock::now() - t0).count();
}

template <class Fn>
double time_best(int reps, Fn fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = BenchClock::now();
        fn();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    std::size_t k_r = 20000;
    int reps = 5;
    if (argc > 1) k_r = std::strtoull(argv[1], nullptr, 10);
    if (argc > 2) reps = std::atoi(argv[2]);
    if (k_r == 0) k_r = 20000;
    if (reps <= 0) reps = 1;
    int tmax = resolve_threads(0);
    std::printf("indelphy bench: k_r=%zu, reps=%d (best-of), %d hardware threads\n\n", k_r, reps,
                tmax);

    SubstitutionModel model = SubstitutionModel::cfn();
    EdgeParams edge{1.0, 0.1, 0.05, 0.02};
    SimOptions fast;
    fast.ancestry = AncestryMode::None;
    fast.substitution = SubstitutionSampling::Transition;

    RngStream root_rng = make_stream(1, 0, 0);
    EvolvedSequence root = sample_root_sequence(k_r, model, root_rng, AncestryMode::None, nullptr);

    double t_family = time_best(reps, [&] {
        RngStream r = make_stream(2, 0, 0);
        EvolvedSequence out = evolve_branch(root, edge, model, r, fast, nullptr);
        g_sink += out.size();
    });
    double t_ref = time_best(reps, [&] {
        RngStream r = make_stream(2, 0, 0);
        EvolvedSequence out = evolve_branch_reference(root, edge, model, r, fast, nullptr);
        g_sink += out.size();
    });
    std::printf("branch evolution, one edge of %zu sites:\n", k_r);
    std::printf("  %-32s %9.4f s  %8.2f Msites/s\n", "per-family kernel", t_family,
                k_r / t_family / 1e6);
    double ratio = t_ref / t_family;
    std::printf("  %-32s %9.4f s  %8.2f Msites/s  (%.1fx %s)\n\n", "event-loop reference",
                t_ref, k_r / t_ref / 1e6, ratio >= 1.0 ? ratio : 1.0 / ratio,
                ratio >= 1.0 ? "slower" : "faster");

    RngStream tree_rng = make_stream(3, 0, 0);
    ClockTreeOptions topt;
    topt.eta = 0.1;
    topt.delta = 0.02;
    topt.lambda = 0.02;
    Phylogeny tree = generate_clock_tree(12, topt, tree_rng);
    TreeSim ts = evolve_tree(tree, k_r, model, 4, 0, fast, KeepSequences::LeavesOnly);
    std::vector<EvolvedSequence> seqs;
    std::vector<std::string> names;
    for (int leaf : tree.leaves()) {
        seqs.push_back(ts.seqs[static_cast<std::size_t>(leaf)]);
        names.push_back(tree.nodes[static_cast<std::size_t>(leaf)].name);
    }
    EstimatorConfig ecfg;
    double t_dm1 = time_best(reps, [&] {
        DistanceMatrix m = distance_matrix(seqs, names, model, ecfg, 1);
        g_sink += m.n();
    });
    double t_dmp = time_best(reps, [&] {
        DistanceMatrix m = distance_matrix(seqs, names, model, ecfg, tmax);
        g_sink += m.n();
    });
    std::printf("distance matrix, 12 leaves of ~%zu sites (66 pairs):\n", k_r);
    std::printf("  %-32s %9.4f s\n", "1 thread", t_dm1);
    std::printf("  %-32s %9.4f s  (speedup %.2fx)\n\n", "all threads", t_dmp, t_dm1 / t_dmp);

    ExperimentConfig cfg;
    cfg.n = 8;
    cfg.k_r = k_r;
    cfg.replicates = 8;
    cfg.seed = 5;
    cfg.method = "nj";
    cfg.threads = 1;
    double t_e1 = time_best(1, [&] { g_sink += run_experiment(cfg).replicates.size(); });
    cfg.threads = 0;
    double t_ep = time_best(1, [&] { g_sink += run_experiment(cfg).replicates.size(); });
    std::printf("experiment, 8 replicates end to end:\n");
    std::printf("  %-32s %9.4f s\n", "1 thread", t_e1);
    std::printf("  %-32s %9.4f s  (speedup %.2fx)\n\n", "all threads", t_ep, t_e1 / t_ep);

    std::printf("checksum %zu\n", g_sink);
    return 0;
}
