#include <cmath>
#include <vector>

#include "doctest.h"
#include "indelphy/analytics.hpp"
#include "indelphy/diagnostics.hpp"
#include "indelphy/estimator.hpp"
#include "indelphy/simulator.hpp"
#include "indelphy/stats.hpp"

using namespace indelphy;

namespace {

SimOptions ids_opt() {
    SimOptions o;
    o.ancestry = AncestryMode::Ids;
    o.substitution = SubstitutionSampling::Transition;
    return o;
}

std::int64_t root_family(const Genealogy& gen, std::int64_t id) {
    while (gen.is_inserted(id)) id = gen.parent_of(id);
    return id;
}

}  // namespace

TEST_CASE("zero-time and zero-rate edges copy the sequence") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    RngStream rng(3);
    Genealogy gen;
    EvolvedSequence root = sample_root_sequence(200, cfn, rng, AncestryMode::Ids, &gen);
    SimOptions opt = ids_opt();

    EvolvedSequence a = evolve_branch(root, EdgeParams{0.0, 0.5, 0.5, 0.5}, cfn, rng, opt, &gen);
    CHECK(a.states == root.states);
    CHECK(a.ids == root.ids);

    EvolvedSequence b = evolve_branch(root, EdgeParams{5.0, 0.0, 0.0, 0.0}, cfn, rng, opt, &gen);
    CHECK(b.states == root.states);
    CHECK(b.ids == root.ids);
}

TEST_CASE("site order is preserved through indel evolution") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    SimOptions opt;
    opt.ancestry = AncestryMode::Full;
    opt.substitution = SubstitutionSampling::Transition;
    for (std::uint64_t rep = 0; rep < 20; ++rep) {
        RngStream rng = make_stream(555, rep, 0);
        Genealogy gen;
        EvolvedSequence root = sample_root_sequence(300, cfn, rng, AncestryMode::Full, &gen);
        EvolvedSequence leaf =
            evolve_branch(root, EdgeParams{1.5, 0.1, 0.3, 0.25}, cfn, rng, opt, &gen);
        std::int64_t prev = 0;
        for (std::int64_t id : leaf.ids) {
            std::int64_t fam = root_family(gen, id);
            CHECK(fam >= 1);
            CHECK(fam <= 300);
            CHECK(fam >= prev);
            prev = fam;
        }
    }
}

TEST_CASE("surviving original sites keep relative order and identity") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    SimOptions opt = ids_opt();
    RngStream rng(77);
    Genealogy gen;
    EvolvedSequence root = sample_root_sequence(400, cfn, rng, AncestryMode::Ids, &gen);
    EvolvedSequence leaf =
        evolve_branch(root, EdgeParams{1.0, 0.0, 0.4, 0.3}, cfn, rng, opt, &gen);
    std::int64_t prev = 0;
    for (std::int64_t id : leaf.ids)
        if (id <= 400) {
            CHECK(id > prev);
            prev = id;
        }
}

TEST_CASE("length and survival match the closed forms") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    EdgeParams p{1.0, 0.1, 0.05, 0.02};
    const std::size_t k = 2000;
    const int reps = 400;
    SimOptions opt = ids_opt();
    std::vector<double> lens, survs;
    for (int r = 0; r < reps; ++r) {
        RngStream rng = make_stream(42, static_cast<std::uint64_t>(r), 0);
        Genealogy gen;
        EvolvedSequence root = sample_root_sequence(k, cfn, rng, AncestryMode::Ids, &gen);
        EvolvedSequence leaf = evolve_branch(root, p, cfn, rng, opt, &gen);
        lens.push_back(static_cast<double>(leaf.size()));
        std::size_t surv = 0;
        for (std::int64_t id : leaf.ids) surv += id <= static_cast<std::int64_t>(k);
        survs.push_back(static_cast<double>(surv));
    }
    Moments ml = moments(lens);
    CHECK(std::abs(ml.mean - expected_length(p, k)) < 5 * ml.se_mean);
    Moments ms = moments(survs);
    CHECK(std::abs(ms.mean - k * survival_probability(p)) < 5 * ms.se_mean);
}

TEST_CASE("event-driven and reference simulators agree statistically") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    EdgeParams p{0.7, 0.3, 0.15, 0.1};
    const std::size_t k = 500;
    const int reps = 600;
    SimOptions opt = ids_opt();

    auto run = [&](bool reference, std::uint64_t base) {
        std::vector<double> lens, devs;
        for (int r = 0; r < reps; ++r) {
            RngStream rng = make_stream(base, static_cast<std::uint64_t>(r), 0);
            Genealogy gen;
            EvolvedSequence root = sample_root_sequence(k, cfn, rng, AncestryMode::Ids, &gen);
            for (auto& s : root.states) s = 0;
            EvolvedSequence leaf = reference
                                       ? evolve_branch_reference(root, p, cfn, rng, opt, &gen)
                                       : evolve_branch(root, p, cfn, rng, opt, &gen);
            lens.push_back(static_cast<double>(leaf.size()));
            devs.push_back(sequence_deviation(leaf, cfn));
        }
        return std::make_pair(moments(lens), moments(devs));
    };
    auto [fl, fd] = run(false, 1000);
    auto [rl, rd] = run(true, 2000);

    double expect_len = expected_length(p, static_cast<double>(k));
    CHECK(std::abs(fl.mean - expect_len) < 5 * fl.se_mean);
    CHECK(std::abs(rl.mean - expect_len) < 5 * rl.se_mean);

    double expect_dev = (k / 2.0) * deviation_decay(p, ModelKind::Cfn);
    CHECK(std::abs(fd.mean - expect_dev) < 5 * fd.se_mean);
    CHECK(std::abs(rd.mean - expect_dev) < 5 * rd.se_mean);

    CHECK(std::abs(fl.mean - rl.mean) <
          5 * std::sqrt(fl.se_mean * fl.se_mean + rl.se_mean * rl.se_mean));
    CHECK(std::abs(fd.mean - rd.mean) <
          5 * std::sqrt(fd.se_mean * fd.se_mean + rd.se_mean * rd.se_mean));
}

TEST_CASE("boundary-slot reference mode spawns left-edge immigrants") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    EdgeParams p{1.0, 0.0, 0.5, 1.0};
    SimOptions fam = ids_opt();
    SimOptions slot = ids_opt();
    slot.boundary_slot = true;

    std::vector<double> lens;
    for (int r = 0; r < 2000; ++r) {
        RngStream rng = make_stream(31, static_cast<std::uint64_t>(r), 0);
        Genealogy gen;
        EvolvedSequence empty = sample_root_sequence(0, cfn, rng, AncestryMode::Ids, &gen);
        EvolvedSequence fam_leaf = evolve_branch(empty, p, cfn, rng, fam, &gen);
        CHECK(fam_leaf.size() == 0);
        EvolvedSequence slot_leaf = evolve_branch_reference(empty, p, cfn, rng, slot, &gen);
        lens.push_back(static_cast<double>(slot_leaf.size()));
    }
    Moments m = moments(lens);
    double expect = (1.0 / 0.5) * (std::exp(0.5) - 1.0);
    CHECK(std::abs(m.mean - expect) < 5 * m.se_mean);
}

TEST_CASE("substitution sampling modes agree on flip frequency") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    EdgeParams p{1.0, 0.5, 0.0, 0.0};
    const int reps = 4000;
    for (SubstitutionSampling mode :
         {SubstitutionSampling::PerEvent, SubstitutionSampling::Transition}) {
        SimOptions opt;
        opt.ancestry = AncestryMode::None;
        opt.substitution = mode;
        int flips = 0;
        for (int r = 0; r < reps; ++r) {
            RngStream rng = make_stream(91, static_cast<std::uint64_t>(r),
                                        mode == SubstitutionSampling::PerEvent ? 0u : 1u);
            EvolvedSequence root;
            root.states = {0};
            Genealogy gen;
            EvolvedSequence leaf = evolve_branch(root, p, cfn, rng, opt, &gen);
            REQUIRE(leaf.size() == 1);
            flips += leaf.states[0] != 0;
        }
        double freq = static_cast<double>(flips) / reps;
        double se = std::sqrt(freq * (1 - freq) / reps);
        CHECK(std::abs(freq - flip_probability(0.5, 1.0)) < 5 * se);
    }
}

TEST_CASE("evolve_tree is deterministic and honors the keep policy") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    Phylogeny tree = make_fork(EdgeParams{1.0, 0.1, 0.05, 0.02}, EdgeParams{1.0, 0.1, 0.05, 0.02},
                               EdgeParams{1.0, 0.1, 0.05, 0.02});
    SimOptions opt = ids_opt();

    TreeSim s1 = evolve_tree(tree, 800, cfn, 5, 0, opt, KeepSequences::All);
    TreeSim s2 = evolve_tree(tree, 800, cfn, 5, 0, opt, KeepSequences::All);
    for (std::size_t v = 0; v < tree.size(); ++v) {
        CHECK(s1.seqs[v].states == s2.seqs[v].states);
        CHECK(s1.seqs[v].ids == s2.seqs[v].ids);
        CHECK(s1.seqs[v].size() > 0);
    }
    TreeSim s3 = evolve_tree(tree, 800, cfn, 5, 1, opt, KeepSequences::All);
    bool differs = false;
    for (std::size_t v = 0; v < tree.size(); ++v)
        differs = differs || s1.seqs[v].states != s3.seqs[v].states;
    CHECK(differs);

    TreeSim leaves_only = evolve_tree(tree, 800, cfn, 5, 0, opt, KeepSequences::LeavesOnly);
    for (std::size_t v = 0; v < tree.size(); ++v) {
        if (tree.is_leaf(static_cast<int>(v))) {
            CHECK(leaves_only.seqs[v].states == s1.seqs[v].states);
        } else {
            CHECK(leaves_only.seqs[v].size() == 0);
        }
    }
}

TEST_CASE("joint-survivor counts are window-consistent") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    EdgeParams e{1.0, 0.1, 0.05, 0.02};
    ForkSim sim = simulate_fork(e, e, e, 400, cfn, 123, 0, ids_opt());
    std::size_t full = count_joint_survivors(sim.a, sim.b, sim.u);
    CHECK(full > 0);
    std::size_t split = 0;
    const std::size_t step = 37;
    for (std::size_t lo = 0; lo < sim.a.size(); lo += step) {
        SiteWindow w{lo, std::min(lo + step, sim.a.size())};
        split += count_joint_survivors(sim.a, sim.b, sim.u, w, std::nullopt);
    }
    CHECK(split == full);
    SiteWindow empty_w{0, 0};
    CHECK(count_joint_survivors(sim.a, sim.b, sim.u, empty_w, std::nullopt) == 0);
}

TEST_CASE("length cap aborts runaway growth") {
    SubstitutionModel cfn = SubstitutionModel::cfn();
    SimOptions opt = ids_opt();
    opt.length_cap = 50;
    RngStream rng(1);
    Genealogy gen;
    EvolvedSequence root = sample_root_sequence(40, cfn, rng, AncestryMode::Ids, &gen);
    CHECK_THROWS_AS(
        evolve_branch(root, EdgeParams{4.0, 0.0, 0.0, 3.0}, cfn, rng, opt, &gen),
        std::runtime_error);
}
