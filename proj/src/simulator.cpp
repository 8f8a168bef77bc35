#include "indelphy/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace indelphy {

namespace {

[[noreturn]] void throw_length_cap(std::uint64_t len, std::uint64_t cap) {
    std::ostringstream os;
    os << "sequence length " << len << " exceeded the configured cap of " << cap
       << " sites; insertion rate likely dominates deletion on a long branch";
    throw std::runtime_error(os.str());
}

void check_ancestry_inputs(const EvolvedSequence& in, const SimOptions& opt, Genealogy* gen) {
    if (opt.ancestry == AncestryMode::None) return;
    if (in.ids.size() != in.states.size())
        throw std::invalid_argument("evolve_branch: ancestry requested but input carries no ids");
    if (gen == nullptr)
        throw std::invalid_argument("evolve_branch: ancestry requested but no genealogy given");
}

// One family member during branch evolution. birth is only maintained under
// Transition sampling.
struct Member {
    std::uint8_t state;
    std::int64_t id;
    double birth;
};

}  // namespace

EvolvedSequence sample_root_sequence(std::size_t k_r, const SubstitutionModel& model,
                                     RngStream& rng, AncestryMode mode, Genealogy* gen) {
    EvolvedSequence out;
    out.states.resize(k_r);
    for (std::size_t i = 0; i < k_r; ++i)
        out.states[i] = static_cast<std::uint8_t>(model.sample_stationary(rng));
    if (mode != AncestryMode::None) {
        if (gen == nullptr)
            throw std::invalid_argument("sample_root_sequence: ancestry requested but no genealogy given");
        out.ids.resize(k_r);
        for (std::size_t i = 0; i < k_r; ++i) out.ids[i] = static_cast<std::int64_t>(i) + 1;
        gen->next_id = static_cast<std::int64_t>(k_r) + 1;
        gen->first_inserted = gen->next_id;
        gen->parents.clear();
    }
    return out;
}

EvolvedSequence evolve_branch(const EvolvedSequence& in, const EdgeParams& p,
                              const SubstitutionModel& model, RngStream& rng,
                              const SimOptions& opt, Genealogy* gen) {
    p.validate();
    check_ancestry_inputs(in, opt, gen);
    if (opt.boundary_slot)
        throw std::invalid_argument(
            "evolve_branch: boundary_slot is only available in the reference implementation");

    const bool track = opt.ancestry != AncestryMode::None;
    const bool record_parents = opt.ancestry == AncestryMode::Full;
    const bool per_event = opt.substitution == SubstitutionSampling::PerEvent;
    const double sub_rate = per_event ? model.event_rate(p.eta) : 0.0;
    const double site_rate = p.lambda + p.delta + sub_rate;

    if (p.t == 0.0) {
        EvolvedSequence copy;
        copy.states = in.states;
        if (track) copy.ids = in.ids;
        return copy;
    }

    EvolvedSequence out;
    out.states.reserve(in.size() + in.size() / 8 + 16);
    if (track) out.ids.reserve(out.states.capacity());

    std::vector<Member> family;
    family.reserve(16);

    for (std::size_t site = 0; site < in.size(); ++site) {
        family.clear();
        family.push_back({in.states[site], track ? in.ids[site] : 0, 0.0});
        const std::int64_t founder = family[0].id;

        if (site_rate > 0.0) {
            double now = 0.0;
            while (!family.empty()) {
                double rate = static_cast<double>(family.size()) * site_rate;
                now += rng.exponential(rate);
                if (now >= p.t) break;
                auto idx = static_cast<std::size_t>(rng.below(family.size()));
                double u = rng.uniform() * site_rate;
                if (u < p.lambda) {
                    // new site in the slot owned by member idx: immediately to its right
                    std::int64_t id = 0;
                    if (track) {
                        id = gen->next_id++;
                        if (record_parents) gen->parents.push_back(founder);
                    }
                    std::uint8_t st = static_cast<std::uint8_t>(model.sample_stationary(rng));
                    family.insert(family.begin() + static_cast<std::ptrdiff_t>(idx) + 1,
                                  {st, id, now});
                    if (static_cast<std::uint64_t>(out.states.size() + family.size()) >
                        opt.length_cap)
                        throw_length_cap(out.states.size() + family.size(), opt.length_cap);
                } else if (u < p.lambda + p.delta) {
                    family.erase(family.begin() + static_cast<std::ptrdiff_t>(idx));
                } else {
                    family[idx].state =
                        static_cast<std::uint8_t>(model.apply_event(family[idx].state, rng));
                }
            }
        }

        for (auto& m : family) {
            std::uint8_t st = m.state;
            if (!per_event && p.eta > 0.0) {
                double exposure = p.eta * (p.t - m.birth);
                st = static_cast<std::uint8_t>(model.sample_transition(st, exposure, rng));
            }
            out.states.push_back(st);
            if (track) out.ids.push_back(m.id);
        }
        if (static_cast<std::uint64_t>(out.states.size()) > opt.length_cap)
            throw_length_cap(out.states.size(), opt.length_cap);
    }
    return out;
}

EvolvedSequence evolve_branch_reference(const EvolvedSequence& in, const EdgeParams& p,
                                        const SubstitutionModel& model, RngStream& rng,
                                        const SimOptions& opt, Genealogy* gen) {
    p.validate();
    check_ancestry_inputs(in, opt, gen);

    const bool track = opt.ancestry != AncestryMode::None;
    const bool record_parents = opt.ancestry == AncestryMode::Full;
    const double sub_rate = model.event_rate(p.eta);

    EvolvedSequence seq = in;
    if (!track) seq.ids.clear();

    double now = 0.0;
    for (;;) {
        const auto k = static_cast<double>(seq.size());
        const double slots = opt.boundary_slot ? k + 1.0 : k;
        const double total = slots * p.lambda + k * (p.delta + sub_rate);
        if (total <= 0.0) break;
        now += rng.exponential(total);
        if (now >= p.t) break;
        double u = rng.uniform() * total;
        if (u < slots * p.lambda) {
            // slot j inserts between positions j-1 and j; slot 0 exists only
            // in boundary mode
            std::uint64_t slot = rng.below(static_cast<std::uint64_t>(slots));
            std::size_t at = opt.boundary_slot ? slot : slot + 1;
            std::int64_t id = 0;
            if (track) {
                id = gen->next_id++;
                if (record_parents)
                    gen->parents.push_back(at == 0 ? 0 : seq.ids[at - 1]);
            }
            std::uint8_t st = static_cast<std::uint8_t>(model.sample_stationary(rng));
            seq.states.insert(seq.states.begin() + static_cast<std::ptrdiff_t>(at), st);
            if (track) seq.ids.insert(seq.ids.begin() + static_cast<std::ptrdiff_t>(at), id);
            if (static_cast<std::uint64_t>(seq.size()) > opt.length_cap)
                throw_length_cap(seq.size(), opt.length_cap);
        } else if (u < slots * p.lambda + k * p.delta) {
            auto at = static_cast<std::size_t>(rng.below(seq.size()));
            seq.states.erase(seq.states.begin() + static_cast<std::ptrdiff_t>(at));
            if (track) seq.ids.erase(seq.ids.begin() + static_cast<std::ptrdiff_t>(at));
        } else {
            auto at = static_cast<std::size_t>(rng.below(seq.size()));
            seq.states[at] = static_cast<std::uint8_t>(model.apply_event(seq.states[at], rng));
        }
    }
    return seq;
}

namespace {

void evolve_subtree(const Phylogeny& tree, int node, EvolvedSequence seq,
                    const SubstitutionModel& model, std::uint64_t seed, std::uint64_t replicate,
                    const SimOptions& opt, KeepSequences keep, TreeSim& out) {
    const auto& nd = tree.nodes[node];
    const bool leaf = tree.is_leaf(node);
    for (int c : nd.children) {
        if (c < 0) continue;
        RngStream edge_rng = make_stream(seed, replicate, 1 + static_cast<std::uint64_t>(c));
        EvolvedSequence child =
            evolve_branch(seq, tree.nodes[c].edge, model, edge_rng, opt, &out.genealogy);
        evolve_subtree(tree, c, std::move(child), model, seed, replicate, opt, keep, out);
    }
    if (keep == KeepSequences::All || leaf) out.seqs[node] = std::move(seq);
}

}  // namespace

TreeSim evolve_tree(const Phylogeny& tree, std::size_t k_r, const SubstitutionModel& model,
                    std::uint64_t seed, std::uint64_t replicate, const SimOptions& opt,
                    KeepSequences keep) {
    tree.validate();
    TreeSim out;
    out.seqs.resize(tree.size());
    RngStream root_rng = make_stream(seed, replicate, 0);
    EvolvedSequence root = sample_root_sequence(
        k_r, model, root_rng, opt.ancestry,
        opt.ancestry == AncestryMode::None ? nullptr : &out.genealogy);
    evolve_subtree(tree, tree.root, std::move(root), model, seed, replicate, opt, keep, out);
    return out;
}

std::size_t count_joint_survivors(const EvolvedSequence& a, const EvolvedSequence& b,
                                  const EvolvedSequence& reference,
                                  std::optional<SiteWindow> window_a,
                                  std::optional<SiteWindow> window_b) {
    if (a.ids.size() != a.size() || b.ids.size() != b.size() ||
        reference.ids.size() != reference.size())
        throw std::invalid_argument("count_joint_survivors: sequences must carry id ancestry");
    auto check = [](const std::optional<SiteWindow>& w, const EvolvedSequence& s) {
        if (!w) return SiteWindow{0, s.size()};
        if (w->lo > w->hi || w->hi > s.size())
            throw std::invalid_argument("count_joint_survivors: window out of bounds");
        return *w;
    };
    SiteWindow wa = check(window_a, a);
    SiteWindow wb = check(window_b, b);

    std::unordered_set<std::int64_t> ref_ids(reference.ids.begin(), reference.ids.end());
    std::unordered_set<std::int64_t> in_a;
    in_a.reserve(wa.hi - wa.lo);
    for (std::size_t i = wa.lo; i < wa.hi; ++i)
        if (ref_ids.count(a.ids[i])) in_a.insert(a.ids[i]);
    std::size_t n = 0;
    for (std::size_t i = wb.lo; i < wb.hi; ++i)
        if (in_a.count(b.ids[i])) ++n;
    return n;
}

}  // namespace indelphy
