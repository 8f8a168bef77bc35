#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "indelphy/edge_params.hpp"
#include "indelphy/phylogeny.hpp"
#include "indelphy/rng.hpp"
#include "indelphy/substitution_model.hpp"

namespace indelphy {

// A sequence at one tree node. When ancestry is tracked, ids[i] is a
// simulation-unique site identity: a site keeps its id through substitutions,
// loses it on deletion, and inserted sites get fresh ids, so id intersection
// between two nodes counts exactly the jointly surviving sites.
struct EvolvedSequence {
    std::vector<std::uint8_t> states;
    std::vector<std::int64_t> ids;

    std::size_t size() const { return states.size(); }
};

// Insertion genealogy: for every inserted site, the id of the site whose
// family it joined at the input of the edge where the insertion happened.
// Following parents upward resolves any site to its ancestral family at any
// reference node above it. parent id 0 marks a site with no ancestral family
// (left-edge immigrant, literal-boundary reference mode only).
struct Genealogy {
    std::int64_t next_id = 1;
    std::int64_t first_inserted = 1;
    std::vector<std::int64_t> parents;  // index = id - first_inserted

    std::int64_t parent_of(std::int64_t id) const {
        return id >= first_inserted ? parents[static_cast<std::size_t>(id - first_inserted)] : 0;
    }
    bool is_inserted(std::int64_t id) const { return id >= first_inserted; }
};

enum class AncestryMode {
    None,  // states only, fastest; large end-to-end runs
    Ids,   // site identities, enough for joint-survivor counts
    Full,  // identities plus insertion genealogy (family diagnostics)
};

enum class SubstitutionSampling {
    PerEvent,    // explicit substitution events inside the indel event loop
    Transition,  // end state drawn from the closed-form transition kernel
};

struct SimOptions {
    AncestryMode ancestry = AncestryMode::Full;
    SubstitutionSampling substitution = SubstitutionSampling::PerEvent;
    std::uint64_t length_cap = 1000000000;  // hard guard against runaway growth
    // Literal-definition reference mode only: run K+1 insertion clocks (an
    // unowned boundary slot spawning left-edge immigrant families) instead of
    // the per-site branching semantics the closed forms describe.
    bool boundary_slot = false;
};

// i.i.d. stationary root sequence with ids 1..k_r; sets up the genealogy.
EvolvedSequence sample_root_sequence(std::size_t k_r, const SubstitutionModel& model,
                                     RngStream& rng, AncestryMode mode, Genealogy* gen);

// Production path: per ancestral site, an independent family of descendants is
// evolved for time t and families are concatenated in site order. A single
// call is sequential and consumes the stream deterministically.
EvolvedSequence evolve_branch(const EvolvedSequence& in, const EdgeParams& p,
                              const SubstitutionModel& model, RngStream& rng,
                              const SimOptions& opt, Genealogy* gen);

// Reference path: the whole-sequence event loop over materialized positions,
// one event at a time. Slow (linear cost per indel event) but a direct
// transcription of the process definition; supports boundary_slot.
EvolvedSequence evolve_branch_reference(const EvolvedSequence& in, const EdgeParams& p,
                                        const SubstitutionModel& model, RngStream& rng,
                                        const SimOptions& opt, Genealogy* gen);

enum class KeepSequences { LeavesOnly, All };

struct TreeSim {
    std::vector<EvolvedSequence> seqs;  // indexed by node id
    Genealogy genealogy;
};

// Evolves a root sequence down every edge of the tree. RNG streams are derived
// per (seed, replicate, edge), so results do not depend on scheduling.
TreeSim evolve_tree(const Phylogeny& tree, std::size_t k_r, const SubstitutionModel& model,
                    std::uint64_t seed, std::uint64_t replicate, const SimOptions& opt,
                    KeepSequences keep = KeepSequences::All);

// Half-open index window into a sequence; a disengaged window means "all".
struct SiteWindow {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

// Number of sites of `reference` with a surviving copy inside window_a of a
// AND inside window_b of b. Requires id ancestry on all three sequences.
std::size_t count_joint_survivors(const EvolvedSequence& a, const EvolvedSequence& b,
                                  const EvolvedSequence& reference,
                                  std::optional<SiteWindow> window_a = std::nullopt,
                                  std::optional<SiteWindow> window_b = std::nullopt);

}  // namespace indelphy
