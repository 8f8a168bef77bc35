#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "indelphy/simulator.hpp"
#include "indelphy/substitution_model.hpp"

namespace indelphy {

struct NamedSequences {
    std::vector<std::string> names;
    std::vector<EvolvedSequence> seqs;  // ids empty when loaded from text
};

// One record per taxon: a ">name" header line, then the state string on the
// next line ({0,1} for the two-state model, ACGT otherwise).
void write_sequences(std::ostream& os, const NamedSequences& data,
                     const SubstitutionModel& model);
NamedSequences read_sequences(std::istream& is, const SubstitutionModel& model);

// Sidecar ancestry table: per taxon a ">name" header, then one "position TAB
// label" line per site (1-based positions). The label is the root-sequence
// position the site descends from, 0 when the site was inserted below the root.
void write_ancestry(std::ostream& os, const NamedSequences& data, const Genealogy& gen);

}  // namespace indelphy
