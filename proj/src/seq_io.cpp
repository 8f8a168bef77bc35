#include "indelphy/seq_io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace indelphy {

namespace {

std::string strip(const std::string& line) {
    std::size_t b = 0, e = line.size();
    while (b < e && (line[b] == ' ' || line[b] == '\t' || line[b] == '\r')) ++b;
    while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t' || line[e - 1] == '\r')) --e;
    return line.substr(b, e - b);
}

}  // namespace

void write_sequences(std::ostream& os, const NamedSequences& data,
                     const SubstitutionModel& model) {
    if (data.names.size() != data.seqs.size())
        throw std::invalid_argument("write_sequences: names/seqs size mismatch");
    for (std::size_t i = 0; i < data.seqs.size(); ++i) {
        os << '>' << data.names[i] << '\n';
        for (std::uint8_t s : data.seqs[i].states) os << model.state_to_char(s);
        os << '\n';
    }
}

NamedSequences read_sequences(std::istream& is, const SubstitutionModel& model) {
    NamedSequences out;
    std::string line;
    std::size_t lineno = 0;
    bool expect_states = false;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = strip(line);
        if (t.empty()) continue;
        if (t[0] == '>') {
            if (expect_states)
                throw std::runtime_error("read_sequences: missing state line before line " +
                                         std::to_string(lineno));
            const std::string name = strip(t.substr(1));
            if (name.empty())
                throw std::runtime_error("read_sequences: empty taxon name at line " +
                                         std::to_string(lineno));
            out.names.push_back(name);
            expect_states = true;
        } else {
            if (!expect_states)
                throw std::runtime_error("read_sequences: state line without a header at line " +
                                         std::to_string(lineno));
            EvolvedSequence s;
            s.states.reserve(t.size());
            for (char c : t) s.states.push_back(static_cast<std::uint8_t>(model.char_to_state(c)));
            out.seqs.push_back(std::move(s));
            expect_states = false;
        }
    }
    if (expect_states)
        throw std::runtime_error("read_sequences: file ends after a header with no states");
    return out;
}

void write_ancestry(std::ostream& os, const NamedSequences& data, const Genealogy& gen) {
    if (data.names.size() != data.seqs.size())
        throw std::invalid_argument("write_ancestry: names/seqs size mismatch");
    for (std::size_t i = 0; i < data.seqs.size(); ++i) {
        const auto& seq = data.seqs[i];
        if (seq.ids.size() != seq.states.size())
            throw std::invalid_argument("write_ancestry: sequence lacks site identities");
        os << '>' << data.names[i] << '\n';
        for (std::size_t p = 0; p < seq.ids.size(); ++p) {
            std::int64_t id = seq.ids[p];
            while (gen.is_inserted(id)) id = gen.parent_of(id);
            os << (p + 1) << '\t' << id << '\n';
        }
    }
}

}  // namespace indelphy
