#include "langsep/transducer.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace langsep {

State Transducer::add_state() { return num_states++; }

void Transducer::add_edge(State src, Word read, Word write, State dst) {
    edges.push_back(TransducerEdge{src, std::move(read), std::move(write), dst});
}

void Transducer::normalize() {
    if (initial >= num_states) throw ParameterError("transducer: initial out of range");
    for (State f : finals)
        if (f >= num_states) throw ParameterError("transducer: final out of range");
    for (const TransducerEdge& e : edges) {
        if (e.src >= num_states || e.dst >= num_states)
            throw ParameterError("transducer: edge endpoint out of range");
        if (!e.read.over(input))
            throw AlphabetError("transducer: read label not over the input alphabet");
        if (!e.write.over(output))
            throw AlphabetError("transducer: write label not over the output alphabet");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

Transducer invert(const Transducer& t) {
    Transducer out;
    out.input = t.output;
    out.output = t.input;
    out.num_states = t.num_states;
    out.initial = t.initial;
    out.finals = t.finals;
    for (const TransducerEdge& e : t.edges)
        out.add_edge(e.src, e.write, e.read, e.dst);
    out.normalize();
    return out;
}

Transducer letter_normalize(const Transducer& t) {
    Transducer out;
    out.input = t.input;
    out.output = t.output;
    out.num_states = t.num_states;
    out.initial = t.initial;
    out.finals = t.finals;
    for (const TransducerEdge& e : t.edges) {
        std::size_t steps = e.read.size() + e.write.size();
        if (steps <= 1) {
            out.edges.push_back(e);
            continue;
        }
        // Read letters first, then write letters, through fresh states.
        State cur = e.src;
        for (std::size_t i = 0; i < e.read.size(); ++i) {
            State nxt = (i + 1 == steps) ? e.dst : out.add_state();
            out.add_edge(cur, Word({e.read[i]}), Word(), nxt);
            cur = nxt;
        }
        for (std::size_t i = 0; i < e.write.size(); ++i) {
            State nxt = (e.read.size() + i + 1 == steps) ? e.dst : out.add_state();
            out.add_edge(cur, Word(), Word({e.write[i]}), nxt);
            cur = nxt;
        }
    }
    out.normalize();
    return out;
}

Transducer compose(const Transducer& t1, const Transducer& t2) {
    if (t2.output != t1.input)
        throw AlphabetError("compose: t2's output alphabet must equal t1's input alphabet");
    Transducer a = letter_normalize(t1);  // reads the middle tape
    Transducer b = letter_normalize(t2);  // writes the middle tape
    Transducer out;
    out.input = t2.input;
    out.output = t1.output;
    out.num_states = a.num_states * b.num_states;
    auto id = [&](State p, State q) { return p * b.num_states + q; };
    out.initial = id(a.initial, b.initial);
    for (State p : a.finals)
        for (State q : b.finals) out.finals.insert(id(p, q));
    for (const TransducerEdge& ea : a.edges) {
        if (!ea.read.empty()) {
            // a consumes a middle letter that b must produce.
            for (const TransducerEdge& eb : b.edges)
                if (eb.write == ea.read)
                    out.add_edge(id(ea.src, eb.src), eb.read, ea.write, id(ea.dst, eb.dst));
        } else {
            // a moves alone (writes an output letter or is silent).
            for (State q = 0; q < b.num_states; ++q)
                out.add_edge(id(ea.src, q), Word(), ea.write, id(ea.dst, q));
        }
    }
    for (const TransducerEdge& eb : b.edges)
        if (eb.write.empty())
            for (State p = 0; p < a.num_states; ++p)
                out.add_edge(id(p, eb.src), eb.read, Word(), id(p, eb.dst));
    out.normalize();
    return out;
}

Budgeted<std::set<Word>> apply_to_word(const Transducer& t, const Word& w,
                                       std::uint64_t budget) {
    if (budget == 0) throw ParameterError("apply_to_word: budget must be >= 1");
    Budgeted<std::set<Word>> result;
    std::set<std::tuple<State, std::size_t, Word>> seen;
    std::deque<std::tuple<State, std::size_t, Word>> work;
    work.emplace_back(t.initial, 0, Word());
    seen.emplace(t.initial, 0, Word());
    std::uint64_t used = 0;
    while (!work.empty()) {
        if (used++ >= budget) {
            result.verdict = Tri::unknown;
            return result;
        }
        auto [s, pos, out] = work.front();
        work.pop_front();
        if (pos == w.size() && t.finals.count(s)) result.value.insert(out);
        for (const TransducerEdge& e : t.edges) {
            if (e.src != s) continue;
            if (pos + e.read.size() > w.size()) continue;
            bool match = true;
            for (std::size_t i = 0; i < e.read.size(); ++i)
                if (w[pos + i] != e.read[i]) {
                    match = false;
                    break;
                }
            if (!match) continue;
            auto key = std::make_tuple(e.dst, pos + e.read.size(), out + e.write);
            if (seen.insert(key).second) work.push_back(key);
        }
    }
    result.verdict = Tri::yes;
    return result;
}

Transducer cylindrify(const Alphabet& base, const std::vector<std::size_t>& positions,
                      std::size_t arity_out) {
    const std::size_t arity_in = positions.size();
    if (arity_in == 0) throw ParameterError("cylindrify: positions must be nonempty");
    for (std::size_t i = 0; i < arity_in; ++i) {
        if (positions[i] == 0 || positions[i] > arity_out)
            throw ParameterError("cylindrify: position index out of range");
        if (i > 0 && positions[i] <= positions[i - 1])
            throw ParameterError("cylindrify: positions must be strictly increasing");
    }

    Transducer out;
    out.input = tuple_alphabet(base, arity_in);
    out.output = tuple_alphabet(base, arity_out);

    // One state per set of already-padded output coordinates; padding is
    // permanent, which keeps pads a per-coordinate suffix.
    const std::size_t n_states = std::size_t{1} << arity_out;
    out.num_states = n_states;
    out.initial = 0;
    for (State s = 0; s < n_states; ++s) out.finals.insert(s);

    for (const Symbol& col_sym : out.output.symbols()) {
        std::vector<Symbol> col = split_tuple(col_sym, arity_out);
        std::size_t pad_mask = 0;
        for (std::size_t i = 0; i < arity_out; ++i)
            if (col[i] == kPad) pad_mask |= std::size_t{1} << i;
        std::vector<Symbol> proj;
        bool proj_all_pad = true;
        for (std::size_t p : positions) {
            proj.push_back(col[p - 1]);
            proj_all_pad = proj_all_pad && proj.back() == kPad;
        }
        Word read = proj_all_pad ? Word() : Word({tuple_symbol(proj)});
        for (State src = 0; src < n_states; ++src) {
            if ((src & pad_mask) != src) continue;  // padded coords must stay padded
            out.add_edge(src, read, Word({col_sym}), static_cast<State>(pad_mask));
        }
    }
    out.normalize();
    return out;
}

Transducer length_transducer(const Alphabet& input) {
    Transducer out;
    out.input = input;
    out.output = binary_alphabet();
    out.num_states = 2;
    out.initial = 0;
    out.finals = {1};
    out.add_edge(0, Word(), Word::chars("1"), 1);
    for (const Symbol& s : input.symbols())
        out.add_edge(1, Word({s}), Word::chars("0"), 1);
    out.normalize();
    return out;
}

Transducer word_to_unary_length() { return length_transducer(binary_alphabet()); }

Transducer identity_transducer(const Alphabet& alphabet) {
    Transducer out;
    out.input = alphabet;
    out.output = alphabet;
    out.num_states = 1;
    out.initial = 0;
    out.finals = {0};
    for (const Symbol& s : alphabet.symbols())
        out.add_edge(0, Word({s}), Word({s}), 0);
    out.normalize();
    return out;
}

Transducer homomorphism_transducer(const Alphabet& input,
                                   const std::map<Symbol, Word>& images,
                                   const Alphabet& output) {
    Transducer out;
    out.input = input;
    out.output = output;
    out.num_states = 1;
    out.initial = 0;
    out.finals = {0};
    for (const Symbol& s : input.symbols()) {
        auto it = images.find(s);
        if (it == images.end())
            throw ParameterError("homomorphism_transducer: no image for '" + s + "'");
        out.add_edge(0, Word({s}), it->second, 0);
    }
    out.normalize();
    return out;
}

Transducer inverse_homomorphism_transducer(const Alphabet& output,
                                           const std::map<Symbol, Word>& images,
                                           const Alphabet& input) {
    Transducer out;
    out.input = input;
    out.output = output;
    out.num_states = 1;
    out.initial = 0;
    out.finals = {0};
    for (const Symbol& s : output.symbols()) {
        auto it = images.find(s);
        if (it == images.end())
            throw ParameterError("inverse_homomorphism_transducer: no image for '" + s + "'");
        out.add_edge(0, it->second, Word({s}), 0);
    }
    out.normalize();
    return out;
}

Transducer regular_id_transducer(const Nfa& a) {
    Nfa split = nfa_letter_split(a);
    Transducer out;
    out.input = a.alphabet;
    out.output = a.alphabet;
    out.num_states = split.num_states;
    out.initial = split.initial;
    out.finals = split.finals;
    for (const NfaEdge& e : split.edges)
        out.add_edge(e.src, e.label, e.label, e.dst);
    out.normalize();
    return out;
}

std::set<std::pair<Word, Word>> enumerate_relation(const Transducer& t,
                                                   std::size_t max_write,
                                                   std::size_t max_read) {
    std::set<std::pair<Word, Word>> pairs;
    std::set<std::tuple<State, Word, Word>> seen;
    std::deque<std::tuple<State, Word, Word>> work;
    work.emplace_back(t.initial, Word(), Word());
    seen.emplace(t.initial, Word(), Word());
    while (!work.empty()) {
        auto [s, written, read] = work.front();
        work.pop_front();
        if (t.finals.count(s)) pairs.emplace(written, read);
        for (const TransducerEdge& e : t.edges) {
            if (e.src != s) continue;
            if (written.size() + e.write.size() > max_write) continue;
            if (read.size() + e.read.size() > max_read) continue;
            auto key = std::make_tuple(e.dst, written + e.write, read + e.read);
            if (seen.insert(key).second) work.push_back(key);
        }
    }
    return pairs;
}

}  // namespace langsep
