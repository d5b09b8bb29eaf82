// transducer.hpp -- asynchronous transducers and the transduction algebra.

#ifndef LANGSEP_TRANSDUCER_HPP
#define LANGSEP_TRANSDUCER_HPP

#include <map>
#include <set>
#include <utility>
#include <vector>

#include "langsep/kernel.hpp"

namespace langsep {

// An edge reads `read` over the input alphabet and writes `write` over the
// output alphabet. The file format lists the read label first.
struct TransducerEdge {
    State src = 0;
    Word read;
    Word write;
    State dst = 0;

    bool operator==(const TransducerEdge&) const = default;
    auto operator<=>(const TransducerEdge&) const = default;
};

/// A finite-state machine realizing a rational transduction: the set of
/// pairs (write-side word, read-side word) labeling accepting runs.
struct Transducer {
    Alphabet input;   // read side
    Alphabet output;  // write side
    std::size_t num_states = 0;
    State initial = 0;
    std::set<State> finals;
    std::vector<TransducerEdge> edges;

    State add_state();
    void add_edge(State src, Word read, Word write, State dst);
    void normalize();

    bool operator==(const Transducer&) const = default;
};

/// Swaps read and write labels (and alphabets) on every edge.
Transducer invert(const Transducer& t);

/// The relation {(u,w) : exists v with (u,v) in T1 and (v,w) in T2};
/// requires t2's output alphabet to equal t1's input alphabet.
Transducer compose(const Transducer& t1, const Transducer& t2);

/// All outputs of t on the single input word w, found within `budget`
/// configuration expansions. The verdict is yes when the search saturated.
Budgeted<std::set<Word>> apply_to_word(const Transducer& t, const Word& w,
                                       std::uint64_t budget);

/// Transducer over convolution alphabets mapping an arity-in word (arity_in
/// = positions.size()) to every arity-out word whose projection to the given
/// 1-based positions de-pads to the input.
Transducer cylindrify(const Alphabet& base, const std::vector<std::size_t>& positions,
                      std::size_t arity_out);

/// Reads any binary word w, writes 1 0^|w|.
Transducer word_to_unary_length();
/// Same construction over an arbitrary read alphabet.
Transducer length_transducer(const Alphabet& input);

Transducer identity_transducer(const Alphabet& alphabet);
/// Realizes the homomorphic image: reads v, writes h(v) letter by letter.
Transducer homomorphism_transducer(const Alphabet& input,
                                   const std::map<Symbol, Word>& images,
                                   const Alphabet& output);
/// Realizes the inverse homomorphic image: reads h(u), writes u.
Transducer inverse_homomorphism_transducer(const Alphabet& output,
                                           const std::map<Symbol, Word>& images,
                                           const Alphabet& input);
/// Identity restricted to L(a): applying it intersects with a regular set.
Transducer regular_id_transducer(const Nfa& a);

/// Splits every edge so that each one reads at most one letter and writes
/// nothing, or writes at most one letter and reads nothing.
Transducer letter_normalize(const Transducer& t);

/// All related pairs (write word, read word) within the given length bounds.
/// Exact on the bounded box.
std::set<std::pair<Word, Word>> enumerate_relation(const Transducer& t,
                                                   std::size_t max_write,
                                                   std::size_t max_read);

}  // namespace langsep

#endif  // LANGSEP_TRANSDUCER_HPP
