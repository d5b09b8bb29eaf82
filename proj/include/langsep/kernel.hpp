// kernel.hpp -- alphabets, words, the binary value encoding, finite
// automata, convolution words and Parikh images of two-letter automata.

#ifndef LANGSEP_KERNEL_HPP
#define LANGSEP_KERNEL_HPP

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace langsep {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AlphabetError : Error {
    using Error::Error;
};
struct ParameterError : Error {
    using Error::Error;
};
struct FormatError : Error {
    using Error::Error;
};
struct UsageError : Error {
    using Error::Error;
};
struct ShapeError : Error {
    using Error::Error;
};
// Raised where an input falls outside the implemented fragment (see README).
struct UnsupportedError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------------------
// Three-valued verdicts. `unknown` is only ever produced by operations that
// take an explicit step budget.

enum class Tri { yes, no, unknown };

inline Tri tri_of(bool b) { return b ? Tri::yes : Tri::no; }
inline Tri tri_not(Tri t) {
    if (t == Tri::yes) return Tri::no;
    if (t == Tri::no) return Tri::yes;
    return Tri::unknown;
}
std::string to_string(Tri t);

// A value computed under a step budget together with the saturation flag:
// `yes` means the search space was exhausted and the value is exact.
template <typename T>
struct Budgeted {
    T value{};
    Tri verdict = Tri::unknown;
};

// ---------------------------------------------------------------------------
// Symbols, alphabets, words

using Symbol = std::string;

/// A finite set of symbols, kept sorted and duplicate-free.
class Alphabet {
  public:
    Alphabet() = default;
    explicit Alphabet(std::vector<Symbol> symbols);
    Alphabet(std::initializer_list<const char*> symbols);

    bool contains(const Symbol& s) const;
    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    bool operator==(const Alphabet&) const = default;
    auto operator<=>(const Alphabet&) const = default;

  private:
    std::vector<Symbol> symbols_;
};

Alphabet binary_alphabet();  // {0, 1}
Alphabet unary_alphabet();   // {a}

/// A finite string of symbols. Words are plain values; the operations that
/// consume them check symbols against the machine's declared alphabet.
class Word {
  public:
    Word() = default;
    explicit Word(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {}

    /// One symbol per character, e.g. chars("110").
    static Word chars(std::string_view text);

    std::size_t size() const { return symbols_.size(); }
    bool empty() const { return symbols_.empty(); }
    const Symbol& operator[](std::size_t i) const { return symbols_[i]; }
    const std::vector<Symbol>& symbols() const { return symbols_; }

    void push_back(Symbol s) { symbols_.push_back(std::move(s)); }
    Word operator+(const Word& rhs) const;

    bool over(const Alphabet& a) const;

    /// Display form; multi-character symbols are space-separated.
    std::string str() const;

    bool operator==(const Word&) const = default;
    auto operator<=>(const Word&) const = default;

  private:
    std::vector<Symbol> symbols_;
};

/// Value of a binary word, most significant bit first. The empty word has
/// value 0; symbols outside {0,1} raise AlphabetError.
std::uint64_t nu_value(const Word& w);

// ---------------------------------------------------------------------------
// Finite automata. Edges carry whole words (the empty word gives a silent
// edge); letter_split produces the letter-granular form that product
// constructions assume.

using State = std::size_t;

struct NfaEdge {
    State src = 0;
    Word label;
    State dst = 0;

    bool operator==(const NfaEdge&) const = default;
    auto operator<=>(const NfaEdge&) const = default;
};

struct Nfa {
    Alphabet alphabet;
    std::size_t num_states = 0;
    State initial = 0;
    std::set<State> finals;
    std::vector<NfaEdge> edges;

    State add_state();
    void add_edge(State src, Word label, State dst);
    /// Sorts edges and validates state indices and edge labels.
    void normalize();

    bool operator==(const Nfa&) const = default;
};

/// Splits word-labeled edges into single-letter edges (empty labels stay).
Nfa nfa_letter_split(const Nfa& a);

bool nfa_member(const Nfa& a, const Word& w);
bool nfa_is_empty(const Nfa& a);

/// All accepted words of length <= max_len, exactly.
std::set<Word> nfa_enumerate(const Nfa& a, std::size_t max_len);

Nfa nfa_intersect(const Nfa& a, const Nfa& b);
Nfa nfa_union(const Nfa& a, const Nfa& b);

/// Subset construction; the result is a complete DFA over a's alphabet.
Nfa nfa_determinize(const Nfa& a);
Nfa nfa_complement(const Nfa& a);
/// Reverses every edge (labels reversed as well) and swaps initial/finals.
Nfa nfa_reverse(const Nfa& a);
bool nfa_equivalent(const Nfa& a, const Nfa& b);

Nfa nfa_empty(Alphabet alphabet);
Nfa nfa_universal(Alphabet alphabet);
Nfa nfa_single_word(Alphabet alphabet, const Word& w);
/// Recognizer of a^(m + per N) over the unary alphabet; per >= 1.
Nfa nfa_unary_ap(std::uint64_t m, std::uint64_t per);
/// Recognizer of { a^n : n in ns } over the unary alphabet.
Nfa nfa_unary_finite(const std::set<std::uint64_t>& ns);

/// Recognizer of exactly the binary words w with nu_value(w) = n; leading
/// zeros are permitted. The state set is the set of values n >> k plus 0,
/// so the automaton has O(log n) states.
Nfa binary_reps(std::uint64_t n);

/// An ultimately periodic set of naturals: an explicit part below the
/// threshold, then membership by residue.
struct UltimatelyPeriodicSet {
    std::set<std::uint64_t> finite_part;  // members < threshold
    std::uint64_t threshold = 0;
    std::uint64_t period = 1;
    std::set<std::uint64_t> residues;  // (n - threshold) % period for n >= threshold

    bool contains(std::uint64_t n) const;
    bool is_finite() const { return residues.empty(); }

    // period == 0 marks a singleton {first}.
    struct Progression {
        std::uint64_t first = 0;
        std::uint64_t period = 0;

        auto operator<=>(const Progression&) const = default;
    };
    /// Canonical decomposition: one singleton per finite-part member, one
    /// arithmetic progression per residue, sorted.
    std::vector<Progression> progressions() const;
};

/// The set { |w| : w accepted } computed exactly by iterating the reachable
/// state set per length until it cycles.
UltimatelyPeriodicSet nfa_length_set(const Nfa& a);

/// Recognizer of the binary words w with nu_value(w) in m + p N; p >= 1.
Nfa ap_binary_dfa(std::uint64_t m, std::uint64_t p);

// ---------------------------------------------------------------------------
// Convolution words

inline const Symbol kPad = "_";

/// Joins tuple components into a single symbol, e.g. ("1","_") -> "1|_".
Symbol tuple_symbol(const std::vector<Symbol>& parts);
std::vector<Symbol> split_tuple(const Symbol& s, std::size_t arity);
/// All arity-tuples over base + pad, except the all-pad tuple.
Alphabet tuple_alphabet(const Alphabet& base, std::size_t arity);

struct ConvolutionWord {
    std::size_t arity = 0;
    std::vector<std::vector<Symbol>> columns;  // each of size arity

    bool operator==(const ConvolutionWord&) const = default;
};

/// Column-wise pairing of words over a common alphabet, padded at the short
/// ends. The empty list raises ParameterError ("arity error").
ConvolutionWord convolve(const std::vector<Word>& ws);
/// Drops pads per coordinate, recovering the convolved words.
std::vector<Word> deconvolve(const ConvolutionWord& cw);
/// The convolution word as a word over the tuple alphabet.
Word cw_to_word(const ConvolutionWord& cw);
ConvolutionWord word_to_cw(const Word& w, std::size_t arity);

// ---------------------------------------------------------------------------
// Semilinear sets

struct LinearSet {
    std::vector<std::uint64_t> base;
    std::vector<std::vector<std::uint64_t>> periods;

    bool operator==(const LinearSet&) const = default;
};

struct SemilinearSet {
    std::size_t arity = 0;
    std::vector<LinearSet> components;

    bool operator==(const SemilinearSet&) const = default;
};

bool semilinear_member(const SemilinearSet& s, const std::vector<std::uint64_t>& v);

/// Parikh image of an automaton over a two-letter alphabet {x,y} as the set
/// {(#x(w), #y(w)) : w accepted}, computed by simple-cycle decomposition.
/// Exact; exponential in the cycle structure, intended for small machines.
SemilinearSet parikh_pair(const Nfa& a);

}  // namespace langsep

#endif  // LANGSEP_KERNEL_HPP
