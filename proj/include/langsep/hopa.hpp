// hopa.hpp -- higher-order stacks and pushdown automata: instruction
// semantics, budgeted interpretation, order-1 grammar analysis, the
// binary-to-unary order-lifting construction, and transduction application.

#ifndef LANGSEP_HOPA_HPP
#define LANGSEP_HOPA_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "langsep/kernel.hpp"
#include "langsep/transducer.hpp"

namespace langsep {

// ---------------------------------------------------------------------------
// Higher-order stacks. Persistent values: push shares structure with the
// source stack, so copies are cheap and instances can be deduplicated by
// (memoized) hash plus structural equality.

class HStack;
using HStackPtr = std::shared_ptr<const HStack>;

class HStack {
  public:
    /// Order-0 stack: a single letter.
    static HStackPtr leaf(Symbol letter);
    /// The stack [[...[gamma]_1...]_k of the given order.
    static HStackPtr nested(std::size_t order, const Symbol& letter);
    static HStackPtr make(std::size_t order, std::vector<HStackPtr> entries);

    std::size_t order() const { return order_; }
    const Symbol& letter() const { return letter_; }  // order 0 only
    const std::vector<HStackPtr>& entries() const { return entries_; }

    Symbol top() const;
    std::size_t hash() const { return hash_; }
    bool equals(const HStack& other) const;

  private:
    HStack() = default;
    std::size_t order_ = 0;
    Symbol letter_;
    std::vector<HStackPtr> entries_;
    std::size_t hash_ = 0;
};

struct Instr {
    enum class Kind { push, pop, rew };
    Kind kind = Kind::push;
    std::size_t level = 1;  // push/pop
    Symbol letter;          // rew

    static Instr push(std::size_t level) { return {Kind::push, level, {}}; }
    static Instr pop(std::size_t level) { return {Kind::pop, level, {}}; }
    static Instr rew(Symbol letter) { return {Kind::rew, 0, std::move(letter)}; }

    bool operator==(const Instr&) const = default;
    auto operator<=>(const Instr&) const = default;
};

std::string to_string(const Instr& instr);

/// Applies one instruction; nullopt where the semantics leaves the result
/// undefined (pop at width one, or a level above the stack's order).
std::optional<HStackPtr> stack_exec(const HStackPtr& s, const Instr& instr);
std::optional<HStackPtr> stack_exec(const HStackPtr& s, const std::vector<Instr>& seq);

// ---------------------------------------------------------------------------
// Machines

struct HopaEdge {
    State src = 0;
    Word read;
    std::optional<Symbol> top;  // nullopt = any top letter
    std::vector<Instr> instrs;
    State dst = 0;

    bool operator==(const HopaEdge&) const = default;
    auto operator<=>(const HopaEdge&) const = default;
};

struct Hopa {
    Alphabet input;
    Alphabet stack_alphabet;
    Symbol bottom;
    std::size_t order = 1;
    std::size_t num_states = 0;
    State initial = 0;
    std::set<State> finals;
    std::vector<HopaEdge> edges;

    State add_state();
    void add_edge(State src, Word read, std::optional<Symbol> top,
                  std::vector<Instr> instrs, State dst);
    void normalize();

    bool operator==(const Hopa&) const = default;
};

struct HopaTraceStep {
    State state = 0;
    HStackPtr stack;
    Word chunk;  // input consumed by the edge leading into this configuration
};

struct HopaRunResult {
    // Accepted words with one witnessing trace each (initial configuration
    // first). Deterministic: breadth-first over sorted edges.
    std::map<Word, std::vector<HopaTraceStep>> accepted;
    Tri saturated = Tri::unknown;
};

/// All accepted words discoverable within `budget` configuration expansions,
/// optionally restricted to words of length <= max_word_len. saturated = yes
/// means the search space (under the length cap) was exhausted.
HopaRunResult run(const Hopa& a, std::uint64_t budget,
                  std::size_t max_word_len = static_cast<std::size_t>(-1));

/// yes if an accepting run on w is found within budget; no if the restricted
/// search saturates without one (always the case for order 1, which falls
/// back to an exact grammar check); unknown otherwise.
Tri hopa_member(const Hopa& a, const Word& w, std::uint64_t budget);

struct HopaEmptiness {
    Tri empty = Tri::unknown;
    std::optional<Word> witness;  // set when empty == no
};

/// Emptiness; exact for order 1 via the grammar construction, budgeted
/// saturation search otherwise.
HopaEmptiness hopa_is_empty(const Hopa& a, std::uint64_t budget);

/// Finiteness of the language. Order 1 is exact (context-free grammar,
/// trimmed, cycle check). For order >= 2 the check is budgeted: no once more
/// than `threshold` distinct accepted word lengths appear, yes if the run
/// saturates, unknown otherwise.
Tri finiteness(const Hopa& a, std::uint64_t budget, std::size_t threshold = 64);

struct StackMeasure {
    std::uint64_t mu = 0;
    std::vector<std::uint64_t> sigma;
};

/// The measures of a stack shaped as produced by bin_to_unary: mu sums the
/// binary values spelled by the stored top letters, sigma lists the
/// component lengths. ShapeError on any other stack.
StackMeasure measures(const HStackPtr& s, const Symbol& marker,
                      const Symbol& outer_bottom);

struct BinToUnaryResult {
    Hopa machine;         // order k+2, accepts { 1 0^nu(w) : w accepted by the input }
    Symbol marker;        // separator symbol of the stored-word components
    Symbol outer_bottom;  // bottom symbol of the new outer scaffold
};

/// The order-lifting construction turning binary acceptance into unary
/// counting. Input alphabet must be contained in {0,1}.
BinToUnaryResult bin_to_unary(const Hopa& a);

/// Product on control states recognizing T(L(a)); t's input alphabet must
/// equal a's input alphabet.
Hopa hopa_apply_transduction(const Transducer& t, const Hopa& a);

/// Intersection with a regular language (identity-transducer product).
Hopa hopa_regular_restrict(const Hopa& a, const Nfa& r);

}  // namespace langsep

#endif  // LANGSEP_HOPA_HPP
