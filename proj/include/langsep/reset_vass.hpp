// reset_vass.hpp -- reset VASS semantics, product constructions, and
// emptiness via backward coverability.

#ifndef LANGSEP_RESET_VASS_HPP
#define LANGSEP_RESET_VASS_HPP

#include <set>
#include <vector>

#include "langsep/kernel.hpp"
#include "langsep/transducer.hpp"

namespace langsep {

enum class CounterOp { inc, dec, nop, reset };
std::string to_string(CounterOp op);

// `counter` is 1-based; index 0 is permitted (and means "none") only on nop
// edges, so that machines with zero counters can still have edges.
struct VassEdge {
    State src = 0;
    Word label;
    std::size_t counter = 0;
    CounterOp op = CounterOp::nop;
    State dst = 0;

    bool operator==(const VassEdge&) const = default;
    auto operator<=>(const VassEdge&) const = default;
};

struct ResetVass {
    Alphabet alphabet;
    std::size_t num_counters = 0;
    std::size_t num_states = 0;
    State initial = 0;
    std::set<State> finals;
    std::vector<VassEdge> edges;

    State add_state();
    void add_edge(State src, Word label, std::size_t counter, CounterOp op, State dst);
    void normalize();

    bool operator==(const ResetVass&) const = default;
};

struct VassConfig {
    State state = 0;
    std::vector<std::uint64_t> counters;

    bool operator==(const VassConfig&) const = default;
    auto operator<=>(const VassConfig&) const = default;
};

/// Same state and componentwise <=; lo's upward closure then contains hi.
bool config_leq(const VassConfig& lo, const VassConfig& hi);

/// A finite antichain of minimal configurations representing the upward
/// closure of its elements.
class UpwardBasis {
  public:
    /// Inserts c unless it is already covered; removes elements that c
    /// strictly covers. Returns true when c became a new minimal element.
    bool insert(const VassConfig& c);
    bool covers(const VassConfig& c) const;
    const std::set<VassConfig>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }

  private:
    std::set<VassConfig> elems_;
};

/// Splits word labels so every edge either reads one letter with no counter
/// action or is silent (possibly with a counter action).
ResetVass letter_split_vass(const ResetVass& v);

/// All configurations reachable from c reading exactly w, within `budget`
/// expansions; the verdict is yes when the search saturated.
Budgeted<std::set<VassConfig>> step(const ResetVass& v, const VassConfig& c,
                                    const Word& w, std::uint64_t budget);

/// Product construction recognizing T(L(v)); t's input alphabet must equal
/// v's alphabet.
ResetVass apply_transduction(const Transducer& t, const ResetVass& v);

/// Product with 2n counters recognizing the intersection; the machine with
/// fewer counters is padded with unused ones.
ResetVass intersect(const ResetVass& v0, const ResetVass& v1);

ResetVass vass_union(const ResetVass& v0, const ResetVass& v1);

struct CoverStats {
    std::uint64_t iterations = 0;
    std::size_t basis_size = 0;
};

/// True iff some configuration reachable from the initial configuration
/// dominates `target`, by backward coverability over minimal bases.
bool is_coverable(const ResetVass& v, const VassConfig& target,
                  CoverStats* stats = nullptr);

/// True iff no final state is coverable with the all-zero counter vector.
bool is_empty(const ResetVass& v, CoverStats* stats = nullptr);

/// Exact membership via the product with the single-word recognizer.
bool member(const ResetVass& v, const Word& w);

/// The infinity construction: input labels erased, a fresh sink final state
/// reachable silently from every state, and decrement-and-read loops on it.
/// The result over {a} has finite language iff v's counters are bounded.
ResetVass boundedness_to_infinity(const ResetVass& v);

/// A zero-counter machine with the same language as the automaton.
ResetVass from_nfa(const Nfa& a);
/// The underlying automaton of a zero-counter machine (UsageError otherwise).
Nfa to_nfa(const ResetVass& v);

struct ForwardReach {
    std::set<VassConfig> configs;
    bool saturated = false;
};

/// Configurations reachable within max_steps edge applications, regardless
/// of input; saturated when no new configuration appears before the bound.
ForwardReach forward_reachable(const ResetVass& v, std::size_t max_steps);

}  // namespace langsep

#endif  // LANGSEP_RESET_VASS_HPP
