#include "langsep/kernel.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <map>

namespace langsep {

std::string to_string(Tri t) {
    switch (t) {
        case Tri::yes: return "yes";
        case Tri::no: return "no";
        default: return "unknown";
    }
}

// ---------------------------------------------------------------------------
// Alphabet / Word

Alphabet::Alphabet(std::vector<Symbol> symbols) : symbols_(std::move(symbols)) {
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
}

Alphabet::Alphabet(std::initializer_list<const char*> symbols) {
    for (const char* s : symbols) symbols_.emplace_back(s);
    std::sort(symbols_.begin(), symbols_.end());
    symbols_.erase(std::unique(symbols_.begin(), symbols_.end()), symbols_.end());
}

bool Alphabet::contains(const Symbol& s) const {
    return std::binary_search(symbols_.begin(), symbols_.end(), s);
}

Alphabet binary_alphabet() { return Alphabet{"0", "1"}; }
Alphabet unary_alphabet() { return Alphabet{"a"}; }

Word Word::chars(std::string_view text) {
    std::vector<Symbol> syms;
    syms.reserve(text.size());
    for (char c : text) syms.emplace_back(1, c);
    return Word(std::move(syms));
}

Word Word::operator+(const Word& rhs) const {
    std::vector<Symbol> syms = symbols_;
    syms.insert(syms.end(), rhs.symbols_.begin(), rhs.symbols_.end());
    return Word(std::move(syms));
}

bool Word::over(const Alphabet& a) const {
    return std::all_of(symbols_.begin(), symbols_.end(),
                       [&](const Symbol& s) { return a.contains(s); });
}

std::string Word::str() const {
    bool multi = std::any_of(symbols_.begin(), symbols_.end(),
                             [](const Symbol& s) { return s.size() != 1; });
    std::string out;
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        if (multi && i > 0) out += ' ';
        out += symbols_[i];
    }
    return out;
}

std::uint64_t nu_value(const Word& w) {
    std::uint64_t v = 0;
    for (const Symbol& s : w.symbols()) {
        if (s != "0" && s != "1") throw AlphabetError("nu_value: symbol '" + s + "' is not binary");
        if (v >> 63) throw ParameterError("nu_value: value exceeds 64 bits");
        v = 2 * v + (s == "1" ? 1 : 0);
    }
    return v;
}

// ---------------------------------------------------------------------------
// Nfa

State Nfa::add_state() { return num_states++; }

void Nfa::add_edge(State src, Word label, State dst) {
    edges.push_back(NfaEdge{src, std::move(label), dst});
}

void Nfa::normalize() {
    if (initial >= num_states) throw ParameterError("nfa: initial state out of range");
    for (State f : finals)
        if (f >= num_states) throw ParameterError("nfa: final state out of range");
    for (const NfaEdge& e : edges) {
        if (e.src >= num_states || e.dst >= num_states)
            throw ParameterError("nfa: edge endpoint out of range");
        if (!e.label.over(alphabet))
            throw AlphabetError("nfa: edge label not over the declared alphabet");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

Nfa nfa_letter_split(const Nfa& a) {
    Nfa out;
    out.alphabet = a.alphabet;
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.finals = a.finals;
    for (const NfaEdge& e : a.edges) {
        if (e.label.size() <= 1) {
            out.edges.push_back(e);
            continue;
        }
        State cur = e.src;
        for (std::size_t i = 0; i < e.label.size(); ++i) {
            State nxt = (i + 1 == e.label.size()) ? e.dst : out.add_state();
            out.add_edge(cur, Word({e.label[i]}), nxt);
            cur = nxt;
        }
    }
    out.normalize();
    return out;
}

namespace {

// Letter/epsilon adjacency built once per query.
struct LetterGraph {
    // eps[s] = epsilon successors; step[s] = (letter, successor)
    std::vector<std::vector<State>> eps;
    std::vector<std::vector<std::pair<Symbol, State>>> step;

    explicit LetterGraph(const Nfa& split) {
        eps.resize(split.num_states);
        step.resize(split.num_states);
        for (const NfaEdge& e : split.edges) {
            if (e.label.empty())
                eps[e.src].push_back(e.dst);
            else
                step[e.src].emplace_back(e.label[0], e.dst);
        }
    }

    std::set<State> closure(std::set<State> states) const {
        std::deque<State> work(states.begin(), states.end());
        while (!work.empty()) {
            State s = work.front();
            work.pop_front();
            for (State t : eps[s])
                if (states.insert(t).second) work.push_back(t);
        }
        return states;
    }

    std::set<State> advance(const std::set<State>& states, const Symbol& letter) const {
        std::set<State> next;
        for (State s : states)
            for (const auto& [l, t] : step[s])
                if (l == letter) next.insert(t);
        return closure(std::move(next));
    }
};

}  // namespace

bool nfa_member(const Nfa& a, const Word& w) {
    if (!w.over(a.alphabet)) return false;
    Nfa split = nfa_letter_split(a);
    LetterGraph g(split);
    std::set<State> cur = g.closure({split.initial});
    for (const Symbol& s : w.symbols()) {
        cur = g.advance(cur, s);
        if (cur.empty()) return false;
    }
    return std::any_of(cur.begin(), cur.end(),
                       [&](State q) { return split.finals.count(q) > 0; });
}

bool nfa_is_empty(const Nfa& a) {
    std::vector<bool> seen(a.num_states, false);
    std::deque<State> work{a.initial};
    seen[a.initial] = true;
    while (!work.empty()) {
        State s = work.front();
        work.pop_front();
        if (a.finals.count(s)) return false;
        for (const NfaEdge& e : a.edges)
            if (e.src == s && !seen[e.dst]) {
                seen[e.dst] = true;
                work.push_back(e.dst);
            }
    }
    return true;
}

std::set<Word> nfa_enumerate(const Nfa& a, std::size_t max_len) {
    std::set<Word> accepted;
    std::set<std::pair<State, Word>> seen;
    std::deque<std::pair<State, Word>> work;
    work.emplace_back(a.initial, Word());
    seen.emplace(a.initial, Word());
    while (!work.empty()) {
        auto [s, w] = work.front();
        work.pop_front();
        if (a.finals.count(s)) accepted.insert(w);
        for (const NfaEdge& e : a.edges) {
            if (e.src != s) continue;
            if (w.size() + e.label.size() > max_len) continue;
            Word nw = w + e.label;
            if (seen.emplace(e.dst, nw).second) work.emplace_back(e.dst, nw);
        }
    }
    return accepted;
}

Nfa nfa_intersect(const Nfa& a, const Nfa& b) {
    if (a.alphabet != b.alphabet)
        throw AlphabetError("nfa_intersect: alphabets differ");
    Nfa sa = nfa_letter_split(a), sb = nfa_letter_split(b);
    Nfa out;
    out.alphabet = a.alphabet;
    out.num_states = sa.num_states * sb.num_states;
    auto id = [&](State p, State q) { return p * sb.num_states + q; };
    out.initial = id(sa.initial, sb.initial);
    for (State p : sa.finals)
        for (State q : sb.finals) out.finals.insert(id(p, q));
    for (const NfaEdge& ea : sa.edges) {
        if (ea.label.empty()) {
            for (State q = 0; q < sb.num_states; ++q)
                out.add_edge(id(ea.src, q), Word(), id(ea.dst, q));
        } else {
            for (const NfaEdge& eb : sb.edges)
                if (eb.label == ea.label)
                    out.add_edge(id(ea.src, eb.src), ea.label, id(ea.dst, eb.dst));
        }
    }
    for (const NfaEdge& eb : sb.edges)
        if (eb.label.empty())
            for (State p = 0; p < sa.num_states; ++p)
                out.add_edge(id(p, eb.src), Word(), id(p, eb.dst));
    out.normalize();
    return out;
}

Nfa nfa_union(const Nfa& a, const Nfa& b) {
    if (a.alphabet != b.alphabet) throw AlphabetError("nfa_union: alphabets differ");
    Nfa out;
    out.alphabet = a.alphabet;
    out.num_states = 1 + a.num_states + b.num_states;
    out.initial = 0;
    auto ia = [&](State s) { return 1 + s; };
    auto ib = [&](State s) { return 1 + a.num_states + s; };
    out.add_edge(0, Word(), ia(a.initial));
    out.add_edge(0, Word(), ib(b.initial));
    for (const NfaEdge& e : a.edges) out.add_edge(ia(e.src), e.label, ia(e.dst));
    for (const NfaEdge& e : b.edges) out.add_edge(ib(e.src), e.label, ib(e.dst));
    for (State f : a.finals) out.finals.insert(ia(f));
    for (State f : b.finals) out.finals.insert(ib(f));
    out.normalize();
    return out;
}

Nfa nfa_determinize(const Nfa& a) {
    Nfa split = nfa_letter_split(a);
    LetterGraph g(split);
    Nfa out;
    out.alphabet = a.alphabet;

    std::map<std::set<State>, State> index;
    std::deque<std::set<State>> work;
    auto intern = [&](std::set<State> states) {
        auto it = index.find(states);
        if (it != index.end()) return it->second;
        State s = out.add_state();
        index.emplace(states, s);
        work.push_back(std::move(states));
        return s;
    };

    out.initial = intern(g.closure({split.initial}));
    while (!work.empty()) {
        std::set<State> cur = work.front();
        work.pop_front();
        State src = index.at(cur);
        bool fin = std::any_of(cur.begin(), cur.end(),
                               [&](State q) { return split.finals.count(q) > 0; });
        if (fin) out.finals.insert(src);
        for (const Symbol& letter : a.alphabet.symbols()) {
            State dst = intern(g.advance(cur, letter));
            out.add_edge(src, Word({letter}), dst);
        }
    }
    out.normalize();
    return out;
}

Nfa nfa_complement(const Nfa& a) {
    Nfa dfa = nfa_determinize(a);
    std::set<State> flipped;
    for (State s = 0; s < dfa.num_states; ++s)
        if (!dfa.finals.count(s)) flipped.insert(s);
    dfa.finals = std::move(flipped);
    return dfa;
}

Nfa nfa_reverse(const Nfa& a) {
    Nfa out;
    out.alphabet = a.alphabet;
    out.num_states = a.num_states + 1;  // fresh initial feeding old finals
    out.initial = a.num_states;
    out.finals = {a.initial};
    for (State f : a.finals) out.add_edge(out.initial, Word(), f);
    for (const NfaEdge& e : a.edges) {
        std::vector<Symbol> rev(e.label.symbols().rbegin(), e.label.symbols().rend());
        out.add_edge(e.dst, Word(std::move(rev)), e.src);
    }
    out.normalize();
    return out;
}

bool nfa_equivalent(const Nfa& a, const Nfa& b) {
    return nfa_is_empty(nfa_intersect(a, nfa_complement(b))) &&
           nfa_is_empty(nfa_intersect(b, nfa_complement(a)));
}

Nfa nfa_empty(Alphabet alphabet) {
    Nfa out;
    out.alphabet = std::move(alphabet);
    out.num_states = 1;
    out.initial = 0;
    return out;
}

Nfa nfa_universal(Alphabet alphabet) {
    Nfa out;
    out.alphabet = std::move(alphabet);
    out.num_states = 1;
    out.initial = 0;
    out.finals = {0};
    for (const Symbol& s : out.alphabet.symbols()) out.add_edge(0, Word({s}), 0);
    out.normalize();
    return out;
}

Nfa nfa_single_word(Alphabet alphabet, const Word& w) {
    Nfa out;
    out.alphabet = std::move(alphabet);
    out.num_states = 1;
    out.initial = 0;
    if (!w.over(out.alphabet))
        throw AlphabetError("nfa_single_word: word not over the alphabet");
    State cur = 0;
    for (const Symbol& s : w.symbols()) {
        State nxt = out.add_state();
        out.add_edge(cur, Word({s}), nxt);
        cur = nxt;
    }
    out.finals = {cur};
    out.normalize();
    return out;
}

Nfa nfa_unary_ap(std::uint64_t m, std::uint64_t per) {
    if (per == 0) throw ParameterError("nfa_unary_ap: period must be >= 1");
    Nfa out;
    out.alphabet = unary_alphabet();
    // Chain of m states, then a cycle of length per.
    out.num_states = m + per;
    out.initial = 0;
    Word a({Symbol("a")});
    for (std::uint64_t i = 0; i + 1 < m + per; ++i) out.add_edge(i, a, i + 1);
    out.add_edge(m + per - 1, a, m);
    out.finals = {m};
    out.normalize();
    return out;
}

Nfa nfa_unary_finite(const std::set<std::uint64_t>& ns) {
    Nfa out;
    out.alphabet = unary_alphabet();
    std::uint64_t mx = ns.empty() ? 0 : *ns.rbegin();
    out.num_states = mx + 1;
    out.initial = 0;
    Word a({Symbol("a")});
    for (std::uint64_t i = 0; i < mx; ++i) out.add_edge(i, a, i + 1);
    for (std::uint64_t n : ns) out.finals.insert(n);
    out.normalize();
    return out;
}

Nfa binary_reps(std::uint64_t n) {
    // Useful intermediate values are exactly n >> k (plus 0 for leading
    // zeros); any other value can never evolve into n again.
    std::set<std::uint64_t> useful{0};
    for (std::uint64_t v = n; v != 0; v >>= 1) useful.insert(v);
    std::map<std::uint64_t, State> id;
    Nfa out;
    out.alphabet = binary_alphabet();
    for (std::uint64_t v : useful) id[v] = out.add_state();
    out.initial = id.at(0);
    out.finals = {id.at(n)};
    for (std::uint64_t v : useful)
        for (std::uint64_t d = 0; d <= 1; ++d) {
            if (v > (UINT64_MAX - d) / 2) continue;
            std::uint64_t w = 2 * v + d;
            if (useful.count(w)) out.add_edge(id.at(v), Word({d ? "1" : "0"}), id.at(w));
        }
    out.normalize();
    return out;
}

bool UltimatelyPeriodicSet::contains(std::uint64_t n) const {
    if (n < threshold) return finite_part.count(n) > 0;
    return residues.count((n - threshold) % period) > 0;
}

std::vector<UltimatelyPeriodicSet::Progression> UltimatelyPeriodicSet::progressions()
    const {
    std::vector<Progression> out;
    for (std::uint64_t n : finite_part) out.push_back({n, 0});
    for (std::uint64_t r : residues) out.push_back({threshold + r, period});
    std::sort(out.begin(), out.end());
    return out;
}

UltimatelyPeriodicSet nfa_length_set(const Nfa& a) {
    Nfa split = nfa_letter_split(a);
    LetterGraph g(split);
    auto is_accepting = [&](const std::set<State>& states) {
        return std::any_of(states.begin(), states.end(),
                           [&](State q) { return split.finals.count(q) > 0; });
    };
    auto advance_any = [&](const std::set<State>& states) {
        std::set<State> next;
        for (State s : states)
            for (const auto& [l, t] : g.step[s]) next.insert(t);
        return g.closure(std::move(next));
    };

    std::map<std::set<State>, std::uint64_t> seen;
    std::vector<bool> accepted;
    std::set<State> cur = g.closure({split.initial});
    std::uint64_t n = 0;
    const std::uint64_t cap = 1 << 15;
    while (!seen.count(cur)) {
        seen.emplace(cur, n);
        accepted.push_back(is_accepting(cur));
        cur = advance_any(cur);
        if (++n > cap) throw ParameterError("nfa_length_set: state-set orbit too long");
    }
    UltimatelyPeriodicSet out;
    out.threshold = seen.at(cur);
    out.period = n - out.threshold;
    for (std::uint64_t i = 0; i < out.threshold; ++i)
        if (accepted[i]) out.finite_part.insert(i);
    for (std::uint64_t i = out.threshold; i < n; ++i)
        if (accepted[i]) out.residues.insert(i - out.threshold);
    return out;
}

Nfa ap_binary_dfa(std::uint64_t m, std::uint64_t p) {
    if (p == 0) throw ParameterError("ap_binary_dfa: period must be >= 1");
    // States: exact value v < m ("low" phase), then value mod p once >= m.
    Nfa out;
    out.alphabet = binary_alphabet();
    std::vector<State> low(m), high(p);
    for (std::uint64_t v = 0; v < m; ++v) low[v] = out.add_state();
    for (std::uint64_t r = 0; r < p; ++r) high[r] = out.add_state();
    auto target = [&](std::uint64_t v) {
        return v >= m ? high[v % p] : low[v];
    };
    out.initial = target(0);
    out.finals = {high[m % p]};
    for (std::uint64_t v = 0; v < m; ++v)
        for (std::uint64_t d = 0; d <= 1; ++d)
            out.add_edge(low[v], Word({d ? "1" : "0"}), target(2 * v + d));
    for (std::uint64_t r = 0; r < p; ++r)
        for (std::uint64_t d = 0; d <= 1; ++d)
            out.add_edge(high[r], Word({d ? "1" : "0"}), high[(2 * r + d) % p]);
    out.normalize();
    return out;
}

// ---------------------------------------------------------------------------
// Convolution words

Symbol tuple_symbol(const std::vector<Symbol>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += '|';
        out += parts[i];
    }
    return out;
}

std::vector<Symbol> split_tuple(const Symbol& s, std::size_t arity) {
    std::vector<Symbol> parts;
    std::string cur;
    for (char c : s) {
        if (c == '|') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != arity)
        throw FormatError("split_tuple: '" + s + "' does not have arity " +
                          std::to_string(arity));
    return parts;
}

Alphabet tuple_alphabet(const Alphabet& base, std::size_t arity) {
    if (arity == 0) throw ParameterError("tuple_alphabet: arity must be >= 1");
    std::vector<Symbol> opts = base.symbols();
    opts.push_back(kPad);
    std::vector<Symbol> tuples;
    std::vector<std::size_t> idx(arity, 0);
    while (true) {
        std::vector<Symbol> parts;
        bool all_pad = true;
        for (std::size_t i = 0; i < arity; ++i) {
            parts.push_back(opts[idx[i]]);
            all_pad = all_pad && parts.back() == kPad;
        }
        if (!all_pad) tuples.push_back(tuple_symbol(parts));
        std::size_t i = 0;
        for (; i < arity; ++i) {
            if (++idx[i] < opts.size()) break;
            idx[i] = 0;
        }
        if (i == arity) break;
    }
    return Alphabet(std::move(tuples));
}

ConvolutionWord convolve(const std::vector<Word>& ws) {
    if (ws.empty()) throw ParameterError("convolve: arity must be >= 1");
    ConvolutionWord cw;
    cw.arity = ws.size();
    std::size_t len = 0;
    for (const Word& w : ws) len = std::max(len, w.size());
    for (std::size_t j = 0; j < len; ++j) {
        std::vector<Symbol> col;
        col.reserve(cw.arity);
        for (const Word& w : ws) col.push_back(j < w.size() ? w[j] : kPad);
        cw.columns.push_back(std::move(col));
    }
    return cw;
}

std::vector<Word> deconvolve(const ConvolutionWord& cw) {
    std::vector<Word> ws(cw.arity);
    for (const auto& col : cw.columns)
        for (std::size_t i = 0; i < cw.arity; ++i)
            if (col[i] != kPad) ws[i].push_back(col[i]);
    return ws;
}

Word cw_to_word(const ConvolutionWord& cw) {
    Word w;
    for (const auto& col : cw.columns) w.push_back(tuple_symbol(col));
    return w;
}

ConvolutionWord word_to_cw(const Word& w, std::size_t arity) {
    ConvolutionWord cw;
    cw.arity = arity;
    for (const Symbol& s : w.symbols()) cw.columns.push_back(split_tuple(s, arity));
    return cw;
}

// ---------------------------------------------------------------------------
// Semilinear sets

namespace {

bool linear_member_rec(const LinearSet& ls, std::vector<std::uint64_t> rest,
                       std::size_t i) {
    if (std::all_of(rest.begin(), rest.end(), [](std::uint64_t x) { return x == 0; }))
        return true;
    if (i >= ls.periods.size()) return false;
    const auto& p = ls.periods[i];
    // Max feasible multiplicity of period i, then recurse over the rest.
    std::uint64_t max_k = UINT64_MAX;
    bool zero = true;
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (p[j] == 0) continue;
        zero = false;
        max_k = std::min(max_k, rest[j] / p[j]);
    }
    if (zero) return linear_member_rec(ls, rest, i + 1);
    for (std::uint64_t k = 0; k <= max_k; ++k) {
        std::vector<std::uint64_t> next = rest;
        for (std::size_t j = 0; j < p.size(); ++j) next[j] -= k * p[j];
        if (linear_member_rec(ls, std::move(next), i + 1)) return true;
    }
    return false;
}

}  // namespace

bool semilinear_member(const SemilinearSet& s, const std::vector<std::uint64_t>& v) {
    if (v.size() != s.arity) throw ParameterError("semilinear_member: arity mismatch");
    for (const LinearSet& ls : s.components) {
        bool fits = true;
        std::vector<std::uint64_t> rest(v.size());
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < ls.base[j]) {
                fits = false;
                break;
            }
            rest[j] = v[j] - ls.base[j];
        }
        if (fits && linear_member_rec(ls, std::move(rest), 0)) return true;
    }
    return false;
}

namespace {

using Vec2 = std::array<std::uint64_t, 2>;

struct SimpleCycle {
    Vec2 parikh;
    std::uint64_t states;  // bitmask
};

std::uint64_t letter_index(const Nfa& a, const Symbol& s) {
    const auto& syms = a.alphabet.symbols();
    return static_cast<std::uint64_t>(
        std::find(syms.begin(), syms.end(), s) - syms.begin());
}

}  // namespace

SemilinearSet parikh_pair(const Nfa& input) {
    if (input.alphabet.size() != 2)
        throw ParameterError("parikh_pair: alphabet must have exactly two letters");
    Nfa a = nfa_letter_split(input);
    if (a.num_states > 24)
        throw ParameterError("parikh_pair: too many states after letter split");

    // Per-state adjacency with letter counts per edge.
    struct Arc {
        State dst;
        Vec2 add;
    };
    std::vector<std::vector<Arc>> adj(a.num_states);
    for (const NfaEdge& e : a.edges) {
        Vec2 add{0, 0};
        if (!e.label.empty()) add[letter_index(a, e.label[0])] = 1;
        adj[e.src].push_back({e.dst, add});
    }

    // All simple accepting paths (no repeated state), deduplicated by
    // (parikh, visited-state set).
    std::set<std::pair<Vec2, std::uint64_t>> paths;
    {
        struct Frame {
            State at;
            Vec2 parikh;
            std::uint64_t visited;
        };
        std::vector<Frame> stack{{a.initial, {0, 0}, 1ull << a.initial}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            if (a.finals.count(f.at)) paths.insert({f.parikh, f.visited});
            for (const Arc& arc : adj[f.at]) {
                if (f.visited & (1ull << arc.dst)) continue;
                stack.push_back({arc.dst,
                                 {f.parikh[0] + arc.add[0], f.parikh[1] + arc.add[1]},
                                 f.visited | (1ull << arc.dst)});
            }
        }
    }

    // All simple cycles, deduplicated by (parikh, state set).
    std::set<std::pair<Vec2, std::uint64_t>> cycle_keys;
    for (State root = 0; root < a.num_states; ++root) {
        struct Frame {
            State at;
            Vec2 parikh;
            std::uint64_t visited;
        };
        std::vector<Frame> stack{{root, {0, 0}, 1ull << root}};
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            for (const Arc& arc : adj[f.at]) {
                if (arc.dst == root) {
                    cycle_keys.insert({{f.parikh[0] + arc.add[0], f.parikh[1] + arc.add[1]},
                                       f.visited});
                } else if (arc.dst > root && !(f.visited & (1ull << arc.dst))) {
                    // Only cycles whose minimal state is the root, so each
                    // cycle is found once.
                    stack.push_back({arc.dst,
                                     {f.parikh[0] + arc.add[0], f.parikh[1] + arc.add[1]},
                                     f.visited | (1ull << arc.dst)});
                }
            }
        }
    }
    std::vector<SimpleCycle> cycles;
    for (const auto& [vec, states] : cycle_keys) cycles.push_back({vec, states});
    if (cycles.size() > 24)
        throw ParameterError("parikh_pair: too many simple cycles");

    // Enumerate attachable cycle subsets per path: a subset is attachable
    // when every cycle connects to the path through shared states, possibly
    // via other chosen cycles.
    std::set<std::pair<Vec2, std::set<Vec2>>> component_keys;
    for (const auto& [pvec, pstates] : paths) {
        std::set<std::uint32_t> seen_masks;
        struct Frame {
            std::uint32_t mask;
            std::uint64_t states;
            Vec2 base;
        };
        std::vector<Frame> stack{{0u, pstates, pvec}};
        seen_masks.insert(0u);
        while (!stack.empty()) {
            Frame f = stack.back();
            stack.pop_back();
            std::set<Vec2> periods;
            for (std::size_t i = 0; i < cycles.size(); ++i)
                if ((f.mask >> i) & 1u) {
                    if (cycles[i].parikh != Vec2{0, 0}) periods.insert(cycles[i].parikh);
                }
            component_keys.insert({f.base, periods});
            for (std::size_t i = 0; i < cycles.size(); ++i) {
                if ((f.mask >> i) & 1u) continue;
                if (!(cycles[i].states & f.states)) continue;
                std::uint32_t nm = f.mask | (1u << i);
                if (!seen_masks.insert(nm).second) continue;
                stack.push_back({nm, f.states | cycles[i].states,
                                 {f.base[0] + cycles[i].parikh[0],
                                  f.base[1] + cycles[i].parikh[1]}});
            }
            if (seen_masks.size() > (1u << 20))
                throw ParameterError("parikh_pair: cycle structure too large");
        }
    }

    SemilinearSet out;
    out.arity = 2;
    for (const auto& [base, periods] : component_keys) {
        LinearSet ls;
        ls.base = {base[0], base[1]};
        for (const Vec2& p : periods) ls.periods.push_back({p[0], p[1]});
        out.components.push_back(std::move(ls));
    }
    return out;
}

}  // namespace langsep
