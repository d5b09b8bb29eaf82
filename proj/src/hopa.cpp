#include "langsep/hopa.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <limits>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace langsep {

// ---------------------------------------------------------------------------
// Stacks

namespace {

std::size_t hash_mix(std::size_t h, std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

}  // namespace

HStackPtr HStack::leaf(Symbol letter) {
    auto s = std::shared_ptr<HStack>(new HStack());
    s->order_ = 0;
    s->hash_ = hash_mix(0, std::hash<Symbol>{}(letter));
    s->letter_ = std::move(letter);
    return s;
}

HStackPtr HStack::nested(std::size_t order, const Symbol& letter) {
    HStackPtr cur = leaf(letter);
    for (std::size_t i = 1; i <= order; ++i) cur = make(i, {cur});
    return cur;
}

HStackPtr HStack::make(std::size_t order, std::vector<HStackPtr> entries) {
    if (order == 0) throw ParameterError("hstack: order-0 stacks are letters");
    if (entries.empty()) throw ParameterError("hstack: level must be nonempty");
    std::size_t h = hash_mix(0x5157, order);
    for (const HStackPtr& e : entries) {
        if (!e || e->order() != order - 1)
            throw ParameterError("hstack: entry order mismatch");
        h = hash_mix(h, e->hash());
    }
    auto s = std::shared_ptr<HStack>(new HStack());
    s->order_ = order;
    s->entries_ = std::move(entries);
    s->hash_ = h;
    return s;
}

Symbol HStack::top() const {
    const HStack* cur = this;
    while (cur->order_ > 0) cur = cur->entries_.back().get();
    return cur->letter_;
}

bool HStack::equals(const HStack& other) const {
    if (this == &other) return true;
    if (hash_ != other.hash_ || order_ != other.order_) return false;
    if (order_ == 0) return letter_ == other.letter_;
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (!entries_[i]->equals(*other.entries_[i])) return false;
    return true;
}

std::string to_string(const Instr& instr) {
    switch (instr.kind) {
        case Instr::Kind::push: return "push" + std::to_string(instr.level);
        case Instr::Kind::pop: return "pop" + std::to_string(instr.level);
        default: return "rew:" + instr.letter;
    }
}

std::optional<HStackPtr> stack_exec(const HStackPtr& s, const Instr& instr) {
    const std::size_t k = s->order();
    if (k == 0) return std::nullopt;
    const auto& es = s->entries();
    auto replace_top = [&](HStackPtr t) {
        std::vector<HStackPtr> next(es.begin(), es.end() - 1);
        next.push_back(std::move(t));
        return HStack::make(k, std::move(next));
    };
    switch (instr.kind) {
        case Instr::Kind::rew: {
            if (k == 1) return replace_top(HStack::leaf(instr.letter));
            auto inner = stack_exec(es.back(), instr);
            if (!inner) return std::nullopt;
            return replace_top(std::move(*inner));
        }
        case Instr::Kind::push: {
            if (instr.level > k || instr.level == 0) return std::nullopt;
            if (instr.level == k) {
                std::vector<HStackPtr> next(es.begin(), es.end());
                next.push_back(es.back());
                return HStack::make(k, std::move(next));
            }
            auto inner = stack_exec(es.back(), instr);
            if (!inner) return std::nullopt;
            return replace_top(std::move(*inner));
        }
        case Instr::Kind::pop: {
            if (instr.level > k || instr.level == 0) return std::nullopt;
            if (instr.level == k) {
                if (es.size() < 2) return std::nullopt;
                return HStack::make(k, std::vector<HStackPtr>(es.begin(), es.end() - 1));
            }
            auto inner = stack_exec(es.back(), instr);
            if (!inner) return std::nullopt;
            return replace_top(std::move(*inner));
        }
    }
    return std::nullopt;
}

std::optional<HStackPtr> stack_exec(const HStackPtr& s, const std::vector<Instr>& seq) {
    HStackPtr cur = s;
    for (const Instr& i : seq) {
        auto next = stack_exec(cur, i);
        if (!next) return std::nullopt;
        cur = std::move(*next);
    }
    return cur;
}

// ---------------------------------------------------------------------------
// Machines

State Hopa::add_state() { return num_states++; }

void Hopa::add_edge(State src, Word read, std::optional<Symbol> top,
                    std::vector<Instr> instrs, State dst) {
    edges.push_back(HopaEdge{src, std::move(read), std::move(top), std::move(instrs), dst});
}

void Hopa::normalize() {
    if (order == 0) throw ParameterError("hopa: order must be >= 1");
    if (!stack_alphabet.contains(bottom))
        throw ParameterError("hopa: bottom symbol not in the stack alphabet");
    if (initial >= num_states) throw ParameterError("hopa: initial out of range");
    for (State f : finals)
        if (f >= num_states) throw ParameterError("hopa: final out of range");
    for (const HopaEdge& e : edges) {
        if (e.src >= num_states || e.dst >= num_states)
            throw ParameterError("hopa: edge endpoint out of range");
        if (!e.read.over(input))
            throw AlphabetError("hopa: read label not over the input alphabet");
        if (e.top && !stack_alphabet.contains(*e.top))
            throw ParameterError("hopa: top guard not in the stack alphabet");
        for (const Instr& i : e.instrs) {
            if (i.kind == Instr::Kind::rew) {
                if (!stack_alphabet.contains(i.letter))
                    throw ParameterError("hopa: rewrite letter not in the stack alphabet");
            } else if (i.level == 0 || i.level > order) {
                throw ParameterError("hopa: instruction level out of range");
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

namespace {

std::size_t word_hash(const Word& w) {
    std::size_t h = 0x77;
    for (const Symbol& s : w.symbols()) h = hash_mix(h, std::hash<Symbol>{}(s));
    return h;
}

// Search node keyed on (state, stack, word-or-position).
struct SearchKey {
    State state;
    HStackPtr stack;
    std::size_t aux_hash;
};

struct NodeSetHasher {
    std::size_t operator()(const std::tuple<State, HStackPtr, std::size_t>& k) const {
        return hash_mix(hash_mix(std::get<0>(k), std::get<1>(k)->hash()), std::get<2>(k));
    }
};

Hopa read_letter_split(const Hopa& a) {
    Hopa out = a;
    out.edges.clear();
    for (const HopaEdge& e : a.edges) {
        if (e.read.size() <= 1) {
            out.edges.push_back(e);
            continue;
        }
        // Letters first through fresh states, instructions on the last step;
        // the top letter is unchanged until then, so the guard carries over.
        State cur = e.src;
        for (std::size_t i = 0; i < e.read.size(); ++i) {
            State nxt = (i + 1 == e.read.size()) ? e.dst : out.add_state();
            std::vector<Instr> instrs = (i + 1 == e.read.size()) ? e.instrs : std::vector<Instr>{};
            out.add_edge(cur, Word({e.read[i]}), e.top, std::move(instrs), nxt);
            cur = nxt;
        }
    }
    out.normalize();
    return out;
}

Hopa single_final(const Hopa& a) {
    if (a.finals.size() == 1) return a;
    Hopa out = a;
    State qf = out.add_state();
    for (State f : a.finals) out.add_edge(f, Word(), std::nullopt, {}, qf);
    out.finals = {qf};
    out.normalize();
    return out;
}

}  // namespace

HopaRunResult run(const Hopa& a, std::uint64_t budget, std::size_t max_word_len) {
    if (budget == 0) throw ParameterError("run: budget must be >= 1");
    HopaRunResult result;

    struct Node {
        State state;
        HStackPtr stack;
        Word word;
        std::int64_t parent;
        Word chunk;
    };
    std::vector<Node> nodes;
    // Dedup on (state, stack, word) with structural stack comparison.
    struct Key {
        State state;
        HStackPtr stack;
        const Word* word;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return hash_mix(hash_mix(k.state, k.stack->hash()), word_hash(*k.word));
        }
    };
    struct KeyEq {
        bool operator()(const Key& x, const Key& y) const {
            return x.state == y.state && *x.word == *y.word && x.stack->equals(*y.stack);
        }
    };
    std::unordered_set<Key, KeyHash, KeyEq> seen;

    auto trace_of = [&](std::int64_t idx) {
        std::vector<HopaTraceStep> steps;
        for (std::int64_t i = idx; i >= 0; i = nodes[i].parent)
            steps.push_back(HopaTraceStep{nodes[i].state, nodes[i].stack, nodes[i].chunk});
        std::reverse(steps.begin(), steps.end());
        return steps;
    };

    nodes.push_back(Node{a.initial, HStack::nested(a.order, a.bottom), Word(), -1, Word()});
    seen.insert(Key{nodes[0].state, nodes[0].stack, &nodes[0].word});
    std::deque<std::size_t> work{0};
    std::uint64_t used = 0;
    while (!work.empty()) {
        if (used++ >= budget) {
            result.saturated = Tri::unknown;
            return result;
        }
        std::size_t idx = work.front();
        work.pop_front();
        if (a.finals.count(nodes[idx].state) && !result.accepted.count(nodes[idx].word))
            result.accepted.emplace(nodes[idx].word, trace_of(static_cast<std::int64_t>(idx)));
        const Node cur = nodes[idx];  // copy: nodes may reallocate below
        for (const HopaEdge& e : a.edges) {
            if (e.src != cur.state) continue;
            if (cur.word.size() + e.read.size() > max_word_len) continue;
            if (e.top && *e.top != cur.stack->top()) continue;
            auto next_stack = stack_exec(cur.stack, e.instrs);
            if (!next_stack) continue;
            Node nxt{e.dst, std::move(*next_stack), cur.word + e.read,
                     static_cast<std::int64_t>(idx), e.read};
            Key key{nxt.state, nxt.stack, &nxt.word};
            if (seen.count(key)) continue;
            nodes.push_back(std::move(nxt));
            seen.insert(Key{nodes.back().state, nodes.back().stack, &nodes.back().word});
            work.push_back(nodes.size() - 1);
        }
    }
    result.saturated = Tri::yes;
    return result;
}

// ---------------------------------------------------------------------------
// Order-1 grammar analysis. An order-1 machine is turned into a context-free
// grammar over scope nonterminals: [p,g,r] derives the input read while the
// current top symbol g is eventually popped, arriving in r, and [p,g] the
// input read when that occurrence is never popped and the run ends in a
// final state.

namespace {

struct Cfg {
    struct Sym {
        bool term = false;
        Symbol t;
        std::size_t nt = 0;
    };
    using Rhs = std::vector<Sym>;
    std::vector<std::vector<Rhs>> rules;
    std::size_t start = 0;

    std::size_t add_nt() {
        rules.emplace_back();
        return rules.size() - 1;
    }
};

struct MicroEdge {
    State src;
    Word read;
    Symbol guard;
    enum class Act { none, rew, push, pop } act = Act::none;
    Symbol rew_to;
    State dst;
};

struct MicroMachine {
    std::size_t num_states = 0;
    std::set<State> finals;
    State initial = 0;
    Symbol bottom;
    std::vector<MicroEdge> edges;
    std::vector<State> pop_targets;
};

MicroMachine micro_split(const Hopa& a) {
    if (a.order != 1) throw UsageError("grammar analysis requires an order-1 machine");
    MicroMachine m;
    m.num_states = a.num_states;
    m.finals = a.finals;
    m.initial = a.initial;
    m.bottom = a.bottom;
    const auto& gamma = a.stack_alphabet.symbols();

    // Expands one instruction chain, tracking the top letter where known and
    // branching over the stack alphabet where it is not.
    std::function<void(const HopaEdge&, State, std::size_t, std::optional<Symbol>, bool)>
        build = [&](const HopaEdge& e, State cur, std::size_t idx,
                    std::optional<Symbol> known, bool first) {
            const bool last = idx + 1 == e.instrs.size();
            const Instr& in = e.instrs[idx];
            Word rd = first ? e.read : Word();
            std::vector<Symbol> guards =
                known ? std::vector<Symbol>{*known} : gamma;
            for (const Symbol& g : guards) {
                MicroEdge me;
                me.src = cur;
                me.read = rd;
                me.guard = g;
                me.dst = last ? e.dst : m.num_states;
                std::optional<Symbol> after;
                switch (in.kind) {
                    case Instr::Kind::rew:
                        me.act = MicroEdge::Act::rew;
                        me.rew_to = in.letter;
                        after = in.letter;
                        break;
                    case Instr::Kind::push:
                        me.act = MicroEdge::Act::push;
                        after = g;
                        break;
                    case Instr::Kind::pop:
                        me.act = MicroEdge::Act::pop;
                        after = std::nullopt;
                        break;
                }
                if (!last) ++m.num_states;
                m.edges.push_back(me);
                if (!last) build(e, me.dst, idx + 1, after, false);
            }
        };

    for (const HopaEdge& e : a.edges) {
        std::vector<Symbol> guards = e.top ? std::vector<Symbol>{*e.top} : gamma;
        if (e.instrs.empty()) {
            for (const Symbol& g : guards)
                m.edges.push_back(MicroEdge{e.src, e.read, g, MicroEdge::Act::none, {}, e.dst});
            continue;
        }
        for (const Symbol& g : guards) build(e, e.src, 0, g, true);
    }
    for (const MicroEdge& e : m.edges)
        if (e.act == MicroEdge::Act::pop) m.pop_targets.push_back(e.dst);
    std::sort(m.pop_targets.begin(), m.pop_targets.end());
    m.pop_targets.erase(std::unique(m.pop_targets.begin(), m.pop_targets.end()),
                        m.pop_targets.end());
    return m;
}

Cfg order1_grammar(const Hopa& a) {
    MicroMachine m = micro_split(a);

    // Adjacency by (src, guard).
    std::map<std::pair<State, Symbol>, std::vector<const MicroEdge*>> adj;
    for (const MicroEdge& e : m.edges) adj[{e.src, e.guard}].push_back(&e);

    Cfg cfg;
    std::map<std::tuple<State, Symbol, State>, std::size_t> pop_ids;
    std::map<std::pair<State, Symbol>, std::size_t> inf_ids;
    std::deque<std::pair<bool, std::tuple<State, Symbol, State>>> work;  // (is_pop, key)

    auto inf_id = [&](State p, const Symbol& g) {
        auto it = inf_ids.find({p, g});
        if (it != inf_ids.end()) return it->second;
        std::size_t id = cfg.add_nt();
        inf_ids.emplace(std::make_pair(p, g), id);
        work.push_back({false, {p, g, 0}});
        return id;
    };
    auto pop_id = [&](State p, const Symbol& g, State r) {
        auto it = pop_ids.find({p, g, r});
        if (it != pop_ids.end()) return it->second;
        std::size_t id = cfg.add_nt();
        pop_ids.emplace(std::make_tuple(p, g, r), id);
        work.push_back({true, {p, g, r}});
        return id;
    };
    auto terms = [](const Word& w) {
        Cfg::Rhs rhs;
        for (const Symbol& s : w.symbols()) rhs.push_back({true, s, 0});
        return rhs;
    };

    cfg.start = cfg.add_nt();
    cfg.rules[cfg.start].push_back({Cfg::Sym{false, {}, inf_id(m.initial, m.bottom)}});

    while (!work.empty()) {
        auto [is_pop, key] = work.front();
        work.pop_front();
        auto [p, g, r] = key;
        if (!is_pop) {
            std::size_t lhs = inf_ids.at({p, g});
            if (m.finals.count(p)) cfg.rules[lhs].push_back({});
            auto it = adj.find({p, g});
            if (it == adj.end()) continue;
            for (const MicroEdge* e : it->second) {
                switch (e->act) {
                    case MicroEdge::Act::none: {
                        auto rhs = terms(e->read);
                        rhs.push_back({false, {}, inf_id(e->dst, g)});
                        cfg.rules[lhs].push_back(std::move(rhs));
                        break;
                    }
                    case MicroEdge::Act::rew: {
                        auto rhs = terms(e->read);
                        rhs.push_back({false, {}, inf_id(e->dst, e->rew_to)});
                        cfg.rules[lhs].push_back(std::move(rhs));
                        break;
                    }
                    case MicroEdge::Act::push: {
                        auto rhs = terms(e->read);
                        rhs.push_back({false, {}, inf_id(e->dst, g)});
                        cfg.rules[lhs].push_back(std::move(rhs));
                        for (State s : m.pop_targets) {
                            auto rhs2 = terms(e->read);
                            rhs2.push_back({false, {}, pop_id(e->dst, g, s)});
                            rhs2.push_back({false, {}, inf_id(s, g)});
                            cfg.rules[lhs].push_back(std::move(rhs2));
                        }
                        break;
                    }
                    case MicroEdge::Act::pop:
                        break;  // popping ends this scope; no never-pop rule
                }
            }
        } else {
            std::size_t lhs = pop_ids.at({p, g, r});
            auto it = adj.find({p, g});
            if (it == adj.end()) continue;
            for (const MicroEdge* e : it->second) {
                switch (e->act) {
                    case MicroEdge::Act::none: {
                        auto rhs = terms(e->read);
                        rhs.push_back({false, {}, pop_id(e->dst, g, r)});
                        cfg.rules[lhs].push_back(std::move(rhs));
                        break;
                    }
                    case MicroEdge::Act::rew: {
                        auto rhs = terms(e->read);
                        rhs.push_back({false, {}, pop_id(e->dst, e->rew_to, r)});
                        cfg.rules[lhs].push_back(std::move(rhs));
                        break;
                    }
                    case MicroEdge::Act::push: {
                        for (State s : m.pop_targets) {
                            auto rhs = terms(e->read);
                            rhs.push_back({false, {}, pop_id(e->dst, g, s)});
                            rhs.push_back({false, {}, pop_id(s, g, r)});
                            cfg.rules[lhs].push_back(std::move(rhs));
                        }
                        break;
                    }
                    case MicroEdge::Act::pop:
                        if (e->dst == r) cfg.rules[lhs].push_back(terms(e->read));
                        break;
                }
            }
        }
    }
    return cfg;
}

std::vector<bool> cfg_productive(const Cfg& cfg) {
    std::vector<bool> prod(cfg.rules.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t nt = 0; nt < cfg.rules.size(); ++nt) {
            if (prod[nt]) continue;
            for (const auto& rhs : cfg.rules[nt]) {
                bool all = true;
                for (const auto& sym : rhs)
                    if (!sym.term && !prod[sym.nt]) {
                        all = false;
                        break;
                    }
                if (all) {
                    prod[nt] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return prod;
}

// Shortest derivable terminal string of the start symbol, if any. Lengths
// settle by synchronous rounds, which also yields a cycle-free witness.
std::optional<Word> cfg_shortest(const Cfg& cfg) {
    const std::uint64_t inf = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> len(cfg.rules.size(), inf);
    std::vector<std::size_t> round(cfg.rules.size(), 0);
    std::vector<const Cfg::Rhs*> best(cfg.rules.size(), nullptr);
    bool changed = true;
    std::size_t r = 0;
    while (changed) {
        changed = false;
        ++r;
        std::vector<std::uint64_t> next = len;
        for (std::size_t nt = 0; nt < cfg.rules.size(); ++nt) {
            for (const auto& rhs : cfg.rules[nt]) {
                std::uint64_t total = 0;
                bool ok = true;
                for (const auto& sym : rhs) {
                    if (sym.term) {
                        total += 1;
                    } else if (len[sym.nt] == inf) {
                        ok = false;
                        break;
                    } else {
                        total += len[sym.nt];
                    }
                }
                if (ok && total < next[nt]) {
                    next[nt] = total;
                    best[nt] = &rhs;
                    round[nt] = r;
                    changed = true;
                }
            }
        }
        len = std::move(next);
    }
    if (len[cfg.start] == inf) return std::nullopt;
    Word out;
    std::function<void(std::size_t)> emit = [&](std::size_t nt) {
        for (const auto& sym : *best[nt]) {
            if (sym.term)
                out.push_back(sym.t);
            else
                emit(sym.nt);
        }
    };
    emit(cfg.start);
    return out;
}

bool cfg_finite(const Cfg& cfg) {
    std::vector<bool> prod = cfg_productive(cfg);
    if (!prod[cfg.start]) return true;

    // Epsilon elimination over rules with at most two nonterminals.
    std::vector<bool> nullable(cfg.rules.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t nt = 0; nt < cfg.rules.size(); ++nt) {
            if (nullable[nt]) continue;
            for (const auto& rhs : cfg.rules[nt]) {
                bool all = std::all_of(rhs.begin(), rhs.end(), [&](const Cfg::Sym& s) {
                    return !s.term && nullable[s.nt];
                });
                if (all) {
                    nullable[nt] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<std::vector<Cfg::Rhs>> rules(cfg.rules.size());
    for (std::size_t nt = 0; nt < cfg.rules.size(); ++nt) {
        for (const auto& rhs : cfg.rules[nt]) {
            std::vector<std::size_t> optional_at;
            for (std::size_t i = 0; i < rhs.size(); ++i)
                if (!rhs[i].term && nullable[rhs[i].nt]) optional_at.push_back(i);
            const std::size_t variants = std::size_t{1} << optional_at.size();
            for (std::size_t mask = 0; mask < variants; ++mask) {
                Cfg::Rhs v;
                for (std::size_t i = 0; i < rhs.size(); ++i) {
                    auto pos = std::find(optional_at.begin(), optional_at.end(), i);
                    if (pos != optional_at.end() &&
                        (mask >> (pos - optional_at.begin())) & 1)
                        continue;
                    v.push_back(rhs[i]);
                }
                if (!v.empty()) rules[nt].push_back(std::move(v));
            }
        }
    }

    // Unit-pair closure, then only non-unit rules survive.
    const std::size_t n = rules.size();
    std::vector<std::set<std::size_t>> unit(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::deque<std::size_t> work{a};
        unit[a].insert(a);
        while (!work.empty()) {
            std::size_t b = work.front();
            work.pop_front();
            for (const auto& rhs : rules[b])
                if (rhs.size() == 1 && !rhs[0].term && unit[a].insert(rhs[0].nt).second)
                    work.push_back(rhs[0].nt);
        }
    }
    std::vector<std::vector<Cfg::Rhs>> proper(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b : unit[a])
            for (const auto& rhs : rules[b])
                if (!(rhs.size() == 1 && !rhs[0].term)) proper[a].push_back(rhs);

    // Trim: productive and reachable in the proper grammar.
    std::vector<bool> prod2(n, false);
    changed = true;
    while (changed) {
        changed = false;
        for (std::size_t nt = 0; nt < n; ++nt) {
            if (prod2[nt]) continue;
            for (const auto& rhs : proper[nt]) {
                bool all = std::all_of(rhs.begin(), rhs.end(), [&](const Cfg::Sym& s) {
                    return s.term || prod2[s.nt];
                });
                if (all) {
                    prod2[nt] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<bool> reach(n, false);
    std::deque<std::size_t> work{cfg.start};
    reach[cfg.start] = true;
    while (!work.empty()) {
        std::size_t nt = work.front();
        work.pop_front();
        for (const auto& rhs : proper[nt]) {
            bool usable = std::all_of(rhs.begin(), rhs.end(), [&](const Cfg::Sym& s) {
                return s.term || prod2[s.nt];
            });
            if (!usable) continue;
            for (const auto& sym : rhs)
                if (!sym.term && !reach[sym.nt]) {
                    reach[sym.nt] = true;
                    work.push_back(sym.nt);
                }
        }
    }

    // A cycle among useful nonterminals pumps a nonempty context.
    std::vector<int> color(n, 0);
    std::function<bool(std::size_t)> has_cycle = [&](std::size_t nt) -> bool {
        color[nt] = 1;
        for (const auto& rhs : proper[nt]) {
            bool usable = std::all_of(rhs.begin(), rhs.end(), [&](const Cfg::Sym& s) {
                return s.term || (prod2[s.nt] && reach[s.nt]);
            });
            if (!usable) continue;
            for (const auto& sym : rhs) {
                if (sym.term) continue;
                if (color[sym.nt] == 1) return true;
                if (color[sym.nt] == 0 && has_cycle(sym.nt)) return true;
            }
        }
        color[nt] = 2;
        return false;
    };
    for (std::size_t nt = 0; nt < n; ++nt)
        if (reach[nt] && prod2[nt] && color[nt] == 0 && has_cycle(nt)) return false;
    return true;
}

}  // namespace

HopaEmptiness hopa_is_empty(const Hopa& a, std::uint64_t budget) {
    if (a.order == 1) {
        Cfg cfg = order1_grammar(a);
        auto witness = cfg_shortest(cfg);
        if (!witness) return {Tri::yes, std::nullopt};
        return {Tri::no, std::move(witness)};
    }
    // Budgeted saturation search over (state, stack) configurations.
    if (budget == 0) throw ParameterError("hopa_is_empty: budget must be >= 1");
    struct Node {
        State state;
        HStackPtr stack;
        std::int64_t parent;
        Word chunk;
    };
    std::vector<Node> nodes{{a.initial, HStack::nested(a.order, a.bottom), -1, Word()}};
    struct Key {
        State state;
        HStackPtr stack;
    };
    struct KeyHash {
        std::size_t operator()(const Key& k) const {
            return hash_mix(k.state, k.stack->hash());
        }
    };
    struct KeyEq {
        bool operator()(const Key& x, const Key& y) const {
            return x.state == y.state && x.stack->equals(*y.stack);
        }
    };
    std::unordered_set<Key, KeyHash, KeyEq> seen{{nodes[0].state, nodes[0].stack}};
    std::deque<std::size_t> work{0};
    std::uint64_t used = 0;
    while (!work.empty()) {
        if (used++ >= budget) return {Tri::unknown, std::nullopt};
        std::size_t idx = work.front();
        work.pop_front();
        if (a.finals.count(nodes[idx].state)) {
            Word w;
            std::vector<const Word*> chunks;
            for (std::int64_t i = static_cast<std::int64_t>(idx); i >= 0; i = nodes[i].parent)
                chunks.push_back(&nodes[i].chunk);
            for (auto it = chunks.rbegin(); it != chunks.rend(); ++it) w = w + **it;
            return {Tri::no, std::move(w)};
        }
        const Node cur = nodes[idx];
        for (const HopaEdge& e : a.edges) {
            if (e.src != cur.state) continue;
            if (e.top && *e.top != cur.stack->top()) continue;
            auto next_stack = stack_exec(cur.stack, e.instrs);
            if (!next_stack) continue;
            Key key{e.dst, *next_stack};
            if (seen.count(key)) continue;
            seen.insert(key);
            nodes.push_back(Node{e.dst, std::move(*next_stack),
                                 static_cast<std::int64_t>(idx), e.read});
            work.push_back(nodes.size() - 1);
        }
    }
    return {Tri::yes, std::nullopt};
}

Tri hopa_member(const Hopa& a, const Word& w, std::uint64_t budget) {
    if (budget == 0) throw ParameterError("hopa_member: budget must be >= 1");
    if (!w.over(a.input)) return Tri::no;
    struct Node {
        State state;
        HStackPtr stack;
        std::size_t pos;
    };
    struct KeyHash {
        std::size_t operator()(const Node& k) const {
            return hash_mix(hash_mix(k.state, k.stack->hash()), k.pos);
        }
    };
    struct KeyEq {
        bool operator()(const Node& x, const Node& y) const {
            return x.state == y.state && x.pos == y.pos && x.stack->equals(*y.stack);
        }
    };
    std::unordered_set<Node, KeyHash, KeyEq> seen;
    std::deque<Node> work;
    Node init{a.initial, HStack::nested(a.order, a.bottom), 0};
    seen.insert(init);
    work.push_back(init);
    std::uint64_t used = 0;
    bool exhausted = true;
    while (!work.empty()) {
        if (used++ >= budget) {
            exhausted = false;
            break;
        }
        Node cur = work.front();
        work.pop_front();
        if (cur.pos == w.size() && a.finals.count(cur.state)) return Tri::yes;
        for (const HopaEdge& e : a.edges) {
            if (e.src != cur.state) continue;
            if (cur.pos + e.read.size() > w.size()) continue;
            bool match = true;
            for (std::size_t i = 0; i < e.read.size(); ++i)
                if (w[cur.pos + i] != e.read[i]) {
                    match = false;
                    break;
                }
            if (!match) continue;
            if (e.top && *e.top != cur.stack->top()) continue;
            auto next_stack = stack_exec(cur.stack, e.instrs);
            if (!next_stack) continue;
            Node nxt{e.dst, std::move(*next_stack), cur.pos + e.read.size()};
            if (seen.count(nxt)) continue;
            seen.insert(nxt);
            work.push_back(nxt);
        }
    }
    if (exhausted) return Tri::no;
    if (a.order == 1) {
        // Exact fallback: restrict to the single word, then grammar emptiness.
        Hopa restricted = hopa_regular_restrict(a, nfa_single_word(a.input, w));
        return tri_not(hopa_is_empty(restricted, budget).empty);
    }
    return Tri::unknown;
}

Tri finiteness(const Hopa& a, std::uint64_t budget, std::size_t threshold) {
    if (a.order == 1) {
        Cfg cfg = order1_grammar(a);
        return tri_of(cfg_finite(cfg));
    }
    HopaRunResult r = run(a, budget);
    if (r.saturated == Tri::yes) return Tri::yes;
    std::set<std::size_t> lengths;
    for (const auto& [w, trace] : r.accepted) lengths.insert(w.size());
    if (lengths.size() > threshold) return Tri::no;
    return Tri::unknown;
}

// ---------------------------------------------------------------------------
// The order-lifting construction

namespace {

Symbol fresh_symbol(Symbol base, const std::set<Symbol>& taken) {
    while (taken.count(base)) base += "'";
    return base;
}

bool is_nested(const HStackPtr& s, const Symbol& letter) {
    const HStack* cur = s.get();
    while (cur->order() > 0) {
        if (cur->entries().size() != 1) return false;
        cur = cur->entries()[0].get();
    }
    return cur->letter() == letter;
}

}  // namespace

BinToUnaryResult bin_to_unary(const Hopa& input_machine) {
    for (const Symbol& s : input_machine.input.symbols())
        if (s != "0" && s != "1")
            throw AlphabetError("bin_to_unary: input alphabet must be within {0,1}");

    Hopa a = read_letter_split(single_final(input_machine));
    const std::size_t k = a.order;
    const State old_final = *a.finals.begin();

    std::set<Symbol> taken(a.stack_alphabet.symbols().begin(),
                           a.stack_alphabet.symbols().end());
    taken.insert("0");
    taken.insert("1");
    const Symbol marker = fresh_symbol("#", taken);
    taken.insert(marker);
    const Symbol outer = fresh_symbol(a.bottom + "'", taken);

    Hopa out;
    out.input = binary_alphabet();
    {
        std::vector<Symbol> g = a.stack_alphabet.symbols();
        g.push_back("0");
        g.push_back("1");
        g.push_back(marker);
        g.push_back(outer);
        out.stack_alphabet = Alphabet(std::move(g));
    }
    out.bottom = outer;
    out.order = k + 2;
    out.num_states = a.num_states + 3;
    const State entry = a.num_states;
    const State unwind = a.num_states + 1;
    const State new_final = a.num_states + 2;
    out.initial = entry;
    out.finals = {new_final};

    // Entry: read the leading 1 and build the two-level scaffold.
    out.add_edge(entry, Word::chars("1"), outer,
                 {Instr::push(k + 2), Instr::rew(marker), Instr::push(k + 1),
                  Instr::rew(a.bottom)},
                 a.initial);

    // Simulation: input-reading edges store the letter below a fresh copy of
    // the working stack; silent edges are kept.
    for (const HopaEdge& e : a.edges) {
        std::vector<Symbol> guards =
            e.top ? std::vector<Symbol>{*e.top} : a.stack_alphabet.symbols();
        for (const Symbol& g : guards) {
            if (e.read.empty()) {
                out.add_edge(e.src, Word(), g, e.instrs, e.dst);
            } else {
                std::vector<Instr> instrs{Instr::rew(e.read[0]), Instr::push(k + 1),
                                          Instr::rew(g)};
                instrs.insert(instrs.end(), e.instrs.begin(), e.instrs.end());
                out.add_edge(e.src, Word(), g, std::move(instrs), e.dst);
            }
        }
    }

    // Exit from the simulation: drop the working stack, then unwind.
    for (const Symbol& g : a.stack_alphabet.symbols())
        out.add_edge(old_final, Word(), g, {Instr::pop(k + 1)}, unwind);
    out.add_edge(unwind, Word(), Symbol("0"),
                 {Instr::pop(k + 1), Instr::push(k + 2)}, unwind);
    out.add_edge(unwind, Word::chars("0"), Symbol("1"),
                 {Instr::pop(k + 1), Instr::push(k + 2)}, unwind);
    out.add_edge(unwind, Word(), marker, {Instr::pop(k + 2)}, unwind);
    out.add_edge(unwind, Word(), outer, {}, new_final);
    out.normalize();
    return BinToUnaryResult{std::move(out), marker, outer};
}

StackMeasure measures(const HStackPtr& s, const Symbol& marker,
                      const Symbol& outer_bottom) {
    if (!s || s->order() < 2) throw ShapeError("measures: stack order too small");
    const auto& entries = s->entries();
    if (entries.empty() || !is_nested(entries[0], outer_bottom))
        throw ShapeError("measures: missing bottom scaffold");
    StackMeasure result;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        const HStackPtr& t = entries[i];
        if (t->order() == 0 || t->entries().empty() ||
            !is_nested(t->entries()[0], marker))
            throw ShapeError("measures: component without marker base");
        Word stored;
        for (std::size_t j = 1; j < t->entries().size(); ++j) {
            Symbol letter = t->entries()[j]->top();
            if (letter != "0" && letter != "1")
                throw ShapeError("measures: stored letter outside {0,1}");
            stored.push_back(letter);
        }
        result.mu += nu_value(stored);
        result.sigma.push_back(t->entries().size());
    }
    return result;
}

Hopa hopa_apply_transduction(const Transducer& t, const Hopa& a) {
    if (t.input != a.input)
        throw AlphabetError("hopa_apply_transduction: transducer input alphabet must "
                            "equal the machine's input alphabet");
    Transducer tr = letter_normalize(t);
    Hopa m = read_letter_split(a);

    Hopa out;
    out.input = t.output;
    out.stack_alphabet = m.stack_alphabet;
    out.bottom = m.bottom;
    out.order = m.order;
    out.num_states = tr.num_states * m.num_states;
    auto id = [&](State p, State q) { return p * m.num_states + q; };
    out.initial = id(tr.initial, m.initial);
    for (State p : tr.finals)
        for (State q : m.finals) out.finals.insert(id(p, q));

    for (const HopaEdge& e : m.edges) {
        if (e.read.empty()) {
            for (State p = 0; p < tr.num_states; ++p)
                out.add_edge(id(p, e.src), Word(), e.top, e.instrs, id(p, e.dst));
        } else {
            for (const TransducerEdge& et : tr.edges)
                if (et.read == e.read)
                    out.add_edge(id(et.src, e.src), et.write, e.top, e.instrs,
                                 id(et.dst, e.dst));
        }
    }
    for (const TransducerEdge& et : tr.edges)
        if (et.read.empty())
            for (State q = 0; q < m.num_states; ++q)
                out.add_edge(id(et.src, q), et.write, std::nullopt, {}, id(et.dst, q));
    out.normalize();
    return out;
}

Hopa hopa_regular_restrict(const Hopa& a, const Nfa& r) {
    if (r.alphabet != a.input)
        throw AlphabetError("hopa_regular_restrict: alphabets differ");
    return hopa_apply_transduction(regular_id_transducer(r), a);
}

}  // namespace langsep
