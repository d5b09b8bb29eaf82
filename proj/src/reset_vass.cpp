#include "langsep/reset_vass.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <tuple>

namespace langsep {

std::string to_string(CounterOp op) {
    switch (op) {
        case CounterOp::inc: return "inc";
        case CounterOp::dec: return "dec";
        case CounterOp::nop: return "nop";
        default: return "reset";
    }
}

State ResetVass::add_state() { return num_states++; }

void ResetVass::add_edge(State src, Word label, std::size_t counter, CounterOp op,
                         State dst) {
    edges.push_back(VassEdge{src, std::move(label), counter, op, dst});
}

void ResetVass::normalize() {
    if (initial >= num_states) throw ParameterError("resetvass: initial out of range");
    for (State f : finals)
        if (f >= num_states) throw ParameterError("resetvass: final out of range");
    for (const VassEdge& e : edges) {
        if (e.src >= num_states || e.dst >= num_states)
            throw ParameterError("resetvass: edge endpoint out of range");
        if (!e.label.over(alphabet))
            throw AlphabetError("resetvass: edge label not over the declared alphabet");
        if (e.counter > num_counters)
            throw ParameterError("resetvass: counter index out of range");
        if (e.counter == 0 && e.op != CounterOp::nop)
            throw ParameterError("resetvass: counter 0 only allowed on nop edges");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

bool config_leq(const VassConfig& lo, const VassConfig& hi) {
    if (lo.state != hi.state || lo.counters.size() != hi.counters.size()) return false;
    for (std::size_t i = 0; i < lo.counters.size(); ++i)
        if (lo.counters[i] > hi.counters[i]) return false;
    return true;
}

bool UpwardBasis::insert(const VassConfig& c) {
    for (const VassConfig& e : elems_)
        if (config_leq(e, c)) return false;
    for (auto it = elems_.begin(); it != elems_.end();)
        it = config_leq(c, *it) ? elems_.erase(it) : std::next(it);
    elems_.insert(c);
    return true;
}

bool UpwardBasis::covers(const VassConfig& c) const {
    return std::any_of(elems_.begin(), elems_.end(),
                       [&](const VassConfig& e) { return config_leq(e, c); });
}

ResetVass letter_split_vass(const ResetVass& v) {
    ResetVass out;
    out.alphabet = v.alphabet;
    out.num_counters = v.num_counters;
    out.num_states = v.num_states;
    out.initial = v.initial;
    out.finals = v.finals;
    for (const VassEdge& e : v.edges) {
        bool has_op = e.op != CounterOp::nop;
        if (e.label.empty()) {
            out.add_edge(e.src, Word(), has_op ? e.counter : e.counter, e.op, e.dst);
            continue;
        }
        if (e.label.size() == 1 && !has_op) {
            out.add_edge(e.src, e.label, 0, CounterOp::nop, e.dst);
            continue;
        }
        // A silent counter action first, then one letter per edge.
        State cur = e.src;
        if (has_op) {
            State nxt = out.add_state();
            out.add_edge(cur, Word(), e.counter, e.op, nxt);
            cur = nxt;
        }
        for (std::size_t i = 0; i < e.label.size(); ++i) {
            State nxt = (i + 1 == e.label.size()) ? e.dst : out.add_state();
            out.add_edge(cur, Word({e.label[i]}), 0, CounterOp::nop, nxt);
            cur = nxt;
        }
    }
    out.normalize();
    return out;
}

namespace {

std::optional<std::vector<std::uint64_t>> apply_op(const std::vector<std::uint64_t>& c,
                                                   std::size_t counter, CounterOp op) {
    std::vector<std::uint64_t> n = c;
    if (op == CounterOp::nop) return n;
    std::size_t k = counter - 1;
    switch (op) {
        case CounterOp::inc: n[k] += 1; break;
        case CounterOp::dec:
            if (n[k] == 0) return std::nullopt;
            n[k] -= 1;
            break;
        case CounterOp::reset: n[k] = 0; break;
        default: break;
    }
    return n;
}

}  // namespace

Budgeted<std::set<VassConfig>> step(const ResetVass& v, const VassConfig& c,
                                    const Word& w, std::uint64_t budget) {
    if (budget == 0) throw ParameterError("step: budget must be >= 1");
    if (c.counters.size() != v.num_counters)
        throw ParameterError("step: configuration arity mismatch");
    if (c.state >= v.num_states) throw ParameterError("step: state out of range");

    Budgeted<std::set<VassConfig>> result;
    using Node = std::pair<VassConfig, std::size_t>;
    std::set<Node> seen;
    std::deque<Node> work;
    work.emplace_back(c, 0);
    seen.emplace(c, 0);
    std::uint64_t used = 0;
    while (!work.empty()) {
        if (used++ >= budget) {
            result.verdict = Tri::unknown;
            return result;
        }
        auto [cfg, pos] = work.front();
        work.pop_front();
        if (pos == w.size()) result.value.insert(cfg);
        for (const VassEdge& e : v.edges) {
            if (e.src != cfg.state) continue;
            if (pos + e.label.size() > w.size()) continue;
            bool match = true;
            for (std::size_t i = 0; i < e.label.size(); ++i)
                if (w[pos + i] != e.label[i]) {
                    match = false;
                    break;
                }
            if (!match) continue;
            auto counters = apply_op(cfg.counters, e.counter, e.op);
            if (!counters) continue;
            Node nxt{VassConfig{e.dst, std::move(*counters)}, pos + e.label.size()};
            if (seen.insert(nxt).second) work.push_back(nxt);
        }
    }
    result.verdict = Tri::yes;
    return result;
}

ResetVass apply_transduction(const Transducer& t, const ResetVass& v) {
    if (t.input != v.alphabet)
        throw AlphabetError("apply_transduction: transducer input alphabet must equal "
                            "the machine's alphabet");
    ResetVass m = letter_split_vass(v);
    Transducer tr = letter_normalize(t);

    ResetVass out;
    out.alphabet = t.output;
    out.num_counters = v.num_counters;
    out.num_states = m.num_states * tr.num_states;
    auto id = [&](State q, State p) { return q * tr.num_states + p; };
    out.initial = id(m.initial, tr.initial);
    for (State q : m.finals)
        for (State p : tr.finals) out.finals.insert(id(q, p));

    for (const VassEdge& ev : m.edges) {
        if (ev.label.empty()) {
            // (iii) the machine moves silently.
            for (State p = 0; p < tr.num_states; ++p)
                out.add_edge(id(ev.src, p), Word(), ev.counter, ev.op, id(ev.dst, p));
        } else {
            // (i) the machine produces a letter the transducer reads.
            for (const TransducerEdge& et : tr.edges)
                if (et.read == ev.label)
                    out.add_edge(id(ev.src, et.src), et.write, ev.counter, ev.op,
                                 id(ev.dst, et.dst));
        }
    }
    // (ii) the transducer writes (or moves silently) on its own.
    for (const TransducerEdge& et : tr.edges)
        if (et.read.empty())
            for (State q = 0; q < m.num_states; ++q)
                out.add_edge(id(q, et.src), et.write, 0, CounterOp::nop, id(q, et.dst));
    out.normalize();
    return out;
}

ResetVass intersect(const ResetVass& v0, const ResetVass& v1) {
    if (v0.alphabet != v1.alphabet)
        throw AlphabetError("intersect: alphabets differ");
    const std::size_t n = std::max(v0.num_counters, v1.num_counters);
    ResetVass a = letter_split_vass(v0);
    ResetVass b = letter_split_vass(v1);

    ResetVass out;
    out.alphabet = v0.alphabet;
    out.num_counters = 2 * n;
    out.num_states = a.num_states * b.num_states;
    auto id = [&](State p, State q) { return p * b.num_states + q; };
    out.initial = id(a.initial, b.initial);
    for (State p : a.finals)
        for (State q : b.finals) out.finals.insert(id(p, q));

    for (const VassEdge& ea : a.edges) {
        if (ea.label.empty()) {
            // (ii) the left machine advances alone.
            for (State q = 0; q < b.num_states; ++q)
                out.add_edge(id(ea.src, q), Word(), ea.counter, ea.op, id(ea.dst, q));
        } else {
            // (i) both machines read the same letter.
            for (const VassEdge& eb : b.edges)
                if (eb.label == ea.label)
                    out.add_edge(id(ea.src, eb.src), ea.label, 0, CounterOp::nop,
                                 id(ea.dst, eb.dst));
        }
    }
    // (iii) the right machine advances alone, with shifted counter indices.
    for (const VassEdge& eb : b.edges)
        if (eb.label.empty())
            for (State p = 0; p < a.num_states; ++p)
                out.add_edge(id(p, eb.src), Word(),
                             eb.counter == 0 ? 0 : n + eb.counter, eb.op, id(p, eb.dst));
    out.normalize();
    return out;
}

ResetVass vass_union(const ResetVass& v0, const ResetVass& v1) {
    if (v0.alphabet != v1.alphabet) throw AlphabetError("union: alphabets differ");
    const std::size_t n = std::max(v0.num_counters, v1.num_counters);
    ResetVass out;
    out.alphabet = v0.alphabet;
    out.num_counters = n;
    out.num_states = 1 + v0.num_states + v1.num_states;
    out.initial = 0;
    auto ia = [&](State s) { return 1 + s; };
    auto ib = [&](State s) { return 1 + v0.num_states + s; };
    out.add_edge(0, Word(), 0, CounterOp::nop, ia(v0.initial));
    out.add_edge(0, Word(), 0, CounterOp::nop, ib(v1.initial));
    for (const VassEdge& e : v0.edges)
        out.add_edge(ia(e.src), e.label, e.counter, e.op, ia(e.dst));
    for (const VassEdge& e : v1.edges)
        out.add_edge(ib(e.src), e.label, e.counter, e.op, ib(e.dst));
    for (State f : v0.finals) out.finals.insert(ia(f));
    for (State f : v1.finals) out.finals.insert(ib(f));
    out.normalize();
    return out;
}

namespace {

// Minimal demand on the source configuration for one backward edge step;
// nullopt when the edge has no pre-image dominating the demand.
std::optional<VassConfig> pre_image(const VassEdge& e, const VassConfig& target) {
    VassConfig pre{e.src, target.counters};
    if (e.op == CounterOp::nop) return pre;
    std::size_t k = e.counter - 1;
    switch (e.op) {
        case CounterOp::inc:
            pre.counters[k] = target.counters[k] > 0 ? target.counters[k] - 1 : 0;
            break;
        case CounterOp::dec:
            pre.counters[k] = target.counters[k] + 1;
            break;
        case CounterOp::reset:
            if (target.counters[k] != 0) return std::nullopt;
            pre.counters[k] = 0;
            break;
        default: break;
    }
    return pre;
}

bool backward_coverable(const ResetVass& v, const std::vector<VassConfig>& targets,
                        CoverStats* stats) {
    UpwardBasis basis;
    std::deque<VassConfig> work;
    for (const VassConfig& t : targets)
        if (basis.insert(t)) work.push_back(t);

    std::uint64_t iterations = 0;
    while (!work.empty()) {
        VassConfig cur = work.front();
        work.pop_front();
        ++iterations;
        for (const VassEdge& e : v.edges) {
            if (e.dst != cur.state) continue;
            auto pre = pre_image(e, cur);
            if (pre && basis.insert(*pre)) work.push_back(*pre);
        }
    }
    if (stats) {
        stats->iterations = iterations;
        stats->basis_size = basis.size();
    }
    VassConfig init{v.initial, std::vector<std::uint64_t>(v.num_counters, 0)};
    return basis.covers(init);
}

}  // namespace

bool is_coverable(const ResetVass& v, const VassConfig& target, CoverStats* stats) {
    if (target.counters.size() != v.num_counters)
        throw ParameterError("is_coverable: target arity mismatch");
    if (target.state >= v.num_states)
        throw ParameterError("is_coverable: target state out of range");
    return backward_coverable(v, {target}, stats);
}

bool is_empty(const ResetVass& v, CoverStats* stats) {
    std::vector<VassConfig> targets;
    for (State f : v.finals)
        targets.push_back(VassConfig{f, std::vector<std::uint64_t>(v.num_counters, 0)});
    if (targets.empty()) return true;
    return !backward_coverable(v, targets, stats);
}

bool member(const ResetVass& v, const Word& w) {
    if (!w.over(v.alphabet)) return false;
    ResetVass product = intersect(v, from_nfa(nfa_single_word(v.alphabet, w)));
    return !is_empty(product);
}

ResetVass boundedness_to_infinity(const ResetVass& v) {
    ResetVass out;
    out.alphabet = unary_alphabet();
    out.num_counters = v.num_counters;
    out.num_states = v.num_states + 1;
    out.initial = v.initial;
    const State sink = v.num_states;
    out.finals = {sink};
    for (const VassEdge& e : v.edges)
        out.add_edge(e.src, Word(), e.counter, e.op, e.dst);
    for (State q = 0; q < v.num_states; ++q)
        out.add_edge(q, Word(), 0, CounterOp::nop, sink);
    for (std::size_t i = 1; i <= v.num_counters; ++i)
        out.add_edge(sink, Word({Symbol("a")}), i, CounterOp::dec, sink);
    out.normalize();
    return out;
}

ResetVass from_nfa(const Nfa& a) {
    ResetVass out;
    out.alphabet = a.alphabet;
    out.num_counters = 0;
    out.num_states = a.num_states;
    out.initial = a.initial;
    out.finals = a.finals;
    for (const NfaEdge& e : a.edges) out.add_edge(e.src, e.label, 0, CounterOp::nop, e.dst);
    out.normalize();
    return out;
}

Nfa to_nfa(const ResetVass& v) {
    if (v.num_counters != 0)
        throw UsageError("to_nfa: machine has counters");
    Nfa out;
    out.alphabet = v.alphabet;
    out.num_states = v.num_states;
    out.initial = v.initial;
    out.finals = v.finals;
    for (const VassEdge& e : v.edges) out.add_edge(e.src, e.label, e.dst);
    out.normalize();
    return out;
}

ForwardReach forward_reachable(const ResetVass& v, std::size_t max_steps) {
    ForwardReach result;
    VassConfig init{v.initial, std::vector<std::uint64_t>(v.num_counters, 0)};
    result.configs.insert(init);
    std::set<VassConfig> frontier{init};
    std::size_t depth = 0;
    while (!frontier.empty() && depth < max_steps) {
        std::set<VassConfig> next;
        for (const VassConfig& cfg : frontier) {
            for (const VassEdge& e : v.edges) {
                if (e.src != cfg.state) continue;
                auto counters = apply_op(cfg.counters, e.counter, e.op);
                if (!counters) continue;
                VassConfig nc{e.dst, std::move(*counters)};
                if (result.configs.insert(nc).second) next.insert(nc);
            }
        }
        frontier = std::move(next);
        ++depth;
    }
    result.saturated = frontier.empty();
    return result;
}

}  // namespace langsep
