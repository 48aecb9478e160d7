/*
 * Copyright 2026 the sdes-codiag authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef SDES_AUTOMATON_HPP
#define SDES_AUTOMATON_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sdes/errors.hpp"

namespace sdes {

/// Absolute tolerance for per-state probability sums and all derived
/// row-stochasticity checks.
inline constexpr double kProbTolerance = 1e-9;

/// Default cap on bounded language enumeration. Enumeration exists for
/// oracles and simulation only and must terminate.
inline constexpr int kEnumerationBound = 16;

constexpr int kGlobalSite = 0;

// ---------------------------------------------------------------------------
// Events and traces

struct EventDecl {
    std::string id;
    std::set<int> observability;       // 1-based site numbers; empty = unobservable everywhere
    std::optional<int> failure_class;  // index into StochasticAutomaton::failure_classes

    bool observable_at(int site) const {
        if (site == kGlobalSite) return !observability.empty();
        return observability.count(site) > 0;
    }
};

/// A finite event sequence, stored as event indices of the owning automaton.
struct Trace {
    std::vector<int> events;

    Trace() = default;
    explicit Trace(std::vector<int> evs) : events(std::move(evs)) {}

    bool empty() const { return events.empty(); }
    std::size_t size() const { return events.size(); }

    int final_event() const {
        if (events.empty()) throw Error("final_event of empty trace");
        return events.back();
    }

    std::vector<Trace> prefix_closure() const {
        std::vector<Trace> out;
        out.reserve(events.size() + 1);
        for (std::size_t n = 0; n <= events.size(); ++n)
            out.emplace_back(std::vector<int>(events.begin(), events.begin() + n));
        return out;
    }

    Trace operator+(int ev) const {
        Trace t(*this);
        t.events.push_back(ev);
        return t;
    }
    Trace operator+(const Trace& other) const {
        Trace t(*this);
        t.events.insert(t.events.end(), other.events.begin(), other.events.end());
        return t;
    }

    auto operator<=>(const Trace&) const = default;
};

// ---------------------------------------------------------------------------
// The stochastic automaton

/// Plain, unvalidated declaration of a model. The parser and the test
/// generators fill one of these; build_automaton() normalizes and checks it.
struct AutomatonSpec {
    struct EventSpec {
        std::string id;
        std::vector<int> obs;  // site numbers
        std::string fail;      // failure class name, empty = none
    };
    struct TransSpec {
        std::string src, event, dst;
        double prob = 0.0;
    };

    std::vector<std::string> states;
    std::string initial;
    int sites = 1;
    std::vector<EventSpec> events;
    std::vector<TransSpec> transitions;
};

struct StochasticAutomaton {
    std::vector<std::string> state_names;       // sorted lexicographically
    std::vector<EventDecl> events;              // sorted by id
    std::vector<std::string> failure_classes;   // sorted class names
    int initial = 0;
    int sites = 1;
    // transitions[q][e] = (target, probability); at most one target per (q,e)
    std::vector<std::map<int, std::pair<int, double>>> transitions;

    // Set by make_deadlock_free: the appended everywhere-unobservable
    // self-loop event is exempt from the unobservable-cycle validation.
    bool deadlock_freed = false;
    int live_event = -1;

    int num_states() const { return static_cast<int>(state_names.size()); }
    int num_events() const { return static_cast<int>(events.size()); }

    int state_index(const std::string& id) const {
        auto it = std::lower_bound(state_names.begin(), state_names.end(), id);
        if (it == state_names.end() || *it != id) return -1;
        return static_cast<int>(it - state_names.begin());
    }

    int event_index(const std::string& id) const {
        for (int i = 0; i < num_events(); ++i)
            if (events[i].id == id) return i;
        return -1;
    }

    int class_index(const std::string& name) const {
        auto it = std::lower_bound(failure_classes.begin(), failure_classes.end(), name);
        if (it == failure_classes.end() || *it != name) return -1;
        return static_cast<int>(it - failure_classes.begin());
    }

    double row_sum(int q) const {
        double s = 0.0;
        for (const auto& [e, tp] : transitions[q]) s += tp.second;
        return s;
    }
};

inline StochasticAutomaton build_automaton(const AutomatonSpec& spec) {
    StochasticAutomaton a;
    a.sites = spec.sites;
    if (a.sites < 1) throw SemanticError("site count must be at least 1");

    a.state_names = spec.states;
    std::sort(a.state_names.begin(), a.state_names.end());
    if (std::adjacent_find(a.state_names.begin(), a.state_names.end()) != a.state_names.end())
        throw SemanticError("duplicate state id");
    if (a.state_names.empty()) throw SemanticError("no states declared");

    a.initial = a.state_index(spec.initial);
    if (a.initial < 0) throw SemanticError("initial state '" + spec.initial + "' is not declared");

    std::set<std::string> class_names;
    for (const auto& e : spec.events)
        if (!e.fail.empty()) class_names.insert(e.fail);
    a.failure_classes.assign(class_names.begin(), class_names.end());

    for (const auto& e : spec.events) {
        EventDecl d;
        d.id = e.id;
        for (int s : e.obs) {
            if (s < 1 || s > a.sites)
                throw SemanticError("event '" + e.id + "' observable at undeclared site " +
                                    std::to_string(s));
            d.observability.insert(s);
        }
        if (!e.fail.empty()) d.failure_class = a.class_index(e.fail);
        a.events.push_back(std::move(d));
    }
    std::sort(a.events.begin(), a.events.end(),
              [](const EventDecl& x, const EventDecl& y) { return x.id < y.id; });
    for (std::size_t i = 1; i < a.events.size(); ++i)
        if (a.events[i].id == a.events[i - 1].id)
            throw SemanticError("duplicate event id '" + a.events[i].id + "'");

    a.transitions.assign(a.state_names.size(), {});
    for (const auto& t : spec.transitions) {
        int src = a.state_index(t.src);
        int dst = a.state_index(t.dst);
        int ev = a.event_index(t.event);
        if (src < 0) throw SemanticError("transition from undeclared state '" + t.src + "'");
        if (dst < 0) throw SemanticError("transition to undeclared state '" + t.dst + "'");
        if (ev < 0) throw SemanticError("transition on undeclared event '" + t.event + "'");
        if (!(t.prob > 0.0) || t.prob > 1.0)
            throw SemanticError("probability " + std::to_string(t.prob) + " on (" + t.src + ", " +
                                t.event + ") out of range (0,1]");
        if (a.transitions[src].count(ev))
            throw SemanticError("duplicate transition (" + t.src + ", " + t.event + ")");
        a.transitions[src][ev] = {dst, t.prob};
    }
    return a;
}

// ---------------------------------------------------------------------------
// Observation masks and projection

struct ObservationMask {
    int site = kGlobalSite;       // 0 = global, else 1..m
    std::vector<char> observable; // per event index

    bool sees(int ev) const { return observable[static_cast<std::size_t>(ev)] != 0; }
};

inline ObservationMask site_mask(const StochasticAutomaton& a, int site) {
    ObservationMask m;
    m.site = site;
    m.observable.resize(a.events.size());
    for (int e = 0; e < a.num_events(); ++e)
        m.observable[e] = a.events[e].observable_at(site) ? 1 : 0;
    return m;
}

inline ObservationMask global_mask(const StochasticAutomaton& a) {
    return site_mask(a, kGlobalSite);
}

/// Homomorphic erasure: keep mask-observable events in order, drop the rest.
inline Trace project(const Trace& t, const ObservationMask& mask) {
    Trace out;
    for (int e : t.events)
        if (mask.sees(e)) out.events.push_back(e);
    return out;
}

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
    std::string code;    // "determinism" | "A1" | "failure-observability" | "A2" | "probability"
    std::string detail;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }

    std::string to_string() const {
        std::ostringstream os;
        for (const auto& i : issues) os << "[" << i.code << "] " << i.detail << "\n";
        return os.str();
    }
};

struct ValidationFailed : Error {
    explicit ValidationFailed(ValidationReport r)
        : Error("automaton failed validation:\n" + r.to_string()), report(std::move(r)) {}
    ValidationReport report;
};

namespace detail {

// Cycle test on the subgraph of transitions kept by `keep_event`.
inline bool has_cycle_on(const StochasticAutomaton& a,
                         const std::function<bool(int)>& keep_event) {
    const int n = a.num_states();
    std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
    std::function<bool(int)> dfs = [&](int q) {
        color[q] = 1;
        for (const auto& [e, tp] : a.transitions[q]) {
            if (!keep_event(e)) continue;
            int q2 = tp.first;
            if (color[q2] == 1) return true;
            if (color[q2] == 0 && dfs(q2)) return true;
        }
        color[q] = 2;
        return false;
    };
    for (int q = 0; q < n; ++q)
        if (color[q] == 0 && dfs(q)) return true;
    return false;
}

}  // namespace detail

/// True iff the subgraph of transitions whose events fall outside the mask is
/// acyclic, i.e. every sufficiently long substring contains an observable event.
inline bool check_no_unobservable_cycles(const StochasticAutomaton& a,
                                         const ObservationMask& mask) {
    return !detail::has_cycle_on(a, [&](int e) { return !mask.sees(e); });
}

inline ValidationReport validate(const StochasticAutomaton& a) {
    ValidationReport r;
    // Determinism and probability range are enforced by the representation and
    // by build_automaton, but re-checked so programmatic mutation is caught.
    for (int q = 0; q < a.num_states(); ++q) {
        for (const auto& [e, tp] : a.transitions[q]) {
            if (!(tp.second > 0.0) || tp.second > 1.0)
                r.issues.push_back({"probability",
                                    "(" + a.state_names[q] + ", " + a.events[e].id +
                                        ") has probability outside (0,1]"});
        }
        double s = a.row_sum(q);
        if (std::abs(s - 1.0) > kProbTolerance) {
            std::ostringstream os;
            os << "state " << a.state_names[q] << " has outgoing probability sum " << s;
            r.issues.push_back({"A1", os.str()});
        }
    }
    for (const auto& e : a.events) {
        if (e.failure_class && !e.observability.empty())
            r.issues.push_back(
                {"failure-observability", "failure event '" + e.id + "' must be unobservable"});
    }
    ObservationMask g = global_mask(a);
    bool acyclic = !detail::has_cycle_on(a, [&](int e) {
        if (a.deadlock_freed && e == a.live_event) return false;  // exempt the appended loop
        return !g.sees(e);
    });
    if (!acyclic)
        r.issues.push_back({"A2", "cycle of globally-unobservable events"});
    return r;
}

// ---------------------------------------------------------------------------
// Deduced DFA

/// The logical skeleton of a stochastic automaton: same states and events,
/// an edge wherever the transition probability is positive.
struct DeterministicAutomaton {
    std::vector<std::string> state_names;
    std::vector<EventDecl> events;
    int initial = 0;
    std::vector<std::map<int, int>> delta;

    int num_states() const { return static_cast<int>(state_names.size()); }

    int step(int q, int ev) const {
        auto it = delta[q].find(ev);
        return it == delta[q].end() ? -1 : it->second;
    }

    int run(int q, const Trace& t) const {
        for (int e : t.events) {
            q = step(q, e);
            if (q < 0) return -1;
        }
        return q;
    }
};

inline DeterministicAutomaton deduce_dfa(const StochasticAutomaton& a) {
    DeterministicAutomaton d;
    d.state_names = a.state_names;
    d.events = a.events;
    d.initial = a.initial;
    d.delta.resize(a.transitions.size());
    for (std::size_t q = 0; q < a.transitions.size(); ++q)
        for (const auto& [e, tp] : a.transitions[q]) d.delta[q][e] = tp.first;
    return d;
}

// ---------------------------------------------------------------------------
// Trace probability and bounded enumeration

/// Product of transition probabilities along the unique run of `t` from
/// `from`; zero when the run leaves the defined transitions.
inline double trace_probability(const StochasticAutomaton& a, int from, const Trace& t) {
    double p = 1.0;
    int q = from;
    for (int e : t.events) {
        auto it = a.transitions[q].find(e);
        if (it == a.transitions[q].end()) return 0.0;
        p *= it->second.second;
        q = it->second.first;
    }
    return p;
}

/// Visits every length-`length` continuation from state `from` together with
/// its conditional probability.
inline void for_each_continuation(const StochasticAutomaton& a, int from, int length,
                                  const std::function<void(const Trace&, double)>& visit) {
    Trace t;
    std::function<void(int, int, double)> rec = [&](int q, int left, double p) {
        if (left == 0) {
            visit(t, p);
            return;
        }
        for (const auto& [e, tp] : a.transitions[q]) {
            t.events.push_back(e);
            rec(tp.first, left - 1, p * tp.second);
            t.events.pop_back();
        }
    };
    rec(from, length, 1.0);
}

inline std::vector<std::pair<Trace, double>> enumerate_continuations(
    const StochasticAutomaton& a, const Trace& prefix, int length,
    int bound = kEnumerationBound) {
    if (length > bound)
        throw Error("continuation length " + std::to_string(length) +
                    " exceeds enumeration bound " + std::to_string(bound));
    if (trace_probability(a, a.initial, prefix) <= 0.0)
        throw PrefixNotInLanguage("prefix has zero probability from the initial state");
    int q = a.initial;
    for (int e : prefix.events) q = a.transitions[q].at(e).first;
    std::vector<std::pair<Trace, double>> out;
    for_each_continuation(a, q, length,
                          [&](const Trace& t, double p) { out.emplace_back(t, p); });
    std::sort(out.begin(), out.end());
    return out;
}

/// All traces of the language with length at most `max_len` whose final event
/// belongs to the given failure class.
inline std::vector<Trace> failure_seeds(const StochasticAutomaton& a, int cls, int max_len) {
    std::vector<Trace> out;
    Trace t;
    std::function<void(int, int)> rec = [&](int q, int left) {
        for (const auto& [e, tp] : a.transitions[q]) {
            t.events.push_back(e);
            if (a.events[e].failure_class && *a.events[e].failure_class == cls)
                out.push_back(t);
            if (left > 1) rec(tp.first, left - 1);
            t.events.pop_back();
        }
    };
    if (max_len >= 1) rec(a.initial, max_len);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Deadlock-freeing transformation

/// Appends one fresh everywhere-unobservable event with a probability-1
/// self-loop at every deadlocked state. Live inputs are returned unchanged.
inline StochasticAutomaton make_deadlock_free(const StochasticAutomaton& a) {
    std::vector<int> dead;
    for (int q = 0; q < a.num_states(); ++q)
        if (a.transitions[q].empty()) dead.push_back(q);
    if (dead.empty()) return a;

    std::string fresh = "live";
    while (a.event_index(fresh) >= 0) fresh += "_";

    AutomatonSpec spec;
    spec.states = a.state_names;
    spec.initial = a.state_names[a.initial];
    spec.sites = a.sites;
    for (const auto& e : a.events) {
        AutomatonSpec::EventSpec es;
        es.id = e.id;
        es.obs.assign(e.observability.begin(), e.observability.end());
        if (e.failure_class) es.fail = a.failure_classes[*e.failure_class];
        spec.events.push_back(std::move(es));
    }
    spec.events.push_back({fresh, {}, ""});
    for (int q = 0; q < a.num_states(); ++q)
        for (const auto& [e, tp] : a.transitions[q])
            spec.transitions.push_back(
                {a.state_names[q], a.events[e].id, a.state_names[tp.first], tp.second});
    for (int q : dead)
        spec.transitions.push_back({a.state_names[q], fresh, a.state_names[q], 1.0});

    StochasticAutomaton out = build_automaton(spec);
    out.deadlock_freed = true;
    out.live_event = out.event_index(fresh);
    return out;
}

// ---------------------------------------------------------------------------
// Small helpers shared by tools and tests

inline Trace make_trace(const StochasticAutomaton& a, const std::vector<std::string>& ids) {
    Trace t;
    for (const auto& id : ids) {
        int e = a.event_index(id);
        if (e < 0) throw SemanticError("unknown event '" + id + "'");
        t.events.push_back(e);
    }
    return t;
}

inline std::string trace_to_string(const StochasticAutomaton& a, const Trace& t) {
    std::string s;
    for (std::size_t i = 0; i < t.events.size(); ++i) {
        if (i) s += " ";
        s += a.events[t.events[i]].id;
    }
    return s;
}

}  // namespace sdes

#endif
