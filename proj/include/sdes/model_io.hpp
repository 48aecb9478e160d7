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

#ifndef SDES_MODEL_IO_HPP
#define SDES_MODEL_IO_HPP

#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "sdes/automaton.hpp"

namespace sdes {

// Line-oriented model grammar.  `#` starts a comment; blank lines are
// ignored.  Recognized forms:
//
//   states <id>...
//   init <id>
//   sites <m>
//   event <id> [obs <site>...] [fail [<class>]]
//   trans <src> <event> <dst> <prob>
//
// A bare `fail` names the default class F.

namespace detail {

inline std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) {
        if (t[0] == '#') break;
        toks.push_back(t);
    }
    return toks;
}

inline bool parse_int(const std::string& s, int& out) {
    try {
        std::size_t pos = 0;
        out = std::stoi(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

inline bool parse_prob(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

}  // namespace detail

inline StochasticAutomaton parse_model(const std::string& text) {
    AutomatonSpec spec;
    bool saw_init = false, saw_sites = false;

    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        auto toks = detail::tokenize(line);
        if (toks.empty()) continue;
        const std::string& kw = toks[0];

        if (kw == "states") {
            if (toks.size() < 2) throw ParseError(lineno, "states line declares nothing");
            spec.states.insert(spec.states.end(), toks.begin() + 1, toks.end());
        } else if (kw == "init") {
            if (toks.size() != 2) throw ParseError(lineno, "expected: init <id>");
            if (saw_init) throw ParseError(lineno, "duplicate init line");
            spec.initial = toks[1];
            saw_init = true;
        } else if (kw == "sites") {
            if (toks.size() != 2 || !detail::parse_int(toks[1], spec.sites))
                throw ParseError(lineno, "expected: sites <m>");
            if (saw_sites) throw ParseError(lineno, "duplicate sites line");
            saw_sites = true;
        } else if (kw == "event") {
            if (toks.size() < 2) throw ParseError(lineno, "expected: event <id> ...");
            AutomatonSpec::EventSpec ev;
            ev.id = toks[1];
            std::size_t i = 2;
            while (i < toks.size()) {
                if (toks[i] == "obs") {
                    ++i;
                    bool any = false;
                    int site = 0;
                    while (i < toks.size() && detail::parse_int(toks[i], site)) {
                        ev.obs.push_back(site);
                        any = true;
                        ++i;
                    }
                    if (!any) throw ParseError(lineno, "obs lists no sites");
                } else if (toks[i] == "fail") {
                    ++i;
                    if (i < toks.size() && toks[i] != "obs") {
                        ev.fail = toks[i];
                        ++i;
                    } else {
                        ev.fail = "F";
                    }
                } else {
                    throw ParseError(lineno, "unexpected token '" + toks[i] + "' in event line");
                }
            }
            spec.events.push_back(std::move(ev));
        } else if (kw == "trans") {
            if (toks.size() != 5)
                throw ParseError(lineno, "expected: trans <src> <event> <dst> <prob>");
            AutomatonSpec::TransSpec tr;
            tr.src = toks[1];
            tr.event = toks[2];
            tr.dst = toks[3];
            if (!detail::parse_prob(toks[4], tr.prob))
                throw ParseError(lineno, "cannot parse probability '" + toks[4] + "'");
            spec.transitions.push_back(std::move(tr));
        } else {
            throw ParseError(lineno, "unknown directive '" + kw + "'");
        }
    }
    if (!saw_init) throw SemanticError("model declares no initial state");
    return build_automaton(spec);
}

inline std::string format_probability(double p) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", p);
    return buf;
}

/// Canonical text form: states sorted, events sorted by id, transitions
/// sorted by (source, event).  parse_model(serialize_model(a)) == a.
inline std::string serialize_model(const StochasticAutomaton& a) {
    std::ostringstream os;
    os << "states";
    for (const auto& s : a.state_names) os << " " << s;
    os << "\n";
    os << "init " << a.state_names[a.initial] << "\n";
    os << "sites " << a.sites << "\n";
    for (const auto& e : a.events) {
        os << "event " << e.id;
        if (!e.observability.empty()) {
            os << " obs";
            for (int s : e.observability) os << " " << s;
        }
        if (e.failure_class) os << " fail " << a.failure_classes[*e.failure_class];
        os << "\n";
    }
    for (int q = 0; q < a.num_states(); ++q)
        for (const auto& [e, tp] : a.transitions[q])
            os << "trans " << a.state_names[q] << " " << a.events[e].id << " "
               << a.state_names[tp.first] << " " << format_probability(tp.second) << "\n";
    return os.str();
}

}  // namespace sdes

#endif
