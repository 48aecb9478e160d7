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

#ifndef SDES_ERRORS_HPP
#define SDES_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sdes {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Grammar-level failure while reading a model file.
struct ParseError : Error {
    ParseError(int line_, const std::string& what_)
        : Error("parse error at line " + std::to_string(line_) + ": " + what_), line(line_) {}
    int line;
};

/// Well-formed text that declares an inconsistent model (undeclared ids,
/// duplicate transitions, probabilities outside (0,1], ...).
struct SemanticError : Error {
    using Error::Error;
};

/// A prefix has probability zero from the initial state.
struct PrefixNotInLanguage : Error {
    using Error::Error;
};

/// An observation string leaves the diagnoser's partial transition function.
struct UndefinedObservation : Error {
    using Error::Error;
};

/// A locally-unobservable closed set of transitions traps probability, so the
/// closure series behind the diagnoser matrices does not sum to one.
struct DivergentUnobservableMass : Error {
    using Error::Error;
};

/// A codiagnoser state was queried that the construction never produced.
struct UnreachableState : Error {
    using Error::Error;
};

}  // namespace sdes

#endif
