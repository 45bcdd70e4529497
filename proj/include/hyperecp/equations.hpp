// Copyright 2026 The hyperecp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "hyperecp/protocol.hpp"

// Closed-form checkpoint states, written out term by term rather than by
// evolving anything through the element maps. They pin down what the
// simulated pipeline must produce at each stage.
namespace hyperecp::equations {

using fock::State;
using protocol::SourceParams;

// Two balanced pairs after the front-end couplers.
State front_end_balanced_expected();

// Two partially entangled pairs after the front-end couplers.
State front_end_expected(const SourceParams& p);

// The same state after the polarization and path flip of photon B'.
State post_flip_expected(const SourceParams& p);

// Time-resolved component k of the state after the delay stage. The index
// records which degrees of freedom disagree between the two source terms
// feeding the kept pair: 0 = polarization only, 1 = path only, 2 = both,
// 3 = neither. Components 0 and 1 are unrecoverable, 2 completes the
// distillation, 3 is the recyclable remainder. Their sum is the full state.
State post_delay_component(int k, const SourceParams& p);

// Two partially entangled triples after the front-end couplers.
State ghz_front_end_expected(const SourceParams& p);

}  // namespace hyperecp::equations
