/*
 * Copyright 2026 The kreg authors
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

#ifndef KREG_TRAJECTORY_HPP
#define KREG_TRAJECTORY_HPP

#include <string>

#include "kreg/common.hpp"

namespace kreg {

/// Time-ordered state sequence x_0, ..., x_N of a dynamical system, one state
/// per row. N+1 states yield N consecutive snapshot pairs (x_t, x_{t+1}).
struct Trajectory {
    Matrix states; // (N+1) x d
    std::string dt_label; // free-form metadata, not used in any computation

    Index num_pairs() const { return states.rows() - 1; }
    Index dim() const { return states.cols(); }

    /// Rows x_0, ..., x_{N-1}.
    Matrix inputs() const { return states.topRows(states.rows() - 1); }
    /// Rows x_1, ..., x_N.
    Matrix outputs() const { return states.bottomRows(states.rows() - 1); }
};

} // namespace kreg

#endif
