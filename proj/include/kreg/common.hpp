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

#ifndef KREG_COMMON_HPP
#define KREG_COMMON_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace kreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Bad data passed by the caller (shape mismatch, malformed file, ...).
class input_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad kernel parameters, non-positive lambda, ...).
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical procedure failed beyond recovery.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kreg

#endif
