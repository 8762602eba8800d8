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

#ifndef KREG_IO_HPP
#define KREG_IO_HPP

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "kreg/koopman.hpp"
#include "kreg/oracles.hpp"
#include "kreg/ridge.hpp"
#include "kreg/vvridge.hpp"

namespace kreg {

struct CsvData {
    Matrix values;
    std::vector<std::string> header; // empty when the file has no header row
};

/// Reads a comma-separated numeric table. A first row with any non-numeric
/// cell is taken as a header. Parse failures report row and column.
CsvData read_csv(const std::string& path);

/// Writes values with shortest round-trip decimal formatting; columns are
/// comma separated, one row per line.
void write_csv(const std::string& path, const Eigen::Ref<const Matrix>& values,
               const std::vector<std::string>& header = {});

std::string base64_encode(const std::uint8_t* data, std::size_t len);
std::vector<std::uint8_t> base64_decode(const std::string& text);

/// Row-major little-endian float64 payload; round-trips bit for bit.
std::string matrix_to_base64(const Eigen::Ref<const Matrix>& m);
Matrix matrix_from_base64(const std::string& text, Index rows, Index cols);

// Versioned model files. Coefficient and point arrays are stored as base64
// float64, so a save/load cycle reproduces predictions exactly; the fitted
// factorization of a Koopman model is rebuilt on load.
void save_model(const KrrModel& model, const std::string& path);     // "krr-v1"
void save_model(const NystromModel& model, const std::string& path); // "nystrom-v1"
void save_model(const VvKrrModel& model, const std::string& path);   // "vvkrr-v1"
void save_model(const KoopmanModel& model, const std::string& path); // "koopman-v1"

using AnyModel = std::variant<KrrModel, NystromModel, VvKrrModel, KoopmanModel>;

/// Loads any of the versioned formats, dispatching on the "format" field.
/// Unknown or missing versions are input errors.
AnyModel load_model(const std::string& path);

nlohmann::json chain_to_json(const FiniteMarkovChain& chain);
FiniteMarkovChain chain_from_json(const nlohmann::json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace kreg

#endif
