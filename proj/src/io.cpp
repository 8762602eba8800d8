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

#include "kreg/io.hpp"

#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kreg {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw input_error("cannot open '" + path + "' for reading");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw input_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out)
        throw input_error("failed writing '" + path + "'");
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& tok, double& out) {
    const char* begin = tok.data();
    const char* end = begin + tok.size();
    const auto res = std::from_chars(begin, end, out);
    return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(trim(line.substr(start)));
            break;
        }
        out.push_back(trim(line.substr(start, pos - start)));
        start = pos + 1;
    }
    return out;
}

} // namespace

CsvData read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open '" + path + "' for reading");

    CsvData data;
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto tokens = split_line(line);
        std::vector<double> row(tokens.size());
        bool numeric = true;
        std::size_t bad_col = 0;
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            if (!parse_double(tokens[c], row[c])) {
                numeric = false;
                bad_col = c;
                break;
            }
        }
        if (!numeric) {
            if (first_content_row) {
                data.header = tokens; // leading non-numeric row is a header
                first_content_row = false;
                continue;
            }
            throw input_error(path + ": row " + std::to_string(lineno) + ", column " +
                              std::to_string(bad_col + 1) + ": cannot parse '" +
                              tokens[bad_col] + "' as a number");
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw input_error(path + ": row " + std::to_string(lineno) + " has " +
                              std::to_string(row.size()) + " columns, expected " +
                              std::to_string(rows.front().size()));
        first_content_row = false;
        rows.push_back(std::move(row));
    }

    if (rows.empty()) {
        data.values.resize(0, 0);
        return data;
    }
    data.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            data.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return data;
}

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

void write_csv(const std::string& path, const Eigen::Ref<const Matrix>& values,
               const std::vector<std::string>& header) {
    std::ostringstream out;
    if (!header.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << '\n';
    }
    for (Index i = 0; i < values.rows(); ++i) {
        for (Index j = 0; j < values.cols(); ++j)
            out << (j ? "," : "") << format_double(values(i, j));
        out << '\n';
    }
    write_text_file(path, out.str());
}

namespace {

constexpr char b64_alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int b64_value(char c) {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

} // namespace

std::string base64_encode(const std::uint8_t* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        const std::uint32_t b0 = data[i];
        const std::uint32_t b1 = i + 1 < len ? data[i + 1] : 0;
        const std::uint32_t b2 = i + 2 < len ? data[i + 2] : 0;
        const std::uint32_t triple = (b0 << 16) | (b1 << 8) | b2;
        out.push_back(b64_alphabet[(triple >> 18) & 0x3F]);
        out.push_back(b64_alphabet[(triple >> 12) & 0x3F]);
        out.push_back(i + 1 < len ? b64_alphabet[(triple >> 6) & 0x3F] : '=');
        out.push_back(i + 2 < len ? b64_alphabet[triple & 0x3F] : '=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    if (text.size() % 4 != 0)
        throw input_error("base64: length must be a multiple of 4");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            const char c = text[i + k];
            if (c == '=') {
                if (i + 4 != text.size() || k < 2)
                    throw input_error("base64: misplaced padding");
                vals[k] = 0;
                ++pad;
            } else {
                vals[k] = b64_value(c);
                if (vals[k] < 0)
                    throw input_error(std::string("base64: invalid character '") + c + "'");
                if (pad > 0)
                    throw input_error("base64: data after padding");
            }
        }
        const std::uint32_t triple = (static_cast<std::uint32_t>(vals[0]) << 18) |
                                     (static_cast<std::uint32_t>(vals[1]) << 12) |
                                     (static_cast<std::uint32_t>(vals[2]) << 6) |
                                     static_cast<std::uint32_t>(vals[3]);
        out.push_back(static_cast<std::uint8_t>((triple >> 16) & 0xFF));
        if (pad < 2)
            out.push_back(static_cast<std::uint8_t>((triple >> 8) & 0xFF));
        if (pad < 1)
            out.push_back(static_cast<std::uint8_t>(triple & 0xFF));
    }
    return out;
}

std::string matrix_to_base64(const Eigen::Ref<const Matrix>& m) {
    std::vector<std::uint8_t> bytes(static_cast<std::size_t>(m.size()) * sizeof(double));
    std::size_t off = 0;
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            const double v = m(i, j);
            std::memcpy(bytes.data() + off, &v, sizeof(double));
            off += sizeof(double);
        }
    }
    return base64_encode(bytes.data(), bytes.size());
}

Matrix matrix_from_base64(const std::string& text, Index rows, Index cols) {
    const auto bytes = base64_decode(text);
    const std::size_t expected = static_cast<std::size_t>(rows) * cols * sizeof(double);
    if (bytes.size() != expected)
        throw input_error("matrix payload has " + std::to_string(bytes.size()) +
                          " bytes, expected " + std::to_string(expected));
    Matrix m(rows, cols);
    std::size_t off = 0;
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) {
            double v;
            std::memcpy(&v, bytes.data() + off, sizeof(double));
            m(i, j) = v;
            off += sizeof(double);
        }
    }
    return m;
}

namespace {

nlohmann::json parse_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded())
        throw input_error("'" + path + "' is not valid JSON");
    return j;
}

void dump_json_file(const std::string& path, const nlohmann::json& j) {
    write_text_file(path, j.dump(2) + "\n");
}

} // namespace

void save_model(const KrrModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "krr-v1";
    j["kernel"] = kernel_to_json(model.kernel);
    j["lambda"] = model.lambda;
    j["n"] = model.support_points.rows();
    j["d"] = model.support_points.cols();
    j["support_points"] = matrix_to_base64(model.support_points);
    j["coefficients"] = matrix_to_base64(model.coefficients);
    dump_json_file(path, j);
}

void save_model(const NystromModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "nystrom-v1";
    j["kernel"] = kernel_to_json(model.kernel);
    j["lambda"] = model.lambda;
    j["m"] = model.centers.rows();
    j["d"] = model.centers.cols();
    j["centers"] = matrix_to_base64(model.centers);
    j["coefficients"] = matrix_to_base64(model.coefficients);
    j["center_indices"] = model.center_indices;
    dump_json_file(path, j);
}

void save_model(const VvKrrModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "vvkrr-v1";
    j["kernel"] = kernel_to_json(model.scalar_kernel);
    j["lambda"] = model.lambda;
    j["n"] = model.support_points.rows();
    j["d"] = model.support_points.cols();
    j["t"] = model.coefficients.cols();
    j["support_points"] = matrix_to_base64(model.support_points);
    j["coefficients"] = matrix_to_base64(model.coefficients);
    j["output_operator"] = matrix_to_base64(model.output_operator);
    dump_json_file(path, j);
}

void save_model(const KoopmanModel& model, const std::string& path) {
    nlohmann::json j;
    j["format"] = "koopman-v1";
    j["kernel"] = kernel_to_json(model.kernel);
    j["lambda"] = model.lambda;
    j["t"] = model.inputs.rows();
    j["d"] = model.inputs.cols();
    j["inputs"] = matrix_to_base64(model.inputs);
    j["outputs"] = matrix_to_base64(model.outputs);
    dump_json_file(path, j);
}

AnyModel load_model(const std::string& path) {
    const nlohmann::json j = parse_json_file(path);
    if (!j.is_object() || !j.contains("format"))
        throw input_error("'" + path + "' is not a model file (missing 'format')");
    const std::string format = j.at("format").get<std::string>();

    if (format == "krr-v1") {
        KrrModel model;
        model.kernel = kernel_from_json(j.at("kernel"));
        model.lambda = j.at("lambda").get<double>();
        const Index n = j.at("n").get<Index>();
        const Index d = j.at("d").get<Index>();
        model.support_points = matrix_from_base64(j.at("support_points").get<std::string>(), n, d);
        model.coefficients = matrix_from_base64(j.at("coefficients").get<std::string>(), n, 1);
        return model;
    }
    if (format == "nystrom-v1") {
        NystromModel model;
        model.kernel = kernel_from_json(j.at("kernel"));
        model.lambda = j.at("lambda").get<double>();
        const Index m = j.at("m").get<Index>();
        const Index d = j.at("d").get<Index>();
        model.centers = matrix_from_base64(j.at("centers").get<std::string>(), m, d);
        model.coefficients = matrix_from_base64(j.at("coefficients").get<std::string>(), m, 1);
        model.center_indices = j.at("center_indices").get<std::vector<Index>>();
        return model;
    }
    if (format == "vvkrr-v1") {
        VvKrrModel model;
        model.scalar_kernel = kernel_from_json(j.at("kernel"));
        model.lambda = j.at("lambda").get<double>();
        const Index n = j.at("n").get<Index>();
        const Index d = j.at("d").get<Index>();
        const Index t = j.at("t").get<Index>();
        model.support_points = matrix_from_base64(j.at("support_points").get<std::string>(), n, d);
        model.coefficients = matrix_from_base64(j.at("coefficients").get<std::string>(), n, t);
        model.output_operator = matrix_from_base64(j.at("output_operator").get<std::string>(), t, t);
        return model;
    }
    if (format == "koopman-v1") {
        const KernelSpec kernel = kernel_from_json(j.at("kernel"));
        const double lambda = j.at("lambda").get<double>();
        const Index t = j.at("t").get<Index>();
        const Index d = j.at("d").get<Index>();
        const Matrix inputs = matrix_from_base64(j.at("inputs").get<std::string>(), t, d);
        const Matrix outputs = matrix_from_base64(j.at("outputs").get<std::string>(), t, d);
        return fit_koopman_pairs(inputs, outputs, kernel, lambda);
    }
    throw input_error("'" + path + "': unsupported model format '" + format + "'");
}

nlohmann::json chain_to_json(const FiniteMarkovChain& chain) {
    nlohmann::json j;
    std::vector<std::vector<double>> p(static_cast<std::size_t>(chain.num_states));
    for (Index i = 0; i < chain.num_states; ++i) {
        p[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(chain.num_states));
        for (Index k = 0; k < chain.num_states; ++k)
            p[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = chain.transition(i, k);
    }
    j["P"] = p;
    if (chain.state_embedding.isIdentity(0.0)) {
        j["embedding"] = "one_hot";
    } else {
        std::vector<std::vector<double>> e(static_cast<std::size_t>(chain.num_states));
        for (Index i = 0; i < chain.num_states; ++i)
            for (Index k = 0; k < chain.state_embedding.cols(); ++k)
                e[static_cast<std::size_t>(i)].push_back(chain.state_embedding(i, k));
        j["embedding"] = e;
    }
    return j;
}

FiniteMarkovChain chain_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("P"))
        throw input_error("chain spec: missing 'P'");
    const auto rows = j.at("P").get<std::vector<std::vector<double>>>();
    const Index m = static_cast<Index>(rows.size());
    if (m == 0)
        throw input_error("chain spec: empty transition matrix");
    Matrix p(m, m);
    for (Index i = 0; i < m; ++i) {
        if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != m)
            throw input_error("chain spec: transition matrix is not square");
        for (Index k = 0; k < m; ++k)
            p(i, k) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    if (!j.contains("embedding") || j.at("embedding") == "one_hot")
        return FiniteMarkovChain::from_matrix(std::move(p));

    const auto emb = j.at("embedding").get<std::vector<std::vector<double>>>();
    if (static_cast<Index>(emb.size()) != m)
        throw input_error("chain spec: embedding needs one row per state");
    const Index d = emb.empty() ? 0 : static_cast<Index>(emb[0].size());
    Matrix e(m, d);
    for (Index i = 0; i < m; ++i) {
        if (static_cast<Index>(emb[static_cast<std::size_t>(i)].size()) != d)
            throw input_error("chain spec: ragged embedding rows");
        for (Index k = 0; k < d; ++k)
            e(i, k) = emb[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
    }
    return FiniteMarkovChain::from_matrix(std::move(p), std::move(e));
}

} // namespace kreg
