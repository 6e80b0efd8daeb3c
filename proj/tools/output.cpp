// Copyright 2026 The ghznet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "output.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

#include <openssl/evp.h>

namespace ghznet::cli {

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    if (v == 0) {
        return "0";
    }
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

double round_number(double v) {
    if (!std::isfinite(v)) {
        return v;
    }
    const auto text = format_number(v);
    double out = 0;
    std::from_chars(text.data(), text.data() + text.size(), out);
    return out;
}

std::string sha256_hex(const std::string &text) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static const char *hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["command"] = command;
    j["parameters"] = parameters;
    j["config_digest"] = config_digest;
    j["tool_version"] = tool_version;
    j["schema"] = schema_version;
    j["outputs"] = outputs;
    return j;
}

void RunManifest::write_csv_header(std::ostream &out) const {
    out << "# command: " << command << '\n';
    out << "# parameters:";
    for (auto &[k, v] : parameters) {
        out << ' ' << k << '=' << v;
    }
    out << '\n';
    out << "# config_digest: sha256:" << config_digest << '\n';
    out << "# tool_version: " << tool_version << '\n';
    out << "# schema: " << schema_version << '\n';
    out << "# outputs:";
    for (auto &o : outputs) {
        out << ' ' << o;
    }
    out << '\n';
}

namespace {

std::string csv_cell(const Cell &c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(const std::string &s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) {
                return s;
            }
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"') {
                    q += '"';
                }
                q += ch;
            }
            return q + '"';
        }
    };
    return std::visit(Visitor{}, c);
}

} // namespace

void write_csv(std::ostream &out, const RunManifest &manifest, const Table &table) {
    manifest.write_csv_header(out);
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out << (i ? "," : "") << table.columns[i];
    }
    out << '\n';
    for (auto &row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << csv_cell(row[i]);
        }
        out << '\n';
    }
}

nlohmann::ordered_json cell_json(const Cell &c) {
    struct Visitor {
        nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) {
                return nullptr;
            }
            return round_number(v);
        }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(const std::string &s) const { return s; }
    };
    return std::visit(Visitor{}, c);
}

nlohmann::ordered_json table_json(const RunManifest &manifest, const Table &table) {
    nlohmann::ordered_json j;
    j["manifest"] = manifest.to_json();
    j["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (auto &row : table.rows) {
        nlohmann::ordered_json r;
        for (std::size_t i = 0; i < row.size() && i < table.columns.size(); ++i) {
            r[table.columns[i]] = cell_json(row[i]);
        }
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    return j;
}

} // namespace ghznet::cli
