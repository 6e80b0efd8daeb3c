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

#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace ghznet::cli {

inline constexpr const char *tool_version = "1.0.0";
inline constexpr const char *schema_version = "v1";

/// 9 significant digits, locale independent.
std::string format_number(double v);

/// The value format_number prints, parsed back.
double round_number(double v);

/// Hex SHA-256 of `text`.
std::string sha256_hex(const std::string &text);

using Cell = std::variant<std::monostate, double, std::int64_t, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::string config_digest;
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const;
    void write_csv_header(std::ostream &out) const;
};

void write_csv(std::ostream &out, const RunManifest &manifest, const Table &table);

/// {"manifest": ..., "columns": [...], "rows": [{...}], <extra keys>}
nlohmann::ordered_json table_json(const RunManifest &manifest, const Table &table);

nlohmann::ordered_json cell_json(const Cell &c);

} // namespace ghznet::cli
