// Copyright 2026 The mixbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mixbench/dataset_io.hpp"

#include "mixbench/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace mixbench {

namespace {

constexpr std::string_view kCategoricalPrefix = "cat:";
constexpr std::string_view kTruthColumn = "truth";

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

int parse_int(const std::string& text) {
    const std::string t = trim(text);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw Error(ErrorKind::ParseError, "not an integer: '" + text + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw Error(ErrorKind::ParseError, "not a number: '" + text + "'");
    }
    return value;
}

void write_dataset_csv(std::ostream& out, const MixedDataset& data) {
    const int pr = data.p_continuous();
    const auto& names = data.names();
    for (int j = 0; j < data.p(); ++j) {
        if (j > 0) out << ',';
        if (j >= pr) out << kCategoricalPrefix;
        out << names[static_cast<std::size_t>(j)];
    }
    if (data.truth()) out << ',' << kTruthColumn;
    out << '\n';
    for (int i = 0; i < data.n(); ++i) {
        for (int j = 0; j < pr; ++j) {
            if (j > 0) out << ',';
            out << format_double(data.continuous()(i, j));
        }
        for (int j = 0; j < data.p_categorical(); ++j) {
            if (pr + j > 0) out << ',';
            out << data.categorical()(i, j);
        }
        if (data.truth()) out << ',' << (*data.truth())[static_cast<std::size_t>(i)];
        out << '\n';
    }
}

MixedDataset read_dataset_csv(std::istream& in, const std::optional<DatasetMetadata>& meta) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::ParseError, "dataset CSV has no header");
    const auto header = split(trim(line), ',');

    std::vector<int> continuous_cols;
    std::vector<int> categorical_cols;
    std::vector<std::string> continuous_names;
    std::vector<std::string> categorical_names;
    int truth_col = -1;
    for (int j = 0; j < static_cast<int>(header.size()); ++j) {
        const std::string name = trim(header[static_cast<std::size_t>(j)]);
        if (name == kTruthColumn) {
            truth_col = j;
        } else if (name.rfind(kCategoricalPrefix, 0) == 0) {
            categorical_cols.push_back(j);
            categorical_names.push_back(name.substr(kCategoricalPrefix.size()));
        } else {
            continuous_cols.push_back(j);
            continuous_names.push_back(name);
        }
    }

    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        auto fields = split(line, ',');
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::ParseError, "row " + std::to_string(rows.size() + 1) + " has " +
                                                   std::to_string(fields.size()) + " fields, expected " +
                                                   std::to_string(header.size()));
        }
        rows.push_back(std::move(fields));
    }
    const int n = static_cast<int>(rows.size());
    Eigen::MatrixXd con(n, static_cast<int>(continuous_cols.size()));
    Eigen::MatrixXi cat(n, static_cast<int>(categorical_cols.size()));
    std::optional<std::vector<int>> truth;
    if (truth_col >= 0) truth.emplace(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        for (int j = 0; j < con.cols(); ++j) con(i, j) = parse_double(row[static_cast<std::size_t>(continuous_cols[static_cast<std::size_t>(j)])]);
        for (int j = 0; j < cat.cols(); ++j) cat(i, j) = parse_int(row[static_cast<std::size_t>(categorical_cols[static_cast<std::size_t>(j)])]);
        if (truth) (*truth)[static_cast<std::size_t>(i)] = parse_int(row[static_cast<std::size_t>(truth_col)]);
    }

    std::vector<int> levels;
    if (meta) {
        if (meta->n != n || meta->p_continuous != con.cols() || meta->p_categorical != cat.cols()) {
            throw Error(ErrorKind::SchemaMismatch, "dataset CSV disagrees with its metadata sidecar");
        }
        levels = meta->levels;
    } else {
        for (int j = 0; j < cat.cols(); ++j) levels.push_back(n > 0 ? cat.col(j).maxCoeff() + 1 : 1);
    }

    std::vector<std::string> names = continuous_names;
    names.insert(names.end(), categorical_names.begin(), categorical_names.end());
    std::vector<std::vector<std::string>> vocab;
    if (meta) {
        for (int j = 0; j < cat.cols(); ++j) {
            const auto it = meta->extra.find("vocabulary." + categorical_names[static_cast<std::size_t>(j)]);
            if (it == meta->extra.end()) {
                vocab.clear();
                break;
            }
            vocab.push_back(split(it->second, '|'));
        }
    }
    return MixedDataset(std::move(con), std::move(cat), std::move(levels), std::move(truth), std::move(names),
                        std::move(vocab));
}

DatasetMetadata metadata_for(const MixedDataset& data, std::optional<std::uint64_t> seed) {
    DatasetMetadata meta;
    meta.n = data.n();
    meta.p_continuous = data.p_continuous();
    meta.p_categorical = data.p_categorical();
    meta.levels = data.levels();
    meta.seed = seed;
    for (int j = 0; j < data.p_categorical(); ++j) {
        std::string joined;
        for (const auto& word : data.vocabularies()[static_cast<std::size_t>(j)]) {
            if (!joined.empty()) joined += '|';
            joined += word;
        }
        meta.extra["vocabulary." + data.names()[static_cast<std::size_t>(data.p_continuous() + j)]] = joined;
    }
    return meta;
}

void write_metadata(std::ostream& out, const DatasetMetadata& meta) {
    out << "n=" << meta.n << '\n';
    out << "p_r=" << meta.p_continuous << '\n';
    out << "p_c=" << meta.p_categorical << '\n';
    out << "levels=";
    for (std::size_t j = 0; j < meta.levels.size(); ++j) out << (j ? "," : "") << meta.levels[j];
    out << '\n';
    if (meta.seed) out << "seed=" << *meta.seed << '\n';
    for (const auto& [key, value] : meta.extra) out << key << '=' << value << '\n';
}

DatasetMetadata read_metadata(std::istream& in) {
    DatasetMetadata meta;
    bool has_n = false;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw Error(ErrorKind::ParseError, "metadata line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "n") {
            meta.n = parse_int(value);
            has_n = true;
        } else if (key == "p_r") {
            meta.p_continuous = parse_int(value);
        } else if (key == "p_c") {
            meta.p_categorical = parse_int(value);
        } else if (key == "levels") {
            meta.levels.clear();
            if (!value.empty()) {
                for (const auto& part : split(value, ',')) meta.levels.push_back(parse_int(part));
            }
        } else if (key == "seed") {
            meta.seed = std::stoull(value);
        } else {
            meta.extra[key] = value;
        }
    }
    if (!has_n) throw Error(ErrorKind::ParseError, "metadata lacks n");
    if (static_cast<int>(meta.levels.size()) != meta.p_categorical) {
        throw Error(ErrorKind::ParseError, "metadata levels count differs from p_c");
    }
    return meta;
}

std::filesystem::path metadata_path(const std::filesystem::path& csv) {
    auto meta = csv;
    meta.replace_extension(".meta");
    return meta;
}

void save_dataset(const std::filesystem::path& csv, const MixedDataset& data, std::optional<std::uint64_t> seed) {
    std::ofstream out(csv);
    if (!out) throw Error(ErrorKind::IoError, "cannot write " + csv.string());
    write_dataset_csv(out, data);
    std::ofstream meta_out(metadata_path(csv));
    if (!meta_out) throw Error(ErrorKind::IoError, "cannot write " + metadata_path(csv).string());
    write_metadata(meta_out, metadata_for(data, seed));
}

MixedDataset load_dataset(const std::filesystem::path& csv) {
    std::ifstream in(csv);
    if (!in) throw Error(ErrorKind::IoError, "cannot read " + csv.string());
    std::optional<DatasetMetadata> meta;
    if (const auto mp = metadata_path(csv); std::filesystem::exists(mp)) {
        std::ifstream meta_in(mp);
        meta = read_metadata(meta_in);
    }
    return read_dataset_csv(in, meta);
}

}  // namespace mixbench
