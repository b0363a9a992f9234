#include "matmcd/io/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "matmcd/util/error.hpp"
#include "matmcd/util/text.hpp"

namespace matmcd::io {

namespace {

std::vector<std::string> split_csv_line(const std::string& line, std::size_t row) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur.push_back('"');
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (quoted) throw DataError("row " + std::to_string(row) + ": unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

std::string quote_csv(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

std::string known_names(const std::vector<std::string>& names) { return text::join(names, ", "); }

NodeId resolve(const std::string& name, const std::vector<std::string>& names, const std::string& what) {
    for (NodeId i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    throw DataError(what + " names unknown variable '" + name + "'; known variables: " + known_names(names));
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

Dataset parse_dataset_csv(std::string_view content, const std::string& title) {
    const auto lines = text::split_lines(content);
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    for (std::size_t l = 0; l < lines.size(); ++l) {
        const std::size_t row = l + 1;
        if (text::trim(lines[l]).empty()) continue;
        auto fields = split_csv_line(lines[l], row);
        if (header.empty()) {
            for (auto& f : fields) header.push_back(text::trim(f));
            continue;
        }
        if (fields.size() != header.size()) {
            throw DataError("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                            " fields but the header has " + std::to_string(header.size()));
        }
        std::vector<double> values(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string cell = text::trim(fields[c]);
            char* end = nullptr;
            const double v = cell.empty() ? 0.0 : std::strtod(cell.c_str(), &end);
            const std::string where = "row " + std::to_string(row) + ", column " + std::to_string(c + 1) + " (" +
                                      header[c] + ")";
            if (cell.empty() || end != cell.c_str() + cell.size()) {
                throw DataError(where + ": '" + cell + "' is not a number");
            }
            if (!std::isfinite(v)) throw DataError(where + ": non-finite value '" + cell + "'");
            values[c] = v;
        }
        rows.push_back(std::move(values));
    }
    if (header.empty()) throw DataError("empty file: no header row");
    if (rows.empty()) throw DataError("no observations below the header row");
    Eigen::MatrixXd samples(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(header.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            samples(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    Dataset data(std::move(samples), MetaData{title, std::move(header)});
    data.validate();
    return data;
}

Dataset load_dataset_csv(const std::filesystem::path& path) {
    std::string title = path.stem().string();
    const auto meta_path = path.parent_path() / (path.stem().string() + ".meta.json");
    if (std::filesystem::exists(meta_path)) {
        try {
            const auto doc = nlohmann::json::parse(read_file(meta_path));
            if (doc.contains("title")) title = doc.at("title").get<std::string>();
        } catch (const nlohmann::json::exception& e) {
            throw DataError(meta_path.string() + ": " + e.what());
        }
    }
    try {
        return parse_dataset_csv(read_file(path), title);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::string serialize_dataset_csv(const Dataset& data) {
    std::string out;
    for (std::size_t c = 0; c < data.meta.names.size(); ++c) {
        if (c) out.push_back(',');
        out += quote_csv(data.meta.names[c]);
    }
    out.push_back('\n');
    char buf[32];
    for (Eigen::Index r = 0; r < data.samples.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.samples.cols(); ++c) {
            if (c) out.push_back(',');
            std::snprintf(buf, sizeof buf, "%.17g", data.samples(r, c));
            out += buf;
        }
        out.push_back('\n');
    }
    return out;
}

void write_dataset_csv(const Dataset& data, const std::filesystem::path& path) {
    write_file(path, serialize_dataset_csv(data));
}

CausalGraph parse_truth_graph(std::string_view content, const std::vector<std::string>& names) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("truth file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("edges") || !doc["edges"].is_array()) {
        throw DataError("truth file needs an \"edges\" array of [from, to] name pairs");
    }
    CausalGraph g(names.size());
    for (const auto& e : doc["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
            throw DataError("truth edge " + e.dump() + " is not a [from, to] name pair");
        }
        const NodeId from = resolve(e[0].get<std::string>(), names, "truth edge");
        const NodeId to = resolve(e[1].get<std::string>(), names, "truth edge");
        if (from == to) throw DataError("truth edge " + e.dump() + " is a self-loop");
        g.add_edge(from, to);
    }
    if (auto cycle = find_cycle(g)) {
        std::vector<std::string> path;
        for (NodeId v : *cycle) path.push_back(names[v]);
        throw DataError("truth graph is cyclic: " + text::join(path, " -> "));
    }
    return g;
}

CausalGraph load_truth_graph(const std::filesystem::path& path, const std::vector<std::string>& names) {
    try {
        return parse_truth_graph(read_file(path), names);
    } catch (const DataError& e) {
        throw DataError(path.string() + ": " + e.what());
    }
}

std::vector<RcaCaseFile> parse_rca_cases(std::string_view content, const std::vector<std::string>& names) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("RCA case file is not valid JSON: ") + e.what());
    }
    if (doc.is_object()) doc = nlohmann::json::array({doc});
    if (!doc.is_array() || doc.empty()) throw DataError("RCA case file holds no cases");
    std::vector<RcaCaseFile> out;
    try {
        for (const auto& item : doc) {
            RcaCaseFile f;
            auto& c = f.rca_case;
            c.fault_id = item.at("fault_id").get<std::string>();
            c.group = item.value("group", "");
            c.anomaly_scores.assign(names.size(), 0.0);
            if (item.contains("anomaly_scores")) {
                for (const auto& [name, score] : item.at("anomaly_scores").items()) {
                    c.anomaly_scores[resolve(name, names, "fault " + c.fault_id)] = score.get<double>();
                }
            } else if (item.contains("series")) {
                std::vector<std::vector<double>> series(names.size());
                std::vector<bool> seen(names.size(), false);
                for (const auto& [name, values] : item.at("series").items()) {
                    const NodeId v = resolve(name, names, "fault " + c.fault_id);
                    series[v] = values.get<std::vector<double>>();
                    seen[v] = true;
                }
                for (NodeId v = 0; v < names.size(); ++v) {
                    if (!seen[v]) throw DataError("fault " + c.fault_id + " has no series for " + names[v]);
                }
                f.series = std::move(series);
            } else {
                throw DataError("fault " + c.fault_id + " needs anomaly_scores or series");
            }
            for (const auto& name : item.at("truth_root_causes")) {
                c.truth_root_causes.insert(resolve(name.get<std::string>(), names, "fault " + c.fault_id));
            }
            if (c.truth_root_causes.empty()) throw DataError("fault " + c.fault_id + " lists no root cause");
            out.push_back(std::move(f));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed RCA case: ") + e.what());
    }
    return out;
}

std::vector<RcaCaseFile> load_rca_cases(const std::filesystem::path& path, const std::vector<std::string>& names) {
    return parse_rca_cases(read_file(path), names);
}

}  // namespace matmcd::io
