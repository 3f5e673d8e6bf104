#include "qgp/csvio.hpp"

#include <cstdio>
#include <fstream>

#include "qgp/errors.hpp"
#include "qgp/weingarten.hpp"

namespace qgp::csvio {

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path, std::ios::binary);  // '\n' endings on every platform
    if (!f) throw Error("cannot open output file: " + path);
    return f;
}

}  // namespace

void write_csv(const std::string& path, const Table& table) {
    auto f = open_out(path);
    for (size_t i = 0; i < table.header.size(); ++i)
        f << (i ? "," : "") << csv_escape(table.header[i]);
    f << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw Error("row width does not match header in " + path);
        for (size_t i = 0; i < row.size(); ++i)
            f << (i ? "," : "") << csv_escape(row[i]);
        f << '\n';
    }
    if (!f) throw Error("write failed: " + path);
}

void write_json_rows(const std::string& path, const Table& table) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw Error("row width does not match header in " + path);
        nlohmann::json obj = nlohmann::json::object();
        for (size_t i = 0; i < row.size(); ++i) obj[table.header[i]] = row[i];
        arr.push_back(std::move(obj));
    }
    write_json_file(path, arr);
}

void write_table(const std::string& path, const Table& table,
                 const std::string& format) {
    if (format == "csv")
        write_csv(path, table);
    else if (format == "json")
        write_json_rows(path, table);
    else
        throw Error("unknown output format: " + format + " (expected csv or json)");
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    auto f = open_out(path);
    f << j.dump(2) << '\n';
    if (!f) throw Error("write failed: " + path);
}

std::string sidecar_path(const std::string& out_path) {
    return out_path + ".meta.json";
}

Table batch_table(const sampler::SampleBatch& batch) {
    Table t;
    t.header = batch.state_labels;
    t.rows.reserve(static_cast<size_t>(batch.n_samples()));
    for (long s = 0; s < batch.n_samples(); ++s) {
        std::vector<std::string> row(batch.m());
        for (int i = 0; i < batch.m(); ++i) row[i] = fmt17(batch.values(s, i));
        t.rows.push_back(std::move(row));
    }
    return t;
}

nlohmann::json batch_metadata(const sampler::SampleBatch& batch,
                              const nlohmann::json& config_echo,
                              double wall_seconds) {
    nlohmann::json j;
    j["artifact_version"] = 1;
    j["group"] = weingarten::to_string(batch.group);
    j["dimension"] = batch.d;
    j["seed"] = batch.seed;
    j["n_samples"] = batch.n_samples();
    j["observable"] = batch.observable;
    j["state_labels"] = batch.state_labels;
    j["config"] = config_echo;
    j["wall_seconds"] = wall_seconds;
    return j;
}

}  // namespace qgp::csvio
