#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qgp/sampler.hpp"

namespace qgp::csvio {

// Shortest decimal string that round-trips the double (17 significant digits).
std::string fmt17(double v);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// UTF-8, comma-separated, header row first, '\n' line endings, no trailing
// separator. Values containing commas/quotes/newlines are quoted with '"'
// doubling. Byte-stable for identical inputs.
void write_csv(const std::string& path, const Table& table);

// The same table as a JSON array of {header: value} objects (values kept as
// the already-formatted strings, so both formats carry identical digits).
void write_json_rows(const std::string& path, const Table& table);

// Dispatch on format in {"csv", "json"}.
void write_table(const std::string& path, const Table& table,
                 const std::string& format);

void write_json_file(const std::string& path, const nlohmann::json& j);

// Metadata sidecar next to an artifact: "<path>.meta.json".
std::string sidecar_path(const std::string& out_path);

// One row per sample, one column per training state (header = state labels).
Table batch_table(const sampler::SampleBatch& batch);

// Config echo + provenance for a sample batch. Wall time lives only here,
// never in the CSV body, so reruns stay byte-identical.
nlohmann::json batch_metadata(const sampler::SampleBatch& batch,
                              const nlohmann::json& config_echo,
                              double wall_seconds);

}  // namespace qgp::csvio
