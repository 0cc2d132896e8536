#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nlpg::cli {

/// Flat `key = value` configuration. Blank lines and lines starting with
/// `#` are ignored; a key may appear only once.
struct ConfigFile {
    std::string path;
    std::vector<std::pair<std::string, std::string>> entries;
};

/// Throws ConfigError on unreadable files, malformed lines or duplicates.
ConfigFile load_config(const std::string& path);
ConfigFile parse_config(const std::string& text, const std::string& origin = "<string>");

/// Long option name (without dashes) a config key maps to. Underscores and
/// dots become dashes, and a handful of grouped spellings are accepted:
/// `solver.tol` -> `solver-tol`, `mesh.list` -> `mesh-list`,
/// `mesh.n_elem` -> `n-elem`, `output.dir` -> `output`.
std::string option_for_key(const std::string& key);

/// Comma-separated list parsing; throws ConfigError naming `what`.
std::vector<double> parse_double_list(const std::string& text, const std::string& what);
std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what);

}  // namespace nlpg::cli
