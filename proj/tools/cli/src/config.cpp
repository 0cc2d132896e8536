#include "nlpg/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "nlpg/errors.hpp"

namespace nlpg::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, sep)) out.push_back(trim(item));
    return out;
}

}  // namespace

ConfigFile parse_config(const std::string& text, const std::string& origin) {
    ConfigFile cfg;
    cfg.path = origin;
    std::set<std::string> seen;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(t.substr(0, eq)), value = trim(t.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
        if (!seen.insert(key).second) throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.entries.emplace_back(std::move(key), std::move(value));
    }
    return cfg;
}

ConfigFile load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

std::string option_for_key(const std::string& key) {
    static const std::map<std::string, std::string> aliases{
        {"solver.tol", "solver-tol"},   {"solver.newton_tol", "solver-tol"}, {"solver.max_iter", "max-iter"},
        {"solver.delta_end", "delta-end"}, {"solver.p_ratio", "p-ratio"},  {"mesh.list", "mesh-list"},
        {"mesh.n_elem", "n-elem"},      {"output.dir", "output"},          {"output.format", "format"},
        {"problem.p", "p"},
    };
    if (auto it = aliases.find(key); it != aliases.end()) return it->second;
    std::string out = key;
    std::replace(out.begin(), out.end(), '_', '-');
    std::replace(out.begin(), out.end(), '.', '-');
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& what) {
    std::vector<double> out;
    for (const std::string& item : split(text, ',')) {
        if (item.empty()) continue;
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(what + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw ConfigError(what + ": the list is empty");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const std::string& what) {
    std::vector<std::size_t> out;
    for (const std::string& item : split(text, ',')) {
        if (item.empty()) continue;
        std::size_t v = 0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (ec != std::errc() || ptr != item.data() + item.size() || v == 0)
            throw ConfigError(what + ": '" + item + "' is not a positive integer");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(what + ": the list is empty");
    return out;
}

}  // namespace nlpg::cli
