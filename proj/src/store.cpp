#include "cnp/store.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cnp {

using nlohmann::json;

json TaskSpec::to_json() const {
    json j{{"family", to_string(family)}, {"tri", tri}, {"colors", colors}};
    if (egraph) j["spec"] = {{"m", egraph->m}, {"a", egraph->a}, {"b", egraph->b}};
    if (wgraph)
        j["spec"] = {{"p", wgraph->p}, {"c", wgraph->c}, {"d", wgraph->d}, {"radii", wgraph->radii}, {"offsets", wgraph->offsets}};
    if (bi) {
        json b = json::object();
        if (bi->s_squared) b["s_squared"] = *bi->s_squared;
        if (bi->s) b["s"] = *bi->s;
        if (bi->angle) b["angle"] = *bi->angle;
        j["bi"] = b;
    } else {
        j["bi"] = nullptr;
    }
    return j;
}

TaskSpec TaskSpec::from_json(const json& j) {
    TaskSpec t;
    t.family = graph_kind_from_string(j.at("family").get<std::string>());
    t.tri = j.value("tri", false);
    t.colors = j.at("colors").get<int>();
    const json& s = j.at("spec");
    if (t.family == GraphKind::egraph)
        t.egraph = EGraphSpec{s.at("m").get<int>(), s.at("a").get<std::int64_t>(), s.at("b").get<std::int64_t>()};
    else if (t.family == GraphKind::wgraph)
        t.wgraph = WGraphSpec{s.at("p").get<int>(), s.at("c").get<int>(), s.at("d").get<double>(),
                              s.value("radii", std::vector<double>{}), s.value("offsets", std::vector<double>{})};
    else
        throw std::invalid_argument("tasks take e-graphs or w-graphs only");
    if (j.contains("bi") && !j.at("bi").is_null()) {
        BiPlacement b;
        if (j["bi"].contains("s_squared")) b.s_squared = j["bi"]["s_squared"].get<std::int64_t>();
        if (j["bi"].contains("s")) b.s = j["bi"]["s"].get<double>();
        if (j["bi"].contains("angle")) b.angle = j["bi"]["angle"].get<double>();
        t.bi = b;
    }
    return t;
}

std::string TaskSpec::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : to_json().dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return hash_hex(h);
}

ColoringInstance TaskSpec::build(Budget clique_budget, int* q) const {
    ColoringInstance g;
    if (family == GraphKind::egraph && egraph) g = build_egraph(*egraph);
    else if (family == GraphKind::wgraph && wgraph) g = build_wgraph(*wgraph);
    else throw std::invalid_argument("task has no graph spec for its family");
    if (tri || bi) g = attach_polychromatic(g, tri, bi);
    const int base_q = assign_precoloring(g, clique_budget);
    if (q) *q = base_q;
    return g;
}

json StoredOutcome::to_json() const {
    return {{"hash", hash},          {"task", task.to_json()}, {"status", cnp::to_string(status)},
            {"wall_time", wall_time}, {"solver", solver},       {"q", q},
            {"timestamp", timestamp}};
}

StoredOutcome StoredOutcome::from_json(const json& j) {
    StoredOutcome o;
    o.hash = j.at("hash").get<std::string>();
    o.task = TaskSpec::from_json(j.at("task"));
    const std::string s = j.at("status").get<std::string>();
    if (s == "SAT") o.status = SolveStatus::sat;
    else if (s == "UNSAT") o.status = SolveStatus::unsat;
    else if (s == "UNKNOWN") o.status = SolveStatus::unknown;
    else throw std::invalid_argument("unknown status '" + s + "'");
    o.wall_time = j.value("wall_time", 0.0);
    o.solver = j.value("solver", std::string());
    o.q = j.value("q", 0);
    o.timestamp = j.value("timestamp", std::string());
    return o;
}

ResultStore::ResultStore(std::filesystem::path path) : path_(std::move(path)) {
    std::ifstream in(path_);
    if (!in) return;
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            StoredOutcome o = StoredOutcome::from_json(json::parse(line));
            by_hash_[o.hash] = std::move(o);
        } catch (const std::exception& e) {
            throw std::runtime_error(path_.string() + ": line " + std::to_string(number) + ": " + e.what());
        }
    }
}

std::optional<StoredOutcome> ResultStore::find(const std::string& hash) const {
    std::lock_guard lock(mutex_);
    auto it = by_hash_.find(hash);
    if (it == by_hash_.end()) return std::nullopt;
    return it->second;
}

void ResultStore::append(const StoredOutcome& outcome) {
    std::lock_guard lock(mutex_);
    by_hash_[outcome.hash] = outcome;
    if (path_.empty()) return;
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to " + path_.string());
    out << outcome.to_json().dump() << '\n';
    out.flush();
}

std::size_t ResultStore::size() const {
    std::lock_guard lock(mutex_);
    return by_hash_.size();
}

std::vector<StoredOutcome> ResultStore::outcomes() const {
    std::lock_guard lock(mutex_);
    std::vector<StoredOutcome> out;
    for (const auto& [hash, o] : by_hash_) out.push_back(o);
    return out;
}

// ---------------------------------------------------------------------------

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys{"solver",        "solver_flags",   "timeout", "parallelism",
                                               "exact_cap",     "clique_seconds", "max_grid"};
    return keys;
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != value.size() || !(v >= 0.0)) throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
    return v;
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (key == "solver") solver = value;
    else if (key == "solver_flags") solver_flags = value;
    else if (key == "timeout") timeout = parse_double(key, value);
    else if (key == "parallelism") parallelism = static_cast<unsigned>(parse_double(key, value));
    else if (key == "exact_cap") exact_cap = static_cast<int>(parse_double(key, value));
    else if (key == "clique_seconds") clique_seconds = parse_double(key, value);
    else if (key == "max_grid") max_grid = static_cast<std::size_t>(parse_double(key, value));
    else throw std::invalid_argument("unknown configuration key '" + key + "'");
}

Config Config::load(const std::optional<std::filesystem::path>& file) {
    Config c;
#ifdef CNP_DEFAULT_SOLVER
    c.solver = CNP_DEFAULT_SOLVER;
#endif
    if (file) {
        std::ifstream in(*file);
        if (!in) throw std::runtime_error("cannot open config " + file->string());
        std::string line;
        for (int number = 1; std::getline(in, line); ++number) {
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error(file->string() + ": line " + std::to_string(number) + ": expected key = value");
            try {
                c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
            } catch (const std::invalid_argument& e) {
                throw std::runtime_error(file->string() + ": line " + std::to_string(number) + ": " + e.what());
            }
        }
    }
    for (const std::string& key : config_keys()) {
        std::string env = "CNP_" + key;
        std::transform(env.begin(), env.end(), env.begin(), [](unsigned char ch) { return std::toupper(ch); });
        if (const char* v = std::getenv(env.c_str())) c.set(key, v);
    }
    return c;
}

SolverConfig Config::solver_config() const {
    SolverConfig s;
    s.command = solver;
    s.extra_flags = solver_flags;
    s.timeout = std::chrono::duration<double>(timeout);
    return s;
}

unsigned Config::workers() const {
    return parallelism ? parallelism : std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace cnp
