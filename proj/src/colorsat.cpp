#include "cnp/colorsat.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cnp {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::string> split_words(const std::string& s) {
    std::istringstream in(s);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Unique path inside the temp directory; the file is created empty.
std::filesystem::path make_temp(const std::string& stem) {
    std::string templ = (std::filesystem::temp_directory_path() / (stem + "-XXXXXX")).string();
    std::vector<char> buf(templ.begin(), templ.end());
    buf.push_back('\0');
    const int fd = ::mkstemp(buf.data());
    if (fd < 0) throw std::runtime_error("cannot create temporary file: " + std::string(std::strerror(errno)));
    ::close(fd);
    return std::filesystem::path(buf.data());
}

struct ProcessResult {
    bool timed_out = false;
    int exit_code = -1;
    std::string output;
};

ProcessResult run_process(const std::vector<std::string>& argv, std::chrono::duration<double> timeout) {
    const auto out_path = make_temp("cnp-solver-out");
    const pid_t pid = ::fork();
    if (pid < 0) throw std::runtime_error("fork failed: " + std::string(std::strerror(errno)));
    if (pid == 0) {
        ::setpgid(0, 0);
        const int fd = ::open(out_path.c_str(), O_WRONLY | O_TRUNC);
        if (fd >= 0) {
            ::dup2(fd, STDOUT_FILENO);
            ::dup2(fd, STDERR_FILENO);
            ::close(fd);
        }
        std::vector<char*> args;
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        ::execvp(args[0], args.data());
        std::fprintf(stderr, "exec failed: %s\n", std::strerror(errno));
        ::_exit(127);
    }
    ProcessResult result;
    const auto start = Clock::now();
    auto pause = std::chrono::milliseconds(1);
    int status = 0;
    for (;;) {
        const pid_t r = ::waitpid(pid, &status, WNOHANG);
        if (r == pid) break;
        if (r < 0 && errno != EINTR) throw std::runtime_error("waitpid failed: " + std::string(std::strerror(errno)));
        if (Clock::now() - start > timeout) {
            ::kill(-pid, SIGKILL);
            ::kill(pid, SIGKILL);
            ::waitpid(pid, &status, 0);
            result.timed_out = true;
            break;
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::milliseconds(20));
    }
    if (!result.timed_out) result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
    result.output = read_file(out_path);
    std::error_code ec;
    std::filesystem::remove(out_path, ec);
    return result;
}

class Dsatur {
public:
    Dsatur(const BitGraph& g, int colors, Budget budget)
        : g_(g), k_(colors), budget_(budget), start_(Clock::now()),
          color_(static_cast<std::size_t>(g.size()), -1),
          seen_(static_cast<std::size_t>(g.size()) * static_cast<std::size_t>(colors), 0),
          saturation_(static_cast<std::size_t>(g.size()), 0) {}

    bool assign_fixed(int v, int c) {
        for (int w = 0; w < g_.size(); ++w)
            if (g_.adjacent(v, w) && color_[static_cast<std::size_t>(w)] == c) return false;
        set(v, c);
        max_used_ = std::max(max_used_, c);
        return true;
    }

    // true: coloured, false: exhausted; check aborted() afterwards.
    bool solve() {
        if (aborted_) return false;
        if (++nodes_; (budget_.node_limit != 0 && nodes_ > budget_.node_limit) ||
                      ((nodes_ & 1023u) == 0 && Clock::now() - start_ > budget_.time)) {
            aborted_ = true;
            return false;
        }
        const int v = pick();
        if (v < 0) return true;
        const int limit = std::min(k_ - 1, max_used_ + 1);
        for (int c = 0; c <= limit; ++c) {
            if (seen(v, c) != 0) continue;
            const int saved = max_used_;
            set(v, c);
            max_used_ = std::max(max_used_, c);
            if (solve()) return true;
            unset(v, c);
            max_used_ = saved;
            if (aborted_) return false;
        }
        return false;
    }

    bool aborted() const { return aborted_; }
    const std::vector<int>& colors() const { return color_; }

private:
    int& seen(int v, int c) { return seen_[static_cast<std::size_t>(v) * static_cast<std::size_t>(k_) + static_cast<std::size_t>(c)]; }

    void set(int v, int c) {
        color_[static_cast<std::size_t>(v)] = c;
        for (int w = 0; w < g_.size(); ++w)
            if (g_.adjacent(v, w) && seen(w, c)++ == 0) ++saturation_[static_cast<std::size_t>(w)];
    }

    void unset(int v, int c) {
        color_[static_cast<std::size_t>(v)] = -1;
        for (int w = 0; w < g_.size(); ++w)
            if (g_.adjacent(v, w) && --seen(w, c) == 0) --saturation_[static_cast<std::size_t>(w)];
    }

    int pick() const {
        int best = -1;
        int best_sat = -1;
        int best_deg = -1;
        for (int v = 0; v < g_.size(); ++v) {
            if (color_[static_cast<std::size_t>(v)] >= 0) continue;
            const int sat = saturation_[static_cast<std::size_t>(v)];
            if (sat < best_sat) continue;
            int deg = 0;
            for (int w = 0; w < g_.size(); ++w)
                if (color_[static_cast<std::size_t>(w)] < 0 && g_.adjacent(v, w)) ++deg;
            if (sat > best_sat || deg > best_deg) {
                best = v;
                best_sat = sat;
                best_deg = deg;
            }
        }
        return best;
    }

    const BitGraph& g_;
    int k_;
    Budget budget_;
    Clock::time_point start_;
    std::vector<int> color_;
    std::vector<int> seen_;
    std::vector<int> saturation_;
    int max_used_ = -1;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
};

void fnv(std::uint64_t& h, std::int64_t x) {
    for (int i = 0; i < 8; ++i) {
        h ^= static_cast<std::uint64_t>(x >> (8 * i)) & 0xffu;
        h *= 0x100000001b3ULL;
    }
}

}  // namespace

CnfInstance encode(const ColoringInstance& g, int colors) {
    if (colors < 1) throw std::invalid_argument("colour count must be >= 1");
    if (static_cast<std::size_t>(colors) < g.precolored.size())
        throw std::invalid_argument("K = " + std::to_string(colors) + " is smaller than the precoloured clique (" +
                                    std::to_string(g.precolored.size()) + ")");
    const ExpandedGraph x = expand(g);
    CnfInstance cnf;
    cnf.colors = colors;
    cnf.vertices = x.n;
    cnf.variable_count = static_cast<std::int64_t>(x.n) * colors;
    cnf.clauses.reserve(static_cast<std::size_t>(x.n) + x.edges.size() * static_cast<std::size_t>(colors) + g.precolored.size());
    for (int v = 0; v < x.n; ++v) {
        std::vector<std::int64_t> clause;
        for (int c = 0; c < colors; ++c) clause.push_back(cnf.variable(v, c));
        cnf.clauses.push_back(std::move(clause));
    }
    for (auto [i, j] : x.edges)
        for (int c = 0; c < colors; ++c) cnf.clauses.push_back({-cnf.variable(i, c), -cnf.variable(j, c)});
    for (std::size_t t = 0; t < g.precolored.size(); ++t) {
        const int v = g.precolored[t];
        if (v < 0 || v >= x.n) throw std::invalid_argument("precoloured vertex index out of range");
        cnf.clauses.push_back({cnf.variable(v, static_cast<int>(t))});
    }
    return cnf;
}

void write_dimacs(const CnfInstance& cnf, std::ostream& out, const std::string& comment) {
    if (!comment.empty()) out << "c " << comment << '\n';
    out << "p cnf " << cnf.variable_count << ' ' << cnf.clauses.size() << '\n';
    for (const auto& clause : cnf.clauses) {
        for (std::int64_t lit : clause) out << lit << ' ';
        out << "0\n";
    }
}

std::string to_dimacs(const CnfInstance& cnf, const std::string& comment) {
    std::ostringstream out;
    write_dimacs(cnf, out, comment);
    return out.str();
}

std::string to_string(SolveStatus s) {
    switch (s) {
    case SolveStatus::sat: return "SAT";
    case SolveStatus::unsat: return "UNSAT";
    case SolveStatus::unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

std::vector<Violation> verify_coloring(const ColoringInstance& g, const std::vector<int>& colors, int palette) {
    const ExpandedGraph x = expand(g);
    if (colors.size() != static_cast<std::size_t>(x.n))
        throw std::invalid_argument("colouring covers " + std::to_string(colors.size()) + " of " + std::to_string(x.n) +
                                    " expanded vertices");
    std::vector<Violation> out;
    for (int v = 0; v < x.n; ++v) {
        const int c = colors[static_cast<std::size_t>(v)];
        if (c < 0 || (palette > 0 && c >= palette)) out.push_back({Violation::Kind::color_out_of_range, v, -1});
    }
    for (auto [i, j] : x.edges)
        if (colors[static_cast<std::size_t>(i)] == colors[static_cast<std::size_t>(j)])
            out.push_back({Violation::Kind::monochromatic_edge, i, j});
    for (std::size_t t = 0; t < g.precolored.size(); ++t)
        if (colors[static_cast<std::size_t>(g.precolored[t])] != static_cast<int>(t))
            out.push_back({Violation::Kind::precolor_mismatch, g.precolored[t], static_cast<int>(t)});
    return out;
}

std::vector<int> decode_model(const CnfInstance& cnf, const std::vector<std::int64_t>& literals) {
    std::vector<int> colors(static_cast<std::size_t>(cnf.vertices), -1);
    for (std::int64_t lit : literals) {
        if (lit <= 0 || lit > cnf.variable_count) continue;
        const auto v = static_cast<std::size_t>((lit - 1) / cnf.colors);
        const int c = static_cast<int>((lit - 1) % cnf.colors);
        if (colors[v] < 0 || c < colors[v]) colors[v] = c;
    }
    return colors;
}

SolverReport parse_solver_output(const std::string& text) {
    SolverReport r;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind("s ", 0) == 0) {
            const std::string word = line.substr(2);
            if (word.find("UNSATISFIABLE") != std::string::npos) r.status = SolveStatus::unsat;
            else if (word.find("SATISFIABLE") != std::string::npos) r.status = SolveStatus::sat;
            else if (word.find("UNKNOWN") != std::string::npos || word.find("INDETERMINATE") != std::string::npos)
                r.status = SolveStatus::unknown;
            else throw std::runtime_error("unrecognised solver status line: " + line);
        } else if (line.rfind("v ", 0) == 0 || line == "v") {
            std::istringstream vs(line.substr(1));
            for (std::int64_t lit; vs >> lit;) {
                if (lit == 0) r.saw_model_end = true;
                else r.literals.push_back(lit);
            }
            if (!vs.eof()) throw std::runtime_error("malformed model line: " + line);
        }
    }
    return r;
}

SolveOutcome run_external(const ColoringInstance& g, const CnfInstance& cnf, const SolverConfig& config) {
    std::vector<std::string> argv = split_words(config.command);
    if (argv.empty()) throw std::invalid_argument("empty solver command");
    for (auto& w : split_words(config.extra_flags)) argv.push_back(w);
    const auto cnf_path = make_temp("cnp-instance");
    {
        std::ofstream out(cnf_path);
        write_dimacs(cnf, out, "instance " + hash_hex(instance_hash(g, cnf.colors)));
        if (!out) throw std::runtime_error("cannot write CNF file " + cnf_path.string());
    }
    argv.push_back(cnf_path.string());

    SolveOutcome outcome;
    outcome.solver = config.command;
    const auto start = Clock::now();
    const ProcessResult proc = run_process(argv, config.timeout);
    outcome.wall_time = Clock::now() - start;
    std::error_code ec;
    std::filesystem::remove(cnf_path, ec);

    if (proc.timed_out) {
        outcome.status = SolveStatus::unknown;
        return outcome;
    }
    const SolverReport report = parse_solver_output(proc.output);
    std::optional<SolveStatus> status = report.status;
    if (!status) {
        if (proc.exit_code == 10) status = SolveStatus::sat;
        else if (proc.exit_code == 20) status = SolveStatus::unsat;
        else
            throw std::runtime_error("solver exited with code " + std::to_string(proc.exit_code) +
                                     " without a status line; output:\n" + proc.output);
    }
    outcome.status = *status;
    if (outcome.status == SolveStatus::sat) {
        if (report.literals.empty()) throw std::runtime_error("solver reported SAT without a model; output:\n" + proc.output);
        std::vector<int> colors = decode_model(cnf, report.literals);
        const auto bad = verify_coloring(g, colors, cnf.colors);
        if (!bad.empty())
            throw std::runtime_error("solver model fails verification (" + std::to_string(bad.size()) + " violations)");
        outcome.colors = std::move(colors);
    }
    return outcome;
}

SolveOutcome exact_color(const ColoringInstance& g, int colors, Budget budget, int cap) {
    if (colors < 1) throw std::invalid_argument("colour count must be >= 1");
    const ExpandedGraph x = expand(g);
    if (x.n > cap)
        throw std::length_error("instance has " + std::to_string(x.n) + " expanded vertices, above the exact cap of " +
                                std::to_string(cap));
    if (static_cast<std::size_t>(colors) < g.precolored.size())
        throw std::invalid_argument("K is smaller than the precoloured clique");
    SolveOutcome outcome;
    outcome.solver = "internal";
    const auto start = Clock::now();
    const BitGraph bits(x);
    Dsatur search(bits, colors, budget);
    bool consistent = true;
    for (std::size_t t = 0; t < g.precolored.size() && consistent; ++t)
        consistent = search.assign_fixed(g.precolored[t], static_cast<int>(t));
    if (!consistent) {
        outcome.status = SolveStatus::unsat;
    } else if (search.solve()) {
        outcome.status = SolveStatus::sat;
        outcome.colors = search.colors();
    } else {
        outcome.status = search.aborted() ? SolveStatus::unknown : SolveStatus::unsat;
    }
    outcome.wall_time = Clock::now() - start;
    return outcome;
}

std::uint64_t instance_hash(const ColoringInstance& g, int colors) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    fnv(h, static_cast<std::int64_t>(g.kind));
    fnv(h, colors);
    fnv(h, static_cast<std::int64_t>(g.vertex_count()));
    for (int m : g.multiplicity) fnv(h, m);
    fnv(h, static_cast<std::int64_t>(g.edges.size()));
    for (auto [i, j] : g.edges) {
        fnv(h, i);
        fnv(h, j);
    }
    fnv(h, static_cast<std::int64_t>(g.precolored.size()));
    for (int v : g.precolored) fnv(h, v);
    for (const Point& p : g.positions) {
        fnv(h, std::llround(p.x * 1e9));
        fnv(h, std::llround(p.y * 1e9));
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << h;
    return out.str();
}

}  // namespace cnp
