#include "cnp/datasets.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cnp {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

// Typed access to one row, reporting the file and line on bad cells.
class Row {
public:
    Row(const CsvTable& t, std::size_t i, const std::filesystem::path& path) : t_(t), i_(i), path_(path) {}

    const std::string& text(const std::string& name) const { return t_.rows[i_][t_.column(name)]; }

    double real(const std::string& name) const {
        const std::string& s = text(name);
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        fail(name, s);
    }

    std::int64_t integer(const std::string& name) const {
        const std::string& s = text(name);
        try {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used == s.size()) return v;
        } catch (const std::exception&) {
        }
        fail(name, s);
    }

private:
    [[noreturn]] void fail(const std::string& name, const std::string& s) const {
        throw std::runtime_error(path_.string() + ": line " + std::to_string(t_.line_numbers[i_]) + ": bad " + name +
                                 " '" + s + "'");
    }

    const CsvTable& t_;
    std::size_t i_;
    const std::filesystem::path& path_;
};

template <class F>
void for_rows(const std::filesystem::path& path, F&& f) {
    const CsvTable t = read_csv(path);
    for (std::size_t i = 0; i < t.rows.size(); ++i) f(Row(t, i, path));
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw std::runtime_error("missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    CsvTable t;
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells = split(line);
        if (t.header.empty()) {
            t.header = std::move(cells);
            continue;
        }
        if (cells.size() != t.header.size())
            throw std::runtime_error(path.string() + ": line " + std::to_string(number) + ": expected " +
                                     std::to_string(t.header.size()) + " cells, got " + std::to_string(cells.size()));
        t.rows.push_back(std::move(cells));
        t.line_numbers.push_back(number);
    }
    if (t.header.empty()) throw std::runtime_error(path.string() + ": empty table");
    return t;
}

std::filesystem::path default_data_dir() {
    if (const char* env = std::getenv("CNP_DATA_DIR")) return env;
#ifdef CNP_DATA_DIR
    return CNP_DATA_DIR;
#else
    return "data";
#endif
}

std::vector<SublatticeRow> read_sublattice_table(const std::filesystem::path& path) {
    std::vector<SublatticeRow> out;
    for_rows(path, [&](const Row& r) {
        out.push_back({static_cast<int>(r.integer("k")), r.real("d"), r.integer("loeschian") != 0});
    });
    return out;
}

std::vector<AnnulusRow> read_annulus_table(const std::filesystem::path& path) {
    std::vector<AnnulusRow> out;
    for_rows(path, [&](const Row& r) {
        out.push_back({static_cast<int>(r.integer("k")), r.real("radial"), r.real("arbitrary"),
                       r.integer("arbitrary_checked") != 0, r.real("d"), static_cast<int>(r.integer("p")),
                       static_cast<int>(r.integer("c")), static_cast<int>(r.integer("q"))});
    });
    return out;
}

std::vector<CliqueRow> read_clique_table(const std::filesystem::path& path) {
    std::vector<CliqueRow> out;
    for_rows(path, [&](const Row& r) { out.push_back({static_cast<int>(r.integer("q")), r.real("d")}); });
    return out;
}

std::vector<FrontierRow> read_frontier_csv(const std::filesystem::path& path) {
    std::vector<FrontierRow> out;
    for_rows(path, [&](const Row& r) {
        FrontierRow f;
        f.k = static_cast<int>(r.integer("k"));
        f.a = r.integer("a");
        f.b = r.integer("b");
        f.d = r.real("d");
        f.l = static_cast<std::size_t>(r.integer("l"));
        f.m = static_cast<int>(r.integer("m"));
        f.q = static_cast<int>(r.integer("q"));
        f.time = r.real("time");
        out.push_back(f);
    });
    return out;
}

std::vector<BoundEntry> reference_bounds(const std::filesystem::path& dir) {
    std::vector<BoundEntry> out = read_ledger_file((dir / "table1.jsonl").string());
    auto add = [&](int chi, BoundKind kind, double d, std::string source) {
        out.push_back({chi, kind, d, Provenance::paper_import, std::move(source), {}});
    };
    double best = 0.0;
    for (const SublatticeRow& r : read_sublattice_table(dir / "table2.csv")) {
        if (r.d <= best) continue;
        best = r.d;
        add(r.k + 1, BoundKind::lb, r.d, "table2:k=" + std::to_string(r.k));
    }
    for (const AnnulusRow& r : read_annulus_table(dir / "table4.csv"))
        add(r.k + 3, BoundKind::ub, r.graph_d,
            "table4:k=" + std::to_string(r.k) + ",p=" + std::to_string(r.p) + ",c=" + std::to_string(r.c));
    for (const CliqueRow& r : read_clique_table(dir / "table5.csv"))
        if (r.d >= 1.0) add(clique_chi_bound(r.q), BoundKind::ub_clique, r.d, "table5:q=" + std::to_string(r.q));
    for (const FrontierRow& r : read_frontier_csv(dir / "table6.csv"))
        add(r.k, BoundKind::ub, egraph_point(r.a, r.b).second,
            "table6:k=" + std::to_string(r.k) + ",a=" + std::to_string(r.a) + ",b=" + std::to_string(r.b));
    return out;
}

}  // namespace cnp
