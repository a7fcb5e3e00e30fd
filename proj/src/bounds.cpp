#include "cnp/bounds.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cnp {

using nlohmann::json;

std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::lb: return "lb";
        case BoundKind::ub: return "ub";
        case BoundKind::ub_clique: return "ub_clique";
    }
    throw std::logic_error("unknown bound kind");
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::paper_import: return "paper-import";
        case Provenance::computed: return "computed";
        case Provenance::external_unverified: return "external-unverified";
    }
    throw std::logic_error("unknown provenance");
}

BoundKind bound_kind_from_string(const std::string& s) {
    if (s == "lb") return BoundKind::lb;
    if (s == "ub") return BoundKind::ub;
    if (s == "ub_clique") return BoundKind::ub_clique;
    throw std::invalid_argument("unknown bound kind '" + s + "'");
}

Provenance provenance_from_string(const std::string& s) {
    if (s == "paper-import") return Provenance::paper_import;
    if (s == "computed") return Provenance::computed;
    if (s == "external-unverified") return Provenance::external_unverified;
    throw std::invalid_argument("unknown provenance '" + s + "'");
}

std::string to_string(IslandStatus s) {
    switch (s) {
        case IslandStatus::island: return "island";
        case IslandStatus::empty: return "empty";
        case IslandStatus::unknown: return "unknown";
    }
    throw std::logic_error("unknown island status");
}

// ---------------------------------------------------------------------------

bool BoundsLedger::add(const BoundEntry& e) {
    if (e.chi < 1) throw std::invalid_argument("chi must be positive");
    if (!std::isfinite(e.d) || e.d < 0.0) throw std::invalid_argument("bound must be a finite non-negative number");
    history_.push_back(e);
    BoundsRecord& r = records_[e.chi];
    r.chi = e.chi;
    const BoundValue v{e.d, e.provenance, e.source};
    auto& slot = e.kind == BoundKind::lb ? r.d_lb : e.kind == BoundKind::ub ? r.d_ub : r.d_ub_clique;
    const bool better = !slot || (e.kind == BoundKind::lb ? e.d > slot->d + kBoundTieTolerance : e.d < slot->d - kBoundTieTolerance);
    if (better) slot = v;
    return better;
}

void BoundsLedger::add_all(std::span<const BoundEntry> entries) {
    for (const BoundEntry& e : entries) add(e);
}

std::vector<BoundsRecord> BoundsLedger::records() const {
    std::vector<BoundsRecord> out;
    for (const auto& [chi, r] : records_) out.push_back(r);
    return out;
}

std::optional<BoundsRecord> BoundsLedger::record(int chi) const {
    auto it = records_.find(chi);
    if (it == records_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> BoundsLedger::monotonicity_violations() const {
    std::vector<std::string> out;
    std::optional<std::pair<int, double>> last_lb, last_ub;
    for (const auto& [chi, r] : records_) {
        if (r.d_lb) {
            if (last_lb && r.d_lb->d < last_lb->second)
                out.push_back("d_lb decreases from chi=" + std::to_string(last_lb->first) + " to chi=" + std::to_string(chi));
            last_lb = {chi, r.d_lb->d};
        }
        if (r.d_ub) {
            if (last_ub && r.d_ub->d < last_ub->second)
                out.push_back("d_ub decreases from chi=" + std::to_string(last_ub->first) + " to chi=" + std::to_string(chi));
            last_ub = {chi, r.d_ub->d};
        }
        if (r.d_lb && r.d_ub && r.d_lb->d > r.d_ub->d)
            out.push_back("d_lb exceeds d_ub at chi=" + std::to_string(chi));
    }
    return out;
}

std::vector<IslandRow> compute_islands(std::span<const BoundsRecord> records) {
    std::map<int, const BoundsRecord*> by_chi;
    for (const BoundsRecord& r : records) by_chi[r.chi] = &r;
    std::vector<IslandRow> out;
    if (by_chi.empty()) return out;
    for (int chi = by_chi.begin()->first; chi <= by_chi.rbegin()->first; ++chi) {
        IslandRow row;
        row.chi = chi;
        if (auto it = by_chi.find(chi - 1); it != by_chi.end() && it->second->d_ub) row.d_min = it->second->d_ub->d;
        if (auto it = by_chi.find(chi + 1); it != by_chi.end() && it->second->d_lb) row.d_max = it->second->d_lb->d;
        if (row.d_min && row.d_max) row.status = *row.d_min < *row.d_max ? IslandStatus::island : IslandStatus::empty;
        out.push_back(row);
    }
    return out;
}

// ---------------------------------------------------------------------------

ExtrapolationFit extrapolate(std::span<const std::pair<double, double>> points) {
    if (points.size() < 2) throw std::invalid_argument("extrapolation needs at least two points");
    const double n = static_cast<double>(points.size());
    double mr = 0.0, md = 0.0;
    for (const auto& [r, d] : points) {
        mr += r;
        md += d;
    }
    mr /= n;
    md /= n;
    double srr = 0.0, srd = 0.0;
    for (const auto& [r, d] : points) {
        srr += (r - mr) * (r - mr);
        srd += (r - mr) * (d - md);
    }
    if (!(srr > 0.0)) throw std::invalid_argument("extrapolation needs at least two distinct r values");
    ExtrapolationFit fit;
    fit.points.assign(points.begin(), points.end());
    fit.slope = srd / srr;
    fit.intercept = md - fit.slope * mr;
    for (const auto& [r, d] : points) {
        const double e = d - (fit.intercept + fit.slope * r);
        fit.residual += e * e;
    }
    return fit;
}

std::vector<std::pair<double, double>> lower_envelope(std::span<const std::pair<double, double>> points) {
    std::map<double, double> best;
    for (const auto& [r, d] : points) {
        auto [it, inserted] = best.emplace(r, d);
        if (!inserted) it->second = std::min(it->second, d);
    }
    return {best.begin(), best.end()};
}

std::pair<double, double> egraph_point(std::int64_t a, std::int64_t b) {
    if (a < 1 || b < a) throw std::invalid_argument("e-graph point needs 1 <= a <= b");
    const double da = static_cast<double>(a);
    return {std::sqrt(1.0 / da), std::sqrt(static_cast<double>(b) / da)};
}

std::pair<double, double> wgraph_point(int p, double d) {
    if (p < 1) throw std::invalid_argument("w-graph point needs p >= 1");
    return {kTwoPi / p, d};
}

std::pair<double, double> asymptotic_chi_bounds(double d) {
    if (!(d >= 1.0)) throw std::invalid_argument("asymptotic bounds need d >= 1");
    return {4.0 / 3.0 * d * d, kPi / std::sqrt(3.0) * d * d};
}

// ---------------------------------------------------------------------------

std::string now_iso8601() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

BoundEntry record_from_witness(const ColoringInstance& g, int colors, const SolveOutcome& outcome, Provenance provenance) {
    if (outcome.status != SolveStatus::unsat)
        throw std::invalid_argument("only an UNSAT outcome certifies an upper bound (got " + to_string(outcome.status) + ")");
    double d = g.window.hi;
    if (g.egraph) d = g.egraph->ratio();
    else if (g.wgraph) d = g.wgraph->d;
    return {colors, BoundKind::ub, d, provenance, hash_hex(instance_hash(g, colors)), now_iso8601()};
}

BoundEntry record_from_witness(const TilingSpec& spec, const TilingReport& report, Provenance provenance) {
    if (!spec.periodic()) throw std::invalid_argument("annulus tilings do not colour the plane");
    if (!report.proper()) throw std::invalid_argument("tiling has oversized tiles or touching same-colour tiles");
    if (!std::isfinite(report.min_same_color_gap)) throw std::invalid_argument("tiling has no repeated colour");
    std::ostringstream source;
    source << "tiling k=" << spec.k << " tiles=" << spec.tiles.size();
    return {spec.k + 1, BoundKind::lb, report.min_same_color_gap, provenance, source.str(), now_iso8601()};
}

BoundEntry record_from_witness(const PackingResult& packing, Provenance provenance) {
    if (packing.points.size() != static_cast<std::size_t>(packing.q) || packing.q < 2)
        throw std::invalid_argument("packing point count does not match q");
    const PackingMeasure m = verify_packing(packing.points);
    if (m.min_dist < 1.0 - 1e-9) throw std::invalid_argument("packing has points closer than 1");
    std::ostringstream source;
    source << "packing q=" << packing.q << " seed=" << packing.seed << " restarts=" << packing.restarts;
    return {clique_chi_bound(packing.q), BoundKind::ub_clique, m.width, provenance, source.str(), now_iso8601()};
}

// ---------------------------------------------------------------------------

std::vector<BoundEntry> read_ledger(std::istream& in) {
    std::vector<BoundEntry> out;
    std::string line;
    for (int number = 1; std::getline(in, line); ++number) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json j = json::parse(line);
            BoundEntry e;
            e.chi = j.at("chi").get<int>();
            e.kind = bound_kind_from_string(j.at("kind").get<std::string>());
            e.d = j.at("d").get<double>();
            e.provenance = provenance_from_string(j.value("provenance", std::string("computed")));
            e.source = j.value("source", std::string());
            e.timestamp = j.value("timestamp", std::string());
            out.push_back(std::move(e));
        } catch (const std::exception& ex) {
            throw std::runtime_error("ledger line " + std::to_string(number) + ": " + ex.what());
        }
    }
    return out;
}

std::vector<BoundEntry> read_ledger_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ledger " + path);
    try {
        return read_ledger(in);
    } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_ledger(std::ostream& out, std::span<const BoundEntry> entries) {
    for (const BoundEntry& e : entries) {
        json j{{"chi", e.chi},
               {"kind", to_string(e.kind)},
               {"d", e.d},
               {"provenance", to_string(e.provenance)},
               {"source", e.source},
               {"timestamp", e.timestamp}};
        out << j.dump() << '\n';
    }
}

void append_ledger_file(const std::string& path, std::span<const BoundEntry> entries) {
    std::ofstream out(path, std::ios::app);
    if (!out) throw std::runtime_error("cannot append to ledger " + path);
    write_ledger(out, entries);
}

// ---------------------------------------------------------------------------

namespace {

struct TableRow {
    int chi;
    std::string status, lower, min, max, upper, clique, pred, slope;
};

std::string fixed(std::optional<double> v, int digits = 6) {
    if (!v) return "";
    std::ostringstream out;
    out << std::fixed << std::setprecision(digits) << *v;
    return out.str();
}

std::vector<TableRow> table_rows(std::span<const BoundsRecord> records, const std::map<int, ExtrapolationFit>& fits) {
    std::map<int, const BoundsRecord*> by_chi;
    for (const BoundsRecord& r : records) by_chi[r.chi] = &r;
    std::vector<TableRow> rows;
    for (const IslandRow& island : compute_islands(records)) {
        TableRow row{island.chi, to_string(island.status), "", fixed(island.d_min), fixed(island.d_max), "", "", "", ""};
        if (auto it = by_chi.find(island.chi); it != by_chi.end()) {
            const BoundsRecord& r = *it->second;
            if (r.d_lb) row.lower = fixed(r.d_lb->d);
            if (r.d_ub) row.upper = fixed(r.d_ub->d);
            if (r.d_ub_clique) row.clique = fixed(r.d_ub_clique->d);
        }
        if (auto it = fits.find(island.chi); it != fits.end()) {
            row.pred = fixed(it->second.intercept, 3);
            row.slope = fixed(it->second.slope, 2);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string islands_csv(std::span<const BoundsRecord> records, const std::map<int, ExtrapolationFit>& fits) {
    std::ostringstream out;
    out << "chi,status,lower,min,max,upper,clique,pred,slope\n";
    for (const TableRow& r : table_rows(records, fits))
        out << r.chi << ',' << r.status << ',' << r.lower << ',' << r.min << ',' << r.max << ',' << r.upper << ','
            << r.clique << ',' << r.pred << ',' << r.slope << '\n';
    return out.str();
}

std::string islands_text(std::span<const BoundsRecord> records, const std::map<int, ExtrapolationFit>& fits) {
    std::ostringstream out;
    auto line = [&](const std::string& chi, const TableRow& r) {
        out << std::setw(4) << chi << "  " << std::left << std::setw(8) << r.status << std::right;
        for (const std::string* c : {&r.lower, &r.min, &r.max, &r.upper, &r.clique}) out << std::setw(10) << *c;
        out << std::setw(8) << r.pred << std::setw(7) << r.slope << '\n';
    };
    line("chi", {0, "status", "lower", "min", "max", "upper", "clique", "pred", "slope"});
    for (const TableRow& r : table_rows(records, fits)) line(std::to_string(r.chi), r);
    return out.str();
}

namespace {

struct Frame {
    double x0, x1, y0, y1;
    double width = 640, height = 420, margin = 50;

    double sx(double x) const { return margin + (x - x0) / (x1 - x0) * (width - 2 * margin); }
    double sy(double y) const { return height - margin - (y - y0) / (y1 - y0) * (height - 2 * margin); }
};

std::string svg_open(const Frame& f) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f.width << "\" height=\"" << f.height
        << "\" viewBox=\"0 0 " << f.width << ' ' << f.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return out.str();
}

void axes(std::ostringstream& out, const Frame& f, const std::string& xlabel, const std::string& ylabel, double xstep,
          double ystep) {
    out << "<g stroke=\"black\" stroke-width=\"1\">\n"
        << "<line x1=\"" << f.sx(f.x0) << "\" y1=\"" << f.sy(f.y0) << "\" x2=\"" << f.sx(f.x1) << "\" y2=\"" << f.sy(f.y0) << "\"/>\n"
        << "<line x1=\"" << f.sx(f.x0) << "\" y1=\"" << f.sy(f.y0) << "\" x2=\"" << f.sx(f.x0) << "\" y2=\"" << f.sy(f.y1) << "\"/>\n"
        << "</g>\n";
    out << std::setprecision(4);
    for (double x = std::ceil(f.x0 / xstep) * xstep; x <= f.x1 + 1e-12; x += xstep)
        out << "<text x=\"" << f.sx(x) << "\" y=\"" << f.sy(f.y0) + 15 << "\" text-anchor=\"middle\">" << x << "</text>\n";
    for (double y = std::ceil(f.y0 / ystep) * ystep; y <= f.y1 + 1e-12; y += ystep)
        out << "<text x=\"" << f.sx(f.x0) - 6 << "\" y=\"" << f.sy(y) + 4 << "\" text-anchor=\"end\">" << y << "</text>\n";
    out << "<text x=\"" << f.width / 2 << "\" y=\"" << f.height - 10 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
        << "<text x=\"14\" y=\"" << f.height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << f.height / 2
        << ")\">" << ylabel << "</text>\n";
}

}  // namespace

std::string chi_step_svg(std::span<const BoundsRecord> records) {
    const std::vector<IslandRow> islands = compute_islands(records);
    if (islands.empty()) throw std::invalid_argument("no records to plot");
    double dmax = 1.0;
    for (const BoundsRecord& r : records) {
        if (r.d_lb) dmax = std::max(dmax, r.d_lb->d);
        if (r.d_ub) dmax = std::max(dmax, r.d_ub->d);
    }
    Frame f{1.0, std::ceil(dmax * 10.0) / 10.0 + 0.1, static_cast<double>(islands.front().chi - 1),
            static_cast<double>(islands.back().chi + 1)};
    std::ostringstream out;
    out << svg_open(f);
    axes(out, f, "d", "chi(d)", 0.2, 1.0);
    out << std::setprecision(6);
    // Known range of chi(d): at least chi from d_ub(chi-1) on, at most chi below d_lb(chi+1).
    for (const BoundsRecord& r : records) {
        const double y = f.sy(r.chi + 1);
        if (r.d_ub)
            out << "<line x1=\"" << f.sx(std::max(f.x0, r.d_ub->d)) << "\" y1=\"" << y << "\" x2=\"" << f.sx(f.x1)
                << "\" y2=\"" << y << "\" stroke=\"#2a7\" stroke-width=\"1\"/>\n";
        if (r.d_lb)
            out << "<line x1=\"" << f.sx(f.x0) << "\" y1=\"" << f.sy(r.chi - 1) << "\" x2=\"" << f.sx(std::max(f.x0, r.d_lb->d))
                << "\" y2=\"" << f.sy(r.chi - 1) << "\" stroke=\"#999\" stroke-width=\"1\"/>\n";
    }
    for (const IslandRow& row : islands) {
        if (row.status != IslandStatus::island) continue;
        out << "<line x1=\"" << f.sx(*row.d_min) << "\" y1=\"" << f.sy(row.chi) << "\" x2=\"" << f.sx(*row.d_max)
            << "\" y2=\"" << f.sy(row.chi) << "\" stroke=\"black\" stroke-width=\"4\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string extrapolation_svg(const ExtrapolationFit& fit, const std::string& title) {
    if (fit.points.empty()) throw std::invalid_argument("no points to plot");
    double rmax = 0.0, dlo = fit.intercept, dhi = fit.intercept;
    for (const auto& [r, d] : fit.points) {
        rmax = std::max(rmax, r);
        dlo = std::min(dlo, d);
        dhi = std::max(dhi, d);
    }
    const double pad = std::max(0.02, 0.1 * (dhi - dlo));
    Frame f{0.0, rmax * 1.1, dlo - pad, dhi + pad};
    std::ostringstream out;
    out << svg_open(f);
    axes(out, f, "r", "d", std::max(0.01, std::round(rmax * 100.0 / 5.0) / 100.0),
         std::max(0.01, std::round((dhi - dlo + 2 * pad) * 100.0 / 5.0) / 100.0));
    out << std::setprecision(6);
    if (!title.empty()) out << "<text x=\"" << f.width / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
    out << "<line x1=\"" << f.sx(0.0) << "\" y1=\"" << f.sy(fit.intercept) << "\" x2=\"" << f.sx(f.x1) << "\" y2=\""
        << f.sy(fit.intercept + fit.slope * f.x1) << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
    for (const auto& [r, d] : fit.points)
        out << "<circle cx=\"" << f.sx(r) << "\" cy=\"" << f.sy(d) << "\" r=\"3\" fill=\"black\"/>\n";
    out << "<path d=\"M " << f.sx(0.0) << ' ' << f.sy(fit.intercept) - 6 << " l -5 -8 l 10 0 z\" fill=\"black\"/>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace cnp
