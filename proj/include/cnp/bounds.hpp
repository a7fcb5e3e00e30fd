#pragma once

// Per-chi bounds on the forbidden-distance ratio d, the islands of certainty
// they imply, straight-line extrapolation of graph records, and the
// asymptotic area estimates.
//
//   d_lb(chi)        chi - 1 colours suffice up to this d (a tiling)
//   d_ub(chi)        chi colours fail from this d on (an UNSAT graph)
//   d_ub_clique(chi) the same from a packed q-clique, chi = q + 3

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cnp/colorsat.hpp"
#include "cnp/graphs.hpp"
#include "cnp/packing.hpp"
#include "cnp/tilings.hpp"

namespace cnp {

enum class BoundKind { lb, ub, ub_clique };
enum class Provenance { paper_import, computed, external_unverified };

std::string to_string(BoundKind k);
std::string to_string(Provenance p);
BoundKind bound_kind_from_string(const std::string& s);
Provenance provenance_from_string(const std::string& s);

/// One ledger line.
struct BoundEntry {
    int chi = 0;
    BoundKind kind = BoundKind::lb;
    double d = 0.0;
    Provenance provenance = Provenance::computed;
    std::string source;     // tiling id, instance hash, table reference
    std::string timestamp;  // ISO 8601, informational
};

struct BoundValue {
    double d = 0.0;
    Provenance provenance = Provenance::computed;
    std::string source;
};

struct BoundsRecord {
    int chi = 0;
    std::optional<BoundValue> d_lb;
    std::optional<BoundValue> d_ub;
    std::optional<BoundValue> d_ub_clique;
};

/// Bounds closer than this are the same bound at different printed
/// precision; the entry already in the ledger is kept.
inline constexpr double kBoundTieTolerance = 1e-5;

/// Keeps the largest lower bound and the smallest upper bounds per chi.
class BoundsLedger {
public:
    /// True when the entry tightened a bound by more than kBoundTieTolerance;
    /// other entries leave the ledger unchanged (they are still kept in
    /// history()).
    bool add(const BoundEntry& entry);
    void add_all(std::span<const BoundEntry> entries);

    std::vector<BoundsRecord> records() const;
    std::optional<BoundsRecord> record(int chi) const;
    const std::vector<BoundEntry>& history() const { return history_; }

    /// Descriptions of chi where d_lb or d_ub decreases as chi grows, or
    /// where d_lb exceeds d_ub.
    std::vector<std::string> monotonicity_violations() const;

private:
    std::map<int, BoundsRecord> records_;
    std::vector<BoundEntry> history_;
};

enum class IslandStatus { island, empty, unknown };
std::string to_string(IslandStatus s);

struct IslandRow {
    int chi = 0;
    std::optional<double> d_min;  // d_ub(chi - 1)
    std::optional<double> d_max;  // d_lb(chi + 1)
    IslandStatus status = IslandStatus::unknown;
};

/// One row per chi in the records' range.
std::vector<IslandRow> compute_islands(std::span<const BoundsRecord> records);

struct ExtrapolationFit {
    std::vector<std::pair<double, double>> points;  // (r, d)
    double slope = 0.0;
    double intercept = 0.0;  // predicted d at r = 0
    double residual = 0.0;   // sum of squared residuals
};

/// Ordinary least squares d = intercept + slope * r. Throws
/// std::invalid_argument for fewer than two points or all r equal.
ExtrapolationFit extrapolate(std::span<const std::pair<double, double>> points);

/// Smallest d for every distinct r.
std::vector<std::pair<double, double>> lower_envelope(std::span<const std::pair<double, double>> points);

/// r = sqrt(1/a) and d = sqrt(b/a) of an e-graph record.
std::pair<double, double> egraph_point(std::int64_t a, std::int64_t b);
/// r = 2 pi / p of a w-graph record.
std::pair<double, double> wgraph_point(int p, double d);

/// ((4/3) d^2, (pi/sqrt(3)) d^2).
std::pair<double, double> asymptotic_chi_bounds(double d);

/// UNSAT graph with K total colours: d_ub(K) at the graph's ratio. SAT and
/// UNKNOWN outcomes certify nothing and are rejected with std::invalid_argument.
BoundEntry record_from_witness(const ColoringInstance& g, int colors, const SolveOutcome& outcome,
                               Provenance provenance = Provenance::computed);
/// Proper plane tiling with k colours: d_lb(k + 1). Annulus tilings and
/// improper tilings are rejected.
BoundEntry record_from_witness(const TilingSpec& spec, const TilingReport& report,
                               Provenance provenance = Provenance::computed);
/// Packing of q points: d_ub_clique(q + 3). Infeasible packings are rejected.
BoundEntry record_from_witness(const PackingResult& packing, Provenance provenance = Provenance::computed);

// Ledger JSONL: {"chi", "kind", "d", "provenance", "source", "timestamp"}.
std::vector<BoundEntry> read_ledger(std::istream& in);
std::vector<BoundEntry> read_ledger_file(const std::string& path);
void write_ledger(std::ostream& out, std::span<const BoundEntry> entries);
void append_ledger_file(const std::string& path, std::span<const BoundEntry> entries);
std::string now_iso8601();

/// Table with columns chi, status, lower, min, max, upper, clique, pred, slope.
std::string islands_csv(std::span<const BoundsRecord> records, const std::map<int, ExtrapolationFit>& fits = {});
std::string islands_text(std::span<const BoundsRecord> records, const std::map<int, ExtrapolationFit>& fits = {});

/// Step function chi(d) from the lower bounds, islands drawn bold.
std::string chi_step_svg(std::span<const BoundsRecord> records);
/// Scatter of (r, d) with the fitted line extended to r = 0.
std::string extrapolation_svg(const ExtrapolationFit& fit, const std::string& title = {});

}  // namespace cnp
