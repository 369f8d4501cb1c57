#ifndef SKILLGAP_GAP_HPP
#define SKILLGAP_GAP_HPP

#include <map>
#include <string>
#include <vector>

#include "skillgap/match.hpp"
#include "skillgap/record.hpp"

namespace skillgap {

// gap = df_demand - df_supply. Positive means industry asks for a skill
// that courses rarely teach; negative means the reverse.
struct GapEntry {
    std::string skill_id;
    std::string label;  // display name; defaults to the id
    double df_demand = 0.0;
    double df_supply = 0.0;
    double gap = 0.0;

    bool operator==(const GapEntry&) const = default;
};

struct GapReport {
    std::string taxonomy_name;
    int threshold = 0;
    std::vector<GapEntry> entries;  // gap descending, then id ascending
    std::vector<Diagnostic> diagnostics;
};

// One entry per skill id in either table; an id missing on one side counts
// as df 0 there and produces a warning. Disjoint id sets are an error: the
// tables were almost certainly built from different taxonomies.
GapReport compute_gaps(const DfTable& demand, const DfTable& supply);

// Replaces entry labels using an id -> label map; ids without a mapping
// keep their current label.
void label_entries(GapReport& report, const std::map<std::string, std::string>& labels);

// Chart coordinates: x = demand, y = gap. y <= x always, because supply
// cannot be negative; y = x is the zero-supply diagonal.
struct PriorityPoint {
    std::string skill_id;
    std::string label;
    double x = 0.0;
    double y = 0.0;

    bool operator==(const PriorityPoint&) const = default;
};

// Ordered by x descending (strongest demand first), then y descending,
// then id; strongest demand reads left to right on the chart.
std::vector<PriorityPoint> prioritize(const GapReport& report);

}  // namespace skillgap

#endif
