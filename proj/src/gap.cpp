#include "skillgap/gap.hpp"

#include <algorithm>
#include <set>

namespace skillgap {

namespace {

void check_df(const DfTable& table, const char* which) {
    for (const auto& [id, entry] : table.entries) {
        if (entry.df < 0.0 || entry.df > 1.0) {
            throw DataError(std::string(which) + " table: document frequency for '" + id +
                            "' is outside [0, 1]");
        }
    }
}

}  // namespace

GapReport compute_gaps(const DfTable& demand, const DfTable& supply) {
    if (demand.entries.empty() || supply.entries.empty()) {
        throw DataError("gap computation needs non-empty frequency tables on both sides");
    }
    check_df(demand, "demand");
    check_df(supply, "supply");

    GapReport report;
    report.taxonomy_name = demand.taxonomy_name;
    report.threshold = demand.threshold;
    if (demand.taxonomy_name != supply.taxonomy_name) {
        report.diagnostics.push_back({"compute_gaps", "tables name different taxonomies",
                                      demand.taxonomy_name + " vs " + supply.taxonomy_name, -1});
    }
    if (demand.threshold != supply.threshold) {
        report.diagnostics.push_back({"compute_gaps", "tables built with different thresholds",
                                      std::to_string(demand.threshold) + " vs " +
                                          std::to_string(supply.threshold),
                                      -1});
    }
    if (demand.corpus_side == supply.corpus_side) {
        report.diagnostics.push_back({"compute_gaps", "both tables come from the same corpus side",
                                      to_string(demand.corpus_side), -1});
    }

    bool any_shared = false;
    std::set<std::string> ids;
    for (const auto& [id, entry] : demand.entries) {
        ids.insert(id);
        if (supply.entries.count(id) > 0) any_shared = true;
    }
    for (const auto& [id, entry] : supply.entries) ids.insert(id);
    if (!any_shared) {
        throw DataError("frequency tables share no skill ids; "
                        "were they built from different taxonomies?");
    }

    for (const std::string& id : ids) {
        const auto d = demand.entries.find(id);
        const auto s = supply.entries.find(id);
        GapEntry entry;
        entry.skill_id = id;
        entry.label = id;
        entry.df_demand = d != demand.entries.end() ? d->second.df : 0.0;
        entry.df_supply = s != supply.entries.end() ? s->second.df : 0.0;
        entry.gap = entry.df_demand - entry.df_supply;
        if (d == demand.entries.end()) {
            report.diagnostics.push_back(
                {"compute_gaps", "skill missing from demand table; demand taken as 0", id, -1});
        }
        if (s == supply.entries.end()) {
            report.diagnostics.push_back(
                {"compute_gaps", "skill missing from supply table; supply taken as 0", id, -1});
        }
        report.entries.push_back(entry);
    }
    std::sort(report.entries.begin(), report.entries.end(), [](const GapEntry& a, const GapEntry& b) {
        if (a.gap != b.gap) return a.gap > b.gap;
        return a.skill_id < b.skill_id;
    });
    return report;
}

void label_entries(GapReport& report, const std::map<std::string, std::string>& labels) {
    for (GapEntry& entry : report.entries) {
        const auto it = labels.find(entry.skill_id);
        if (it != labels.end()) entry.label = it->second;
    }
}

std::vector<PriorityPoint> prioritize(const GapReport& report) {
    std::vector<PriorityPoint> points;
    points.reserve(report.entries.size());
    for (const GapEntry& entry : report.entries) {
        points.push_back({entry.skill_id, entry.label, entry.df_demand, entry.gap});
    }
    std::sort(points.begin(), points.end(), [](const PriorityPoint& a, const PriorityPoint& b) {
        if (a.x != b.x) return a.x > b.x;
        if (a.y != b.y) return a.y > b.y;
        return a.skill_id < b.skill_id;
    });
    return points;
}

}  // namespace skillgap
