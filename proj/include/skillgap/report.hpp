#ifndef SKILLGAP_REPORT_HPP
#define SKILLGAP_REPORT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "skillgap/gap.hpp"
#include "skillgap/topics.hpp"

namespace skillgap {

// Escapes &, <, >, " and ' for use in SVG text and attributes.
std::string xml_escape(const std::string& text);

// Fixed four decimal places, '.' separator, locale-free; negative zero is
// normalized to "0.0000" so equal inputs write equal bytes.
std::string format_fixed(double value);

// skill_id,label,df_demand,df_supply,gap with provenance comments.
void write_gap_csv(const GapReport& report, std::ostream& out);
void write_gap_csv_file(const GapReport& report, const std::string& path);
GapReport read_gap_csv(std::istream& in);
GapReport read_gap_csv_file(const std::string& path);

// topic,label,npmi,skipped_pairs plus topN/reference comments.
void write_coherence_csv(const CoherenceReport& report, std::ostream& out);
void write_coherence_csv_file(const CoherenceReport& report, const std::string& path);

// Prioritization scatter: x = demand, y = gap, with the y = x
// ("zero supply") diagonal and the y = 0 axis drawn in. Self-contained SVG;
// the JSON form mirrors the same points for re-plotting.
void write_priority_svg(const std::vector<PriorityPoint>& points, std::ostream& out);
void write_priority_svg_file(const std::vector<PriorityPoint>& points, const std::string& path);
void write_priority_json(const std::vector<PriorityPoint>& points, std::ostream& out);
void write_priority_json_file(const std::vector<PriorityPoint>& points, const std::string& path);
std::vector<PriorityPoint> read_priority_json(std::istream& in);

// skill_id,x,y in chart order (x descending), four decimal places.
void write_priority_csv(const std::vector<PriorityPoint>& points, std::ostream& out);
void write_priority_csv_file(const std::vector<PriorityPoint>& points, const std::string& path);

// Grouped demand/supply bars per skill, one group per gap entry.
void write_bars_svg(const GapReport& report, std::ostream& out);
void write_bars_svg_file(const GapReport& report, const std::string& path);
void write_bars_json(const GapReport& report, std::ostream& out);
void write_bars_json_file(const GapReport& report, const std::string& path);

}  // namespace skillgap

#endif
