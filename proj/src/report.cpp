#include "skillgap/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace skillgap {

namespace {

using nlohmann::json;

template <typename Fn>
void write_to_file(const std::string& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);  // binary: identical bytes everywhere
    if (!out) throw DataError("cannot open for writing: " + path);
    fn(out);
    out.flush();
    if (!out) throw DataError("failed while writing: " + path);
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::vector<std::string> split_csv(const std::string& line, int line_no) {
    std::vector<std::string> fields;
    std::string current;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                current += c;
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (in_quotes) {
        throw DataError("line " + std::to_string(line_no) + ": unterminated quoted field");
    }
    fields.push_back(current);
    return fields;
}

double parse_double(const std::string& field, const char* what, int line_no) {
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size() || field.empty()) {
        throw DataError("line " + std::to_string(line_no) + ": " + what + " is not a number: '" +
                        field + "'");
    }
    return value;
}

int parse_int(const std::string& field, const char* what, int line_no) {
    try {
        std::size_t used = 0;
        const int value = std::stoi(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": " + what + " is not an integer: '" +
                        field + "'");
    }
}

// --- SVG geometry: one fixed canvas for every chart ---------------------
constexpr double kLeft = 60.0;
constexpr double kTop = 20.0;
constexpr double kPlotW = 560.0;
constexpr double kPlotH = 410.0;
constexpr double kBottom = kTop + kPlotH;   // 430
constexpr double kRight = kLeft + kPlotW;   // 620

std::string fmt1(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.1f", v);
    if (std::string(buffer) == "-0.0") return "0.0";
    return buffer;
}

std::string fmt2(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.2f", v);
    if (std::string(buffer) == "-0.00") return "0.00";
    return buffer;
}

double map_x01(double v) { return kLeft + v * kPlotW; }
double map_y_signed(double v) { return kTop + (1.0 - (v + 1.0) / 2.0) * kPlotH; }  // [-1,1]
double map_y01(double v) { return kTop + (1.0 - v) * kPlotH; }                     // [0,1]

void svg_open(std::ostream& out, const std::string& desc) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 640 480\" "
           "font-family=\"sans-serif\">\n";
    out << "<desc>" << xml_escape(desc) << "</desc>\n";
    out << "<rect x=\"" << fmt1(kLeft) << "\" y=\"" << fmt1(kTop) << "\" width=\"" << fmt1(kPlotW)
        << "\" height=\"" << fmt1(kPlotH) << "\" fill=\"none\" stroke=\"#333\"/>\n";
}

void svg_line(std::ostream& out, double x1, double y1, double x2, double y2,
              const std::string& extra) {
    out << "<line x1=\"" << fmt1(x1) << "\" y1=\"" << fmt1(y1) << "\" x2=\"" << fmt1(x2)
        << "\" y2=\"" << fmt1(y2) << "\" " << extra << "/>\n";
}

void svg_text(std::ostream& out, double x, double y, const std::string& extra,
              const std::string& content) {
    out << "<text x=\"" << fmt1(x) << "\" y=\"" << fmt1(y) << "\" " << extra << ">"
        << xml_escape(content) << "</text>\n";
}

void x_ticks_01(std::ostream& out) {
    for (int i = 0; i <= 4; ++i) {
        const double v = i / 4.0;
        const double px = map_x01(v);
        svg_line(out, px, kBottom, px, kBottom + 5, "stroke=\"#333\"");
        svg_text(out, px, kBottom + 18, "font-size=\"11\" text-anchor=\"middle\"", fmt2(v));
    }
}

}  // namespace

std::string xml_escape(const std::string& text) {
    std::string escaped;
    escaped.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '&': escaped += "&amp;"; break;
            case '<': escaped += "&lt;"; break;
            case '>': escaped += "&gt;"; break;
            case '"': escaped += "&quot;"; break;
            case '\'': escaped += "&apos;"; break;
            default: escaped += c;
        }
    }
    return escaped;
}

std::string format_fixed(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.4f", value);
    if (std::string(buffer) == "-0.0000") return "0.0000";
    return buffer;
}

void write_gap_csv(const GapReport& report, std::ostream& out) {
    out << "# taxonomy: " << report.taxonomy_name << "\n";
    out << "# threshold: " << report.threshold << "\n";
    out << "skill_id,label,df_demand,df_supply,gap\n";
    for (const GapEntry& entry : report.entries) {
        out << csv_quote(entry.skill_id) << ',' << csv_quote(entry.label) << ','
            << format_fixed(entry.df_demand) << ',' << format_fixed(entry.df_supply) << ','
            << format_fixed(entry.gap) << "\n";
    }
}

void write_gap_csv_file(const GapReport& report, const std::string& path) {
    write_to_file(path, [&](std::ostream& out) { write_gap_csv(report, out); });
}

GapReport read_gap_csv(std::istream& in) {
    GapReport report;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# taxonomy: ", 0) == 0) {
            report.taxonomy_name = line.substr(12);
            continue;
        }
        if (line.rfind("# threshold: ", 0) == 0) {
            report.threshold = parse_int(line.substr(13), "threshold", line_no);
            continue;
        }
        if (line[0] == '#') continue;
        if (!header_seen) {
            if (line != "skill_id,label,df_demand,df_supply,gap") {
                throw DataError("line " + std::to_string(line_no) +
                                ": not a gap table header: '" + line + "'");
            }
            header_seen = true;
            continue;
        }
        const std::vector<std::string> fields = split_csv(line, line_no);
        if (fields.size() != 5) {
            throw DataError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                            std::to_string(fields.size()));
        }
        GapEntry entry;
        entry.skill_id = fields[0];
        entry.label = fields[1];
        entry.df_demand = parse_double(fields[2], "df_demand", line_no);
        entry.df_supply = parse_double(fields[3], "df_supply", line_no);
        entry.gap = parse_double(fields[4], "gap", line_no);
        if (entry.skill_id.empty()) {
            throw DataError("line " + std::to_string(line_no) + ": empty skill id");
        }
        if (entry.df_demand < 0.0 || entry.df_demand > 1.0 || entry.df_supply < 0.0 ||
            entry.df_supply > 1.0) {
            throw DataError("line " + std::to_string(line_no) +
                            ": document frequency outside [0, 1]");
        }
        // Written gaps are rounded to four decimals; anything further off
        // means the file was edited by hand.
        if (std::fabs(entry.gap - (entry.df_demand - entry.df_supply)) > 5e-4) {
            throw DataError("line " + std::to_string(line_no) +
                            ": gap does not equal df_demand - df_supply");
        }
        report.entries.push_back(entry);
    }
    if (!header_seen) throw DataError("gap table has no header line");
    return report;
}

GapReport read_gap_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open gap table: " + path);
    try {
        return read_gap_csv(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

void write_coherence_csv(const CoherenceReport& report, std::ostream& out) {
    out << "# topN: " << report.topN << "\n";
    out << "# reference: " << report.reference_corpus_id << "\n";
    out << "# mean_npmi: " << format_fixed(report.mean) << "\n";
    for (std::size_t k = 0; k < report.skipped_pairs.size(); ++k) {
        if (report.skipped_pairs[k] > 0) {
            out << "# topic " << k << ": " << report.skipped_pairs[k]
                << " word pair(s) absent from the reference corpus, skipped\n";
        }
    }
    out << "topic,npmi,label\n";
    for (std::size_t k = 0; k < report.per_topic.size(); ++k) {
        const std::string label =
            k < report.labels.size() ? report.labels[k] : "topic-" + std::to_string(k);
        out << k << ',' << format_fixed(report.per_topic[k]) << ',' << csv_quote(label) << "\n";
    }
}

void write_coherence_csv_file(const CoherenceReport& report, const std::string& path) {
    write_to_file(path, [&](std::ostream& out) { write_coherence_csv(report, out); });
}

void write_priority_svg(const std::vector<PriorityPoint>& points, std::ostream& out) {
    svg_open(out, "skill-gap prioritization: x = demand document frequency, "
                  "y = gap (demand - supply)");
    x_ticks_01(out);
    for (int i = 0; i <= 4; ++i) {
        const double v = -1.0 + i * 0.5;
        const double py = map_y_signed(v);
        svg_line(out, kLeft - 5, py, kLeft, py, "stroke=\"#333\"");
        svg_text(out, kLeft - 9, py + 4, "font-size=\"11\" text-anchor=\"end\"", fmt2(v));
    }
    // Oversupply below, undersupply above this line.
    svg_line(out, kLeft, map_y_signed(0.0), kRight, map_y_signed(0.0), "stroke=\"#999\"");
    // Zero-supply diagonal: points can touch it but never cross it.
    svg_line(out, map_x01(0.0), map_y_signed(0.0), map_x01(1.0), map_y_signed(1.0),
             "stroke=\"#b05050\" stroke-dasharray=\"6 3\"");
    svg_text(out, kRight - 4, map_y_signed(1.0) + 14,
             "font-size=\"10\" fill=\"#b05050\" text-anchor=\"end\"", "zero supply (y = x)");
    for (const PriorityPoint& point : points) {
        const double px = map_x01(point.x);
        const double py = map_y_signed(point.y);
        out << "<circle cx=\"" << fmt1(px) << "\" cy=\"" << fmt1(py)
            << "\" r=\"4\" fill=\"#2b6cb0\"><title>"
            << xml_escape(point.label + " (" + format_fixed(point.x) + ", " +
                          format_fixed(point.y) + ")")
            << "</title></circle>\n";
        svg_text(out, px + 6, py - 6, "font-size=\"10\"", point.label);
    }
    svg_text(out, kLeft + kPlotW / 2, 468.0, "font-size=\"12\" text-anchor=\"middle\"",
             "demand (document frequency)");
    svg_text(out, 14.0, kTop + kPlotH / 2,
             "font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14.0 225.0)\"",
             "gap (demand - supply)");
    out << "</svg>\n";
}

void write_priority_svg_file(const std::vector<PriorityPoint>& points, const std::string& path) {
    write_to_file(path, [&](std::ostream& out) { write_priority_svg(points, out); });
}

void write_priority_json(const std::vector<PriorityPoint>& points, std::ostream& out) {
    json j;
    j["chart"] = "priority-scatter";
    j["x"] = "df_demand";
    j["y"] = "gap";
    j["diagonal"] = "y = x (zero supply)";
    j["points"] = json::array();
    for (const PriorityPoint& point : points) {
        j["points"].push_back({{"skill_id", point.skill_id},
                               {"label", point.label},
                               {"x", point.x},
                               {"y", point.y}});
    }
    out << j.dump(2) << "\n";
}

void write_priority_json_file(const std::vector<PriorityPoint>& points, const std::string& path) {
    write_to_file(path, [&](std::ostream& out) { write_priority_json(points, out); });
}

void write_priority_csv(const std::vector<PriorityPoint>& points, std::ostream& out) {
    out << "skill_id,x,y\n";
    for (const PriorityPoint& point : points) {
        out << csv_quote(point.skill_id) << ',' << format_fixed(point.x) << ','
            << format_fixed(point.y) << "\n";
    }
}

void write_priority_csv_file(const std::vector<PriorityPoint>& points, const std::string& path) {
    write_to_file(path, [&](std::ostream& out) { write_priority_csv(points, out); });
}

std::vector<PriorityPoint> read_priority_json(std::istream& in) {
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("priority chart data is not valid JSON");
    if (!j.is_object() || j.value("chart", "") != "priority-scatter") {
        throw DataError("not priority chart data (missing chart marker)");
    }
    std::vector<PriorityPoint> points;
    try {
        for (const json& item : j.at("points")) {
            PriorityPoint point;
            point.skill_id = item.at("skill_id").get<std::string>();
            point.label = item.at("label").get<std::string>();
            point.x = item.at("x").get<double>();
            point.y = item.at("y").get<double>();
            points.push_back(std::move(point));
        }
    } catch (const json::exception& e) {
        throw DataError("priority chart data is missing fields: " + std::string(e.what()));
    }
    return points;
}

void write_bars_svg(const GapReport& report, std::ostream& out) {
    svg_open(out, "demand vs supply document frequency per skill");
    for (int i = 0; i <= 4; ++i) {
        const double v = i / 4.0;
        const double py = map_y01(v);
        svg_line(out, kLeft - 5, py, kLeft, py, "stroke=\"#333\"");
        svg_text(out, kLeft - 9, py + 4, "font-size=\"11\" text-anchor=\"end\"", fmt2(v));
    }
    // Legend, top right.
    out << "<rect x=\"470.0\" y=\"26.0\" width=\"12\" height=\"12\" fill=\"#2b6cb0\"/>\n";
    svg_text(out, 486.0, 36.0, "font-size=\"11\"", "demand");
    out << "<rect x=\"545.0\" y=\"26.0\" width=\"12\" height=\"12\" fill=\"#dd8452\"/>\n";
    svg_text(out, 561.0, 36.0, "font-size=\"11\"", "supply");

    const std::size_t n = report.entries.size();
    if (n > 0) {
        const double slot = kPlotW / static_cast<double>(n);
        const double bar = std::min(40.0, slot * 0.35);
        for (std::size_t i = 0; i < n; ++i) {
            const GapEntry& entry = report.entries[i];
            const double center = kLeft + slot * (static_cast<double>(i) + 0.5);
            const double demand_h = entry.df_demand * kPlotH;
            const double supply_h = entry.df_supply * kPlotH;
            out << "<rect x=\"" << fmt1(center - bar) << "\" y=\"" << fmt1(kBottom - demand_h)
                << "\" width=\"" << fmt1(bar) << "\" height=\"" << fmt1(demand_h)
                << "\" fill=\"#2b6cb0\"><title>"
                << xml_escape(entry.label + " demand " + format_fixed(entry.df_demand))
                << "</title></rect>\n";
            out << "<rect x=\"" << fmt1(center) << "\" y=\"" << fmt1(kBottom - supply_h)
                << "\" width=\"" << fmt1(bar) << "\" height=\"" << fmt1(supply_h)
                << "\" fill=\"#dd8452\"><title>"
                << xml_escape(entry.label + " supply " + format_fixed(entry.df_supply))
                << "</title></rect>\n";
            svg_text(out, center, 444.0, "font-size=\"9\" text-anchor=\"middle\"", entry.label);
        }
    }
    svg_text(out, kLeft + kPlotW / 2, 468.0, "font-size=\"12\" text-anchor=\"middle\"",
             "document frequency by skill");
    out << "</svg>\n";
}

void write_bars_svg_file(const GapReport& report, const std::string& path) {
    write_to_file(path, [&](std::ostream& out) { write_bars_svg(report, out); });
}

void write_bars_json(const GapReport& report, std::ostream& out) {
    json j;
    j["chart"] = "df-bars";
    j["taxonomy"] = report.taxonomy_name;
    j["threshold"] = report.threshold;
    j["skills"] = json::array();
    for (const GapEntry& entry : report.entries) {
        j["skills"].push_back({{"skill_id", entry.skill_id},
                               {"label", entry.label},
                               {"df_demand", entry.df_demand},
                               {"df_supply", entry.df_supply},
                               {"gap", entry.gap}});
    }
    out << j.dump(2) << "\n";
}

void write_bars_json_file(const GapReport& report, const std::string& path) {
    write_to_file(path, [&](std::ostream& out) { write_bars_json(report, out); });
}

}  // namespace skillgap
