#pragma once

#include <fstream>

#include "pqc/common.hpp"

namespace pqc {

// One evaluation snapshot during training.
struct MetricsRow {
    long long episode = 0;  // episodes for online methods, epochs for batch
    long long step = 0;     // optimizer steps
    double train_success = 0.0;
    double holdout_success = 0.0;
    double mean_loss = 0.0;
};

inline const char* kMetricsHeader = "episode,step,train_success,holdout_success,mean_loss";

inline std::string metrics_to_csv(const std::vector<MetricsRow>& rows) {
    std::ostringstream os;
    os << kMetricsHeader << "\n";
    for (const auto& r : rows)
        os << r.episode << "," << r.step << "," << fmt_shortest(r.train_success) << ","
           << fmt_shortest(r.holdout_success) << "," << fmt_shortest(r.mean_loss) << "\n";
    return os.str();
}

inline void save_metrics(const std::vector<MetricsRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + path);
    f << metrics_to_csv(rows);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<MetricsRow> load_metrics(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line)) throw FormatError("metrics: empty file " + path);
    if (split_csv_line(line).size() != 5)
        throw FormatError("metrics: unexpected header in " + path);
    std::vector<MetricsRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto t = split_csv_line(line);
        if (t.size() != 5) throw FormatError("metrics: bad row in " + path);
        MetricsRow r;
        r.episode = parse_int(t[0]);
        r.step = parse_int(t[1]);
        r.train_success = parse_double(t[2]);
        r.holdout_success = parse_double(t[3]);
        r.mean_loss = parse_double(t[4]);
        rows.push_back(r);
    }
    return rows;
}

// Grouped result rows shared by the scene-count sweep and finetune reports.
struct GroupedRow {
    std::string group;  // scene count, or "before"/"after"
    long long seed = 0;
    double train_success = 0.0;
    double holdout_success = 0.0;
};

inline std::string grouped_to_csv(const std::vector<GroupedRow>& rows) {
    std::ostringstream os;
    os << "group,seed,train_success,holdout_success\n";
    for (const auto& r : rows)
        os << r.group << "," << r.seed << "," << fmt_shortest(r.train_success) << ","
           << fmt_shortest(r.holdout_success) << "\n";
    return os.str();
}

inline void save_grouped(const std::vector<GroupedRow>& rows, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw FormatError("cannot open for write: " + path);
    f << grouped_to_csv(rows);
}

inline std::vector<GroupedRow> load_grouped(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw FormatError("cannot open: " + path);
    std::string line;
    if (!std::getline(f, line) || split_csv_line(line).size() != 4)
        throw FormatError("grouped csv: bad header in " + path);
    std::vector<GroupedRow> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        auto t = split_csv_line(line);
        if (t.size() != 4) throw FormatError("grouped csv: bad row in " + path);
        rows.push_back({t[0], parse_int(t[1]), parse_double(t[2]), parse_double(t[3])});
    }
    return rows;
}

}  // namespace pqc
