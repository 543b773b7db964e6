#pragma once

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hiermud/rep/metrics.hpp"

namespace hiermud::rep {

// One evaluated run: a task/method cell for a (vehicle, direction) column.
struct MetricsRow {
  std::string task;       // detection | localization | quantification
  std::string method;     // mcnn | iud | sud | mud | hiermud_a | hiermud
  std::string direction;  // e.g. "B1->B2"
  std::string vehicle;    // e.g. "V1"
  std::uint64_t seed = 0;
  double metric = 0.0;    // F1 or accuracy in [0, 1]
};

struct TableCell {
  double mean = 0.0;
  double ci_half = 0.0;
  int runs = 0;
  bool best = false;
};

struct ReportTable {
  std::vector<std::string> tasks;    // row groups
  std::vector<std::string> methods;  // rows within a group
  std::vector<std::string> columns;  // "vehicle direction" pairs + "overall"
  // cell key: task|method|column
  std::map<std::string, TableCell> cells;

  static std::string key(const std::string& t, const std::string& m, const std::string& c) {
    return t + "|" + m + "|" + c;
  }
};

// Aggregates rows into the per-(vehicle, direction) grid with an overall
// column; cells carry mean and the 95% CI half-width over seeds, and the
// best mean per (task, column) is flagged.
inline ReportTable report_table(const std::vector<MetricsRow>& rows) {
  ReportTable table;
  auto add_unique = [](std::vector<std::string>& v, const std::string& s) {
    if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
  };
  std::map<std::string, std::vector<double>> samples;   // task|method|column -> metrics
  std::map<std::string, std::vector<double>> overall;   // task|method -> per-run metrics
  for (const auto& r : rows) {
    add_unique(table.tasks, r.task);
    add_unique(table.methods, r.method);
    const std::string col = r.vehicle + " " + r.direction;
    add_unique(table.columns, col);
    samples[ReportTable::key(r.task, r.method, col)].push_back(r.metric);
    overall[r.task + "|" + r.method].push_back(r.metric);
  }
  table.columns.push_back("overall");
  for (const auto& [k, vals] : samples) {
    TableCell c;
    c.mean = mean_of(vals);
    c.ci_half = ci95_half_width(vals);
    c.runs = static_cast<int>(vals.size());
    table.cells[k] = c;
  }
  for (const auto& [k, vals] : overall) {
    TableCell c;
    c.mean = mean_of(vals);
    c.ci_half = ci95_half_width(vals);
    c.runs = static_cast<int>(vals.size());
    table.cells[k + "|overall"] = c;
  }
  for (const auto& task : table.tasks)
    for (const auto& col : table.columns) {
      double best = -1.0;
      for (const auto& m : table.methods) {
        auto it = table.cells.find(ReportTable::key(task, m, col));
        if (it != table.cells.end()) best = std::max(best, it->second.mean);
      }
      for (const auto& m : table.methods) {
        auto it = table.cells.find(ReportTable::key(task, m, col));
        if (it != table.cells.end() && it->second.mean == best) it->second.best = true;
      }
    }
  return table;
}

inline std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os << "task,method,direction,vehicle,seed,metric\n";
  for (const auto& r : rows)
    os << r.task << ',' << r.method << ',' << r.direction << ',' << r.vehicle << ',' << r.seed
       << ',' << std::setprecision(10) << r.metric << '\n';
  return os.str();
}

inline std::string table_csv(const ReportTable& t) {
  std::ostringstream os;
  os << "task,method";
  for (const auto& c : t.columns) os << ',' << c << " mean," << c << " ci";
  os << '\n';
  for (const auto& task : t.tasks)
    for (const auto& m : t.methods) {
      os << task << ',' << m;
      for (const auto& col : t.columns) {
        auto it = t.cells.find(ReportTable::key(task, m, col));
        if (it == t.cells.end())
          os << ",,";
        else
          os << ',' << std::setprecision(6) << it->second.mean << ',' << it->second.ci_half;
      }
      os << '\n';
    }
  return os.str();
}

inline std::string table_text(const ReportTable& t) {
  std::ostringstream os;
  const int name_w = 14, cell_w = 18;
  os << std::left << std::setw(name_w) << "task" << std::setw(name_w) << "method";
  for (const auto& c : t.columns) os << std::setw(cell_w) << c;
  os << '\n';
  for (const auto& task : t.tasks) {
    for (const auto& m : t.methods) {
      os << std::left << std::setw(name_w) << task << std::setw(name_w) << m;
      for (const auto& col : t.columns) {
        auto it = t.cells.find(ReportTable::key(task, m, col));
        if (it == t.cells.end()) {
          os << std::setw(cell_w) << "-";
          continue;
        }
        std::ostringstream cell;
        cell << std::fixed << std::setprecision(2) << it->second.mean << " (+-"
             << it->second.ci_half << ")" << (it->second.best ? "*" : "");
        os << std::setw(cell_w) << cell.str();
      }
      os << '\n';
    }
  }
  os << "* best mean in column\n";
  return os.str();
}

}  // namespace hiermud::rep
