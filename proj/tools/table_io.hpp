#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "confdist/intervals.hpp"
#include "confdist/mc.hpp"

// Row-oriented output tables for the CLI: long-format CSV (one row per grid
// cell per method) and a JSON mirror. Header names and column order are part
// of the output contract and covered by golden tests.

namespace confdist::cli {

struct Value {
  std::variant<double, std::string> v;
  Value(double x) : v(x) {}
  Value(const char* s) : v(std::string(s)) {}
  Value(std::string s) : v(std::move(s)) {}
  Value(bool) = delete;  // spell booleans out explicitly
  bool is_number() const { return std::holds_alternative<double>(v); }
  double number() const { return std::get<double>(v); }
  const std::string& text() const { return std::get<std::string>(v); }
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<Value>> rows;

  void append(const Table& other) {
    if (header != other.header) throw std::logic_error("Table::append: schema mismatch");
    rows.insert(rows.end(), other.rows.begin(), other.rows.end());
  }
};

// all floating output is printed with 6 significant digits
inline std::string format_number(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.header.size(); ++i) os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "");
      os << (row[i].is_number() ? format_number(row[i].number()) : row[i].text());
    }
    os << "\n";
  }
}

// rows as an array of objects; numbers in full precision plus a "display"
// object carrying the 6-digit rendering
inline void write_json(std::ostream& os, const Table& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj, disp;
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (row[i].is_number()) {
        obj[t.header[i]] = row[i].number();
        disp[t.header[i]] = format_number(row[i].number());
      } else {
        obj[t.header[i]] = row[i].text();
        disp[t.header[i]] = row[i].text();
      }
    }
    obj["display"] = disp;
    arr.push_back(obj);
  }
  os << arr.dump(2) << "\n";
}

inline Table coverage_table(const SimReport& rep, const IntervalSpec& spec) {
  Table t;
  t.header = {"experiment", "method",   "k",     "sigma", "theta0", "alpha",
              "beta",       "closed",   "estimate", "mc_se", "n_reps", "seed"};
  for (const SimCell& c : rep.cells) {
    t.rows.push_back({rep.experiment_id, c.method, double(c.k), c.sigma, c.theta0, spec.alpha,
                      spec.beta, spec.closed ? "true" : "false", c.estimate, c.mc_se,
                      double(c.n_reps), double(rep.seed)});
  }
  return t;
}

inline Table average_cdf_table(const SimReport& rep) {
  Table t;
  t.header = {"experiment", "method", "k",     "sigma",  "theta0", "theta",
              "estimate",   "mc_se",  "n_reps", "seed"};
  for (const SimCell& c : rep.cells) {
    t.rows.push_back({rep.experiment_id, c.method, double(c.k), c.sigma, c.theta0, c.x,
                      c.estimate, c.mc_se, double(c.n_reps), double(rep.seed)});
  }
  return t;
}

inline Table collision_table(const SimReport& rep) {
  Table t;
  t.header = {"experiment", "method", "k",     "sigma",  "theta0", "R",
              "estimate",   "mc_se",  "n_reps", "seed"};
  for (const SimCell& c : rep.cells) {
    t.rows.push_back({rep.experiment_id, c.method, double(c.k), c.sigma, c.theta0, c.x,
                      c.estimate, c.mc_se, double(c.n_reps), double(rep.seed)});
  }
  return t;
}

inline Table probe_table(const std::string& experiment, const std::string& method, int k,
                         double sigma, double theta0, double param, const ProbeResult& result,
                         std::uint64_t seed) {
  Table t;
  t.header = {"experiment", "method", "k",     "sigma",  "theta0", "param",
              "estimate",   "mc_se",  "n_reps", "seed"};
  t.rows.push_back({experiment, method, double(k), sigma, theta0, param, result.estimate,
                    result.mc_se, double(result.n_reps), double(seed)});
  return t;
}

}  // namespace confdist::cli
