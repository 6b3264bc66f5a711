#include "mrl/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace mrl {

std::size_t Dataset::n_group(Group g) const {
  std::size_t n = 0;
  for (const auto& r : rows)
    if ((!has_group && g == Group::C) || (r.group && *r.group == g)) ++n;
  return n;
}

std::size_t Dataset::n_censored(Group g) const {
  std::size_t n = 0;
  for (const auto& r : rows)
    if (r.censored && ((!has_group && g == Group::C) || (r.group && *r.group == g))) ++n;
  return n;
}

std::size_t Dataset::n_censored_total() const {
  std::size_t n = 0;
  for (const auto& r : rows)
    if (r.censored) ++n;
  return n;
}

std::vector<std::size_t> Dataset::group_rows(Group g) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if ((!has_group && g == Group::C) || (rows[i].group && *rows[i].group == g))
      idx.push_back(i);
  return idx;
}

ValidationReport validate_dataset(const std::vector<Observation>& rows) {
  ValidationReport rep;
  std::size_t with_cov = 0, with_group = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!(rows[i].time > 0.0))
      rep.errors.push_back({i, "time must be positive"});
    if (rows[i].covariate) ++with_cov;
    if (rows[i].group) ++with_group;
  }
  if (with_cov != 0 && with_cov != rows.size())
    rep.errors.push_back({0, "covariate present on some rows but not all"});
  if (with_group != 0 && with_group != rows.size())
    rep.errors.push_back({0, "group label present on some rows but not all"});
  // The model is continuous, so exact ties are a measure-zero artifact of
  // the recording; accept them but flag.
  std::map<double, std::size_t> seen;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto it = seen.find(rows[i].time);
    if (it != seen.end())
      rep.warnings.push_back({i, "duplicate event time (first at row " +
                                     std::to_string(it->second) + ")"});
    else
      seen.emplace(rows[i].time, i);
  }
  rep.ok = rep.errors.empty();
  if (rep.ok) {
    rep.dataset.rows = rows;
    rep.dataset.has_covariate = with_cov == rows.size() && !rows.empty();
    rep.dataset.has_group = with_group == rows.size() && !rows.empty();
  }
  return rep;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

std::vector<Observation> read_dataset_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  int col_time = -1, col_status = -1, col_cov = -1, col_group = -1;
  for (int c = 0; c < static_cast<int>(header.size()); ++c) {
    if (header[c] == "time") col_time = c;
    else if (header[c] == "status") col_status = c;
    else if (header[c] == "covariate") col_cov = c;
    else if (header[c] == "group") col_group = c;
    else throw std::runtime_error("unknown dataset column: " + header[c]);
  }
  if (col_time < 0 || col_status < 0)
    throw std::runtime_error("dataset header must contain time and status");
  std::vector<Observation> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto f = split_csv_line(line);
    Observation o;
    o.time = std::stod(f.at(col_time));
    o.censored = std::stoi(f.at(col_status)) != 0;
    if (col_cov >= 0 && col_cov < static_cast<int>(f.size()) && !f[col_cov].empty())
      o.covariate = std::stod(f[col_cov]);
    if (col_group >= 0 && col_group < static_cast<int>(f.size()) && !f[col_group].empty()) {
      if (f[col_group] == "C") o.group = Group::C;
      else if (f[col_group] == "T") o.group = Group::T;
      else throw std::runtime_error("unknown group label: " + f[col_group]);
    }
    rows.push_back(o);
  }
  return rows;
}

namespace {

std::string canonical_csv(const Dataset& data) {
  std::string out = "time,status";
  if (data.has_covariate) out += ",covariate";
  if (data.has_group) out += ",group";
  out += "\n";
  char buf[64];
  for (const auto& r : data.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%d", r.time, r.censored ? 1 : 0);
    out += buf;
    if (data.has_covariate) {
      std::snprintf(buf, sizeof buf, ",%.17g", *r.covariate);
      out += buf;
    }
    if (data.has_group) out += (*r.group == Group::C) ? ",C" : ",T";
    out += "\n";
  }
  return out;
}

}  // namespace

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write dataset file: " + path);
  out << canonical_csv(data);
}

std::uint64_t dataset_hash(const Dataset& data) {
  // FNV-1a over the canonical CSV bytes.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical_csv(data)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mrl
