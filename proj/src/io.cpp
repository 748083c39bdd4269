#include "fairmatch/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <unistd.h>

namespace fairmatch::io {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void atomic_write(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw Error("write failed for " + path.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error("cannot move output into place at " + path.string());
  }
}

namespace {

const json& field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end()) throw Error(std::string("instance: missing field \"") + name + "\"");
  return *it;
}

Index count_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw Error(std::string("instance: field \"") + name +
                "\" must be a non-negative integer");
  }
  return v.get<Index>();
}

Counts int_vector(const json& doc, const char* name, Index expected) {
  const json& v = field(doc, name);
  if (!v.is_array()) throw Error(std::string("instance: field \"") + name + "\" must be an array");
  if (static_cast<Index>(v.size()) != expected) {
    throw Error(std::string("instance: field \"") + name + "\" has " +
                std::to_string(v.size()) + " entries, expected " + std::to_string(expected));
  }
  Counts out(expected);
  for (Index k = 0; k < expected; ++k) {
    const json& e = v[k];
    if (!e.is_number_integer()) {
      throw Error(std::string("instance: field \"") + name + "\"[" + std::to_string(k) +
                  "] is not an integer");
    }
    out(k) = e.get<int>();
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool parse_double(std::string s, double& out) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
  size_t start = s.find_first_not_of(' ');
  if (start == std::string::npos) return false;
  const char* b = s.data() + start;
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e;
}

bool parse_int(std::string s, long long& out) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.pop_back();
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(b, e, out);
  return ec == std::errc() && ptr == e && b != e;
}

}  // namespace

Matrix read_affinity_tsv(const fs::path& path, Index reviewers, Index papers) {
  std::istringstream in(read_file(path));
  const std::string where = path.filename().string();
  Matrix a(reviewers, papers);
  std::string line;
  Index row = 0;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    const bool labelled = static_cast<Index>(fields.size()) == papers + 1;
    if (!labelled && static_cast<Index>(fields.size()) != papers) {
      throw Error(where + " line " + std::to_string(line_no) + ": expected " +
                  std::to_string(papers) + " values, found " + std::to_string(fields.size()));
    }
    const size_t offset = labelled ? 1 : 0;
    std::vector<double> values(static_cast<size_t>(papers));
    bool numeric = true;
    size_t bad = 0;
    for (size_t k = offset; k < fields.size(); ++k) {
      if (!parse_double(fields[k], values[k - offset])) {
        numeric = false;
        bad = k;
        break;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header
      }
      throw Error(where + " line " + std::to_string(line_no) + ", column " +
                  std::to_string(bad + 1) + ": '" + fields[bad] + "' is not a number");
    }
    first = false;
    if (row >= reviewers) {
      throw Error(where + " line " + std::to_string(line_no) + ": more than " +
                  std::to_string(reviewers) + " reviewer rows");
    }
    for (Index j = 0; j < papers; ++j) a(row, j) = values[j];
    ++row;
  }
  if (row != reviewers) {
    throw Error(where + ": found " + std::to_string(row) + " reviewer rows, expected " +
                std::to_string(reviewers));
  }
  return a;
}

std::string affinity_tsv(const Matrix& affinity) {
  std::string out = "reviewer";
  for (Index j = 0; j < affinity.cols(); ++j) out += "\tp" + std::to_string(j);
  out += '\n';
  for (Index i = 0; i < affinity.rows(); ++i) {
    out += "r" + std::to_string(i);
    for (Index j = 0; j < affinity.cols(); ++j) out += '\t' + json(affinity(i, j)).dump();
    out += '\n';
  }
  return out;
}

Instance instance_from_json(const json& doc, const fs::path& base) {
  if (!doc.is_object()) throw Error("instance: top level must be an object");
  const Index nr = count_field(doc, "reviewers");
  const Index np = count_field(doc, "papers");
  Matrix a(nr, np);
  if (doc.contains("affinities_tsv")) {
    const json& p = doc["affinities_tsv"];
    if (!p.is_string()) throw Error("instance: field \"affinities_tsv\" must be a path string");
    fs::path tsv = p.get<std::string>();
    if (tsv.is_relative()) tsv = base / tsv;
    a = read_affinity_tsv(tsv, nr, np);
  } else {
    const json& rows = field(doc, "affinities");
    if (!rows.is_array() || static_cast<Index>(rows.size()) != nr) {
      throw Error("instance: field \"affinities\" must hold " + std::to_string(nr) + " rows");
    }
    for (Index i = 0; i < nr; ++i) {
      const json& r = rows[i];
      if (!r.is_array() || static_cast<Index>(r.size()) != np) {
        throw Error("instance: field \"affinities\"[" + std::to_string(i) + "] must hold " +
                    std::to_string(np) + " numbers");
      }
      for (Index j = 0; j < np; ++j) {
        if (!r[j].is_number()) {
          throw Error("instance: field \"affinities\"[" + std::to_string(i) + "][" +
                      std::to_string(j) + "] is not a number");
        }
        a(i, j) = r[j].get<double>();
      }
    }
  }
  Counts ub = int_vector(doc, "load_ub", nr);
  Counts cov = int_vector(doc, "coverage", np);
  std::optional<Counts> lb;
  if (doc.contains("load_lb") && !doc["load_lb"].is_null()) lb = int_vector(doc, "load_lb", nr);
  try {
    return Instance(std::move(a), std::move(ub), std::move(cov), std::move(lb));
  } catch (const Error& e) {
    throw Error(std::string("instance: ") + e.what());
  }
}

json instance_to_json(const Instance& inst) {
  json doc;
  doc["reviewers"] = inst.num_reviewers();
  doc["papers"] = inst.num_papers();
  json rows = json::array();
  for (Index i = 0; i < inst.num_reviewers(); ++i) {
    json r = json::array();
    for (Index j = 0; j < inst.num_papers(); ++j) r.push_back(inst.affinity(i, j));
    rows.push_back(std::move(r));
  }
  doc["affinities"] = std::move(rows);
  doc["load_ub"] = std::vector<int>(inst.load_ub().begin(), inst.load_ub().end());
  if (inst.has_load_lb()) {
    const Counts& lb = *inst.load_lb_opt();
    doc["load_lb"] = std::vector<int>(lb.begin(), lb.end());
  } else {
    doc["load_lb"] = nullptr;
  }
  doc["coverage"] = std::vector<int>(inst.coverage().begin(), inst.coverage().end());
  return doc;
}

Instance read_instance(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(path.string() + ": " + e.what());
  }
  try {
    return instance_from_json(doc, path.parent_path());
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

void write_instance(const Instance& instance, const fs::path& path, bool tsv) {
  json doc = instance_to_json(instance);
  if (tsv) {
    fs::path side = path.stem();
    side += ".affinities.tsv";
    atomic_write(path.parent_path() / side, affinity_tsv(instance.affinity()));
    doc.erase("affinities");
    doc["affinities_tsv"] = side.string();
  }
  atomic_write(path, doc.dump(1) + "\n");
}

std::string matching_csv(const Matching& m) {
  if (!m.integral()) throw Error("only integral matchings can be written");
  std::string out = "paper,reviewer\n";
  for (Index j = 0; j < m.num_papers(); ++j)
    for (Index i = 0; i < m.num_reviewers(); ++i)
      if (m.assigned(i, j)) out += std::to_string(j) + "," + std::to_string(i) + "\n";
  return out;
}

void write_matching(const Matching& matching, const fs::path& path) {
  atomic_write(path, matching_csv(matching));
}

Matching matching_from_csv(const std::string& text, Index reviewers, Index papers) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  Matching m = Matching::zeros(reviewers, papers);
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != "paper,reviewer") {
        throw Error("matching line " + std::to_string(line_no) +
                    ": expected header 'paper,reviewer'");
      }
      header = true;
      continue;
    }
    auto f = split(line, ',');
    long long p = 0, r = 0;
    if (f.size() != 2 || !parse_int(f[0], p) || !parse_int(f[1], r)) {
      throw Error("matching line " + std::to_string(line_no) + ": expected 'paper,reviewer'");
    }
    if (p < 0 || p >= papers || r < 0 || r >= reviewers) {
      throw Error("matching line " + std::to_string(line_no) + ": index out of range");
    }
    if (m.assigned(r, p)) {
      throw Error("matching line " + std::to_string(line_no) + ": duplicate pair");
    }
    m.assign(r, p);
  }
  if (!header) throw Error("matching: missing header 'paper,reviewer'");
  return m;
}

Matching read_matching(const fs::path& path, Index reviewers, Index papers) {
  try {
    return matching_from_csv(read_file(path), reviewers, papers);
  } catch (const Error& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

json to_json(const MatchingStats& s) {
  return {{"objective", s.objective}, {"min_ps", s.min_ps}, {"max_ps", s.max_ps},
          {"mean_ps", s.mean_ps},     {"std_ps", s.std_ps}, {"min_ra", s.min_ra},
          {"max_ra", s.max_ra},       {"std_ra", s.std_ra}, {"wall_time", s.wall_time}};
}

json to_json(const QuintileBox& q) {
  return {{"box_lo", q.box_lo},         {"box_hi", q.box_hi},
          {"whisker_lo", q.whisker_lo}, {"whisker_hi", q.whisker_hi},
          {"median", q.median},         {"outliers", q.outliers},
          {"size", q.size}};
}

json to_json(const Profile& p) {
  json qs = json::array();
  for (const auto& q : p.quintiles) qs.push_back(to_json(q));
  return {{"quintiles", qs}};
}

std::string bench_header() {
  return "Data,Bounds,Alg,Time (s),Obj,Min PS,Max PS,Mean PS,Std PS,Min RA,Max RA,Std RA";
}

std::string bench_row(const std::string& data, const std::string& bounds,
                      const std::string& alg, const MatchingStats& s) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%s,%.2f,%.2f,%.2f,%.2f,%.2f,%.2f,%d,%d,%.2f",
                data.c_str(), bounds.c_str(), alg.c_str(), s.wall_time, s.objective,
                s.min_ps, s.max_ps, s.mean_ps, s.std_ps, s.min_ra, s.max_ra, s.std_ra);
  return buf;
}

}  // namespace fairmatch::io
