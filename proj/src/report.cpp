#include "bihyp/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

namespace bihyp {

void ResidualReport::add(const std::string& check_id, int point_index,
                         const std::vector<double>& point, double residual,
                         double tolerance) {
  CheckRecord rec;
  rec.check_id = check_id;
  rec.point_index = point_index;
  rec.point = point;
  rec.residual = residual;
  rec.tolerance = tolerance;
  rec.pass = residual <= tolerance;
  records.push_back(std::move(rec));
}

void ResidualReport::add(const std::string& check_id, int point_index,
                         const Vec& point, double residual, double tolerance) {
  add(check_id, point_index,
      std::vector<double>(point.data(), point.data() + point.size()),
      residual, tolerance);
}

void ResidualReport::sort_records() {
  std::stable_sort(records.begin(), records.end(),
                   [](const CheckRecord& a, const CheckRecord& b) {
                     if (a.check_id != b.check_id)
                       return a.check_id < b.check_id;
                     return a.point_index < b.point_index;
                   });
}

bool ResidualReport::all_pass() const {
  for (const CheckRecord& r : records)
    if (!r.pass) return false;
  return true;
}

int ResidualReport::failed_count() const {
  int n = 0;
  for (const CheckRecord& r : records)
    if (!r.pass) ++n;
  return n;
}

std::vector<std::pair<std::string, double>> ResidualReport::max_residuals()
    const {
  std::vector<std::pair<std::string, double>> out;
  std::map<std::string, std::size_t> index;
  for (const CheckRecord& r : records) {
    auto it = index.find(r.check_id);
    if (it == index.end()) {
      index[r.check_id] = out.size();
      out.emplace_back(r.check_id, r.residual);
    } else {
      out[it->second].second = std::max(out[it->second].second, r.residual);
    }
  }
  return out;
}

nlohmann::json ResidualReport::to_json() const {
  nlohmann::json j;
  j["version"] = kVersion;
  j["meta"] = meta;
  j["diagnostics"] = diagnostics;
  nlohmann::json recs = nlohmann::json::array();
  for (const CheckRecord& r : records) {
    nlohmann::json jr;
    jr["check_id"] = r.check_id;
    jr["point_index"] = r.point_index;
    jr["point"] = r.point;
    jr["residual"] = r.residual;
    jr["tolerance"] = r.tolerance;
    jr["pass"] = r.pass;
    recs.push_back(std::move(jr));
  }
  j["records"] = std::move(recs);
  nlohmann::json summary;
  summary["total"] = records.size();
  summary["failed"] = failed_count();
  summary["all_pass"] = all_pass();
  nlohmann::json maxres = nlohmann::json::array();
  for (const auto& [id, res] : max_residuals())
    maxres.push_back({{"check_id", id}, {"max_residual", res}});
  summary["max_residuals"] = std::move(maxres);
  j["summary"] = std::move(summary);
  return j;
}

ResidualReport ResidualReport::from_json(const nlohmann::json& j) {
  ResidualReport rep;
  rep.meta = j.value("meta", nlohmann::json::object());
  rep.diagnostics = j.value("diagnostics", nlohmann::json::object());
  for (const auto& jr : j.at("records")) {
    CheckRecord r;
    r.check_id = jr.at("check_id").get<std::string>();
    r.point_index = jr.at("point_index").get<int>();
    r.point = jr.at("point").get<std::vector<double>>();
    r.residual = jr.at("residual").get<double>();
    r.tolerance = jr.at("tolerance").get<double>();
    r.pass = jr.at("pass").get<bool>();
    rep.records.push_back(std::move(r));
  }
  return rep;
}

std::string format_sig(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void ResidualReport::write_json(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error("cannot write report to " + path);
  os << to_json().dump(2) << "\n";
}

void ResidualReport::write_csv(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw Error("cannot write report to " + path);
  os << "check_id,point_index,point,residual,tolerance,verdict\n";
  for (const CheckRecord& r : records) {
    os << r.check_id << ',' << r.point_index << ',';
    for (std::size_t i = 0; i < r.point.size(); ++i) {
      if (i) os << ';';
      os << format_sig(r.point[i]);
    }
    os << ',' << format_sig(r.residual) << ',' << format_sig(r.tolerance)
       << ',' << (r.pass ? "pass" : "fail") << "\n";
  }
}

void ResidualReport::print_summary(std::ostream& os) const {
  os << "checks: " << records.size() << "  failed: " << failed_count()
     << "\n";
  for (const auto& [id, res] : max_residuals())
    os << "  " << std::left << std::setw(34) << id
       << " max residual " << format_sig(res) << "\n";
}

}  // namespace bihyp
