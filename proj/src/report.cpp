#include "conslaw/report.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "conslaw/errors.hpp"
#include "conslaw/io.hpp"

namespace conslaw {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kSections = {"solve", "dissipation", "structure", "degiorgi", "characteristics", "decay"};

std::string scalar_text(const json& v) {
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

json build(const fs::path& dir) {
  const fs::path mpath = dir / "manifest.json";
  std::ifstream in(mpath);
  if (!in) throw InputError("no manifest.json in " + dir.string());
  json m;
  try {
    in >> m;
  } catch (const json::exception& e) {
    throw InputError(std::string("manifest.json is unreadable: ") + e.what());
  }
  json r;
  r["name"] = m.value("name", "");
  r["version"] = m.value("version", "");
  r["config_sha256"] = m.value("config_sha256", "");
  bool complete = true;
  json missing = json::array();
  for (const auto& f : m.value("files", json::array())) {
    const fs::path p = dir / f.at("path").get<std::string>();
    if (!fs::exists(p) || sha256_file(p) != f.at("sha256").get<std::string>()) {
      complete = false;
      missing.push_back(f.at("path"));
    }
  }
  r["complete"] = complete;
  r["missing_or_modified"] = missing;
  json sections = json::object();
  const json stages = m.value("stages", json::object());
  for (const auto& s : kSections) {
    if (!stages.contains(s)) {
      sections[s] = {{"status", "absent"}};
      continue;
    }
    sections[s] = stages.at(s);
    if (stages.at(s).value("status", "") == "error") complete = false;
  }
  r["sections"] = sections;
  r["checks"] = m.value("checks", json::array());
  bool passed = true;
  for (const auto& c : r["checks"]) passed = passed && c.value("passed", false);
  r["passed"] = passed && m.value("ok", false);
  r["complete"] = complete;
  return r;
}

}  // namespace

ReportFormat parse_report_format(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  if (s == "md") return ReportFormat::md;
  throw InputError("unknown report format '" + s + "' (json, csv, md)");
}

fs::path emit_report(const fs::path& dir, ReportFormat format) {
  const json r = build(dir);
  fs::path out;
  if (format == ReportFormat::json) {
    out = dir / "report.json";
    std::ofstream(out) << r.dump(2) << '\n';
  } else if (format == ReportFormat::csv) {
    out = dir / "report.csv";
    std::ofstream f(out);
    f << "stage,check,value,limit,passed\n";
    for (const auto& c : r["checks"])
      f << c.value("stage", "") << ',' << c.value("name", "") << ',' << scalar_text(c.at("value")) << ','
        << scalar_text(c.at("limit")) << ',' << (c.value("passed", false) ? "pass" : "fail") << '\n';
    for (const auto& [name, sec] : r["sections"].items())
      f << name << ",status," << sec.value("status", "") << ",,\n";
  } else {
    out = dir / "report.md";
    std::ofstream f(out);
    f << "# Run report: " << r.value("name", "") << "\n\n";
    f << "- version: " << r.value("version", "") << "\n";
    f << "- config sha256: `" << r.value("config_sha256", "") << "`\n";
    f << "- complete: " << (r["complete"].get<bool>() ? "yes" : "no") << "\n";
    f << "- all checks passed: " << (r["passed"].get<bool>() ? "yes" : "no") << "\n\n";
    f << "## Checks\n\n| stage | check | value | limit | result |\n|---|---|---|---|---|\n";
    for (const auto& c : r["checks"])
      f << "| " << c.value("stage", "") << " | " << c.value("name", "") << " | " << scalar_text(c.at("value")) << " | "
        << scalar_text(c.at("limit")) << " | " << (c.value("passed", false) ? "pass" : "FAIL") << " |\n";
    f << "\n## Sections\n\n";
    for (const auto& [name, sec] : r["sections"].items()) {
      f << "### " << name << "\n\n";
      const std::string status = sec.value("status", "");
      f << "status: " << status << "\n\n";
      if (status == "error") f << "error: " << sec.value("error", "") << "\n\n";
      if (sec.contains("summary")) {
        f << "| quantity | value |\n|---|---|\n";
        for (const auto& [k, v] : sec["summary"].items()) f << "| " << k << " | " << scalar_text(v) << " |\n";
        f << "\n";
      }
    }
    if (!r["missing_or_modified"].empty()) {
      f << "## Missing or modified artifacts\n\n";
      for (const auto& p : r["missing_or_modified"]) f << "- " << p.get<std::string>() << "\n";
    }
  }
  return out;
}

}  // namespace conslaw
