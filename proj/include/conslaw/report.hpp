#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace conslaw {

enum class ReportFormat { json, csv, md };

ReportFormat parse_report_format(const std::string& s);

/// Consolidated report of a run directory (report.json / report.csv /
/// report.md). Stages that never ran are marked absent; listed artifacts
/// that are missing or whose hash changed mark the report incomplete.
/// Throws InputError when manifest.json is missing.
std::filesystem::path emit_report(const std::filesystem::path& run_dir, ReportFormat format);

}  // namespace conslaw
