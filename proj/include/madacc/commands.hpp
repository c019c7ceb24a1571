// SPDX-License-Identifier: Apache-2.0
//
// The four CLI commands. Each takes an already-merged RunConfig, performs
// eager validation, and writes its artifacts; human-readable output goes to
// `out`, per-instance progress to `progress` (usually stderr).

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "madacc/config.hpp"
#include "madacc/protocol.hpp"

namespace madacc {

// Parses the corpus split and writes the instances JSONL plus a summary
// (essay count, instance count, per-class gold distribution).
int cmd_prepare(const RunConfig& config, std::ostream& out);

// Runs the selected method over the prepared instances into
// <output_dir>/<run_id>/ (config snapshot + records/predictions files).
int cmd_run(const RunConfig& config, const std::string& method,
            std::ostream& out, std::ostream& progress);

// Scores a predictions file; writes report.txt and report.json next to it
// and prints the text report.
int cmd_evaluate(const std::filesystem::path& predictions_path,
                 const std::string& method_name, std::ostream& out);

// Pretty-prints one debate record from a records file.
int cmd_inspect(const std::filesystem::path& records_path,
                const std::string& instance_id, std::ostream& out);

// The inspector's formatting, exposed for tests.
std::string render_inspection(const DebateRecord& record);

}  // namespace madacc
