// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "madacc/backend.hpp"
#include "madacc/corpus.hpp"
#include "madacc/labels.hpp"
#include "madacc/transcript.hpp"

namespace madacc {

enum class AgentRole { Manager, Debater, Judge, Vanilla, Cot, Smart };

std::string_view agent_role_name(AgentRole role);

enum class BaselineKind { Vanilla, Cot, Smart };

// One prompt template: a [system] section and a [user] section, both with
// {{placeholder}} substitution.
struct PromptTemplate {
  std::string system_text;
  std::string user_text;
};

// Parses the two-section template file format:
//   [system]
//   ...
//   [user]
//   ...
PromptTemplate parse_template(const std::string& file_content);

class TemplateSet {
 public:
  // Loads the conventional file per role from a directory:
  // manager.txt, debater.txt, judge.txt, vanilla.txt, cot.txt, smart.txt.
  // Entries in `overrides` replace the conventional path for that role.
  static TemplateSet load_dir(
      const std::filesystem::path& dir,
      const std::map<AgentRole, std::filesystem::path>& overrides = {});

  static TemplateSet from_templates(std::map<AgentRole, PromptTemplate> templates);

  const PromptTemplate& get(AgentRole role) const;

 private:
  std::map<AgentRole, PromptTemplate> templates_;
};

// The generic definition block shared by every prompt; the only place label
// names may appear outside debated-label slots and transcript content.
std::string label_definitions_block();

// Alternating speaker-tagged blocks; "(no turns yet)" when empty.
std::string render_transcript_block(const Transcript& transcript);

std::vector<ChatMessage> render_manager_prompt(const Instance& instance,
                                               const TemplateSet& templates);

std::vector<ChatMessage> render_debater_prompt(const Instance& instance,
                                               ArgLabel assigned_label,
                                               ArgLabel opponent_label,
                                               const Transcript& transcript_so_far,
                                               const TemplateSet& templates);

// `scheduled_turns` is the number of turns the debate was configured for;
// an incomplete transcript is rejected.
std::vector<ChatMessage> render_judge_prompt(const Instance& instance,
                                             const Transcript& transcript,
                                             int scheduled_turns,
                                             const TemplateSet& templates);

std::vector<ChatMessage> render_baseline_prompt(const Instance& instance,
                                                BaselineKind kind,
                                                const TemplateSet& templates);

struct ManagerReply {
  LabelDistribution distribution;
  std::string raw_text;
};

struct JudgeReply {
  ArgLabel label = ArgLabel::MajorClaim;
  std::string rationale;
  std::string raw_text;
};

// Pulls the first JSON object out of free-form text and normalizes its label
// entries. Missing labels count as 0.
ManagerReply parse_manager_reply(const std::string& text);

// Expects a trailing sentinel line "LABEL: <name>" after free-form rationale.
JudgeReply parse_judge_reply(const std::string& text);

// Reminder appended on a re-prompt after a parse failure.
std::string manager_format_reminder();
std::string label_format_reminder();

}  // namespace madacc
