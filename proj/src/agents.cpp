// SPDX-License-Identifier: Apache-2.0
#include "madacc/agents.hpp"

#include <cstring>
#include <regex>
#include <set>

#include <json.hpp>

#include "madacc/errors.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

std::string_view agent_role_name(AgentRole role) {
  switch (role) {
    case AgentRole::Manager: return "manager";
    case AgentRole::Debater: return "debater";
    case AgentRole::Judge: return "judge";
    case AgentRole::Vanilla: return "vanilla";
    case AgentRole::Cot: return "cot";
    case AgentRole::Smart: return "smart";
  }
  return "manager";
}

PromptTemplate parse_template(const std::string& file_content) {
  PromptTemplate result;
  std::string* section = nullptr;
  std::vector<std::string> system_lines, user_lines;
  std::vector<std::string>* lines = nullptr;
  for (const std::string& raw : split_lines(file_content)) {
    const std::string header = to_lower(trim(raw));
    if (header == "[system]") {
      lines = &system_lines;
      section = &result.system_text;
      continue;
    }
    if (header == "[user]") {
      lines = &user_lines;
      section = &result.user_text;
      continue;
    }
    if (lines == nullptr) {
      if (!trim(raw).empty())
        throw TemplateError("template text before the [system] header");
      continue;
    }
    lines->push_back(raw);
  }
  (void)section;
  const auto join = [](std::vector<std::string>& ls) {
    while (!ls.empty() && trim(ls.back()).empty()) ls.pop_back();
    while (!ls.empty() && trim(ls.front()).empty()) ls.erase(ls.begin());
    std::string out;
    for (std::size_t i = 0; i < ls.size(); ++i) {
      if (i) out += '\n';
      out += ls[i];
    }
    return out;
  };
  result.system_text = join(system_lines);
  result.user_text = join(user_lines);
  if (result.system_text.empty() || result.user_text.empty())
    throw TemplateError("template needs non-empty [system] and [user] sections");
  return result;
}

TemplateSet TemplateSet::load_dir(
    const std::filesystem::path& dir,
    const std::map<AgentRole, std::filesystem::path>& overrides) {
  std::map<AgentRole, PromptTemplate> templates;
  for (AgentRole role : {AgentRole::Manager, AgentRole::Debater, AgentRole::Judge,
                         AgentRole::Vanilla, AgentRole::Cot, AgentRole::Smart}) {
    std::filesystem::path path = dir / (std::string(agent_role_name(role)) + ".txt");
    if (auto it = overrides.find(role); it != overrides.end()) path = it->second;
    if (!std::filesystem::exists(path))
      throw TemplateError("missing template file for role '" +
                          std::string(agent_role_name(role)) + "': " + path.string());
    try {
      templates[role] = parse_template(read_text_file(path));
    } catch (const TemplateError& e) {
      throw TemplateError(path.string() + ": " + e.what());
    }
  }
  return from_templates(std::move(templates));
}

TemplateSet TemplateSet::from_templates(std::map<AgentRole, PromptTemplate> templates) {
  TemplateSet set;
  set.templates_ = std::move(templates);
  return set;
}

const PromptTemplate& TemplateSet::get(AgentRole role) const {
  auto it = templates_.find(role);
  if (it == templates_.end())
    throw TemplateError("no template loaded for role '" +
                        std::string(agent_role_name(role)) + "'");
  return it->second;
}

std::string label_definitions_block() {
  std::string out = "Component type definitions:";
  for (ArgLabel label : kAllLabels) {
    out += "\n- ";
    out += label_name(label);
    out += ": ";
    out += label_definition(label);
    out += '.';
  }
  return out;
}

std::string render_transcript_block(const Transcript& transcript) {
  if (transcript.empty()) return "(no turns yet)";
  std::string out;
  for (const Turn& turn : transcript.turns()) {
    if (!out.empty()) out += "\n\n";
    out += "Turn " + std::to_string(turn.index) + ", ";
    out += speaker_name(turn.speaker);
    out += " (defends ";
    out += label_name(turn.defended_label);
    out += "):\n";
    out += turn.content;
  }
  return out;
}

namespace {

using Bindings = std::map<std::string, std::string>;

std::set<std::string> placeholder_names(const std::string& text) {
  std::set<std::string> names;
  std::size_t pos = 0;
  while ((pos = text.find("{{", pos)) != std::string::npos) {
    const std::size_t end = text.find("}}", pos + 2);
    if (end == std::string::npos)
      throw TemplateError("unterminated placeholder");
    names.insert(trim(text.substr(pos + 2, end - pos - 2)));
    pos = end + 2;
  }
  return names;
}

std::string substitute(const std::string& text, const Bindings& vars) {
  std::string out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t begin = text.find("{{", pos);
    if (begin == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    out.append(text, pos, begin - pos);
    const std::size_t end = text.find("}}", begin + 2);
    if (end == std::string::npos)
      throw TemplateError("unterminated placeholder");
    const std::string name = trim(text.substr(begin + 2, end - begin - 2));
    auto it = vars.find(name);
    if (it == vars.end())
      throw TemplateError("unbound placeholder {{" + name + "}}");
    out += it->second;
    pos = end + 2;
  }
  return out;
}

std::vector<ChatMessage> render_role(const TemplateSet& templates, AgentRole role,
                                     const Bindings& vars,
                                     const std::vector<std::string>& required) {
  const PromptTemplate& tmpl = templates.get(role);
  auto names = placeholder_names(tmpl.system_text);
  auto user_names = placeholder_names(tmpl.user_text);
  names.insert(user_names.begin(), user_names.end());
  for (const std::string& name : required)
    if (!names.count(name))
      throw TemplateError(std::string(agent_role_name(role)) +
                          " template missing {{" + name + "}}");
  std::vector<ChatMessage> messages;
  messages.push_back({MessageRole::System, substitute(tmpl.system_text, vars)});
  messages.push_back({MessageRole::User, substitute(tmpl.user_text, vars)});
  for (const ChatMessage& m : messages)
    if (trim(m.content).empty())
      throw TemplateError(std::string(agent_role_name(role)) +
                          " template rendered an empty message");
  return messages;
}

}  // namespace

std::vector<ChatMessage> render_manager_prompt(const Instance& instance,
                                               const TemplateSet& templates) {
  Bindings vars{{"label_definitions", label_definitions_block()},
                {"masked_text", instance.masked_text}};
  return render_role(templates, AgentRole::Manager, vars,
                     {"label_definitions", "masked_text"});
}

std::vector<ChatMessage> render_debater_prompt(const Instance& instance,
                                               ArgLabel assigned_label,
                                               ArgLabel opponent_label,
                                               const Transcript& transcript_so_far,
                                               const TemplateSet& templates) {
  if (assigned_label == opponent_label)
    throw std::invalid_argument("debater stances must be distinct");
  Bindings vars{{"label_definitions", label_definitions_block()},
                {"masked_text", instance.masked_text},
                {"assigned_label", std::string(label_name(assigned_label))},
                {"opponent_label", std::string(label_name(opponent_label))},
                {"transcript", render_transcript_block(transcript_so_far)}};
  return render_role(templates, AgentRole::Debater, vars,
                     {"assigned_label", "opponent_label", "masked_text", "transcript"});
}

std::vector<ChatMessage> render_judge_prompt(const Instance& instance,
                                             const Transcript& transcript,
                                             int scheduled_turns,
                                             const TemplateSet& templates) {
  if (!transcript.complete(scheduled_turns))
    throw IncompleteTranscript(std::to_string(transcript.size()) + " of " +
                               std::to_string(scheduled_turns) +
                               " scheduled turns present");
  Bindings vars{{"label_definitions", label_definitions_block()},
                {"masked_text", instance.masked_text},
                {"transcript", render_transcript_block(transcript)}};
  return render_role(templates, AgentRole::Judge, vars,
                     {"label_definitions", "masked_text", "transcript"});
}

std::vector<ChatMessage> render_baseline_prompt(const Instance& instance,
                                                BaselineKind kind,
                                                const TemplateSet& templates) {
  AgentRole role = AgentRole::Vanilla;
  if (kind == BaselineKind::Cot) role = AgentRole::Cot;
  if (kind == BaselineKind::Smart) role = AgentRole::Smart;
  Bindings vars{{"label_definitions", label_definitions_block()},
                {"masked_text", instance.masked_text}};
  return render_role(templates, role, vars, {"label_definitions", "masked_text"});
}

ManagerReply parse_manager_reply(const std::string& text) {
  std::size_t start = 0;
  while ((start = text.find('{', start)) != std::string::npos) {
    // balanced-object scan, string-aware
    int depth = 0;
    bool in_string = false, escaped = false;
    std::size_t close = std::string::npos;
    for (std::size_t i = start; i < text.size(); ++i) {
      const char c = text[i];
      if (in_string) {
        if (escaped) escaped = false;
        else if (c == '\\') escaped = true;
        else if (c == '"') in_string = false;
        continue;
      }
      if (c == '"') in_string = true;
      else if (c == '{') ++depth;
      else if (c == '}' && --depth == 0) {
        close = i;
        break;
      }
    }
    if (close != std::string::npos) {
      const auto doc = nlohmann::json::parse(
          text.substr(start, close - start + 1), nullptr, /*allow_exceptions=*/false);
      if (doc.is_object()) {
        std::map<ArgLabel, double> raw;
        for (const auto& [key, value] : doc.items()) {
          const auto label = label_from_name(key);
          if (!label) continue;
          if (value.is_number()) {
            raw[*label] = value.get<double>();
          } else if (value.is_string()) {
            try {
              raw[*label] = std::stod(value.get<std::string>());
            } catch (...) {
              raw[*label] = 0.0;
            }
          }
        }
        if (!raw.empty()) return {normalize(raw), text};
      }
    }
    ++start;  // not a distribution; keep scanning (covers wrapper objects)
  }
  throw ParseError("no label-probability JSON object found in reply");
}

JudgeReply parse_judge_reply(const std::string& text) {
  static const std::regex kSentinel(
      R"(^\s*(?:\*\*|__)?\s*(?:final\s+)?label\s*(?:\*\*|__)?\s*:\s*(.+?)\s*$)",
      std::regex::icase);
  const auto lines = split_lines(text);
  for (std::size_t i = lines.size(); i-- > 0;) {
    std::smatch match;
    if (!std::regex_match(lines[i], match, kSentinel)) continue;
    std::string name = match[1].str();
    while (!name.empty() && std::strchr(".!*_\"'`)", name.back()) != nullptr)
      name.pop_back();
    const auto label = label_from_name(name);
    if (!label)
      throw ParseError("sentinel line names an unknown label: '" + name + "'");
    std::string rationale;
    for (std::size_t j = 0; j < i; ++j) {
      if (j) rationale += '\n';
      rationale += lines[j];
    }
    rationale = trim(rationale);
    if (rationale.empty()) rationale = trim(text);
    return {*label, rationale, text};
  }
  throw ParseError("no 'LABEL: <name>' line found in reply");
}

std::string manager_format_reminder() {
  return "Your previous reply could not be parsed. Reply again for the text above, "
         "with a single JSON object mapping each component type name defined above "
         "to a probability in [0,1], and nothing else.";
}

std::string label_format_reminder() {
  return "Your previous reply could not be parsed. Reply again for the text above, "
         "ending with a final line of exactly this form:\nLABEL: <component type>";
}

}  // namespace madacc
