// SPDX-License-Identifier: Apache-2.0
#include "madacc/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "madacc/errors.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

namespace {

bool parse_size(std::string_view s, std::size_t& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t next = line.find(sep, pos);
    if (next == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      break;
    }
    fields.push_back(line.substr(pos, next - pos));
    pos = next + 1;
  }
  return fields;
}

}  // namespace

Essay parse_essay(const std::string& essay_id, const std::string& text_content,
                  const std::string& ann_content) {
  Essay essay;
  essay.essay_id = essay_id;
  essay.text = text_content;

  const auto offsets = codepoint_offsets(text_content);
  const std::size_t text_len = offsets.size() - 1;

  const auto lines = split_lines(ann_content);
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    const std::string& line = lines[ln];
    if (line.empty()) continue;
    if (line[0] != 'T') continue;  // R/A/E/# lines carry relations and notes

    const auto where = [&] {
      return essay_id + ".ann line " + std::to_string(ln + 1);
    };

    auto fields = split_fields(line, '\t');
    if (fields.size() < 2)
      throw MalformedAnnotation(where() + ": component line needs tab-separated fields");

    ArgComponent comp;
    comp.component_id = std::string(fields[0]);
    if (comp.component_id.size() < 2 ||
        !std::all_of(comp.component_id.begin() + 1, comp.component_id.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw MalformedAnnotation(where() + ": bad component id '" + comp.component_id + "'");

    auto parts = split_fields(fields[1], ' ');
    if (parts.size() != 3)
      throw MalformedAnnotation(where() + ": expected '<Label> <start> <end>', got '" +
                                std::string(fields[1]) + "'");

    auto label = label_from_name(parts[0]);
    if (!label)
      throw MalformedAnnotation(where() + ": unknown label '" + std::string(parts[0]) + "'");
    comp.gold_label = *label;

    if (!parse_size(parts[1], comp.span_start) || !parse_size(parts[2], comp.span_end))
      throw MalformedAnnotation(where() + ": offsets must be non-negative integers");
    if (comp.span_start >= comp.span_end)
      throw MalformedAnnotation(where() + ": empty or inverted span");
    if (comp.span_end > text_len)
      throw MalformedAnnotation(where() + ": span end " + std::to_string(comp.span_end) +
                                " past text length " + std::to_string(text_len));

    const std::string sliced = std::string(
        text_content.substr(offsets[comp.span_start],
                            offsets[comp.span_end] - offsets[comp.span_start]));
    const std::string ann_surface = (fields.size() >= 3) ? std::string(fields[2]) : std::string();
    if (collapse_whitespace(sliced) != collapse_whitespace(ann_surface))
      throw MalformedAnnotation(where() + ": surface text disagrees with the span ('" +
                                collapse_whitespace(ann_surface) + "' vs '" +
                                collapse_whitespace(sliced) + "')");
    comp.surface_text = sliced;
    essay.components.push_back(std::move(comp));
  }

  std::stable_sort(essay.components.begin(), essay.components.end(),
                   [](const ArgComponent& a, const ArgComponent& b) {
                     return a.span_start < b.span_start;
                   });
  for (std::size_t i = 1; i < essay.components.size(); ++i) {
    if (essay.components[i - 1].span_end > essay.components[i].span_start)
      throw OverlappingSpans(essay_id + ": components " +
                             essay.components[i - 1].component_id + " and " +
                             essay.components[i].component_id + " overlap");
  }
  return essay;
}

namespace {

struct ByteSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

// Paragraph (blank-line delimited) byte bounds around a byte span.
ByteSpan paragraph_bounds(const std::string& text, ByteSpan target) {
  std::size_t begin = text.rfind("\n\n", target.begin);
  begin = (begin == std::string::npos) ? 0 : begin + 2;
  std::size_t end = text.find("\n\n", target.end);
  end = (end == std::string::npos) ? text.size() : end;
  return {begin, end};
}

}  // namespace

std::vector<Instance> make_instances(const Essay& essay, ContextMode mode) {
  const auto offsets = codepoint_offsets(essay.text);
  const std::size_t n = essay.components.size();

  std::vector<ByteSpan> spans(n);
  for (std::size_t i = 0; i < n; ++i)
    spans[i] = {offsets[essay.components[i].span_start],
                offsets[essay.components[i].span_end]};

  std::vector<Instance> instances;
  instances.reserve(n);
  for (std::size_t target = 0; target < n; ++target) {
    ByteSpan window{0, essay.text.size()};
    if (mode == ContextMode::Paragraph)
      window = paragraph_bounds(essay.text, spans[target]);

    std::string masked = essay.text.substr(window.begin, window.end - window.begin);
    // Insert tags from the last component backwards so earlier byte offsets
    // stay valid. Close tag first, then open.
    for (std::size_t j = n; j-- > 0;) {
      if (spans[j].begin < window.begin || spans[j].end > window.end) continue;
      const bool is_target = (j == target);
      const std::string_view open = is_target ? kTargetOpen : kArgOpen;
      const std::string_view close = is_target ? kTargetClose : kArgClose;
      masked.insert(spans[j].end - window.begin, close);
      masked.insert(spans[j].begin - window.begin, open);
    }

    const ArgComponent& comp = essay.components[target];
    Instance inst;
    inst.instance_id = essay.essay_id + ":" + comp.component_id;
    inst.essay_id = essay.essay_id;
    inst.component_id = comp.component_id;
    inst.masked_text = std::move(masked);
    inst.target_text = comp.surface_text;
    inst.gold_label = comp.gold_label;
    instances.push_back(std::move(inst));
  }
  return instances;
}

std::vector<Essay> load_split(const std::filesystem::path& corpus_dir,
                              const std::filesystem::path& split_file) {
  const std::string listing = read_text_file(split_file);
  std::vector<Essay> essays;
  for (const std::string& raw : split_lines(listing)) {
    const std::string id = trim(raw);
    if (id.empty() || id[0] == '#') continue;
    const auto txt_path = corpus_dir / (id + ".txt");
    const auto ann_path = corpus_dir / (id + ".ann");
    if (!std::filesystem::exists(txt_path))
      throw MissingEssayFile("essay '" + id + "': missing " + txt_path.string());
    if (!std::filesystem::exists(ann_path))
      throw MissingEssayFile("essay '" + id + "': missing " + ann_path.string());
    essays.push_back(parse_essay(id, read_text_file(txt_path), read_text_file(ann_path)));
  }
  return essays;
}

std::string strip_tags(std::string masked_text) {
  for (std::string_view tag : {kTargetOpen, kTargetClose, kArgOpen, kArgClose})
    masked_text = replace_all(std::move(masked_text), tag, "");
  return masked_text;
}

}  // namespace madacc
