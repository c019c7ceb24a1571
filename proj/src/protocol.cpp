// SPDX-License-Identifier: Apache-2.0
#include "madacc/protocol.hpp"

#include <atomic>
#include <mutex>
#include <thread>

#include "madacc/errors.hpp"
#include "madacc/text_util.hpp"

namespace madacc {

std::uint64_t instance_seed(std::uint64_t global_seed, const std::string& instance_id) {
  unsigned char bytes[8];
  for (int i = 0; i < 8; ++i)
    bytes[i] = static_cast<unsigned char>((global_seed >> (8 * i)) & 0xff);
  const std::uint64_t h = fnv1a64(std::string_view(
      reinterpret_cast<const char*>(bytes), sizeof(bytes)));
  return fnv1a64(instance_id, h);
}

std::pair<StancePair, bool> assign_stances(const LabelDistribution& dist,
                                           std::mt19937_64& rng) {
  const auto [top1, top2] = top_two(dist);
  const bool coin = (rng() & 1ull) != 0;
  StancePair stance;
  stance.proponent = coin ? top1 : top2;
  stance.opponent = coin ? top2 : top1;
  return {stance, coin};
}

bool should_skip(const LabelDistribution& dist, double tau) {
  if (tau >= 1.0) return false;  // debate everything
  return dist.max_prob() >= tau;
}

namespace {

// One Manager/Judge/baseline exchange with stateless re-prompting: attempt 1
// sends the rendered prompt, later attempts resend it with `reminder`
// appended to the user message. Token usage of every attempt is charged.
template <typename Reply>
Reply call_with_parse_budget(Backend& backend,
                             const std::vector<ChatMessage>& messages,
                             const GenerationParams& params, int attempts,
                             Reply (*parse)(const std::string&),
                             const std::string& reminder, TokenUsage& usage) {
  std::string last_error = "no attempts made";
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    std::vector<ChatMessage> to_send = messages;
    if (attempt > 1) {
      for (ChatMessage& m : to_send)
        if (m.role == MessageRole::User) m.content += "\n\n" + reminder;
    }
    const BackendResponse response = backend.complete(to_send, params);
    usage += response.usage;
    try {
      return parse(response.text);
    } catch (const ParseError& e) {
      last_error = e.what();
    }
  }
  throw ParseError("unparseable after " + std::to_string(attempts) +
                   " attempts; last error: " + last_error);
}

}  // namespace

DebateRecord run_debate(const Instance& instance, const DebateConfig& config,
                        Backend& backend, const TemplateSet& templates) {
  DebateRecord record;
  record.instance_id = instance.instance_id;
  record.essay_id = instance.essay_id;
  record.gold_label = instance.gold_label;
  record.target_excerpt = instance.target_text;
  record.manager_model = config.manager_params.model_id;
  record.debater_model = config.debater_params.model_id;
  record.judge_model = config.judge_params.model_id;

  std::mt19937_64 rng(instance_seed(config.rng_seed, instance.instance_id));

  try {
    ManagerReply manager;
    try {
      manager = call_with_parse_budget<ManagerReply>(
          backend, render_manager_prompt(instance, templates),
          config.manager_params, config.max_parse_attempts, parse_manager_reply,
          manager_format_reminder(), record.usage);
    } catch (const ParseError& e) {
      throw ManagerFailure("instance " + instance.instance_id + ": manager " +
                           e.what());
    }
    record.manager_distribution = manager.distribution;
    record.has_distribution = true;

    auto [stance, coin] = assign_stances(manager.distribution, rng);
    record.stance = stance;
    record.coin = coin;

    if (should_skip(manager.distribution, config.skip_threshold)) {
      record.skipped = true;
      record.verdict_label = argmax(manager.distribution);
      record.verdict_rationale =
          "confidence-based skip: top probability at or above the threshold";
      record.has_verdict = true;
      return record;
    }

    const int k = config.scheduled_turns();
    for (int i = 1; i <= k; ++i) {
      const Speaker speaker = (i % 2 == 1) ? Speaker::Proponent : Speaker::Opponent;
      const ArgLabel defended =
          speaker == Speaker::Proponent ? stance.proponent : stance.opponent;
      const ArgLabel opposing =
          speaker == Speaker::Proponent ? stance.opponent : stance.proponent;
      const BackendResponse response = backend.complete(
          render_debater_prompt(instance, defended, opposing, record.transcript,
                                templates),
          config.debater_params);
      record.usage += response.usage;
      record.transcript.append({i, speaker, defended, trim(response.text)});
    }

    JudgeReply verdict;
    try {
      verdict = call_with_parse_budget<JudgeReply>(
          backend, render_judge_prompt(instance, record.transcript, k, templates),
          config.judge_params, config.max_parse_attempts, parse_judge_reply,
          label_format_reminder(), record.usage);
    } catch (const ParseError& e) {
      throw JudgeFailure("instance " + instance.instance_id + ": judge " +
                         e.what());
    }
    record.verdict_label = verdict.label;
    record.verdict_rationale = verdict.rationale;
    record.has_verdict = true;
  } catch (const AuthError&) {
    throw;  // credential problems abort the whole run
  } catch (const ManagerFailure& e) {
    record.failed = true;
    record.failure_reason = e.what();
  } catch (const JudgeFailure& e) {
    record.failed = true;
    record.failure_reason = e.what();
  } catch (const TransportError& e) {
    record.failed = true;
    record.failure_reason = "instance " + instance.instance_id + ": " + e.what();
  } catch (const RefusalError& e) {
    record.failed = true;
    record.failure_reason = "instance " + instance.instance_id + ": " + e.what();
  } catch (const CacheError& e) {
    record.failed = true;
    record.failure_reason = "instance " + instance.instance_id + ": " + e.what();
  }
  return record;
}

namespace {

// Shared frame for both batch drivers: a work-stealing index over the input,
// results joined in input order, first fatal exception rethrown after join.
template <typename Result, typename Work>
std::vector<Result> parallel_map(std::size_t count, int parallelism, Work work) {
  if (parallelism < 1)
    throw ConfigError("parallelism must be >= 1, got " +
                      std::to_string(parallelism));
  std::vector<Result> results(count);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) return;
      }
      try {
        results[i] = work(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const int threads = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(parallelism), count));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

}  // namespace

std::vector<DebateRecord> run_pipeline(
    const std::vector<Instance>& instances, const DebateConfig& config,
    Backend& backend, const TemplateSet& templates, int parallelism,
    const std::function<void(const DebateRecord&)>& on_record) {
  std::mutex callback_mutex;
  return parallel_map<DebateRecord>(
      instances.size(), parallelism, [&](std::size_t i) {
        DebateRecord record = run_debate(instances[i], config, backend, templates);
        if (on_record) {
          std::lock_guard<std::mutex> lock(callback_mutex);
          on_record(record);
        }
        return record;
      });
}

std::vector<Prediction> run_baseline(
    const std::vector<Instance>& instances, BaselineKind kind,
    const DebateConfig& config, Backend& backend, const TemplateSet& templates,
    int parallelism, TokenUsage* usage_total,
    const std::function<void(const Prediction&)>& on_prediction) {
  // vanilla and cot run on the manager model assignment, smart on the judge's
  const GenerationParams& params = kind == BaselineKind::Smart
                                       ? config.judge_params
                                       : config.manager_params;
  std::mutex shared_mutex;
  TokenUsage usage;
  auto predictions = parallel_map<Prediction>(
      instances.size(), parallelism, [&](std::size_t i) {
        const Instance& instance = instances[i];
        Prediction prediction;
        prediction.instance_id = instance.instance_id;
        prediction.gold = instance.gold_label;
        TokenUsage call_usage;
        try {
          const JudgeReply reply = call_with_parse_budget<JudgeReply>(
              backend, render_baseline_prompt(instance, kind, templates), params,
              config.max_parse_attempts, parse_judge_reply,
              label_format_reminder(), call_usage);
          prediction.predicted = reply.label;
        } catch (const AuthError&) {
          throw;
        } catch (const ParseError&) {
          prediction.failed = true;
        } catch (const TransportError&) {
          prediction.failed = true;
        } catch (const RefusalError&) {
          prediction.failed = true;
        } catch (const CacheError&) {
          prediction.failed = true;
        }
        {
          std::lock_guard<std::mutex> lock(shared_mutex);
          usage += call_usage;
          if (on_prediction) on_prediction(prediction);
        }
        return prediction;
      });
  if (usage_total) *usage_total = usage;
  return predictions;
}

Prediction prediction_from_record(const DebateRecord& record) {
  Prediction prediction;
  prediction.instance_id = record.instance_id;
  prediction.gold = record.gold_label;
  prediction.failed = record.failed;
  if (record.has_verdict) prediction.predicted = record.verdict_label;
  return prediction;
}

}  // namespace madacc
