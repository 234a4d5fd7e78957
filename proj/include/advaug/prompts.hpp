#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "advaug/types.hpp"

namespace advaug {

// A style-conversion instruction, e.g. "Rewrite the following article in a
// sarcastic and mocking tone". Single line, non-empty.
struct ConversionPrompt {
  enum class Origin { kSeedSet, kGenerated };

  std::string instruction;
  Origin origin = Origin::kGenerated;
  int round = 0;  // generation round; 0 for the seed set

  bool operator==(const ConversionPrompt& other) const { return instruction == other.instruction; }
};

// A prompt together with its measured prediction-confusion score; the score
// trajectory is a list of these.
struct PromptScoreRecord {
  ConversionPrompt prompt;
  double score = 0.0;  // |0.5 - AUC|, lower = more confusing
  int round = 0;
};

// How the trajectory is rendered into the generation request.
enum class TrajectoryStyle {
  kNumericScores,  // "Score: 0.1375"
  kClassBuckets,   // "Score: high" / "medium" / "low" confusion buckets
  kOmitted,        // problem description only
};

struct GenerationPromptOptions {
  TrajectoryStyle style = TrajectoryStyle::kNumericScores;
  // Bucket thresholds on the confusion score: < high_threshold -> "high"
  // confusion, < medium_threshold -> "medium", else "low".
  double high_threshold = 0.1;
  double medium_threshold = 0.3;
};

std::string confusion_bucket(double score, const GenerationPromptOptions& opts);

// The candidate-generation request: problem description, the score
// trajectory rendered worst-first (lower is better, best last), and a closing
// line asking for `count` new instructions as a numbered list. Instructions
// already obtained this round can be listed for exclusion on a retry.
std::string render_generation_prompt(const std::vector<PromptScoreRecord>& trajectory_desc,
                                     std::size_t count, const GenerationPromptOptions& opts,
                                     const std::vector<std::string>& exclude = {});

// Style conversion request: the instruction, a colon, and the article.
std::string render_style_request(const ConversionPrompt& prompt, std::string_view article);

// One batched request asking the judge how many of the listed
// (original, converted) pairs kept their meaning.
std::string render_coherency_request(const std::vector<std::pair<std::string, std::string>>& pairs);

// One-word real/fake classification request.
std::string render_zero_shot_request(std::string_view article);

// Two-step evasion attack: first classify with a stated reason, then rewrite
// to dodge that reason.
std::string render_attack_probe_request(std::string_view article);
std::string render_attack_rewrite_request(std::string_view article, std::string_view answer,
                                          std::string_view reason, Label article_label);

// Reference attack and baseline instruction sets.
std::string publisher_attack_instruction(std::string_view publisher_name);
std::string summarization_attack_instruction();
std::string in_context_attack_request(std::string_view example_article, std::string_view article);
std::vector<ConversionPrompt> predefined_tone_prompts();

// Reply parsing -------------------------------------------------------------

// "1. X\n2. Y\n3. Z" -> {X, Y, Z}; tolerates "1)", "-", and blank lines.
std::vector<std::string> parse_numbered_list(std::string_view reply);

// Case- and punctuation-tolerant parse of a one-word Real/Fake answer.
std::optional<Label> parse_real_fake(std::string_view reply);

// First integer appearing in the reply, for count-style judgments.
std::optional<long> parse_leading_count(std::string_view reply);

// "Answer: ...\nReason: ..." from the attack probe reply.
struct ProbeVerdict {
  std::string answer;
  std::string reason;
};
std::optional<ProbeVerdict> parse_probe_verdict(std::string_view reply);

}  // namespace advaug
