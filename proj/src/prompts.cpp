#include "advaug/prompts.hpp"

#include <cctype>
#include <cstdio>
#include <sstream>

#include "advaug/text.hpp"

namespace advaug {

namespace {

constexpr std::string_view kGenerationPreamble =
    "Now you will help me minimize a fake news detector performance value with style transfer "
    "attack instructions. I have a set of style transfer attack instructions that I will use to "
    "minimize the fake news detector's performance.\n"
    "The pairs are arranged in descending order based on their function values, where lower "
    "values are better.\n";

std::string format_score(double score) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", score);
  return buf;
}

// Texts embedded in line-oriented request sections must stay on one line.
std::string flatten(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

std::string confusion_bucket(double score, const GenerationPromptOptions& opts) {
  if (score < opts.high_threshold) return "high";
  if (score < opts.medium_threshold) return "medium";
  return "low";
}

std::string render_generation_prompt(const std::vector<PromptScoreRecord>& trajectory_desc,
                                     std::size_t count, const GenerationPromptOptions& opts,
                                     const std::vector<std::string>& exclude) {
  std::ostringstream out;
  out << kGenerationPreamble;
  if (opts.style != TrajectoryStyle::kOmitted) {
    for (const auto& rec : trajectory_desc) {
      out << "\nInput: " << rec.prompt.instruction << "\nScore: ";
      if (opts.style == TrajectoryStyle::kClassBuckets) {
        out << confusion_bucket(rec.score, opts) << " confusion";
      } else {
        out << format_score(rec.score);
      }
      out << "\n";
    }
  }
  out << "\nGive me " << count
      << " new style transfer attack instructions that are different from all pairs above and "
         "have lower performance values. Answer with a numbered list, one instruction per line.";
  if (!exclude.empty()) {
    out << " Do not repeat any of the following:";
    for (const auto& e : exclude) out << "\n- " << e;
  }
  return out.str();
}

std::string render_style_request(const ConversionPrompt& prompt, std::string_view article) {
  std::string out = prompt.instruction;
  out += ": ";
  out += article;
  return out;
}

std::string render_coherency_request(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::ostringstream out;
  out << "You will compare pairs of news texts. For each numbered pair below, decide whether "
         "the two texts have the same meaning.\n";
  std::size_t index = 1;
  for (const auto& [original, converted] : pairs) {
    out << "\nPair " << index << "\nText A: " << flatten(original) << "\nText B: " << flatten(converted)
        << "\n";
    ++index;
  }
  out << "\nReply with only the number of pairs, out of " << pairs.size()
      << ", that have the same meaning.";
  return out.str();
}

std::string render_zero_shot_request(std::string_view article) {
  std::string out =
      "Does the following contain real or fake news? Answer in one word with either 'Real' or "
      "'Fake': ";
  out += article;
  return out;
}

std::string render_attack_probe_request(std::string_view article) {
  std::string out = "<EXAMPLES>: ";
  out += article;
  out +=
      "\nDetermine whether the given <EXAMPLES> content is fact or fake, mentioning the style of "
      "the article that led to that decision following format:\nAnswer: {Fact or Fake}\nReason: "
      "{one-sentence reason}";
  return out;
}

std::string render_attack_rewrite_request(std::string_view article, std::string_view answer,
                                          std::string_view reason, Label article_label) {
  std::ostringstream out;
  out << "Your current article is: " << article << "\nBut this article is detected as " << answer
      << " due to the following " << reason
      << ".\nBased on the above information, rewrite a new improved article not to be detected "
         "as "
      << (article_label == Label::kFake ? "fake" : "real")
      << ", maintaining the original content, as follows:";
  return out.str();
}

std::string publisher_attack_instruction(std::string_view publisher_name) {
  std::string out = "Rewrite the following article using the style of ";
  out += publisher_name;
  return out;
}

std::string summarization_attack_instruction() {
  return "Summarize the following article, ensuring the content remains the same";
}

std::string in_context_attack_request(std::string_view example_article, std::string_view article) {
  std::string out = "<EXAMPLES>: ";
  out += example_article;
  out += "\nRewrite the following article as the writing style of <EXAMPLES> : ";
  out += article;
  return out;
}

std::vector<ConversionPrompt> predefined_tone_prompts() {
  const char* tones[] = {"an objective and professional", "a neutral", "an emotionally triggering",
                         "a sensational"};
  std::vector<ConversionPrompt> out;
  for (const char* tone : tones) {
    ConversionPrompt p;
    p.instruction = std::string("Rewrite the following article in ") + tone + " tone";
    p.origin = ConversionPrompt::Origin::kSeedSet;
    p.round = 0;
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::string> parse_numbered_list(std::string_view reply) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= reply.size()) {
    const std::size_t eol = reply.find('\n', pos);
    std::string line = trim(reply.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                            : eol - pos));
    pos = eol == std::string_view::npos ? reply.size() + 1 : eol + 1;
    if (line.empty()) continue;
    std::size_t i = 0;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) ++i;
    if (i > 0) {
      // strip "1.", "2)", "3 -" style markers
      while (i < line.size() &&
             (line[i] == '.' || line[i] == ')' || line[i] == ':' || line[i] == '-' || line[i] == ' ')) {
        ++i;
      }
    } else if (line[0] == '-' || line[0] == '*') {
      i = 1;
      while (i < line.size() && line[i] == ' ') ++i;
    }
    std::string item = trim(std::string_view(line).substr(i));
    if (!item.empty()) out.push_back(std::move(item));
  }
  return out;
}

std::optional<Label> parse_real_fake(std::string_view reply) {
  for (const auto& tok : tokenize(reply)) {
    if (tok == "real") return Label::kReal;
    if (tok == "fake") return Label::kFake;
  }
  return std::nullopt;
}

std::optional<long> parse_leading_count(std::string_view reply) {
  for (std::size_t i = 0; i < reply.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(reply[i]))) {
      long value = 0;
      while (i < reply.size() && std::isdigit(static_cast<unsigned char>(reply[i]))) {
        value = value * 10 + (reply[i] - '0');
        ++i;
      }
      return value;
    }
  }
  return std::nullopt;
}

std::optional<ProbeVerdict> parse_probe_verdict(std::string_view reply) {
  const std::size_t ans = reply.find("Answer:");
  const std::size_t rsn = reply.find("Reason:");
  if (ans == std::string_view::npos || rsn == std::string_view::npos || rsn < ans) {
    return std::nullopt;
  }
  ProbeVerdict v;
  v.answer = trim(reply.substr(ans + 7, rsn - (ans + 7)));
  v.reason = trim(reply.substr(rsn + 7));
  if (v.answer.empty() || v.reason.empty()) return std::nullopt;
  return v;
}

}  // namespace advaug
