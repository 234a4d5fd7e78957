#include "advaug/gateway.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <semaphore>
#include <sstream>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "advaug/style_lexicon.hpp"
#include "advaug/text.hpp"

namespace advaug {

using nlohmann::json;

namespace {

std::size_t whitespace_token_count(std::string_view s) {
  std::size_t count = 0;
  bool in_token = false;
  for (char c : s) {
    const bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
    if (!space && !in_token) ++count;
    in_token = !space;
  }
  return count;
}

}  // namespace

void ChatRequest::validate() const {
  if (temperature < 0.0) throw std::invalid_argument("chat request: temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw std::invalid_argument("chat request: top_p must be in (0,1]");
}

std::string ChatRequest::fingerprint() const {
  std::ostringstream key;
  key << model << '\x1e' << system << '\x1e' << user << '\x1e' << temperature << '\x1e' << top_p
      << '\x1e' << max_tokens;
  return hash_hex(fnv1a(key.str()));
}

std::string Gateway::chat(const ChatRequest& request) {
  request.validate();
  const auto start = std::chrono::steady_clock::now();
  std::string reply = perform(request);
  const auto elapsed = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start);

  CallRecord record;
  record.request_hash = request.fingerprint();
  record.latency_ms = elapsed.count();
  record.prompt_tokens = whitespace_token_count(request.system) + whitespace_token_count(request.user);
  record.completion_tokens = whitespace_token_count(reply);
  {
    std::lock_guard lock(log_mutex_);
    log_.push_back(std::move(record));
  }
  return reply;
}

std::vector<CallRecord> Gateway::call_log() const {
  std::lock_guard lock(log_mutex_);
  return log_;
}

std::size_t Gateway::call_count() const {
  std::lock_guard lock(log_mutex_);
  return log_.size();
}

// ---------------------------------------------------------------------------
// SimulatedGateway

namespace {

constexpr std::string_view kGenerationMarker = "Now you will help me minimize";
constexpr std::string_view kCoherencyMarker = "You will compare pairs of news texts";
constexpr std::string_view kZeroShotMarker = "Does the following contain real or fake news?";
constexpr std::string_view kExamplesMarker = "<EXAMPLES>: ";
constexpr std::string_view kProbeMarker = "Determine whether the given <EXAMPLES> content";
constexpr std::string_view kInContextMarker =
    "\nRewrite the following article as the writing style of <EXAMPLES> : ";
constexpr std::string_view kRewriteMarker = "Your current article is: ";

enum class ToneTarget { kKeep, kSober, kTabloid, kStrip };

enum class SurfaceTransform {
  kNone,
  kUppercase,
  kLowercase,
  kTitlecase,
  kReverseSentences,
  kShuffleWords,
  kBoilerplate,
  kExclaim,
};

const std::vector<std::pair<std::string, bool>>& instruction_adjectives() {
  // adjective -> true when it signals a tabloid register
  static const std::vector<std::pair<std::string, bool>> kAdjectives = {
      {"objective", false},   {"professional", false}, {"formal", false},
      {"clinical", false},    {"neutral", false},      {"detached", false},
      {"analytical", false},  {"restrained", false},   {"solemn", false},
      {"scholarly", false},   {"sarcastic", true},     {"mocking", true},
      {"chaotic", true},      {"disorganized", true},  {"sensational", true},
      {"dramatic", true},     {"breathless", true},    {"lurid", true},
      {"cryptic", true},      {"enigmatic", true},     {"apocalyptic", true},
      {"whimsical", true},    {"haunting", true},      {"nonsensical", true},
      {"exaggerated", true},  {"hysterical", true},    {"emotionally", true},
      {"triggering", true},
  };
  return kAdjectives;
}

std::optional<bool> adjective_is_tabloid(const std::string& token) {
  for (const auto& [adj, tabloid] : instruction_adjectives()) {
    if (adj == token) return tabloid;
  }
  return std::nullopt;
}

ToneTarget tone_target_for_instruction(const std::string& instruction, std::uint64_t seed) {
  int sober = 0;
  int tabloid = 0;
  for (const auto& tok : tokenize(instruction)) {
    if (auto t = adjective_is_tabloid(tok)) {
      (*t ? tabloid : sober) += 1;
    }
    if (tok == "cnn" || tok == "york" || tok == "times") ++sober;
    if (tok == "sun" || tok == "enquirer") ++tabloid;
    if (tok == "summarize") return ToneTarget::kStrip;
    if (tok == "unchanged" || tok == "verbatim") return ToneTarget::kKeep;
  }
  if (sober > tabloid) return ToneTarget::kSober;
  if (tabloid > sober) return ToneTarget::kTabloid;
  switch (fnv1a(instruction, seed ^ fnv1a("tone")) % 3) {
    case 0: return ToneTarget::kStrip;
    case 1: return ToneTarget::kSober;
    default: return ToneTarget::kTabloid;
  }
}

bool is_plain_instruction(const std::string& instruction) {
  for (const auto& p : predefined_tone_prompts()) {
    if (p.instruction == instruction) return true;
  }
  return instruction.rfind("Rewrite the following article using the style of", 0) == 0 ||
         instruction.rfind("Summarize the following article", 0) == 0 ||
         instruction.rfind("Repeat the following article", 0) == 0;
}

SurfaceTransform surface_for_instruction(const std::string& instruction, std::uint64_t seed) {
  if (is_plain_instruction(instruction)) return SurfaceTransform::kNone;
  switch (fnv1a(instruction, seed ^ fnv1a("surface")) % 7) {
    case 0: return SurfaceTransform::kUppercase;
    case 1: return SurfaceTransform::kLowercase;
    case 2: return SurfaceTransform::kTitlecase;
    case 3: return SurfaceTransform::kReverseSentences;
    case 4: return SurfaceTransform::kShuffleWords;
    case 5: return SurfaceTransform::kBoilerplate;
    default: return SurfaceTransform::kExclaim;
  }
}

// Replace tone-marker words in place, keeping surrounding punctuation and
// leading capitalization.
std::string restyle(const std::string& article, ToneTarget target, std::uint64_t stream_seed) {
  if (target == ToneTarget::kKeep) return article;
  const std::vector<std::string>* replacements = nullptr;
  switch (target) {
    case ToneTarget::kSober: replacements = &sober_style_lexicon(); break;
    case ToneTarget::kTabloid: replacements = &tabloid_style_lexicon(); break;
    default: replacements = &filler_lexicon(); break;
  }

  std::ostringstream out;
  std::istringstream in(article);
  std::string word;
  std::size_t replaced = 0;
  bool first = true;
  while (in >> word) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && std::ispunct(static_cast<unsigned char>(word[b]))) ++b;
    while (e > b && std::ispunct(static_cast<unsigned char>(word[e - 1]))) --e;
    const std::string core = to_lower(std::string_view(word).substr(b, e - b));
    if (!first) out << ' ';
    first = false;
    if (!core.empty() && is_style_token(core)) {
      std::string repl = (*replacements)[(stream_seed + replaced) % replacements->size()];
      ++replaced;
      if (std::isupper(static_cast<unsigned char>(word[b]))) {
        repl[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(repl[0])));
      }
      out << word.substr(0, b) << repl << word.substr(e);
    } else {
      out << word;
    }
  }
  return out.str();
}

std::vector<std::string> split_sentences(const std::string& text) {
  std::vector<std::string> sentences;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t cut = text.find(". ", pos);
    if (cut == std::string::npos) {
      sentences.push_back(text.substr(pos));
      break;
    }
    sentences.push_back(text.substr(pos, cut - pos + 1));
    pos = cut + 2;
  }
  if (sentences.empty()) sentences.push_back(text);
  return sentences;
}

std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out += ' ';
    out += sentences[i];
  }
  return out;
}

std::string apply_surface(const std::string& text, SurfaceTransform transform, std::uint64_t seed) {
  switch (transform) {
    case SurfaceTransform::kNone:
      return text;
    case SurfaceTransform::kUppercase: {
      std::string out = text;
      std::transform(out.begin(), out.end(), out.begin(),
                     [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
      return out;
    }
    case SurfaceTransform::kLowercase:
      return to_lower(text);
    case SurfaceTransform::kTitlecase: {
      std::string out = to_lower(text);
      bool start = true;
      for (char& c : out) {
        if (std::isspace(static_cast<unsigned char>(c))) {
          start = true;
        } else {
          if (start && std::isalpha(static_cast<unsigned char>(c))) {
            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
          }
          start = false;
        }
      }
      return out;
    }
    case SurfaceTransform::kReverseSentences: {
      auto sentences = split_sentences(text);
      std::reverse(sentences.begin(), sentences.end());
      return join_sentences(sentences);
    }
    case SurfaceTransform::kShuffleWords: {
      auto sentences = split_sentences(text);
      for (std::size_t s = 0; s < sentences.size(); ++s) {
        std::istringstream in(sentences[s]);
        std::vector<std::string> words;
        std::string w;
        while (in >> w) words.push_back(w);
        Rng rng(derive_seed(seed, "word-shuffle", s));
        rng.shuffle(words);
        std::string joined;
        for (std::size_t i = 0; i < words.size(); ++i) {
          if (i > 0) joined += ' ';
          joined += words[i];
        }
        sentences[s] = joined;
      }
      return join_sentences(sentences);
    }
    case SurfaceTransform::kBoilerplate:
      // every boilerplate word is a stopword, so the content core is intact
      return "Breaking update , folks : " + text + " That is all for now .";
    case SurfaceTransform::kExclaim: {
      std::string out;
      out.reserve(text.size());
      for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '.' && (i + 1 == text.size() || text[i + 1] == ' ')) {
          out += '!';
          out += '!';
        } else if (text[i] == ',' && i + 1 < text.size() && text[i + 1] == ' ') {
          // dropped
        } else {
          out += text[i];
        }
      }
      return out;
    }
  }
  return text;
}

int tabloid_minus_sober(const std::string& text) {
  int balance = 0;
  for (const auto& tok : tokenize(text)) {
    if (is_tabloid_style_token(tok)) ++balance;
    if (is_sober_style_token(tok)) --balance;
  }
  return balance;
}

double token_set_jaccard(const std::unordered_set<std::string>& a,
                         const std::unordered_set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t overlap = 0;
  for (const auto& t : a) overlap += b.count(t);
  const std::size_t uni = a.size() + b.size() - overlap;
  return uni == 0 ? 1.0 : static_cast<double>(overlap) / static_cast<double>(uni);
}

}  // namespace

SimulatedGateway::SimulatedGateway(std::uint64_t seed) : seed_(seed) {}

std::string SimulatedGateway::fingerprint() const {
  return "simulated:v1:seed=" + std::to_string(seed_);
}

std::string SimulatedGateway::convert_article(const std::string& instruction,
                                              const std::string& article) const {
  // replacement stream varies per (instruction, article) so conversions of a
  // whole set do not collapse onto one token sequence
  const std::uint64_t stream = fnv1a(instruction, seed_) ^ fnv1a(article);
  const ToneTarget target = tone_target_for_instruction(instruction, seed_);
  const SurfaceTransform surface = surface_for_instruction(instruction, seed_);
  return apply_surface(restyle(article, target, stream), surface, stream);
}

std::string SimulatedGateway::perform(const ChatRequest& request) {
  const std::string& user = request.user;
  if (user.rfind(kGenerationMarker, 0) == 0) return generate_reply(request);
  if (user.rfind(kCoherencyMarker, 0) == 0) return coherency_reply(user);
  if (user.rfind(kZeroShotMarker, 0) == 0) return zero_shot_reply(user);
  if (user.rfind(kRewriteMarker, 0) == 0) return rewrite_reply(user);
  if (user.rfind(kExamplesMarker, 0) == 0) {
    if (user.find(kProbeMarker) != std::string::npos) return probe_reply(user);
    const std::size_t split = user.find(kInContextMarker);
    if (split != std::string::npos) {
      const std::string example = user.substr(kExamplesMarker.size(), split - kExamplesMarker.size());
      const std::string article = user.substr(split + kInContextMarker.size());
      const ToneTarget target =
          tabloid_minus_sober(example) > 0 ? ToneTarget::kTabloid : ToneTarget::kSober;
      return restyle(article, target, fnv1a(example, seed_) ^ fnv1a(article));
    }
  }
  // style conversion: "<instruction>: <article>"
  const std::size_t cut = user.find(": ");
  if (cut == std::string::npos) {
    return user;  // shapeless request: echo
  }
  return convert_article(user.substr(0, cut), user.substr(cut + 2));
}

std::string SimulatedGateway::generate_reply(const ChatRequest& request) const {
  const std::string& user = request.user;
  std::size_t count = 1;
  if (const std::size_t give = user.find("Give me "); give != std::string::npos) {
    if (auto parsed = parse_leading_count(std::string_view(user).substr(give))) {
      count = static_cast<std::size_t>(std::max(1l, *parsed));
    }
  }

  // Trajectory lines steer adjective weights: adjectives seen in low-score
  // (most confusing) instructions get upweighted.
  std::vector<std::pair<std::string, std::string>> pairs;  // instruction, score text
  {
    std::istringstream in(user);
    std::string line;
    std::string pending;
    while (std::getline(in, line)) {
      if (line.rfind("Input: ", 0) == 0) {
        pending = line.substr(7);
      } else if (line.rfind("Score: ", 0) == 0 && !pending.empty()) {
        pairs.emplace_back(pending, line.substr(7));
        pending.clear();
      }
    }
  }
  std::vector<double> numeric_scores;
  for (const auto& [_, score_text] : pairs) {
    try {
      numeric_scores.push_back(std::stod(score_text));
    } catch (...) {
      numeric_scores.push_back(score_text.rfind("high", 0) == 0 ? 0.0 : 0.5);
    }
  }
  double median = 0.5;
  if (!numeric_scores.empty()) {
    auto sorted = numeric_scores;
    std::sort(sorted.begin(), sorted.end());
    median = sorted[sorted.size() / 2];
  }

  const auto& adjectives = instruction_adjectives();
  std::vector<double> weights(adjectives.size(), 1.0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (numeric_scores[p] > median) continue;
    for (const auto& tok : tokenize(pairs[p].first)) {
      for (std::size_t a = 0; a < adjectives.size(); ++a) {
        if (adjectives[a].first == tok) weights[a] += 3.0;
      }
    }
  }

  Rng rng(derive_seed(seed_, "generate", fnv1a(user)));
  std::vector<std::string> produced;
  std::unordered_set<std::string> emitted;
  const std::size_t max_attempts = 64 * count + 512;
  for (std::size_t attempt = 0; attempt < max_attempts && produced.size() < count; ++attempt) {
    const std::size_t a = rng.weighted_pick(weights);
    std::size_t b = rng.weighted_pick(weights);
    if (b == a) b = (b + 1) % adjectives.size();
    const std::string& first = adjectives[a].first;
    const std::string& second = adjectives[b].first;
    const bool vowel = std::string("aeiou").find(first[0]) != std::string::npos;
    std::string instruction = std::string("Rewrite the following article in ") +
                              (vowel ? "an " : "a ") + first + " and " + second + " tone";
    if (emitted.count(instruction) || user.find(instruction) != std::string::npos) continue;
    emitted.insert(instruction);
    produced.push_back(std::move(instruction));
  }

  std::ostringstream out;
  for (std::size_t i = 0; i < produced.size(); ++i) {
    out << (i + 1) << ". " << produced[i] << "\n";
  }
  return out.str();
}

std::string SimulatedGateway::coherency_reply(const std::string& user) const {
  std::istringstream in(user);
  std::string line;
  std::string text_a;
  std::size_t total = 0;
  std::size_t same = 0;
  while (std::getline(in, line)) {
    if (line.rfind("Text A: ", 0) == 0) {
      text_a = line.substr(8);
    } else if (line.rfind("Text B: ", 0) == 0) {
      ++total;
      if (token_set_jaccard(content_token_set(text_a), content_token_set(line.substr(8))) >= 0.6) {
        ++same;
      }
    }
  }
  return std::to_string(same);
}

std::string SimulatedGateway::zero_shot_reply(const std::string& user) const {
  const std::string article = user.substr(kZeroShotMarker.size());
  return tabloid_minus_sober(article) > 0 ? "Fake" : "Real";
}

std::string SimulatedGateway::probe_reply(const std::string& user) const {
  const std::size_t begin = kExamplesMarker.size();
  const std::size_t end = user.find(kProbeMarker);
  const std::string article = user.substr(begin, end - begin);
  if (tabloid_minus_sober(article) > 0) {
    return "Answer: Fake\nReason: The tone relies on sensational exaggerated wording.";
  }
  return "Answer: Fact\nReason: The tone follows measured institutional wording.";
}

std::string SimulatedGateway::rewrite_reply(const std::string& user) const {
  constexpr std::string_view kDetectedMarker = "\nBut this article is detected as ";
  const std::size_t art_end = user.find(kDetectedMarker);
  if (art_end == std::string::npos) return user;
  const std::string article = user.substr(kRewriteMarker.size(), art_end - kRewriteMarker.size());

  constexpr std::string_view kLabelMarker = "not to be detected as ";
  ToneTarget target = ToneTarget::kSober;
  if (const std::size_t lab = user.find(kLabelMarker); lab != std::string::npos) {
    const std::string rest = to_lower(std::string_view(user).substr(lab + kLabelMarker.size(), 8));
    target = rest.rfind("fake", 0) == 0 ? ToneTarget::kSober : ToneTarget::kTabloid;
  }
  return restyle(article, target, fnv1a(article, seed_));
}

// ---------------------------------------------------------------------------
// HttpGateway

struct HttpGateway::Impl {
  explicit Impl(int max_in_flight) : semaphore(max_in_flight) {}
  std::counting_semaphore<> semaphore;
};

HttpGateway::HttpGateway(Options opts) : opts_(std::move(opts)) {
  if (opts_.base_url.empty()) {
    if (const char* base = std::getenv("LLM_API_BASE")) opts_.base_url = base;
  }
  if (opts_.base_url.empty()) {
    throw std::invalid_argument("http gateway: base url required (option or LLM_API_BASE)");
  }
  if (opts_.api_key.empty()) {
    if (const char* key = std::getenv("LLM_API_KEY")) opts_.api_key = key;
  }
  if (opts_.max_in_flight < 1) throw std::invalid_argument("http gateway: max_in_flight must be >= 1");
  impl_ = std::make_unique<Impl>(opts_.max_in_flight);
}

HttpGateway::~HttpGateway() = default;

std::string HttpGateway::fingerprint() const { return "http:v1:" + opts_.base_url + opts_.path; }

std::string HttpGateway::perform(const ChatRequest& request) {
  json body;
  body["model"] = request.model;
  body["messages"] = json::array();
  if (!request.system.empty()) {
    body["messages"].push_back({{"role", "system"}, {"content", request.system}});
  }
  body["messages"].push_back({{"role", "user"}, {"content", request.user}});
  body["temperature"] = request.temperature;
  body["top_p"] = request.top_p;
  if (request.max_tokens > 0) body["max_tokens"] = request.max_tokens;
  const std::string payload = body.dump();

  impl_->semaphore.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{impl_->semaphore};

  std::string last_error;
  for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(
          std::chrono::milliseconds(static_cast<long>(opts_.backoff_base_ms) << (attempt - 1)));
    }
    httplib::Client client(opts_.base_url);
    client.set_read_timeout(opts_.timeout_seconds, 0);
    client.set_connection_timeout(opts_.timeout_seconds, 0);
    httplib::Headers headers;
    if (!opts_.api_key.empty()) headers.emplace("Authorization", "Bearer " + opts_.api_key);
    auto res = client.Post(opts_.path, headers, payload, "application/json");
    if (!res) {
      last_error = "transport failure: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 429 || res->status >= 500) {
      last_error = "server status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw GatewayCallError("chat request rejected with status " + std::to_string(res->status) +
                             ": " + res->body);
    }
    try {
      const json parsed = json::parse(res->body);
      return parsed.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
      throw GatewayCallError(std::string("malformed chat response: ") + e.what());
    }
  }
  throw GatewayCallError("chat request failed after " + std::to_string(opts_.max_retries + 1) +
                         " attempts: " + last_error);
}

// ---------------------------------------------------------------------------
// ReplayGateway

namespace {

std::map<std::string, std::string> load_fixture(const std::string& path, bool required) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  if (!in) {
    if (required) throw std::runtime_error("cannot open fixture: " + path);
    return out;
  }
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json rec;
    try {
      rec = json::parse(line);
    } catch (const json::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed fixture: " + e.what());
    }
    out[rec.at("request_hash").get<std::string>()] = rec.at("response").get<std::string>();
  }
  return out;
}

}  // namespace

ReplayGateway::ReplayGateway(const std::string& fixture_path)
    : fixture_path_(fixture_path), responses_(load_fixture(fixture_path, true)) {}

ReplayGateway::ReplayGateway(const std::string& fixture_path, std::shared_ptr<Gateway> inner)
    : fixture_path_(fixture_path), inner_(std::move(inner)), responses_(load_fixture(fixture_path, false)) {}

std::string ReplayGateway::fingerprint() const { return "replay:v1:" + fixture_path_; }

std::string ReplayGateway::perform(const ChatRequest& request) {
  const std::string key = request.fingerprint();
  {
    std::lock_guard lock(mutex_);
    if (auto it = responses_.find(key); it != responses_.end()) return it->second;
  }
  if (!inner_) {
    throw GatewayCallError("replay fixture has no recorded response for request " + key);
  }
  const std::string reply = inner_->chat(request);
  std::lock_guard lock(mutex_);
  responses_[key] = reply;
  std::ofstream out(fixture_path_, std::ios::app);
  if (!out) throw std::runtime_error("cannot append to fixture: " + fixture_path_);
  out << json{{"request_hash", key}, {"response", reply}}.dump() << '\n';
  return reply;
}

// ---------------------------------------------------------------------------
// Operations

std::string apply_style(Gateway& gw, const ConversionPrompt& prompt, const std::string& article,
                        std::vector<std::string>* warnings) {
  if (trim(article).empty()) {
    throw std::invalid_argument("apply_style: empty article");
  }
  ChatRequest req;
  req.user = render_style_request(prompt, article);
  std::string reply;
  try {
    reply = gw.chat(req);
  } catch (const GatewayCallError& e) {
    throw GatewayCallError("apply_style failed for instruction '" + prompt.instruction +
                           "': " + e.what());
  }
  if (trim(reply).empty()) {
    if (warnings != nullptr) {
      warnings->push_back("apply_style: empty reply for instruction '" + prompt.instruction +
                          "', kept original text");
    }
    return article;
  }
  return reply;
}

std::vector<ConversionPrompt> generate_candidates(Gateway& gw,
                                                  const std::vector<PromptScoreRecord>& trajectory_desc,
                                                  std::size_t count, int round,
                                                  const GenerateOptions& opts) {
  if (count < 1) throw std::invalid_argument("generate_candidates: count must be >= 1");
  std::unordered_set<std::string> known;
  for (const auto& rec : trajectory_desc) known.insert(rec.prompt.instruction);

  std::vector<ConversionPrompt> obtained;
  std::vector<std::string> exclude;
  for (int attempt = 0; attempt <= opts.max_retries && obtained.size() < count; ++attempt) {
    ChatRequest req;
    req.model = opts.model;
    req.user = render_generation_prompt(trajectory_desc, count, opts.prompt, exclude);
    const std::string reply = gw.chat(req);
    for (auto& item : parse_numbered_list(reply)) {
      if (obtained.size() >= count) break;
      if (known.count(item)) {
        // already in the trajectory or seen this round: put it on the
        // exclusion list so the next request cannot repeat it
        if (std::find(exclude.begin(), exclude.end(), item) == exclude.end()) {
          exclude.push_back(item);
        }
        continue;
      }
      known.insert(item);
      exclude.push_back(item);
      ConversionPrompt p;
      p.instruction = std::move(item);
      p.origin = ConversionPrompt::Origin::kGenerated;
      p.round = round;
      obtained.push_back(std::move(p));
    }
  }
  if (obtained.size() < count) {
    throw GatewayCallError("generate_candidates: obtained " + std::to_string(obtained.size()) +
                           " of " + std::to_string(count) + " distinct instructions after " +
                           std::to_string(opts.max_retries) + " retries");
  }
  return obtained;
}

double judge_coherency(Gateway& gw, const std::vector<std::pair<std::string, std::string>>& pairs,
                       int max_retries) {
  if (pairs.empty()) throw std::invalid_argument("judge_coherency: need at least one pair");
  ChatRequest req;
  req.user = render_coherency_request(pairs);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    const std::string reply = gw.chat(req);
    if (auto count = parse_leading_count(reply)) {
      if (*count >= 0 && static_cast<std::size_t>(*count) <= pairs.size()) {
        return static_cast<double>(*count) / static_cast<double>(pairs.size());
      }
    }
  }
  throw GatewayCallError("judge_coherency: unparseable judgment after " +
                         std::to_string(max_retries) + " retries");
}

Label zero_shot_classify(Gateway& gw, const std::string& article, int max_retries) {
  if (trim(article).empty()) {
    throw std::invalid_argument("zero_shot_classify: empty article");
  }
  ChatRequest req;
  req.user = render_zero_shot_request(article);
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    if (auto label = parse_real_fake(gw.chat(req))) return *label;
  }
  throw GatewayCallError("zero_shot_classify: reply was neither Real nor Fake after " +
                         std::to_string(max_retries) + " retries");
}

}  // namespace advaug
