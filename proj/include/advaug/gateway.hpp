#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "advaug/prompts.hpp"
#include "advaug/types.hpp"

namespace advaug {

struct ChatRequest {
  std::string system;
  std::string user;
  double temperature = 0.0;
  double top_p = 1.0;
  std::string model = "default";
  int max_tokens = 0;  // 0 = provider default

  void validate() const;
  std::string fingerprint() const;  // stable hash over all request fields
};

// Appended for every chat call; reconstructs spend per round. Token counts
// are whitespace-token approximations.
struct CallRecord {
  std::string request_hash;
  double latency_ms = 0.0;
  std::size_t prompt_tokens = 0;
  std::size_t completion_tokens = 0;
};

// Single entry point for every LLM interaction. Implementations must be safe
// for concurrent calls; the call log serializes appends.
class Gateway {
 public:
  virtual ~Gateway() = default;

  std::string chat(const ChatRequest& request);

  std::vector<CallRecord> call_log() const;
  std::size_t call_count() const;

  // Identifies the backend + settings; used as a cache key component so
  // conversions from different gateways never alias.
  virtual std::string fingerprint() const = 0;

 protected:
  virtual std::string perform(const ChatRequest& request) = 0;

 private:
  mutable std::mutex log_mutex_;
  std::vector<CallRecord> log_;
};

// Deterministic offline stand-in for the LLM. Replies depend only on the
// request content and the constructor seed. Understands the request shapes
// produced by prompts.hpp: candidate generation, style conversion, coherency
// judging, zero-shot classification, and the two-step evasion attack.
//
// Style conversions are meaning-preserving by construction: every rule keeps
// the case-insensitive, stopword-stripped token multiset of the article
// intact, rewriting only tone markers, casing, ordering, and punctuation.
class SimulatedGateway final : public Gateway {
 public:
  explicit SimulatedGateway(std::uint64_t seed = 0);

  std::string fingerprint() const override;

  // Exposed for tests: the deterministic conversion a given instruction
  // applies to an article.
  std::string convert_article(const std::string& instruction, const std::string& article) const;

 protected:
  std::string perform(const ChatRequest& request) override;

 private:
  std::string generate_reply(const ChatRequest& request) const;
  std::string coherency_reply(const std::string& user) const;
  std::string zero_shot_reply(const std::string& user) const;
  std::string probe_reply(const std::string& user) const;
  std::string rewrite_reply(const std::string& user) const;

  std::uint64_t seed_;
};

// HTTP chat-completions client: POST {"model","messages",...} and read
// choices[0].message.content. Bounded retries with strictly increasing
// backoff; a counting semaphore caps in-flight requests.
class HttpGateway final : public Gateway {
 public:
  struct Options {
    std::string base_url;  // empty: taken from LLM_API_BASE
    std::string path = "/v1/chat/completions";
    std::string api_key;  // empty: taken from LLM_API_KEY
    int max_retries = 3;
    int backoff_base_ms = 250;
    int timeout_seconds = 60;
    int max_in_flight = 4;
  };

  explicit HttpGateway(Options opts);
  ~HttpGateway() override;

  std::string fingerprint() const override;

 protected:
  std::string perform(const ChatRequest& request) override;

 private:
  Options opts_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Record/replay wrapper keyed by request fingerprint, so integration runs
// never need live credentials twice. Fixture format: JSONL records of
// {"request_hash", "response"}.
class ReplayGateway final : public Gateway {
 public:
  // Replay from an existing fixture. Unknown requests are an error.
  explicit ReplayGateway(const std::string& fixture_path);
  // Record through `inner`, appending each response to the fixture.
  ReplayGateway(const std::string& fixture_path, std::shared_ptr<Gateway> inner);

  std::string fingerprint() const override;

 protected:
  std::string perform(const ChatRequest& request) override;

 private:
  std::string fixture_path_;
  std::shared_ptr<Gateway> inner_;  // null in replay mode
  std::map<std::string, std::string> responses_;
  std::mutex mutex_;
};

// Gateway-level operations --------------------------------------------------

struct GatewayCallError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Converts one article. Falls back to the original text (with a warning
// recorded through `warn`) if the backend returns an empty reply.
std::string apply_style(Gateway& gw, const ConversionPrompt& prompt, const std::string& article,
                        std::vector<std::string>* warnings = nullptr);

struct GenerateOptions {
  GenerationPromptOptions prompt;
  int max_retries = 3;
  std::string model = "default";
};

// Requests `count` fresh instructions, parses the numbered list, and retries
// with an exclusion list until `count` distinct instructions (also distinct
// from the trajectory) are in hand. Throws if the budget runs out, reporting
// how many were obtained.
std::vector<ConversionPrompt> generate_candidates(Gateway& gw,
                                                  const std::vector<PromptScoreRecord>& trajectory_desc,
                                                  std::size_t count, int round,
                                                  const GenerateOptions& opts = {});

// Fraction of (original, converted) pairs judged meaning-preserving, in one
// batched call.
double judge_coherency(Gateway& gw, const std::vector<std::pair<std::string, std::string>>& pairs,
                       int max_retries = 3);

Label zero_shot_classify(Gateway& gw, const std::string& article, int max_retries = 3);

}  // namespace advaug
