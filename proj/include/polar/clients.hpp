#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

namespace polar {

struct ChatRequest {
    std::string model;
    std::string user_content;  // sent as a single user message
    double temperature = 1.0;
    int max_tokens = 256;

    nlohmann::json to_json() const;
};

class ChatClient {
public:
    virtual ~ChatClient() = default;

    /// Returns choices[0].message.content. Throws ServiceError after
    /// retries are exhausted.
    virtual std::string complete(const ChatRequest& request) = 0;
};

class TranslationClient {
public:
    virtual ~TranslationClient() = default;

    virtual std::string translate(const std::string& text, const std::string& source_lang,
                                  const std::string& target_lang) = 0;
};

/// Exponential backoff with full jitter on transport errors, 429 and 5xx.
/// The sleeper and jitter hooks exist so tests can observe the schedule
/// instead of waiting it out.
struct RetryPolicy {
    int max_retries = 3;
    double base_s = 1.0;
    double factor = 2.0;
    std::function<void(double seconds)> sleeper;  // default: std::this_thread::sleep_for
    std::function<double()> jitter;               // uniform [0,1); default: random

    double delay_for_attempt(int attempt) const;  // jittered, attempt is 0-based
};

/// POST {base_url}/chat/completions with
///   {"model", "messages": [{"role": "user", "content"}], "temperature", "max_tokens"}
/// Bearer token read from POLAR_LLM_API_KEY when set.
class HttpChatClient : public ChatClient {
public:
    HttpChatClient(std::string base_url, RetryPolicy retry = {}, double timeout_s = 30.0);

    std::string complete(const ChatRequest& request) override;

private:
    std::string base_url_;
    RetryPolicy retry_;
    double timeout_s_;
};

/// POST {base_url}/translate {"text", "source", "target"} -> {"text"}.
/// Bearer token from POLAR_MT_API_KEY when set.
class HttpTranslationClient : public TranslationClient {
public:
    HttpTranslationClient(std::string base_url, RetryPolicy retry = {}, double timeout_s = 30.0);

    std::string translate(const std::string& text, const std::string& source_lang,
                          const std::string& target_lang) override;

private:
    std::string base_url_;
    RetryPolicy retry_;
    double timeout_s_;
};

}  // namespace polar
