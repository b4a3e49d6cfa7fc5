#include "polar/clients.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>

#include "polar/types.hpp"

namespace polar {

nlohmann::json ChatRequest::to_json() const {
    return nlohmann::json{
        {"model", model},
        {"messages", nlohmann::json::array({nlohmann::json{{"role", "user"},
                                                           {"content", user_content}}})},
        {"temperature", temperature},
        {"max_tokens", max_tokens},
    };
}

double RetryPolicy::delay_for_attempt(int attempt) const {
    const double cap = base_s * std::pow(factor, attempt);
    double u;
    if (jitter) {
        u = jitter();
    } else {
        thread_local std::mt19937_64 rng{std::random_device{}()};
        u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    }
    return cap * u;  // full jitter: uniform in [0, cap)
}

namespace {

void sleep_seconds(const RetryPolicy& retry, double seconds) {
    if (retry.sleeper) {
        retry.sleeper(seconds);
    } else {
        std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
}

bool retryable_status(int status) {
    return status == 429 || (status >= 500 && status < 600);
}

std::string bearer_from_env(const char* var) {
    const char* v = std::getenv(var);
    return v ? std::string(v) : std::string();
}

/// Shared request loop: POST with retries on transport errors, 429 and
/// 5xx; other statuses fail immediately.
httplib::Result post_with_retry(const std::string& base_url, const std::string& path,
                                const std::string& body, const char* token_env,
                                const RetryPolicy& retry, double timeout_s,
                                const std::string& what) {
    httplib::Client client(base_url);
    client.set_connection_timeout(std::chrono::milliseconds(static_cast<long>(timeout_s * 1000)));
    client.set_read_timeout(std::chrono::milliseconds(static_cast<long>(timeout_s * 1000)));
    const std::string token = bearer_from_env(token_env);
    httplib::Headers headers;
    if (!token.empty()) {
        headers.emplace("Authorization", "Bearer " + token);
    }

    std::string last_error;
    for (int attempt = 0; attempt <= retry.max_retries; ++attempt) {
        if (attempt > 0) {
            sleep_seconds(retry, retry.delay_for_attempt(attempt - 1));
        }
        auto res = client.Post(path, headers, body, "application/json");
        if (!res) {
            last_error = "transport error: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            return res;
        }
        if (!retryable_status(res->status)) {
            throw ServiceError(what + " returned status " + std::to_string(res->status));
        }
        last_error = "status " + std::to_string(res->status);
    }
    throw ServiceError(what + " failed after " + std::to_string(retry.max_retries + 1) +
                       " attempts (" + last_error + ")");
}

nlohmann::json parse_response(const std::string& body, const std::string& what) {
    try {
        return nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception& e) {
        throw ServiceError(what + " response parse error: " + e.what());
    }
}

}  // namespace

HttpChatClient::HttpChatClient(std::string base_url, RetryPolicy retry, double timeout_s)
    : base_url_(std::move(base_url)), retry_(std::move(retry)), timeout_s_(timeout_s) {}

std::string HttpChatClient::complete(const ChatRequest& request) {
    auto res = post_with_retry(base_url_, "/chat/completions", request.to_json().dump(),
                               "POLAR_LLM_API_KEY", retry_, timeout_s_, "chat endpoint");
    const auto j = parse_response(res->body, "chat endpoint");
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw ServiceError("chat endpoint response missing choices[0].message.content");
    }
}

HttpTranslationClient::HttpTranslationClient(std::string base_url, RetryPolicy retry,
                                             double timeout_s)
    : base_url_(std::move(base_url)), retry_(std::move(retry)), timeout_s_(timeout_s) {}

std::string HttpTranslationClient::translate(const std::string& text,
                                             const std::string& source_lang,
                                             const std::string& target_lang) {
    nlohmann::json body{{"text", text}, {"source", source_lang}, {"target", target_lang}};
    auto res = post_with_retry(base_url_, "/translate", body.dump(), "POLAR_MT_API_KEY", retry_,
                               timeout_s_, "translation endpoint");
    const auto j = parse_response(res->body, "translation endpoint");
    if (!j.contains("text")) {
        throw ServiceError("translation endpoint response missing 'text'");
    }
    return j.at("text").get<std::string>();
}

}  // namespace polar
