#pragma once

#include <condition_variable>
#include <mutex>
#include <string>
#include <utility>

#include "socsim/policy.hpp"
#include "socsim/prompts.hpp"

namespace socsim {

/// Connection settings for a chat-completions endpoint.
struct RemoteOptions {
    std::string endpoint;  // e.g. http://127.0.0.1:8080
    std::string model = "llama3-8b";
    std::string chat_path = "/v1/chat/completions";
    std::string api_key_env = "SOCSIM_API_KEY";
    double temperature = 0.1;
    int timeout_seconds = 30;
    int max_retries = 2;     // total attempts = max_retries + 1
    int backoff_base_ms = 200;
    int max_in_flight = 4;
};

/// Chat-completion backend: renders the role's prompt template, posts the
/// request, and parses the first well-formed JSON block of the completion
/// into a PolicyResponse. Transport failures retry with exponential backoff;
/// a call is bounded by timeout * (max_retries + 1).
class RemoteChatProvider : public PolicyProvider {
public:
    RemoteChatProvider(RemoteOptions options, PromptSet prompts);

    PolicyResponse decide(const PolicyRequest& request) override;
    std::string name() const override { return "remote"; }

private:
    std::string post_chat(const std::string& prompt);

    RemoteOptions options_;
    PromptSet prompts_;
    std::string host_base_;
    std::string path_prefix_;

    // runtime-sized in-flight cap
    std::mutex slots_mutex_;
    std::condition_variable slots_cv_;
    int slots_free_;
};

/// Extracts the first well-formed JSON object embedded in free text.
/// Returns {block, remainder}; the remainder is surrounding prose that
/// callers treat as reasoning trace. Throws MalformedPolicyOutput when no
/// block parses.
std::pair<nlohmann::json, std::string> extract_json_block(const std::string& text);

} // namespace socsim
