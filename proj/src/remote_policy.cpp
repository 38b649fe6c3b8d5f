#include "socsim/remote_policy.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <thread>

namespace socsim {

using nlohmann::json;

std::pair<json, std::string> extract_json_block(const std::string& text) {
    for (std::size_t start = text.find('{'); start != std::string::npos;
         start = text.find('{', start + 1)) {
        int depth = 0;
        bool in_string = false;
        bool escaped = false;
        for (std::size_t i = start; i < text.size(); ++i) {
            const char c = text[i];
            if (escaped) {
                escaped = false;
                continue;
            }
            if (c == '\\') {
                escaped = in_string;
                continue;
            }
            if (c == '"') {
                in_string = !in_string;
                continue;
            }
            if (in_string) continue;
            if (c == '{') ++depth;
            if (c == '}') {
                --depth;
                if (depth == 0) {
                    const std::string candidate = text.substr(start, i - start + 1);
                    json block = json::parse(candidate, nullptr, false);
                    if (!block.is_discarded() && block.is_object()) {
                        std::string remainder = text.substr(0, start) + text.substr(i + 1);
                        return {std::move(block), std::move(remainder)};
                    }
                    break;  // try the next opening brace
                }
            }
        }
    }
    throw MalformedPolicyOutput("no well-formed JSON block in completion", text);
}

RemoteChatProvider::RemoteChatProvider(RemoteOptions options, PromptSet prompts)
    : options_(std::move(options)), prompts_(std::move(prompts)),
      slots_free_(options_.max_in_flight > 0 ? options_.max_in_flight : 1) {
    // split "http://host:port/prefix" into client base and path prefix
    const auto scheme = options_.endpoint.find("://");
    const std::size_t host_start = scheme == std::string::npos ? 0 : scheme + 3;
    const auto slash = options_.endpoint.find('/', host_start);
    if (slash == std::string::npos) {
        host_base_ = options_.endpoint;
    } else {
        host_base_ = options_.endpoint.substr(0, slash);
        path_prefix_ = options_.endpoint.substr(slash);
        if (path_prefix_ == "/") path_prefix_.clear();
    }
}

std::string RemoteChatProvider::post_chat(const std::string& prompt) {
    json body{
        {"messages", json::array({json{{"content", prompt}, {"role", "system"}}})},
        {"model", options_.model},
        {"temperature", options_.temperature},
    };
    const std::string payload = body.dump();
    const std::string path = path_prefix_ + options_.chat_path;

    httplib::Headers headers;
    if (const char* key = std::getenv(options_.api_key_env.c_str()); key && *key) {
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt <= options_.max_retries; ++attempt) {
        if (attempt > 0) {
            const auto delay = std::chrono::milliseconds(options_.backoff_base_ms)
                               * (1 << (attempt - 1));
            std::this_thread::sleep_for(delay);
        }
        httplib::Client client(host_base_);
        client.set_connection_timeout(options_.timeout_seconds, 0);
        client.set_read_timeout(options_.timeout_seconds, 0);
        client.set_write_timeout(options_.timeout_seconds, 0);

        auto result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            last_error = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status == 429 || result->status == 408 || result->status >= 500) {
            last_error = "HTTP " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200) {
            throw ProviderUnavailable("endpoint rejected request with HTTP " +
                                      std::to_string(result->status) + ": " + result->body);
        }
        return result->body;
    }
    throw ProviderUnavailable("endpoint " + options_.endpoint + " unreachable after " +
                              std::to_string(options_.max_retries + 1) + " attempts (" +
                              last_error + ")");
}

PolicyResponse RemoteChatProvider::decide(const PolicyRequest& request) {
    const std::string prompt = render_prompt(prompts_.get(request.role), request.context);

    {
        std::unique_lock lock(slots_mutex_);
        slots_cv_.wait(lock, [this] { return slots_free_ > 0; });
        --slots_free_;
    }
    std::string body;
    try {
        body = post_chat(prompt);
    } catch (...) {
        std::lock_guard lock(slots_mutex_);
        ++slots_free_;
        slots_cv_.notify_one();
        throw;
    }
    {
        std::lock_guard lock(slots_mutex_);
        ++slots_free_;
        slots_cv_.notify_one();
    }

    json envelope = json::parse(body, nullptr, false);
    if (envelope.is_discarded()) {
        throw MalformedPolicyOutput("completion response is not JSON", body);
    }
    std::string content;
    try {
        content = envelope.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw MalformedPolicyOutput("completion response missing choices[0].message.content",
                                    body);
    }

    auto [block, remainder] = extract_json_block(content);
    PolicyResponse response;
    try {
        response = PolicyResponse::from_json(block);
    } catch (const json::exception& ex) {
        throw MalformedPolicyOutput(std::string("unparseable policy fields: ") + ex.what(),
                                    content);
    } catch (const SchemaError& ex) {
        throw MalformedPolicyOutput(std::string("invalid policy fields: ") + ex.what(), content);
    }
    if (response.intervention == InterventionKind::Inactive) response.valence = 0.0;
    try {
        response.validate(request.role);
    } catch (const SchemaError& ex) {
        throw MalformedPolicyOutput(std::string("policy response out of range: ") + ex.what(),
                                    content);
    }
    if (response.reasoning_trace.empty()) {
        // surrounding prose counts as trace, never as control flow
        const auto begin = remainder.find_first_not_of(" \t\r\n");
        if (begin != std::string::npos) {
            const auto end = remainder.find_last_not_of(" \t\r\n");
            response.reasoning_trace = remainder.substr(begin, end - begin + 1);
        }
    }
    return response;
}

} // namespace socsim
