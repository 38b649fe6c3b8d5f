#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "socsim/engine.hpp"
#include "socsim/policy.hpp"
#include "socsim/scenario.hpp"

namespace socsim::test {

inline std::string source_dir() { return SOCSIM_SOURCE_DIR; }

inline std::string scenario_path(const std::string& name) {
    return source_dir() + "/scenarios/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

/// Unique scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("socsim_" + tag + "_" + std::to_string(++counter) + "_" +
                std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string str(const std::string& name = "") const {
        return name.empty() ? path.string() : (path / name).string();
    }
};

/// Records every request and answers with the role's neutral default.
class ProbeProvider : public PolicyProvider {
public:
    PolicyResponse decide(const PolicyRequest& request) override {
        requests.push_back(request);
        return neutral_response(request.role, request);
    }
    std::string name() const override { return "probe"; }
    std::vector<PolicyRequest> requests;
};

/// Fails every request; used to prove a code path never consults the policy.
class FailingProvider : public PolicyProvider {
public:
    explicit FailingProvider(std::string what = "provider offline") : what_(std::move(what)) {}
    PolicyResponse decide(const PolicyRequest&) override { throw ProviderUnavailable(what_); }
    std::string name() const override { return "failing"; }

private:
    std::string what_;
};

inline ScriptedProvider::Entry scripted_entry(PolicyRole role, int t, const std::string& agent,
                                              PolicyResponse response) {
    ScriptedProvider::Entry entry;
    entry.role = role;
    entry.t = t;
    entry.agent_id = agent;
    entry.response = std::move(response);
    return entry;
}

} // namespace socsim::test
