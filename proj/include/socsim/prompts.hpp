#pragma once

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <vector>

#include "socsim/policy.hpp"

namespace socsim {

/// One prompt template loaded from a versioned text file. The header line
/// declares the placeholders the payload must supply:
///   # socsim-prompt v1 role=<role> requires=a,b,c
struct PromptTemplate {
    PolicyRole role = PolicyRole::CrowdAction;
    int version = 1;
    std::vector<std::string> required;
    std::string body;
};

PromptTemplate parse_prompt_text(const std::string& text, const std::string& origin);
PromptTemplate load_prompt_file(const std::string& path);

/// Substitutes every required {name} token with the payload value (strings
/// verbatim, other JSON values dumped). Missing payload keys raise
/// TemplateError — the request must carry every placeholder its prompt needs.
std::string render_prompt(const PromptTemplate& tmpl, const nlohmann::json& payload);

/// The per-role template set shipped under prompts/.
class PromptSet {
public:
    static PromptSet load_dir(const std::string& dir);

    void add(PromptTemplate tmpl);
    const PromptTemplate& get(PolicyRole role) const;
    bool has(PolicyRole role) const { return templates_.count(role) > 0; }

private:
    std::map<PolicyRole, PromptTemplate> templates_;
};

/// Filename used for a role's template inside a prompt directory.
std::string prompt_filename(PolicyRole role);

} // namespace socsim
