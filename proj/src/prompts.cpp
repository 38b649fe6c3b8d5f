#include "socsim/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace socsim {

using nlohmann::json;

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : text) {
        if (c == ',') {
            if (!current.empty()) fields.push_back(current);
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    if (!current.empty()) fields.push_back(current);
    return fields;
}

} // namespace

PromptTemplate parse_prompt_text(const std::string& text, const std::string& origin) {
    const auto newline = text.find('\n');
    const std::string header = text.substr(0, newline);
    if (header.rfind("# socsim-prompt v1 ", 0) != 0) {
        throw TemplateError("prompt '" + origin + "' missing '# socsim-prompt v1' header");
    }
    PromptTemplate tmpl;
    tmpl.body = newline == std::string::npos ? "" : text.substr(newline + 1);

    std::istringstream fields(header.substr(std::string("# socsim-prompt v1 ").size()));
    std::string field;
    bool role_seen = false;
    while (fields >> field) {
        if (field.rfind("role=", 0) == 0) {
            tmpl.role = policy_role_from_string(field.substr(5));
            role_seen = true;
        } else if (field.rfind("requires=", 0) == 0) {
            tmpl.required = split_csv(field.substr(9));
        }
    }
    if (!role_seen) {
        throw TemplateError("prompt '" + origin + "' header missing role=");
    }
    return tmpl;
}

PromptTemplate load_prompt_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw TemplateError("cannot open prompt file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_prompt_text(buffer.str(), path);
}

std::string render_prompt(const PromptTemplate& tmpl, const json& payload) {
    std::string rendered = tmpl.body;
    for (const auto& name : tmpl.required) {
        if (!payload.contains(name)) {
            throw TemplateError("payload missing required placeholder '" + name + "' for " +
                                to_string(tmpl.role) + " prompt");
        }
        const json& value = payload.at(name);
        const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
        const std::string token = "{" + name + "}";
        std::size_t pos = 0;
        while ((pos = rendered.find(token, pos)) != std::string::npos) {
            rendered.replace(pos, token.size(), text);
            pos += text.size();
        }
    }
    return rendered;
}

std::string prompt_filename(PolicyRole role) {
    return to_string(role) + ".txt";
}

PromptSet PromptSet::load_dir(const std::string& dir) {
    PromptSet set;
    for (PolicyRole role : {PolicyRole::SourceAgent, PolicyRole::CrowdAction,
                            PolicyRole::CrowdAttitude, PolicyRole::EventParser,
                            PolicyRole::RelevanceScorer, PolicyRole::FallbackTemplates,
                            PolicyRole::EngagementHint}) {
        const auto path = std::filesystem::path(dir) / prompt_filename(role);
        if (std::filesystem::exists(path)) {
            set.add(load_prompt_file(path.string()));
        }
    }
    return set;
}

void PromptSet::add(PromptTemplate tmpl) {
    templates_[tmpl.role] = std::move(tmpl);
}

const PromptTemplate& PromptSet::get(PolicyRole role) const {
    auto it = templates_.find(role);
    if (it == templates_.end()) {
        throw TemplateError("no prompt template loaded for role " + to_string(role));
    }
    return it->second;
}

} // namespace socsim
