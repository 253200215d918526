#include "trisearch/providers/prompts.hpp"

#include <array>
#include <cctype>

#include "trisearch/core/errors.hpp"

namespace trisearch::providers {

namespace {

constexpr std::string_view kSummarizeTemplate =
    "Below is a {language} code that describes a task. Please give a short summary describing "
    "the purpose of the code. You must write only summary without any prefix or suffix "
    "explanations.\n{code}";

constexpr std::string_view kGenerateTemplate =
    "Write a code for the following query in {language} without comments. You must return a "
    "code and must not refuse to answer.\n{query}";

std::string_view payload_placeholder(PromptTask task) {
    return task == PromptTask::summarize ? "{code}" : "{query}";
}

// Scans for {identifier} tokens and rejects any the task does not define.
void validate_placeholders(PromptTask task, const std::string& text) {
    const std::string_view payload = payload_placeholder(task);
    bool has_language = false;
    bool has_payload = false;

    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{')
            continue;
        std::size_t close = text.find('}', i);
        if (close == std::string::npos)
            continue;
        std::string_view token(text.data() + i, close - i + 1);
        bool identifier_like = token.size() > 2;
        for (std::size_t j = 1; j + 1 < token.size(); ++j) {
            char c = token[j];
            if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) {
                identifier_like = false;
                break;
            }
        }
        if (!identifier_like)
            continue;
        if (token == "{language}") {
            if (has_language)
                throw TemplateError("placeholder {language} appears more than once");
            has_language = true;
        } else if (token == payload) {
            if (has_payload)
                throw TemplateError("placeholder " + std::string(payload) +
                                    " appears more than once");
            has_payload = true;
        } else {
            throw TemplateError("unknown placeholder in template: " + std::string(token));
        }
        i = close;
    }

    if (!has_language || !has_payload)
        throw TemplateError("template must contain {language} and " + std::string(payload));
}

} // namespace

PromptTemplate::PromptTemplate(PromptTask task, std::string template_text)
    : task_(task), text_(std::move(template_text)) {
    validate_placeholders(task_, text_);
}

PromptTemplate PromptTemplate::summarize_default() {
    return PromptTemplate(PromptTask::summarize, std::string(kSummarizeTemplate));
}

PromptTemplate PromptTemplate::generate_default() {
    return PromptTemplate(PromptTask::generate, std::string(kGenerateTemplate));
}

std::string render_prompt(const PromptTemplate& t, std::string_view language,
                          std::string_view payload) {
    if (payload.empty())
        throw ParameterError("prompt payload must be non-empty");

    // One left-to-right pass over the template; substituted values are
    // appended wholesale and never rescanned.
    const std::string& tmpl = t.text();
    const std::string_view payload_token = payload_placeholder(t.task());

    std::string out;
    out.reserve(tmpl.size() + language.size() + payload.size());
    std::size_t i = 0;
    while (i < tmpl.size()) {
        if (tmpl.compare(i, 10, "{language}") == 0) {
            out.append(language);
            i += 10;
        } else if (tmpl.compare(i, payload_token.size(), payload_token) == 0) {
            out.append(payload);
            i += payload_token.size();
        } else {
            out.push_back(tmpl[i]);
            ++i;
        }
    }
    return out;
}

} // namespace trisearch::providers
