#pragma once

#include <string>
#include <string_view>

namespace trisearch::providers {

enum class PromptTask { summarize, generate };

// Zero-shot instruction template with {language} plus a payload placeholder:
// {code} for summarize, {query} for generate. Construction validates that
// the required placeholders are present and no unknown ones remain.
class PromptTemplate {
public:
    PromptTemplate(PromptTask task, std::string template_text);

    // Stock templates used when the configuration does not override them.
    static PromptTemplate summarize_default();
    static PromptTemplate generate_default();

    PromptTask task() const noexcept { return task_; }
    const std::string& text() const noexcept { return text_; }

private:
    PromptTask task_;
    std::string text_;
};

// Substitutes {language} and the task's payload placeholder exactly once.
// Braces inside the payload are preserved verbatim; inserted text is never
// rescanned for placeholders.
std::string render_prompt(const PromptTemplate& t, std::string_view language,
                          std::string_view payload);

} // namespace trisearch::providers
