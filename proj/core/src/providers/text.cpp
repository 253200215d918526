#include "trisearch/providers/text.hpp"

#include <cctype>

#include "trisearch/core/errors.hpp"

namespace trisearch::providers {

namespace {

bool is_space(char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0;
}

} // namespace

std::string_view length_unit_name(LengthUnit u) {
    return u == LengthUnit::words ? "words" : "chars";
}

LengthUnit length_unit_from_name(std::string_view name) {
    if (name == "words")
        return LengthUnit::words;
    if (name == "chars")
        return LengthUnit::chars;
    throw ParameterError("unknown length unit: " + std::string(name));
}

std::size_t count_units(std::string_view text, LengthUnit unit) {
    if (unit == LengthUnit::chars)
        return text.size();
    std::size_t words = 0;
    bool in_word = false;
    for (char c : text) {
        if (is_space(c)) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++words;
        }
    }
    return words;
}

TruncationResult truncate_text(std::string_view text, std::size_t max_units, LengthUnit unit) {
    if (unit == LengthUnit::chars) {
        if (text.size() <= max_units)
            return {std::string(text), false};
        return {std::string(text.substr(0, max_units)), true};
    }

    // Word units: find the end of the max_units-th word and cut there,
    // keeping the original separators before it.
    std::size_t words = 0;
    bool in_word = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (is_space(text[i])) {
            in_word = false;
        } else if (!in_word) {
            in_word = true;
            ++words;
            if (words > max_units)
                return {std::string(text.substr(0, i)), true};
        }
    }
    return {std::string(text), false};
}

std::string trim(std::string_view s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && is_space(s[begin]))
        ++begin;
    while (end > begin && is_space(s[end - 1]))
        --end;
    return std::string(s.substr(begin, end - begin));
}

std::string strip_code_fences(std::string_view response) {
    std::string text = trim(response);

    constexpr std::string_view fence = "```";
    if (text.size() >= fence.size() && text.compare(0, fence.size(), fence) == 0) {
        // Drop the opening fence line, including any language tag on it.
        std::size_t eol = text.find('\n');
        if (eol == std::string::npos) {
            // A lone fence line (possibly "```lang") carries no payload.
            return "";
        }
        text.erase(0, eol + 1);
    }

    // Drop a closing fence sitting on its own final line.
    std::size_t tail = text.find_last_not_of(" \t\r\n");
    std::string trimmed_tail = trim(text);
    if (trimmed_tail.size() >= fence.size() &&
        trimmed_tail.compare(trimmed_tail.size() - fence.size(), fence.size(), fence) == 0) {
        std::size_t fence_pos = text.rfind(fence, tail == std::string::npos ? 0 : tail);
        if (fence_pos != std::string::npos) {
            std::size_t line_start = text.rfind('\n', fence_pos);
            bool own_line = true;
            std::size_t check_begin = (line_start == std::string::npos) ? 0 : line_start + 1;
            for (std::size_t i = check_begin; i < fence_pos; ++i) {
                if (!is_space(text[i])) {
                    own_line = false;
                    break;
                }
            }
            if (own_line)
                text.erase(check_begin == 0 ? 0 : line_start);
        }
    }

    return trim(text);
}

} // namespace trisearch::providers
