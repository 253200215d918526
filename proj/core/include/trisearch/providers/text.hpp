#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace trisearch::providers {

// Input/output length limits are enforced in whitespace-delimited words by
// default. Word counting is a provider-agnostic, monotone approximation of
// model tokenization; character units are available where a byte budget is
// the better fit.
enum class LengthUnit { words, chars };

std::string_view length_unit_name(LengthUnit u);
LengthUnit length_unit_from_name(std::string_view name);

struct TruncationResult {
    std::string text;
    bool truncated = false;
};

// Cuts `text` after the max_units-th unit. For word units the original
// spacing up to the cut point is preserved, so truncation is idempotent and
// code keeps its layout.
TruncationResult truncate_text(std::string_view text, std::size_t max_units, LengthUnit unit);

std::size_t count_units(std::string_view text, LengthUnit unit);

// Removes surrounding markdown code fences from a model response, including
// a language tag on the opening fence, and trims outer whitespace.
// "```sql\nSELECT 1;\n```" -> "SELECT 1;"
std::string strip_code_fences(std::string_view response);

std::string trim(std::string_view s);

} // namespace trisearch::providers
