#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace euds {

/// Deterministic normalizing tokenizer shared by every entropy measure:
/// lowercase, split on Unicode whitespace, strip leading/trailing
/// punctuation per token, drop empty tokens.
std::vector<std::string> tokenize(std::string_view text);

/// Canonical form used by the default semantic-equivalence check:
/// lowercase, punctuation removed, whitespace runs collapsed to one space.
std::string normalize_for_equivalence(std::string_view text);

/// True when the text contains at least one non-whitespace character.
bool has_visible_text(std::string_view text);

} // namespace euds
