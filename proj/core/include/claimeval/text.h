#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

// Small string utilities shared by metrics, mocks and the dataset pipeline.
namespace claimeval::text {

std::string_view trim(std::string_view s);

/// Trims and collapses every internal whitespace run to one space.
std::string normalize_whitespace(std::string_view s);

std::vector<std::string> split_whitespace(std::string_view s);

/// Lowercased maximal runs of ASCII alphanumerics (UTF-8 multibyte sequences
/// are kept as word characters).
std::vector<std::string> word_tokens(std::string_view s);

std::string to_lower(std::string_view s);

/// Decodes UTF-8 into code points; invalid bytes map to U+FFFD.
std::u32string utf8_decode(std::string_view s);

/// Character-level edit distance (unit cost insert, delete, substitute).
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

/// 1 - lev(a, b) / max(|a|, |b|) over code points; 1 for two empty strings.
double levenshtein_ratio(std::string_view a, std::string_view b);

/// levenshtein_ratio after sorting whitespace tokens alphabetically.
double token_sort_ratio(std::string_view a, std::string_view b);

bool ends_with_sentence_punctuation(std::string_view s);

}  // namespace claimeval::text
