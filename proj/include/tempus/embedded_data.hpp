#pragma once

#include <string_view>

// Default data files compiled into the library (see data/).
namespace tempus::embedded {

std::string_view lexicon_csv();
std::string_view abbreviations_txt();
std::string_view time_grammar_tsv();
std::string_view tate_items_csv();

}  // namespace tempus::embedded
