#pragma once

#include <string>
#include <string_view>

#include "permsft/group_ring.hpp"
#include "permsft/lattice.hpp"

namespace permsft {

/// Parses {"dim": d, "terms": [{"exp": [...], "coef": c}, ...]}.
GroupRingElement parse_element(std::string_view json_text);
std::string element_to_json(const GroupRingElement& f);

/// Parses {"box": {"origin": [...], "lengths": [...]}} or {"points": [[...], ...]}.
Window parse_window(std::string_view json_text);
std::string window_to_json(const Window& w);

/// Locale independent rendering with the given number of significant digits.
/// Infinities print as "inf"/"-inf".
std::string format_number(double v, int significant_digits = 12);
/// v rounded to the given number of significant digits.
double round_significant(double v, int significant_digits = 12);

}  // namespace permsft
