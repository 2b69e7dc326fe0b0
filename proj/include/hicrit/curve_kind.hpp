#pragma once

#include <string>
#include <string_view>

namespace hicrit {

/// The statistic family. MHC shares the HC rejection curve; the
/// modification only changes which indices contribute.
enum class CurveKind { HC, MHC, BJ, MBJ, JW };

std::string_view to_string(CurveKind kind);

/// Case-insensitive parse of "hc", "mhc", "bj", "mbj", "jw".
/// Throws InputError on anything else.
CurveKind parse_curve_kind(std::string_view text);

}  // namespace hicrit
