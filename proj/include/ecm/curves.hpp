#pragma once

// Named curves and the key-value curve file format:
//
//   # comment
//   name = secp256k1
//   p  = FFFFFFFF...FC2F
//   a  = 0
//   ...
//
// Integer fields (p, a, b, Gx, Gy, n) are hexadecimal, with or without a 0x
// prefix. Keys are case-insensitive.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ecm/ec_core.hpp"

namespace ecm {

CurveParams secp256k1();
/// Textbook curve y^2 = x^3 + 2x + 2 over F_17, G = (5, 1), n = 19.
CurveParams toy_curve_17();
/// y^2 = x^3 + x + 28 over F_10007; the whole group has prime order 9851.
CurveParams toy_curve_10007();

std::vector<std::string> named_curve_ids();

/// Throws CurveInvalid for an unknown id.
CurveParams named_curve(std::string_view id);

CurveParams parse_curve_text(std::string_view text);
std::string format_curve_text(const CurveParams& params);
CurveParams load_curve_file(const std::filesystem::path& path);

/// Resolution order: named curve, existing file path, then `<id>.curve`
/// inside each directory listed in ECM_CURVE_PATH (colon separated).
CurveParams resolve_curve(std::string_view id);

}  // namespace ecm
