#pragma once

#include "retinexad/image.hpp"

namespace retinexad {

// Hue is stored as degrees/360 in [0,1). Achromatic pixels (S = 0 or
// R = G = B) get H = 0.

/// I = (R+G+B)/3, S = 1 - 3 min/(R+G+B), H from the arccos formula.
ColourImage rgb_to_hsi(const ColourImage& rgb);
/// Sector-wise inverse of rgb_to_hsi; output clamped to [0,1].
ColourImage hsi_to_rgb(const ColourImage& hsi);

/// Hexcone model, V = max(R,G,B).
ColourImage rgb_to_hsv(const ColourImage& rgb);
ColourImage hsv_to_rgb(const ColourImage& hsv);

/// Converts an RGB image to `space` (identity for kRGB).
ColourImage from_rgb(const ColourImage& rgb, ColourSpace space);
/// Converts an image in any space back to RGB.
ColourImage to_rgb(const ColourImage& img);

}  // namespace retinexad
