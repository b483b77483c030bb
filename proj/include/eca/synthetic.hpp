#pragma once

#include "eca/dataset.hpp"
#include "eca/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eca {

/// Saturated light leaking from the content edge into the border over an
/// angular sector.
struct BleedArtifact {
    double angle_deg = 0.0;      ///< sector direction, measured from +x towards +y
    double half_width_deg = 20.0;
    double length_px = 30.0;     ///< radial reach beyond the circle
    double strength = 0.8;       ///< fraction of content brightness at the circle edge
};

/// Filled rectangle (secondary video feed, logo) or a run of text glyphs.
struct OverlayBox {
    int x = 0;
    int y = 0;
    int width = 0;
    int height = 0;
    std::array<std::uint8_t, 3> color{0, 0, 0};
    bool text = false; ///< draw 5x7 pseudo-glyphs in `color` instead of a solid fill
};

struct SyntheticSpec {
    FrameDims dims{640, 480};
    std::optional<Circle> circle;     ///< none: content covers the whole frame
    double border_noise_sigma = 3.0;  ///< intensity units
    std::optional<BleedArtifact> bleed;
    std::vector<OverlayBox> overlays;
    double content_brightness = 1.0;
    bool adversarial = false;         ///< circle may violate the geometry gates
};

enum class SyntheticCase { Clean, DarkContent, Bleed, Overlay, CornerOnly, NoBorder };

inline constexpr std::array<SyntheticCase, 6> kAllSyntheticCases{
    SyntheticCase::Clean, SyntheticCase::DarkContent, SyntheticCase::Bleed,
    SyntheticCase::Overlay, SyntheticCase::CornerOnly, SyntheticCase::NoBorder};

const char* to_string(SyntheticCase c);

/// Random spec of the given kind. Deterministic in (kind, dims, seed).
SyntheticSpec random_spec(SyntheticCase kind, FrameDims dims, std::uint64_t seed);

struct SyntheticSample {
    ImageFrame frame;
    EcaAnnotation annotation;
};

/// Renders a textured content disk on a noisy black border plus the
/// requested artifacts. All noise comes from an integer hash of
/// (seed, x, y, channel), so renders are reproducible bit for bit.
SyntheticSample render_synthetic(const SyntheticSpec& spec, std::uint64_t seed, const std::string& sample_id = "synthetic");

/// FNV-1a over dimensions and pixel bytes.
std::uint64_t frame_hash(const ImageFrame& frame);

} // namespace eca
