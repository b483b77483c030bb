#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace eca {

// Pixel coordinates: x = column, y = row, origin top-left. Integer
// coordinates address pixel centers.

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct FrameDims {
    int width = 0;
    int height = 0;

    /// Geometric centre of the pixel grid, ((W-1)/2, (H-1)/2).
    Point2 center() const { return {(width - 1) * 0.5, (height - 1) * 0.5}; }
    bool operator==(const FrameDims&) const = default;
};

/// Height of the pixel window taken around every strip row.
inline constexpr int kStripPatchHeight = 7;
inline constexpr int kStripHalfHeight = kStripPatchHeight / 2;

/// Interleaved 8-bit RGB image, row-major.
class ImageFrame {
public:
    ImageFrame() = default;
    /// Zero-filled frame.
    ImageFrame(int width, int height);
    /// Takes ownership of interleaved RGB data; size must be width*height*3.
    ImageFrame(int width, int height, std::vector<std::uint8_t> rgb);

    int width() const { return width_; }
    int height() const { return height_; }
    FrameDims dims() const { return {width_, height_}; }
    bool empty() const { return data_.empty(); }

    std::span<const std::uint8_t> data() const { return data_; }
    std::span<std::uint8_t> data() { return data_; }

    const std::uint8_t* row(int y) const { return data_.data() + std::size_t(y) * width_ * 3; }
    std::uint8_t* row(int y) { return data_.data() + std::size_t(y) * width_ * 3; }

    std::uint8_t at(int x, int y, int c) const { return row(y)[x * 3 + c]; }
    std::uint8_t& at(int x, int y, int c) { return row(y)[x * 3 + c]; }

    void set_pixel(int x, int y, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
        auto* p = row(y) + x * 3;
        p[0] = r;
        p[1] = g;
        p[2] = b;
    }

    /// Mirror image about the vertical axis.
    ImageFrame flipped_horizontally() const;
    /// Copy of the pixel rectangle [x0, x0+w) x [y0, y0+h).
    ImageFrame cropped(int x0, int y0, int w, int h) const;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> data_;
};

/// Throws InvalidInput unless the frame is large enough to enter the
/// estimation pipeline (width >= 8, height >= 14, data size consistent).
void require_pipeline_frame(const ImageFrame& frame);

struct Circle {
    double cx = 0.0;
    double cy = 0.0;
    double r = 1.0;

    /// r > 0 and all fields finite.
    bool valid() const;
};

/// Closed-disk membership: (x-cx)^2 + (y-cy)^2 <= r^2.
bool circle_contains(const Circle& c, double x, double y);

struct FullFrame {
    bool operator==(const FullFrame&) const = default;
};

struct CircularArea {
    Circle circle;
    double score = 0.0;
};

/// Estimation result: either the whole frame is informative, or the
/// content area is the intersection of a circle with the frame.
using ContentArea = std::variant<FullFrame, CircularArea>;

inline bool is_full_frame(const ContentArea& a) { return std::holds_alternative<FullFrame>(a); }

enum class Side { Left, Right };

struct EdgeCandidate {
    int x = 0;
    int y = 0;
    double score = 0.0;
    Side side = Side::Left;
};

} // namespace eca
