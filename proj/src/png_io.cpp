#include "eca/png_io.hpp"

#include "eca/error.hpp"

#include <png.h>

#include <cstring>

namespace eca {
namespace {

struct PngImage {
    png_image img;
    PngImage() {
        std::memset(&img, 0, sizeof img);
        img.version = PNG_IMAGE_VERSION;
    }
    ~PngImage() { png_image_free(&img); }
    PngImage(const PngImage&) = delete;
    PngImage& operator=(const PngImage&) = delete;
};

} // namespace

ImageFrame read_png(const std::string& path) {
    PngImage png;
    if (!png_image_begin_read_from_file(&png.img, path.c_str())) {
        throw IoError("cannot read PNG '" + path + "': " + png.img.message);
    }
    png.img.format = PNG_FORMAT_RGB;
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(png.img));
    const int w = static_cast<int>(png.img.width);
    const int h = static_cast<int>(png.img.height);
    if (!png_image_finish_read(&png.img, nullptr, data.data(), 0, nullptr)) {
        throw IoError("cannot decode PNG '" + path + "': " + png.img.message);
    }
    return ImageFrame(w, h, std::move(data));
}

FrameDims read_png_dims(const std::string& path) {
    PngImage png;
    if (!png_image_begin_read_from_file(&png.img, path.c_str())) {
        throw IoError("cannot read PNG '" + path + "': " + png.img.message);
    }
    return {static_cast<int>(png.img.width), static_cast<int>(png.img.height)};
}

void write_png(const std::string& path, const ImageFrame& frame) {
    PngImage png;
    png.img.width = static_cast<png_uint_32>(frame.width());
    png.img.height = static_cast<png_uint_32>(frame.height());
    png.img.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&png.img, path.c_str(), 0, frame.data().data(), 0, nullptr)) {
        throw IoError("cannot write PNG '" + path + "': " + png.img.message);
    }
}

} // namespace eca
