#pragma once

#include "eca/types.hpp"

#include <string>

namespace eca {

/// Reads any PNG as 8-bit RGB (grey is replicated, alpha dropped,
/// 16-bit reduced). Throws IoError.
ImageFrame read_png(const std::string& path);

/// Dimensions from the PNG header only.
FrameDims read_png_dims(const std::string& path);

void write_png(const std::string& path, const ImageFrame& frame);

} // namespace eca
