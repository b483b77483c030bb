#pragma once

#include "eca/config.hpp"
#include "eca/dataset.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace eca {

struct PseudoLabelOptions {
    EcaConfig config = config_default();
    std::uint64_t seed = 0;
    /// Frame rate of an extracted frame sequence. When set, one frame per
    /// `interval_seconds` is labelled; otherwise every frame is.
    std::optional<double> fps;
    double interval_seconds = 2.0;
    DataSource source = DataSource::Synthetic;
    int video_no = 0;
    int threads = 1;
};

struct PseudoLabelResult {
    std::vector<EcaAnnotation> rows;
    std::vector<std::string> log; ///< one entry per skipped file
};

/// Frame stride implied by the options (>= 1).
int pseudo_label_stride(const PseudoLabelOptions& opts);

/// Labels the PNG files of `directory` (sorted by name) with the
/// handcrafted estimator. frame_no is the file's position in the sorted
/// listing; image_path is the bare file name. Unreadable files are skipped
/// and logged. Throws IoError if the directory cannot be listed.
PseudoLabelResult pseudo_label(const std::string& directory, const PseudoLabelOptions& opts);

} // namespace eca
