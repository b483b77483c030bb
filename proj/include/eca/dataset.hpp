#pragma once

#include "eca/types.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace eca {

enum class DataSource { Cholec80, RobustMIS, Synthetic };

const char* to_string(DataSource s);
DataSource parse_data_source(const std::string& s);

/// One labelled frame. `circle` empty means the content area is the full frame.
struct EcaAnnotation {
    std::string sample_id;
    DataSource source = DataSource::Synthetic;
    int video_no = 0;
    int frame_no = 0;
    std::optional<Circle> circle;
    std::string image_path; ///< relative to the annotation file's directory

    ContentArea area() const;
    bool operator==(const EcaAnnotation&) const;
};

/// Header line of the annotation CSV.
inline constexpr const char* kAnnotationHeader = "sample_id,source,video_no,frame_no,area_type,cx,cy,r,image_path";

/// Parses CSV text. Throws InvalidInput naming the offending line.
std::vector<EcaAnnotation> parse_annotations_csv(const std::string& text);
std::string format_annotations_csv(const std::vector<EcaAnnotation>& rows);

struct AnnotationSet {
    std::vector<EcaAnnotation> rows;
    std::size_t skipped_missing = 0;
    std::vector<std::string> warnings;
};

/// Loads an annotation file. With `check_images`, rows whose image does
/// not exist are skipped and counted.
AnnotationSet load_annotations(const std::string& path, bool check_images = false);
void save_annotations(const std::vector<EcaAnnotation>& rows, const std::string& path);

/// Absolute-ish path of a row's image: annotation directory / image_path.
std::string resolve_image_path(const std::string& annotation_file, const EcaAnnotation& row);

struct CropSample {
    ImageFrame frame;
    EcaAnnotation annotation;
    int x0 = 0;
    int y0 = 0;
};

/// Crops the largest axis-aligned rectangle, centred on the circle centre,
/// that fits inside both the disk and the frame. The result is labelled
/// full-frame with id suffix "_crop". nullopt when the annotation is not
/// circular, the crop is smaller than 14x14, or it would be the whole frame.
std::optional<CropSample> crop_augment(const EcaAnnotation& annotation, const ImageFrame& frame);

struct EdgeTargetOptions {
    double sigma = 3.0;
    bool normalize_peak = true;
};

/// H x W row-major target: the circle boundary inside the frame deposited
/// as a unit line density, Gaussian blurred (truncated at 3 sigma) and
/// scaled so its maximum is 1. Rectangle edges are not part of the target;
/// a full-frame label gives an all-zero map.
std::vector<double> make_edge_target(const std::optional<Circle>& circle, FrameDims dims,
                                     const EdgeTargetOptions& opts = {});

} // namespace eca
