#include "eca/error.hpp"
#include "eca/dataset.hpp"
#include "eca/png_io.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <numeric>

namespace eca {
namespace {

namespace fs = std::filesystem;

const std::string kCsv = std::string(kAnnotationHeader) +
                         "\n"
                         "c80_v01_f000100,Cholec80,1,100,circle,960.5,540.25,512.0,v01/000100.png\n"
                         "rmis_v03_f000007,RobustMIS,3,7,full,,,,v03/000007.png\n";

TEST(AnnotationsCsv, ParsesRows) {
    const auto rows = parse_annotations_csv(kCsv);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].sample_id, "c80_v01_f000100");
    EXPECT_EQ(rows[0].source, DataSource::Cholec80);
    EXPECT_EQ(rows[0].video_no, 1);
    EXPECT_EQ(rows[0].frame_no, 100);
    ASSERT_TRUE(rows[0].circle.has_value());
    EXPECT_EQ(rows[0].circle->cx, 960.5);
    EXPECT_EQ(rows[0].circle->cy, 540.25);
    EXPECT_EQ(rows[0].circle->r, 512.0);
    EXPECT_EQ(rows[0].image_path, "v01/000100.png");
    EXPECT_EQ(rows[1].source, DataSource::RobustMIS);
    EXPECT_FALSE(rows[1].circle.has_value());
    EXPECT_TRUE(is_full_frame(rows[1].area()));
}

TEST(AnnotationsCsv, RoundTrip) {
    auto rows = parse_annotations_csv(kCsv);
    rows[0].circle->cx = 0.1 + 0.2; // needs all 17 digits
    EXPECT_EQ(parse_annotations_csv(format_annotations_csv(rows)), rows);
    EXPECT_EQ(format_annotations_csv(parse_annotations_csv(kCsv)), kCsv);
}

TEST(AnnotationsCsv, ErrorsNameTheLine) {
    const std::string h = std::string(kAnnotationHeader) + "\n";
    auto expect_line = [](const std::string& text, const std::string& needle) {
        try {
            parse_annotations_csv(text);
            ADD_FAILURE() << "no error for: " << text;
        } catch (const InvalidInput& e) {
            EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
        }
    };
    expect_line(h + "a,Synthetic,0,0,circle,1,2,3,a.png\nb,Synthetic,0,0,circle,x,2,3,b.png\n", "line 3");
    expect_line(h + "a,Nowhere,0,0,full,,,,a.png\n", "line 2");
    expect_line(h + "a,Synthetic,0,0,oval,1,2,3,a.png\n", "line 2");
    expect_line(h + "a,Synthetic,0,0,circle,1,2,-3,a.png\n", "line 2");
    expect_line(h + "a,Synthetic,0,0,full,1,,,a.png\n", "line 2");
    expect_line(h + "a,Synthetic,0,0\n", "line 2");
    expect_line("id,source\n", "line 1");
    EXPECT_THROW(parse_annotations_csv(""), InvalidInput);
}

TEST(AnnotationsCsv, RejectsCommasOnWrite) {
    EcaAnnotation a;
    a.sample_id = "a,b";
    EXPECT_THROW(format_annotations_csv({a}), InvalidInput);
}

TEST(AnnotationsFile, SkipsMissingImages) {
    const fs::path dir = fs::temp_directory_path() / "eca_test_dataset";
    fs::remove_all(dir);
    fs::create_directories(dir / "v01");
    write_png((dir / "v01" / "000100.png").string(), ImageFrame(4, 4));
    const std::string path = (dir / "ann.csv").string();
    save_annotations(parse_annotations_csv(kCsv), path);

    const auto all = load_annotations(path);
    EXPECT_EQ(all.rows.size(), 2u);
    const auto checked = load_annotations(path, true);
    ASSERT_EQ(checked.rows.size(), 1u);
    EXPECT_EQ(checked.rows[0].sample_id, "c80_v01_f000100");
    EXPECT_EQ(checked.skipped_missing, 1u);
    EXPECT_EQ(checked.warnings.size(), 1u);
    EXPECT_EQ(resolve_image_path(path, checked.rows[0]), (dir / "v01" / "000100.png").string());
    EXPECT_THROW(load_annotations((dir / "none.csv").string()), IoError);
    fs::remove_all(dir);
}

ImageFrame gradient_frame(int w, int h) {
    ImageFrame f(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) f.set_pixel(x, y, std::uint8_t(x), std::uint8_t(y), 7);
    return f;
}

EcaAnnotation circle_row(Circle c) {
    EcaAnnotation a;
    a.sample_id = "s";
    a.circle = c;
    a.image_path = "dir/s.png";
    return a;
}

TEST(CropAugment, InteriorCircleGivesInscribedSquare) {
    const Circle c{100, 90, 60};
    const auto crop = crop_augment(circle_row(c), gradient_frame(220, 200));
    ASSERT_TRUE(crop.has_value());
    const double side = 60 * std::numbers::sqrt2;
    EXPECT_NEAR(crop->frame.width(), side, 2.0);
    EXPECT_NEAR(crop->frame.height(), side, 2.0);
    EXPECT_EQ(crop->annotation.sample_id, "s_crop");
    EXPECT_EQ(crop->annotation.image_path, "dir/s_crop.png");
    EXPECT_FALSE(crop->annotation.circle.has_value());
    EXPECT_EQ(crop->frame.at(0, 0, 0), crop->x0);
    EXPECT_EQ(crop->frame.at(0, 0, 1), crop->y0);
}

TEST(CropAugment, EveryPixelInsideDisk) {
    const ImageFrame f = gradient_frame(160, 120);
    for (const Circle& c : {Circle{79.5, 59.5, 70}, Circle{70, 50, 90}, Circle{90, 65, 55}, Circle{79.5, 59.5, 95}}) {
        const auto crop = crop_augment(circle_row(c), f);
        ASSERT_TRUE(crop.has_value());
        for (int y = 0; y < crop->frame.height(); ++y)
            for (int x = 0; x < crop->frame.width(); ++x)
                ASSERT_TRUE(circle_contains(c, crop->x0 + x, crop->y0 + y)) << x << "," << y;
        EXPECT_LE(crop->x0 + crop->frame.width(), 160);
        EXPECT_LE(crop->y0 + crop->frame.height(), 120);
    }
}

TEST(CropAugment, SkipsUnusableRows) {
    const ImageFrame f = gradient_frame(160, 120);
    EXPECT_FALSE(crop_augment(circle_row({79.5, 59.5, 200}), f).has_value()); // would be the whole frame
    EXPECT_FALSE(crop_augment(circle_row({79.5, 59.5, 8}), f).has_value());   // too small
    EcaAnnotation full;
    EXPECT_FALSE(crop_augment(full, f).has_value());
}

TEST(EdgeTarget, FullFrameIsZero) {
    const auto t = make_edge_target(std::nullopt, {40, 30});
    ASSERT_EQ(t.size(), 1200u);
    for (double v : t) EXPECT_EQ(v, 0.0);
}

TEST(EdgeTarget, PeakOnCircleAndUnitMass) {
    const FrameDims dims{200, 160};
    const Circle c{99.5, 79.5, 60};
    const auto t = make_edge_target(c, dims);
    EXPECT_DOUBLE_EQ(*std::max_element(t.begin(), t.end()), 1.0);
    // Every local row maximum near the circle lies within one pixel of it.
    for (int y = 40; y <= 120; y += 5) {
        const double* row = t.data() + std::size_t(y) * 200;
        const int xm = int(std::max_element(row, row + 100) - row);
        const double expect = c.cx - std::sqrt(c.r * c.r - (y - c.cy) * (y - c.cy));
        EXPECT_NEAR(xm, expect, 1.0) << y;
    }
    const auto raw = make_edge_target(c, dims, {3.0, false});
    const double mass = std::accumulate(raw.begin(), raw.end(), 0.0);
    EXPECT_NEAR(mass, 2 * std::numbers::pi * c.r, 0.02 * 2 * std::numbers::pi * c.r);
    EXPECT_THROW(make_edge_target(c, dims, {0.0, true}), InvalidInput);
}

} // namespace
} // namespace eca
