#include "eca/error.hpp"
#include "eca/png_io.hpp"
#include "eca/pseudo_label.hpp"
#include "eca/synthetic.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

namespace eca {
namespace {

namespace fs = std::filesystem;

class PseudoLabelDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("eca_pl_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::vector<SyntheticSample> write_clean(int n) {
        std::vector<SyntheticSample> out;
        for (int i = 0; i < n; ++i) {
            char name[32];
            std::snprintf(name, sizeof name, "frame_%03d", i);
            auto s = render_synthetic(random_spec(SyntheticCase::Clean, {320, 240}, 100 + i), 100 + i, name);
            write_png((dir / (std::string(name) + ".png")).string(), s.frame);
            out.push_back(std::move(s));
        }
        return out;
    }

    fs::path dir;
};

TEST_F(PseudoLabelDir, LabelsCleanFramesAccurately) {
    const auto truth = write_clean(10);
    PseudoLabelOptions opts;
    opts.source = DataSource::Cholec80;
    opts.video_no = 4;
    const auto res = pseudo_label(dir.string(), opts);
    ASSERT_EQ(res.rows.size(), 10u);
    EXPECT_TRUE(res.log.empty());
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& row = res.rows[i];
        EXPECT_EQ(row.sample_id, truth[i].annotation.sample_id);
        EXPECT_EQ(row.image_path, truth[i].annotation.sample_id + ".png");
        EXPECT_EQ(row.frame_no, int(i));
        EXPECT_EQ(row.video_no, 4);
        EXPECT_EQ(row.source, DataSource::Cholec80);
        ASSERT_TRUE(row.circle.has_value()) << i;
        const Circle& got = *row.circle;
        const Circle& want = *truth[i].annotation.circle;
        EXPECT_NEAR(got.cx, want.cx, 3.0) << i;
        EXPECT_NEAR(got.cy, want.cy, 3.0) << i;
        EXPECT_NEAR(got.r, want.r, 3.0) << i;
    }
}

TEST_F(PseudoLabelDir, GrayFrameIsFull) {
    ImageFrame f(64, 48);
    for (auto& b : f.data()) b = 128;
    write_png((dir / "gray.png").string(), f);
    const auto res = pseudo_label(dir.string(), {});
    ASSERT_EQ(res.rows.size(), 1u);
    EXPECT_FALSE(res.rows[0].circle.has_value());
}

TEST_F(PseudoLabelDir, DeterministicAcrossThreadCounts) {
    write_clean(6);
    PseudoLabelOptions a, b;
    b.threads = 3;
    const auto ra = pseudo_label(dir.string(), a);
    const auto rb = pseudo_label(dir.string(), b);
    EXPECT_EQ(ra.rows, rb.rows);
    EXPECT_EQ(ra.rows, pseudo_label(dir.string(), a).rows);
}

TEST_F(PseudoLabelDir, SkipsUnreadableFiles) {
    write_clean(2);
    std::ofstream(dir / "frame_000b.png") << "not a png";
    std::ofstream(dir / "notes.txt") << "ignored";
    const auto res = pseudo_label(dir.string(), {});
    EXPECT_EQ(res.rows.size(), 2u);
    ASSERT_EQ(res.log.size(), 1u);
    EXPECT_NE(res.log[0].find("frame_000b.png"), std::string::npos);
}

TEST_F(PseudoLabelDir, StrideFollowsFrameRate) {
    write_clean(7);
    PseudoLabelOptions opts;
    opts.fps = 1.0;
    opts.interval_seconds = 3.0;
    EXPECT_EQ(pseudo_label_stride(opts), 3);
    const auto res = pseudo_label(dir.string(), opts);
    ASSERT_EQ(res.rows.size(), 3u);
    EXPECT_EQ(res.rows[0].frame_no, 0);
    EXPECT_EQ(res.rows[1].frame_no, 3);
    EXPECT_EQ(res.rows[2].frame_no, 6);
}

TEST(PseudoLabel, StrideDefaults) {
    PseudoLabelOptions opts;
    EXPECT_EQ(pseudo_label_stride(opts), 1);
    opts.fps = 25.0;
    EXPECT_EQ(pseudo_label_stride(opts), 50);
    opts.fps = 0.1;
    EXPECT_EQ(pseudo_label_stride(opts), 1);
}

TEST(PseudoLabel, MissingDirectoryThrows) {
    EXPECT_THROW(pseudo_label("/nonexistent/eca_frames", {}), IoError);
}

} // namespace
} // namespace eca
