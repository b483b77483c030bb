#include "eca/error.hpp"
#include "eca/estimator.hpp"
#include "eca/synthetic.hpp"
#include "eca/training.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace eca {
namespace {

SyntheticSample small_sample(std::uint64_t seed, SyntheticCase kind = SyntheticCase::Clean) {
    return render_synthetic(random_spec(kind, {96, 72}, seed), seed, "s" + std::to_string(seed));
}

TrainingSample sample_for(const SyntheticSample& s, const TrainConfig& tc) {
    return make_training_sample(s.frame, s.annotation.circle, config_default(), tc, s.annotation.sample_id);
}

TEST(TrainConfig, DefaultsAndValidation) {
    TrainConfig tc;
    EXPECT_EQ(tc.learning_rate, 0.001);
    EXPECT_EQ(tc.batch_size, 8);
    EXPECT_EQ(tc.target_blur_sigma, 3.0);
    EXPECT_EQ(tc.early_stop_patience, 5);
    EXPECT_NO_THROW(tc.validate());
    tc.learning_rate = 0;
    EXPECT_THROW(tc.validate(), ConfigError);
    tc = {};
    tc.batch_size = 0;
    EXPECT_THROW(tc.validate(), ConfigError);
}

TEST(TrainingSample, StripWindowsAndTargets) {
    const auto s = small_sample(1);
    TrainConfig tc;
    const auto ts = sample_for(s, tc);
    const auto rows = strip_heights(72, 16, 8);
    ASSERT_EQ(ts.strips.size(), rows.size());
    const auto target = make_edge_target(s.annotation.circle, {96, 72});
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& st = ts.strips[i];
        EXPECT_EQ(st.window.height(), 7);
        EXPECT_EQ(st.y_offset, rows[i] - 3);
        ASSERT_EQ(st.target.size(), 90u);
        for (int x = 0; x < 90; ++x) EXPECT_EQ(st.target[x], target[std::size_t(rows[i]) * 96 + x + 3]);
    }
    tc.full_image = true;
    const auto full = sample_for(s, tc);
    ASSERT_EQ(full.strips.size(), 1u);
    EXPECT_EQ(full.strips[0].target.size(), 90u * 66u);
}

TEST(ChannelNorm, MeanAndStd) {
    ImageFrame f(8, 14);
    for (int y = 0; y < 14; ++y)
        for (int x = 0; x < 8; ++x) f.set_pixel(x, y, x % 2 ? 10 : 30, 7, 0);
    TrainConfig tc;
    tc.full_image = true;
    const std::vector<TrainingSample> v{make_training_sample(f, std::nullopt, config_default(), tc)};
    const ChannelNorm n = compute_channel_norm(v);
    EXPECT_DOUBLE_EQ(n.mean[0], 20.0);
    EXPECT_DOUBLE_EQ(n.stddev[0], 10.0);
    EXPECT_DOUBLE_EQ(n.mean[1], 7.0);
    EXPECT_EQ(n.stddev[1], 1.0); // constant channel
}

TEST(Sgd, ZeroLearningRateLeavesWeightsUnchanged) {
    TrainConfig tc;
    tc.learning_rate = 0.0;
    const auto ts = sample_for(small_sample(2), tc);
    EdgeNet net = EdgeNet::initialized(3);
    const EdgeNet before = net;
    std::vector<const TrainingStrip*> batch;
    for (const auto& s : ts.strips) batch.push_back(&s);
    for (int i = 0; i < 20; ++i) sgd_step(net, batch, tc);
    for (int l = 0; l < 4; ++l) {
        EXPECT_EQ(net.layers[l].kernel, before.layers[l].kernel);
        EXPECT_EQ(net.layers[l].bias, before.layers[l].bias);
    }
}

// Soft BCE against blurred targets cannot go below the targets' own
// entropy; this is that floor under RowSum (one output row per strip).
double entropy_floor(const TrainingSample& ts) {
    double total = 0.0;
    for (const auto& st : ts.strips)
        for (double t : st.target)
            if (t > 0.0 && t < 1.0) total -= t * std::log(t) + (1 - t) * std::log(1 - t);
    return total / double(ts.strips.size());
}

TEST(Sgd, SingleSampleOverfit) {
    TrainConfig tc;
    tc.reduction = LossReduction::RowSum;
    tc.learning_rate = 0.0025;
    const auto ts = sample_for(small_sample(5), tc);
    EdgeNet net = EdgeNet::initialized(1);
    const std::vector<TrainingSample> one{ts};
    net.norm = compute_channel_norm(one);
    std::vector<const TrainingStrip*> batch;
    for (const auto& s : ts.strips) batch.push_back(&s);
    const double floor = entropy_floor(ts);
    const double initial = dataset_loss(net, one, tc.reduction);
    ASSERT_GT(initial, floor);
    for (int step = 0; step < 500; ++step) sgd_step(net, batch, tc);
    const double final_loss = dataset_loss(net, one, tc.reduction);
    EXPECT_GE(final_loss, floor - 1e-9);
    EXPECT_LT(final_loss - floor, 0.1 * (initial - floor));
}

TEST(Sgd, NonFiniteLossAborts) {
    TrainConfig tc;
    tc.learning_rate = 1e300;
    auto ts = sample_for(small_sample(6), tc);
    EdgeNet net = EdgeNet::initialized(1);
    std::vector<const TrainingStrip*> batch;
    for (const auto& s : ts.strips) batch.push_back(&s);
    EXPECT_THROW(
        {
            for (int i = 0; i < 5; ++i) sgd_step(net, batch, tc);
        },
        TrainingDiverged);
}

TEST(Train, ReproducibleWithoutShuffle) {
    TrainConfig tc;
    tc.shuffle = false;
    tc.max_epochs = 3;
    tc.strips_per_sample = 4;
    tc.reduction = LossReduction::RowSum;
    std::vector<TrainingSample> train_set, val_set;
    for (int i = 0; i < 6; ++i) train_set.push_back(sample_for(small_sample(10 + i), tc));
    for (int i = 0; i < 2; ++i) val_set.push_back(sample_for(small_sample(50 + i), tc));
    const auto a = train(EdgeNet::initialized(1), train_set, val_set, tc);
    const auto b = train(EdgeNet::initialized(1), train_set, val_set, tc);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].val_loss, b.history[i].val_loss);
    for (int l = 0; l < 4; ++l) EXPECT_EQ(a.net.layers[l].kernel, b.net.layers[l].kernel);
    EXPECT_EQ(save_weights(a.net), save_weights(b.net));
}

TEST(Train, ReturnsBestSnapshotAndStopsEarly) {
    TrainConfig tc;
    tc.max_epochs = 30;
    tc.early_stop_patience = 2;
    tc.learning_rate = 0.05; // large enough to bounce around
    tc.reduction = LossReduction::RowSum;
    std::vector<TrainingSample> train_set, val_set;
    for (int i = 0; i < 4; ++i) train_set.push_back(sample_for(small_sample(70 + i), tc));
    val_set.push_back(sample_for(small_sample(90), tc));
    try {
        const auto r = train(EdgeNet::initialized(2), train_set, val_set, tc);
        double best = 1e300;
        int best_epoch = 0;
        for (const auto& h : r.history)
            if (h.val_loss < best) best = h.val_loss, best_epoch = h.epoch;
        if (best_epoch > 0) {
            EXPECT_EQ(r.best_epoch, best_epoch);
            EXPECT_EQ(r.best_val_loss, best);
            EXPECT_DOUBLE_EQ(dataset_loss(r.net, val_set, tc.reduction), best);
        }
        if (r.stopped_early) {
            EXPECT_EQ(int(r.history.size()) - r.best_epoch, tc.early_stop_patience);
        }
    } catch (const TrainingDiverged&) {
        // Acceptable outcome for a deliberately large step size.
    }
}

TEST(Train, EmptyTrainingSetRejected) {
    EXPECT_THROW(train(EdgeNet::initialized(1), {}, {}, TrainConfig{}), InvalidInput);
}

} // namespace
} // namespace eca
