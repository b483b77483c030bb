#include "eca/pseudo_label.hpp"

#include "eca/error.hpp"
#include "eca/estimator.hpp"
#include "eca/png_io.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <thread>

namespace fs = std::filesystem;

namespace eca {

int pseudo_label_stride(const PseudoLabelOptions& opts) {
    if (!opts.fps) return 1;
    if (!(*opts.fps > 0.0) || !(opts.interval_seconds > 0.0)) {
        throw ConfigError("pseudo-label fps and interval must be > 0");
    }
    return std::max(1, static_cast<int>(std::lround(*opts.fps * opts.interval_seconds)));
}

PseudoLabelResult pseudo_label(const std::string& directory, const PseudoLabelOptions& opts) {
    opts.config.validate();
    const int stride = pseudo_label_stride(opts);

    std::vector<fs::path> files;
    std::error_code ec;
    fs::directory_iterator it(directory, ec);
    if (ec) throw IoError("cannot list directory '" + directory + "': " + ec.message());
    for (const auto& entry : it) {
        if (!entry.is_regular_file()) continue;
        auto ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
        if (ext == ".png") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < files.size(); i += stride) picked.push_back(i);

    struct Slot {
        std::optional<EcaAnnotation> row;
        std::string error;
    };
    std::vector<Slot> slots(picked.size());
    const EstimatorVariant variant = HandcraftedVariant{};
    auto run_one = [&](std::size_t k) {
        const fs::path& path = files[picked[k]];
        try {
            const ImageFrame frame = read_png(path.string());
            EcaAnnotation row;
            row.sample_id = path.stem().string();
            row.source = opts.source;
            row.video_no = opts.video_no;
            row.frame_no = static_cast<int>(picked[k]);
            row.image_path = path.filename().string();
            const ContentArea area = estimate(frame, variant, opts.config, opts.seed);
            if (const auto* c = std::get_if<CircularArea>(&area)) row.circle = c->circle;
            slots[k].row = std::move(row);
        } catch (const Error& e) {
            slots[k].error = path.filename().string() + ": " + e.what();
        }
    };

    const int threads = std::max(1, std::min<int>(opts.threads, static_cast<int>(picked.size())));
    if (threads <= 1) {
        for (std::size_t k = 0; k < picked.size(); ++k) run_one(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < picked.size(); k = next++) run_one(k);
            });
        }
    }

    PseudoLabelResult result;
    for (auto& s : slots) {
        if (s.row) {
            result.rows.push_back(std::move(*s.row));
        } else {
            result.log.push_back("skipped " + s.error);
        }
    }
    return result;
}

} // namespace eca
