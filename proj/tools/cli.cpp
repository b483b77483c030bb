#include "cli.hpp"

#include "eca/config.hpp"
#include "eca/dataset.hpp"
#include "eca/error.hpp"
#include "eca/estimator.hpp"
#include "eca/evaluation.hpp"
#include "eca/handcrafted.hpp"
#include "eca/png_io.hpp"
#include "eca/pseudo_label.hpp"
#include "eca/strips.hpp"
#include "eca/synthetic.hpp"
#include "eca/training.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace eca::cli {
namespace {

struct Globals {
    std::string config_path;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    int threads = 0;
    bool quiet = false;
};

EcaConfig resolve_config(const Globals& g) {
    EcaConfig cfg = g.config_path.empty() ? config_default() : load_config_file(g.config_path);
    for (const auto& o : g.overrides) apply_config_override(cfg, o);
    cfg.validate();
    return cfg;
}

int thread_count(const Globals& g) {
    if (g.threads > 0) return g.threads;
    return std::max(1u, std::thread::hardware_concurrency());
}

bool is_png(const fs::path& p) {
    auto ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png";
}

// Files given directly plus the PNGs of any directories, in sorted order.
std::vector<fs::path> expand_inputs(const std::vector<std::string>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        const fs::path p(in);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && is_png(e.path())) found.push_back(e.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(p);
        }
    }
    return out;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << text;
    if (!out) throw IoError("write failed for '" + path + "'");
}

// Accepts an annotation CSV or a directory holding annotations.csv.
std::string annotation_file(const std::string& path) {
    if (fs::is_directory(path)) return (fs::path(path) / "annotations.csv").string();
    return path;
}

EstimatorVariant make_variant(const std::string& name, const std::string& model) {
    if (name == "learned" || (!model.empty() && name.empty())) {
        if (model.empty()) throw InvalidInput("the learned variant needs --model");
        return learned_variant_from_file(model);
    }
    if (name.empty() || name == "handcrafted") return HandcraftedVariant{};
    throw InvalidInput("unknown variant '" + name + "' (expected handcrafted or learned)");
}

void put_pixel(ImageFrame& f, int x, int y, std::array<std::uint8_t, 3> c) {
    if (x >= 0 && y >= 0 && x < f.width() && y < f.height()) f.set_pixel(x, y, c[0], c[1], c[2]);
}

ImageFrame draw_overlay(const ImageFrame& frame, const EstimateTrace& trace) {
    ImageFrame out = frame;
    if (const auto* c = std::get_if<CircularArea>(&trace.area)) {
        const int steps = std::max(64, static_cast<int>(2.0 * std::numbers::pi * c->circle.r * 2.0));
        for (int i = 0; i < steps; ++i) {
            const double t = 2.0 * std::numbers::pi * i / steps;
            const int x = static_cast<int>(std::lround(c->circle.cx + c->circle.r * std::cos(t)));
            const int y = static_cast<int>(std::lround(c->circle.cy + c->circle.r * std::sin(t)));
            for (int d = -1; d <= 1; ++d) {
                put_pixel(out, x + d, y, {0, 255, 255});
                put_pixel(out, x, y + d, {0, 255, 255});
            }
        }
    }
    // Candidates from red (score 0) to green (score 1).
    for (const auto& cand : trace.candidates) {
        const double s = std::clamp(cand.score, 0.0, 1.0);
        const std::array<std::uint8_t, 3> col{static_cast<std::uint8_t>(std::lround(255 * (1 - s))),
                                              static_cast<std::uint8_t>(std::lround(255 * s)), 0};
        for (int dy = -3; dy <= 3; ++dy)
            for (int dx = -3; dx <= 3; ++dx)
                if (std::abs(dx) + std::abs(dy) <= 3) put_pixel(out, cand.x + dx, cand.y + dy, col);
    }
    return out;
}

// ---------------------------------------------------------------- infer

struct InferArgs {
    std::vector<std::string> inputs;
    std::string model;
    std::string variant;
    bool json_doc = false;
    std::string out_path;
    std::string overlay_dir;
};

int cmd_infer(const Globals& g, const InferArgs& a, std::ostream& out, std::ostream& err) {
    const EcaConfig cfg = resolve_config(g);
    const EstimatorVariant variant = make_variant(a.variant, a.model);
    const auto files = expand_inputs(a.inputs);
    if (files.empty()) throw InvalidInput("no input images");
    if (!a.overlay_dir.empty()) fs::create_directories(a.overlay_dir);

    std::vector<std::string> lines;
    bool failed = false;
    for (const auto& path : files) {
        try {
            const ImageFrame frame = read_png(path.string());
            const EstimateTrace trace = estimate_traced(frame, variant, cfg, g.seed);
            lines.push_back(prediction_to_json({path.stem().string(), frame.dims(), trace.area}));
            if (!a.overlay_dir.empty()) {
                write_png((fs::path(a.overlay_dir) / (path.stem().string() + "_overlay.png")).string(),
                          draw_overlay(frame, trace));
            }
        } catch (const InvalidInput& e) {
            err << "eca infer: " << path.string() << ": " << e.what() << "\n";
            failed = true;
        } catch (const IoError& e) {
            err << "eca infer: " << path.string() << ": " << e.what() << "\n";
            failed = true;
        }
    }

    std::string text;
    if (a.json_doc) {
        if (lines.size() == 1) {
            text = json::parse(lines[0]).dump(2) + "\n";
        } else {
            json arr = json::array();
            for (const auto& l : lines) arr.push_back(json::parse(l));
            text = arr.dump(2) + "\n";
        }
    } else {
        for (const auto& l : lines) text += l + "\n";
    }
    if (a.out_path.empty()) {
        out << text;
    } else {
        write_text(a.out_path, text);
    }
    return failed ? kInputError : kOk;
}

// ----------------------------------------------------------------- eval

struct EvalArgs {
    std::string annotations;
    std::string predictions;
    std::string report;
    std::string label = "handcrafted";
    bool per_sample = false;
};

int cmd_eval(const Globals& g, const EvalArgs& a, std::ostream& out, std::ostream& err) {
    const auto set = load_annotations(annotation_file(a.annotations));
    const auto preds = parse_predictions(read_text(a.predictions));

    std::map<std::string, FrameDims> dims;
    for (const auto& p : preds) dims[p.id] = p.dims;
    std::vector<TruthRecord> truths;
    for (const auto& row : set.rows) {
        FrameDims d{0, 0};
        if (auto it = dims.find(row.sample_id); it != dims.end()) {
            d = it->second;
        } else {
            const auto img = resolve_image_path(annotation_file(a.annotations), row);
            if (fs::exists(img)) d = read_png_dims(img);
        }
        truths.push_back({row.sample_id, row.area(), d});
    }
    std::vector<PredictionRecord> records;
    for (const auto& p : preds) records.push_back({p.id, p.area});

    const EvalReport report = evaluate_dataset(records, truths);
    if (!a.report.empty()) write_text(a.report, report.to_json() + "\n");
    if (a.per_sample) {
        for (const auto& s : report.per_sample)
            out << s.sample_id << "\t" << s.distance << "\t" << to_string(s.cls) << "\n";
    }
    out << report.to_markdown(a.label);
    if (!g.quiet) err << "eca eval: " << report.per_sample.size() << " samples\n";
    return kOk;
}

// ---------------------------------------------------------------- train

struct TrainArgs {
    std::string data;
    std::string val;
    std::string out;
    TrainConfig tc;
    std::string reduction = "mean";
    bool no_shuffle = false;
    bool crop_augment = true;
};

std::vector<TrainingSample> load_training_set(const std::string& path, const EcaConfig& cfg, const TrainConfig& tc,
                                              bool augment, bool quiet, std::ostream& err) {
    const std::string file = annotation_file(path);
    const auto set = load_annotations(file, true);
    for (const auto& w : set.warnings)
        if (!quiet) err << "eca train: " << w << "\n";
    std::vector<TrainingSample> samples;
    for (const auto& row : set.rows) {
        const ImageFrame frame = read_png(resolve_image_path(file, row));
        samples.push_back(make_training_sample(frame, row.circle, cfg, tc, row.sample_id));
        if (augment) {
            if (auto crop = crop_augment(row, frame)) {
                samples.push_back(make_training_sample(crop->frame, std::nullopt, cfg, tc, crop->annotation.sample_id));
            }
        }
    }
    return samples;
}

int cmd_train(const Globals& g, TrainArgs a, std::ostream& out, std::ostream& err) {
    const EcaConfig cfg = resolve_config(g);
    if (a.reduction == "mean") {
        a.tc.reduction = LossReduction::PixelMean;
    } else if (a.reduction == "rowsum") {
        a.tc.reduction = LossReduction::RowSum;
    } else {
        throw InvalidInput("--reduction must be mean or rowsum");
    }
    a.tc.shuffle = !a.no_shuffle;
    a.tc.seed = g.seed;
    a.tc.validate();

    const auto train_set = load_training_set(a.data, cfg, a.tc, a.crop_augment, g.quiet, err);
    const auto val_set = a.val.empty() ? std::vector<TrainingSample>{}
                                       : load_training_set(a.val, cfg, a.tc, false, g.quiet, err);
    if (!g.quiet) err << "eca train: " << train_set.size() << " training, " << val_set.size() << " validation samples\n";

    const auto result = train(EdgeNet::initialized(g.seed), train_set, val_set, a.tc, [&](const EpochStats& s) {
        if (!g.quiet) err << "epoch " << s.epoch << "  train " << s.train_loss << "  val " << s.val_loss << "\n";
    });
    save_weights_file(result.net, a.out);
    json summary{{"out", a.out},
                 {"best_epoch", result.best_epoch},
                 {"best_val_loss", result.best_val_loss},
                 {"epochs_run", result.history.size()},
                 {"stopped_early", result.stopped_early}};
    out << summary.dump() << "\n";
    return kOk;
}

// --------------------------------------------------------- pseudo-label

struct PseudoArgs {
    std::string dir;
    std::string out;
    double fps = 0.0;
    double interval = 2.0;
    std::string source = "Synthetic";
    int video_no = 0;
};

int cmd_pseudo(const Globals& g, const PseudoArgs& a, std::ostream& out, std::ostream& err) {
    PseudoLabelOptions opts;
    opts.config = resolve_config(g);
    opts.seed = g.seed;
    if (a.fps > 0.0) opts.fps = a.fps;
    opts.interval_seconds = a.interval;
    opts.source = parse_data_source(a.source);
    opts.video_no = a.video_no;
    opts.threads = thread_count(g);
    const auto result = pseudo_label(a.dir, opts);
    for (const auto& line : result.log) err << "eca pseudo-label: " << line << "\n";
    const std::string dest = a.out.empty() ? (fs::path(a.dir) / "annotations.csv").string() : a.out;
    save_annotations(result.rows, dest);
    if (!g.quiet) out << result.rows.size() << " rows written to " << dest << "\n";
    return kOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    int count = 10;
    bool adversarial = false;
    std::string out;
    int width = 640;
    int height = 480;
};

int cmd_synth(const Globals& g, const SynthArgs& a, std::ostream& out, std::ostream&) {
    if (a.count < 0) throw InvalidInput("--count must be >= 0");
    if (a.width < 8 || a.height < 14) throw InvalidInput("synthetic frames must be at least 8x14");
    fs::create_directories(a.out);
    std::vector<EcaAnnotation> rows;
    for (int i = 0; i < a.count; ++i) {
        const SyntheticCase kind =
            a.adversarial ? kAllSyntheticCases[std::size_t(i) % kAllSyntheticCases.size()] : SyntheticCase::Clean;
        const std::uint64_t seed = g.seed * 1000003ULL + std::uint64_t(i);
        char id[64];
        std::snprintf(id, sizeof id, "synth_%05d", i);
        auto sample = render_synthetic(random_spec(kind, {a.width, a.height}, seed), seed, id);
        sample.annotation.frame_no = i;
        write_png((fs::path(a.out) / sample.annotation.image_path).string(), sample.frame);
        rows.push_back(sample.annotation);
    }
    const auto csv = (fs::path(a.out) / "annotations.csv").string();
    save_annotations(rows, csv);
    if (!g.quiet) out << rows.size() << " frames written to " << a.out << "\n";
    return kOk;
}

// --------------------------------------------------------------- strips

struct StripsArgs {
    int height = 0;
    int count = 0;
    double alpha = 0.0;
    std::string image;
};

int cmd_strips(const Globals& g, const StripsArgs& a, std::ostream& out, std::ostream&) {
    const EcaConfig cfg = resolve_config(g);
    int h = a.height;
    if (!a.image.empty()) h = read_png_dims(a.image).height;
    if (h <= 0) throw InvalidInput("give --height or an image");
    const int n = a.count > 0 ? a.count : cfg.strip_count;
    const double alpha = a.alpha > 0.0 ? a.alpha : cfg.alpha;
    for (int row : strip_heights(h, n, alpha)) out << row << "\n";
    return kOk;
}

// --------------------------------------------------------- debug-scores

struct DebugArgs {
    std::string image;
    int strip = -1;
    int row = -1;
    std::string variant;
    std::string model;
    bool json_out = false;
};

int cmd_debug(const Globals& g, const DebugArgs& a, std::ostream& out, std::ostream&) {
    const EcaConfig cfg = resolve_config(g);
    const ImageFrame frame = read_png(a.image);
    require_pipeline_frame(frame);
    const EstimatorVariant variant = make_variant(a.variant, a.model);
    const auto all_rows = strip_heights(frame.height(), cfg.strip_count, cfg.alpha);
    std::vector<int> rows;
    if (a.row >= 0) {
        rows.push_back(a.row);
    } else if (a.strip >= 0) {
        if (a.strip >= static_cast<int>(all_rows.size())) {
            throw InvalidInput("--strip must be below " + std::to_string(all_rows.size()));
        }
        rows.push_back(all_rows[a.strip]);
    } else {
        rows = all_rows;
    }
    json doc = json::array();
    if (!a.json_out) out << "row,x,score,best\n";
    for (int row : rows) {
        StripScoreRow scored;
        if (const auto* l = std::get_if<LearnedVariant>(&variant)) {
            scored = score_strip_learned(*l->net, frame, row);
        } else {
            scored = score_strip(extract_strip(frame, row), frame.dims(), cfg);
        }
        if (a.json_out) {
            auto cand = [](const EdgeCandidate& c) { return json{{"x", c.x}, {"y", c.y}, {"score", c.score}}; };
            doc.push_back({{"row", row},
                           {"left_best", cand(scored.left_best)},
                           {"right_best", cand(scored.right_best)},
                           {"scores", scored.scores}});
            continue;
        }
        for (int x = 0; x < static_cast<int>(scored.scores.size()); ++x) {
            const char* tag = x == scored.left_best.x ? "left" : x == scored.right_best.x ? "right" : "";
            out << row << ',' << x << ',' << scored.scores[x] << ',' << tag << "\n";
        }
    }
    if (a.json_out) out << doc.dump() << "\n";
    return kOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
    std::string variant = "handcrafted";
    std::string model;
    int frames = 100;
    int width = 1920;
    int height = 1080;
    std::string image;
};

int cmd_bench(const Globals& g, const BenchArgs& a, std::ostream& out, std::ostream&) {
    const EcaConfig cfg = resolve_config(g);
    const EstimatorVariant variant = make_variant(a.variant, a.model);
    if (a.frames < 1) throw InvalidInput("--frames must be >= 1");
    ImageFrame frame = a.image.empty()
                           ? render_synthetic(random_spec(SyntheticCase::Clean, {a.width, a.height}, g.seed), g.seed).frame
                           : read_png(a.image);
    estimate(frame, variant, cfg, g.seed); // warm-up
    std::vector<double> ms;
    ms.reserve(a.frames);
    for (int i = 0; i < a.frames; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        const auto area = estimate(frame, variant, cfg, g.seed);
        const auto t1 = std::chrono::steady_clock::now();
        (void)area;
        ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    std::vector<double> sorted = ms;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (double v : ms) mean += v;
    mean /= double(ms.size());
    const std::size_t p99 = std::min(sorted.size() - 1, static_cast<std::size_t>(std::ceil(0.99 * sorted.size())) - 1);
    json doc{{"variant", std::holds_alternative<LearnedVariant>(variant) ? "learned" : "handcrafted"},
             {"width", frame.width()},
             {"height", frame.height()},
             {"frames", a.frames},
             {"min_ms", sorted.front()},
             {"mean_ms", mean},
             {"p99_ms", sorted[p99]}};
    out << doc.dump() << "\n";
    return kOk;
}

} // namespace

std::string prediction_to_json(const PredictionLine& p) {
    json j{{"id", p.id}, {"width", p.dims.width}, {"height", p.dims.height}};
    if (const auto* c = std::get_if<CircularArea>(&p.area)) {
        j["area"] = "circle";
        j["cx"] = c->circle.cx;
        j["cy"] = c->circle.cy;
        j["r"] = c->circle.r;
        j["score"] = c->score;
    } else {
        j["area"] = "full";
    }
    return j.dump();
}

std::vector<PredictionLine> parse_predictions(const std::string& text) {
    auto from_json = [](const json& j) {
        try {
            PredictionLine p;
            p.id = j.at("id").get<std::string>();
            p.dims = {j.at("width").get<int>(), j.at("height").get<int>()};
            const auto kind = j.at("area").get<std::string>();
            if (kind == "circle") {
                const Circle c{j.at("cx").get<double>(), j.at("cy").get<double>(), j.at("r").get<double>()};
                if (!c.valid()) throw InvalidInput("invalid circle for '" + p.id + "'");
                p.area = CircularArea{c, j.value("score", 0.0)};
            } else if (kind == "full") {
                p.area = FullFrame{};
            } else {
                throw InvalidInput("unknown area type '" + kind + "'");
            }
            return p;
        } catch (const json::exception& e) {
            throw InvalidInput(std::string("malformed prediction: ") + e.what());
        }
    };
    std::vector<PredictionLine> out;
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return out;
    if (text[first] == '[') {
        try {
            for (const auto& j : json::parse(text)) out.push_back(from_json(j));
        } catch (const json::parse_error& e) {
            throw InvalidInput(std::string("malformed prediction file: ") + e.what());
        }
        return out;
    }
    // JSONL; a pretty-printed single object also parses as one document.
    try {
        const json whole = json::parse(text);
        out.push_back(from_json(whole));
        return out;
    } catch (const json::parse_error&) {
    }
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(from_json(json::parse(line)));
        } catch (const json::parse_error& e) {
            throw InvalidInput("prediction line " + std::to_string(n) + ": " + e.what());
        } catch (const InvalidInput& e) {
            throw InvalidInput("prediction line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Endoscopic content area estimation", "eca"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    Globals g;
    app.add_option("--config", g.config_path, "Configuration file (name = value lines)");
    app.add_option("--set", g.overrides, "Override one config value, name=value")->take_all();
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--threads", g.threads, "Worker threads (0 = logical cores)");
    app.add_flag("--quiet", g.quiet, "Suppress progress messages");

    InferArgs infer;
    auto* c_infer = app.add_subcommand("infer", "Estimate the content area of PNG frames");
    c_infer->add_option("inputs", infer.inputs, "PNG files or directories")->required();
    c_infer->add_option("--model", infer.model, "EdgeNet weights; selects the learned variant");
    c_infer->add_option("--variant", infer.variant, "handcrafted or learned");
    c_infer->add_flag("--json", infer.json_doc, "Write one JSON document instead of JSON lines");
    c_infer->add_option("--out", infer.out_path, "Write predictions here instead of stdout");
    c_infer->add_option("--overlay", infer.overlay_dir, "Directory for overlay PNGs");

    EvalArgs eval;
    auto* c_eval = app.add_subcommand("eval", "Score predictions against annotations");
    c_eval->add_option("--annotations", eval.annotations, "Annotation CSV or its directory")->required();
    c_eval->add_option("--predictions", eval.predictions, "Predictions from eca infer")->required();
    c_eval->add_option("--report", eval.report, "Write the full JSON report here");
    c_eval->add_option("--label", eval.label, "Row label of the Markdown table");
    c_eval->add_flag("--per-sample", eval.per_sample, "Print each sample's distance");

    TrainArgs tr;
    auto* c_train = app.add_subcommand("train", "Train the EdgeNet scorer");
    c_train->add_option("--data", tr.data, "Training annotations (CSV or directory)")->required();
    c_train->add_option("--val", tr.val, "Validation annotations (CSV or directory)");
    c_train->add_option("--out", tr.out, "Output weights file")->required();
    c_train->add_option("--lr", tr.tc.learning_rate, "Learning rate");
    c_train->add_option("--batch", tr.tc.batch_size, "Batch size");
    c_train->add_option("--epochs", tr.tc.max_epochs, "Maximum epochs");
    c_train->add_option("--patience", tr.tc.early_stop_patience, "Early-stopping patience in epochs");
    c_train->add_option("--strips-per-sample", tr.tc.strips_per_sample, "Strips drawn per sample per epoch (0 = all)");
    c_train->add_option("--sigma", tr.tc.target_blur_sigma, "Target blur sigma");
    c_train->add_option("--reduction", tr.reduction, "Loss reduction: mean or rowsum");
    c_train->add_flag("--full-image", tr.tc.full_image, "Train on whole frames instead of strips");
    c_train->add_flag("--no-shuffle", tr.no_shuffle, "Keep sample order fixed");
    c_train->add_flag("!--no-crop", tr.crop_augment, "Skip the crop augmentation");

    PseudoArgs ps;
    auto* c_pseudo = app.add_subcommand("pseudo-label", "Label a frame directory with the handcrafted variant");
    c_pseudo->add_option("dir", ps.dir, "Directory of PNG frames")->required();
    c_pseudo->add_option("--out", ps.out, "Annotation CSV (default dir/annotations.csv)");
    c_pseudo->add_option("--fps", ps.fps, "Frame rate of the sequence; enables interval sampling");
    c_pseudo->add_option("--interval", ps.interval, "Seconds between labelled frames");
    c_pseudo->add_option("--source", ps.source, "Cholec80, RobustMIS or Synthetic");
    c_pseudo->add_option("--video", ps.video_no, "Video number");

    SynthArgs sy;
    auto* c_synth = app.add_subcommand("synth", "Render synthetic frames with ground truth");
    c_synth->add_option("--count", sy.count, "Number of frames");
    c_synth->add_flag("--adversarial", sy.adversarial, "Cycle through all artifact cases");
    c_synth->add_option("--out", sy.out, "Output directory")->required();
    c_synth->add_option("--width", sy.width, "Frame width");
    c_synth->add_option("--height", sy.height, "Frame height");

    StripsArgs st;
    auto* c_strips = app.add_subcommand("strips", "Print strip rows for a frame height");
    c_strips->add_option("--height", st.height, "Frame height");
    c_strips->add_option("--count", st.count, "Strip count (default from config)");
    c_strips->add_option("--alpha", st.alpha, "Sigmoid steepness (default from config)");
    c_strips->add_option("image", st.image, "Take the height from this PNG");

    DebugArgs dbg;
    auto* c_debug = app.add_subcommand("debug-scores", "Dump per-pixel strip scores as CSV");
    c_debug->add_option("image", dbg.image, "PNG frame")->required();
    c_debug->add_option("--strip", dbg.strip, "Strip index (default: all strips)");
    c_debug->add_option("--row", dbg.row, "Explicit centre row");
    c_debug->add_flag("--json", dbg.json_out, "JSON instead of CSV");
    c_debug->add_option("--variant", dbg.variant, "handcrafted or learned");
    c_debug->add_option("--model", dbg.model, "EdgeNet weights");

    BenchArgs bn;
    auto* c_bench = app.add_subcommand("bench", "Per-frame latency of the estimator");
    c_bench->add_option("--variant", bn.variant, "handcrafted or learned");
    c_bench->add_option("--model", bn.model, "EdgeNet weights");
    c_bench->add_option("--frames", bn.frames, "Timed runs");
    c_bench->add_option("--width", bn.width, "Synthetic frame width");
    c_bench->add_option("--height", bn.height, "Synthetic frame height");
    c_bench->add_option("--image", bn.image, "Time this PNG instead of a synthetic frame");

    std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
    std::reverse(rev.begin(), rev.end());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "eca: " << e.what() << "\n";
        if (const auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) {
            err << sub->help();
        }
        return kInputError;
    }

    try {
        if (c_infer->parsed()) return cmd_infer(g, infer, out, err);
        if (c_eval->parsed()) return cmd_eval(g, eval, out, err);
        if (c_train->parsed()) return cmd_train(g, tr, out, err);
        if (c_pseudo->parsed()) return cmd_pseudo(g, ps, out, err);
        if (c_synth->parsed()) return cmd_synth(g, sy, out, err);
        if (c_strips->parsed()) return cmd_strips(g, st, out, err);
        if (c_debug->parsed()) return cmd_debug(g, dbg, out, err);
        if (c_bench->parsed()) return cmd_bench(g, bn, out, err);
    } catch (const InvalidInput& e) {
        err << "eca: " << e.what() << "\n";
        return kInputError;
    } catch (const ConfigError& e) {
        err << "eca: " << e.what() << "\n";
        return kInputError;
    } catch (const IoError& e) {
        err << "eca: " << e.what() << "\n";
        return kInputError;
    } catch (const CorruptWeights& e) {
        err << "eca: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        err << "eca: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        err << "eca: internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kInternalError;
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace eca::cli
