#pragma once

#include "eca/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace eca::cli {

enum ExitCode { kOk = 0, kInputError = 1, kInternalError = 2 };

/// Runs the `eca` command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

/// One prediction as written by `eca infer`.
struct PredictionLine {
    std::string id;
    FrameDims dims;
    ContentArea area;
};

std::string prediction_to_json(const PredictionLine& p);
/// Reads JSONL, a JSON array, or a single JSON object of predictions.
std::vector<PredictionLine> parse_predictions(const std::string& text);

} // namespace eca::cli
