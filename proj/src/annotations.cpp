#include "eca/dataset.hpp"

#include "eca/error.hpp"
#include "format_util.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace eca {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(std::move(cur));
    return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line_no, const char* what) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw InvalidInput("annotations line " + std::to_string(line_no) + ": invalid " + what + " '" + s + "'");
    }
    return v;
}

void check_field(const std::string& s, const char* what) {
    if (s.find_first_of(",\n\r") != std::string::npos) {
        throw InvalidInput(std::string("annotation ") + what + " may not contain commas or newlines: '" + s + "'");
    }
}

} // namespace

const char* to_string(DataSource s) {
    switch (s) {
    case DataSource::Cholec80: return "Cholec80";
    case DataSource::RobustMIS: return "RobustMIS";
    case DataSource::Synthetic: return "Synthetic";
    }
    return "Synthetic";
}

DataSource parse_data_source(const std::string& s) {
    if (s == "Cholec80") return DataSource::Cholec80;
    if (s == "RobustMIS") return DataSource::RobustMIS;
    if (s == "Synthetic") return DataSource::Synthetic;
    throw InvalidInput("unknown data source '" + s + "'");
}

ContentArea EcaAnnotation::area() const {
    if (circle) return CircularArea{*circle, 0.0};
    return FullFrame{};
}

bool EcaAnnotation::operator==(const EcaAnnotation& o) const {
    auto same_circle = [](const std::optional<Circle>& a, const std::optional<Circle>& b) {
        if (a.has_value() != b.has_value()) return false;
        return !a || (a->cx == b->cx && a->cy == b->cy && a->r == b->r);
    };
    return sample_id == o.sample_id && source == o.source && video_no == o.video_no && frame_no == o.frame_no &&
           same_circle(circle, o.circle) && image_path == o.image_path;
}

std::vector<EcaAnnotation> parse_annotations_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<EcaAnnotation> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kAnnotationHeader) {
                throw InvalidInput("annotations line " + std::to_string(line_no) + ": expected header '" +
                                   kAnnotationHeader + "'");
            }
            header_seen = true;
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 9) {
            throw InvalidInput("annotations line " + std::to_string(line_no) + ": expected 9 fields, got " +
                               std::to_string(f.size()));
        }
        EcaAnnotation a;
        a.sample_id = f[0];
        if (a.sample_id.empty()) throw InvalidInput("annotations line " + std::to_string(line_no) + ": empty sample_id");
        try {
            a.source = parse_data_source(f[1]);
        } catch (const InvalidInput& e) {
            throw InvalidInput("annotations line " + std::to_string(line_no) + ": " + e.what());
        }
        a.video_no = parse_number<int>(f[2], line_no, "video_no");
        a.frame_no = parse_number<int>(f[3], line_no, "frame_no");
        if (f[4] == "circle") {
            Circle c{parse_number<double>(f[5], line_no, "cx"), parse_number<double>(f[6], line_no, "cy"),
                     parse_number<double>(f[7], line_no, "r")};
            if (!c.valid()) throw InvalidInput("annotations line " + std::to_string(line_no) + ": invalid circle");
            a.circle = c;
        } else if (f[4] == "full") {
            if (!f[5].empty() || !f[6].empty() || !f[7].empty()) {
                throw InvalidInput("annotations line " + std::to_string(line_no) + ": full-frame row has circle fields");
            }
        } else {
            throw InvalidInput("annotations line " + std::to_string(line_no) + ": unknown area_type '" + f[4] + "'");
        }
        a.image_path = f[8];
        rows.push_back(std::move(a));
    }
    if (!header_seen) throw InvalidInput("annotations: missing header");
    return rows;
}

std::string format_annotations_csv(const std::vector<EcaAnnotation>& rows) {
    std::string out = kAnnotationHeader;
    out += '\n';
    for (const auto& a : rows) {
        check_field(a.sample_id, "sample_id");
        check_field(a.image_path, "image_path");
        out += a.sample_id + ',' + to_string(a.source) + ',' + std::to_string(a.video_no) + ',' +
               std::to_string(a.frame_no) + ',';
        if (a.circle) {
            out += "circle," + detail::format_double(a.circle->cx) + ',' + detail::format_double(a.circle->cy) + ',' +
                   detail::format_double(a.circle->r) + ',';
        } else {
            out += "full,,,,";
        }
        out += a.image_path;
        out += '\n';
    }
    return out;
}

AnnotationSet load_annotations(const std::string& path, bool check_images) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open annotations '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    AnnotationSet set;
    for (auto& row : parse_annotations_csv(ss.str())) {
        if (check_images && !std::filesystem::exists(resolve_image_path(path, row))) {
            ++set.skipped_missing;
            set.warnings.push_back("missing image for sample '" + row.sample_id + "': " + row.image_path);
            continue;
        }
        set.rows.push_back(std::move(row));
    }
    return set;
}

void save_annotations(const std::vector<EcaAnnotation>& rows, const std::string& path) {
    const std::string text = format_annotations_csv(rows);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write annotations '" + path + "'");
    out << text;
    if (!out) throw IoError("failed writing annotations '" + path + "'");
}

std::string resolve_image_path(const std::string& annotation_file, const EcaAnnotation& row) {
    const std::filesystem::path p(row.image_path);
    if (p.is_absolute()) return p.string();
    return (std::filesystem::path(annotation_file).parent_path() / p).string();
}

} // namespace eca
