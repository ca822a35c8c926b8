#include "graspkit/cornell.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "graspkit/errors.hpp"
#include "graspkit/polygon.hpp"

namespace graspkit {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Accepts finite numbers and NaN; rejects inf and trailing junk.
bool parse_coord(std::string_view tok, double& out) {
  if (tok == "NaN" || tok == "nan" || tok == "NAN" || tok == "-nan") {
    out = std::nan("");
    return true;
  }
  if (!tok.empty() && tok.front() == '+') tok.remove_prefix(1);
  const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && end == tok.data() + tok.size() && std::isfinite(out);
}

}  // namespace

ParsedRects parse_cornell_rects(std::string_view text) {
  ParsedRects result;
  std::array<Vec2, 4> corners{};
  std::size_t filled = 0;
  std::size_t first_line = 0;
  bool has_nan = false;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty()) continue;

    std::string_view toks[2];
    std::size_t n = 0;
    while (!line.empty()) {
      std::size_t end = 0;
      while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
      if (n == 2) throw LineError(ErrorCode::kMalformedLine, line_no, "expected two numbers");
      toks[n++] = line.substr(0, end);
      line = trim(line.substr(end));
    }
    double x = 0.0, y = 0.0;
    if (n != 2 || !parse_coord(toks[0], x) || !parse_coord(toks[1], y)) {
      throw LineError(ErrorCode::kMalformedLine, line_no, "expected two numbers");
    }
    if (filled == 0) {
      first_line = line_no;
      has_nan = false;
    }
    has_nan = has_nan || std::isnan(x) || std::isnan(y);
    corners[filled++] = {x, y};
    if (filled < 4) continue;
    filled = 0;
    if (has_nan) {
      ++result.dropped_nan;
      continue;
    }
    GraspRect8 r{corners};
    if (std::abs(signed_area(r)) < 1e-12 || !is_convex(r.corners)) {
      throw LineError(ErrorCode::kDegeneratePolygon, first_line, "rectangle is degenerate or not convex");
    }
    result.rects.push_back(to_ccw(r));
  }
  if (filled != 0) {
    throw Error(ErrorCode::kDanglingCorners, std::to_string(filled) + " corner line(s) after the last rectangle");
  }
  return result;
}

AnnotationSet parse_cornell_annotations(std::string_view pos_text, std::string_view neg_text,
                                        std::string image_id) {
  AnnotationSet set;
  set.image_id = std::move(image_id);
  ParsedRects pos = parse_cornell_rects(pos_text);
  ParsedRects neg = parse_cornell_rects(neg_text);
  set.positives = std::move(pos.rects);
  set.negatives = std::move(neg.rects);
  set.dropped_nan = pos.dropped_nan + neg.dropped_nan;
  return set;
}

bool split_cornell_name(const std::string& filename, std::string& image_id, std::string& tag) {
  // pcd<digits>c<tag>.txt
  if (filename.size() < 9 || filename.rfind("pcd", 0) != 0 || !filename.ends_with(".txt")) return false;
  std::size_t i = 3;
  while (i < filename.size() && std::isdigit(static_cast<unsigned char>(filename[i]))) ++i;
  if (i == 3 || i >= filename.size() || filename[i] != 'c') return false;
  const std::size_t tag_end = filename.size() - 4;
  if (tag_end <= i + 1) return false;
  image_id = filename.substr(3, i - 3);
  tag = filename.substr(i + 1, tag_end - i - 1);
  return true;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

template <typename F>
auto with_path(const std::filesystem::path& path, F&& f) {
  try {
    return f();
  } catch (const LineError& e) {
    throw LineError(e.code(), e.line(), path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::vector<std::filesystem::path> sorted_files(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

}  // namespace

std::map<std::string, AnnotationSet> scan_cornell_dir(const std::filesystem::path& dir) {
  std::map<std::string, AnnotationSet> out;
  for (const auto& path : sorted_files(dir)) {
    std::string id, tag;
    if (!split_cornell_name(path.filename().string(), id, tag) || tag != "pos") continue;
    const auto neg_path = path.parent_path() / ("pcd" + id + "cneg.txt");
    const std::string pos_text = read_text_file(path);
    const std::string neg_text = std::filesystem::exists(neg_path) ? read_text_file(neg_path) : std::string();
    AnnotationSet set;
    set.image_id = id;
    ParsedRects pos = with_path(path, [&] { return parse_cornell_rects(pos_text); });
    ParsedRects neg = with_path(neg_path, [&] { return parse_cornell_rects(neg_text); });
    set.positives = std::move(pos.rects);
    set.negatives = std::move(neg.rects);
    set.dropped_nan = pos.dropped_nan + neg.dropped_nan;
    out.emplace(id, std::move(set));
  }
  return out;
}

std::map<std::string, GraspRect8> load_prediction_dir(const std::filesystem::path& dir) {
  std::map<std::string, GraspRect8> out;
  for (const auto& path : sorted_files(dir)) {
    std::string id, tag;
    if (!split_cornell_name(path.filename().string(), id, tag) || tag == "neg") continue;
    if (out.count(id)) {
      throw Error(ErrorCode::kInvalidArgument, path.string() + ": second prediction file for image " + id);
    }
    const std::string text = read_text_file(path);
    ParsedRects parsed = with_path(path, [&] { return parse_cornell_rects(text); });
    if (parsed.rects.empty()) throw Error(ErrorCode::kEmptyTruthSet, path.string() + ": no rectangle");
    out.emplace(id, parsed.rects.front());
  }
  return out;
}

std::string format_cornell_rects(const std::vector<GraspRect8>& rects) {
  std::string out;
  char buf[64];
  for (const GraspRect8& r : rects) {
    for (const Vec2& c : r.corners) {
      std::snprintf(buf, sizeof buf, "%.9g %.9g\n", c.x, c.y);
      out += buf;
    }
  }
  return out;
}

}  // namespace graspkit
