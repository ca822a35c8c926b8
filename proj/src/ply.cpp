#include "graspkit/ply.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <vector>

#include "graspkit/cornell.hpp"
#include "graspkit/errors.hpp"

namespace graspkit {
namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

class LineCursor {
 public:
  explicit LineCursor(std::string_view text) : text_(text) {}
  bool next(std::string_view& line) {
    if (text_.empty()) return false;
    const std::size_t nl = text_.find('\n');
    line = text_.substr(0, nl);
    text_.remove_prefix(nl == std::string_view::npos ? text_.size() : nl + 1);
    ++line_no_;
    return true;
  }
  std::size_t line_no() const { return line_no_; }

 private:
  std::string_view text_;
  std::size_t line_no_ = 0;
};

const char* const kScalarTypes[] = {"char",  "uchar", "short",   "ushort",  "int",   "uint",
                                    "float", "double", "int8",   "uint8",   "int16", "uint16",
                                    "int32", "uint32", "float32", "float64"};

bool is_scalar_type(std::string_view t) {
  for (const char* s : kScalarTypes)
    if (t == s) return true;
  return false;
}

}  // namespace

PointCloud parse_ply(std::string_view text) {
  LineCursor cur(text);
  std::string_view line;
  if (!cur.next(line) || split_ws(line) != std::vector<std::string_view>{"ply"}) {
    throw Error(ErrorCode::kBadHeader, "missing 'ply' magic line");
  }
  std::optional<std::size_t> vertex_count;
  bool in_vertex = false, later_elements = false, format_seen = false;
  std::vector<std::string> props;
  while (true) {
    if (!cur.next(line)) throw Error(ErrorCode::kBadHeader, "header has no end_header");
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0] == "comment" || tok[0] == "obj_info") continue;
    if (tok[0] == "end_header") break;
    if (tok[0] == "format") {
      if (tok.size() != 3 || tok[1] != "ascii") throw Error(ErrorCode::kBadHeader, "only ascii PLY is supported");
      format_seen = true;
    } else if (tok[0] == "element") {
      if (tok.size() != 3) throw Error(ErrorCode::kBadHeader, "line " + std::to_string(cur.line_no()));
      if (tok[1] == "vertex") {
        if (vertex_count) throw Error(ErrorCode::kBadHeader, "duplicate vertex element");
        if (later_elements) throw Error(ErrorCode::kBadHeader, "vertex element must come first");
        std::size_t n = 0;
        const auto [end, ec] = std::from_chars(tok[2].data(), tok[2].data() + tok[2].size(), n);
        if (ec != std::errc() || end != tok[2].data() + tok[2].size()) {
          throw Error(ErrorCode::kBadHeader, "bad vertex count");
        }
        vertex_count = n;
        in_vertex = true;
      } else {
        later_elements = later_elements || vertex_count.has_value();
        if (!vertex_count) throw Error(ErrorCode::kBadHeader, "vertex element must come first");
        in_vertex = false;
      }
    } else if (tok[0] == "property") {
      if (!in_vertex) continue;
      if (tok.size() == 3 && is_scalar_type(tok[1])) {
        props.emplace_back(tok[2]);
      } else {
        throw Error(ErrorCode::kBadHeader, "unsupported vertex property at line " + std::to_string(cur.line_no()));
      }
    } else {
      throw Error(ErrorCode::kBadHeader, "unexpected header line " + std::to_string(cur.line_no()));
    }
  }
  if (!format_seen) throw Error(ErrorCode::kBadHeader, "missing format line");
  if (!vertex_count) throw Error(ErrorCode::kBadHeader, "missing vertex element");

  auto find = [&](const char* name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < props.size(); ++i)
      if (props[i] == name) return i;
    return std::nullopt;
  };
  const auto ix = find("x"), iy = find("y"), iz = find("z");
  if (!ix || !iy || !iz) throw Error(ErrorCode::kBadHeader, "vertex element lacks x, y or z");
  const auto inx = find("nx"), iny = find("ny"), inz = find("nz");
  const bool with_normals = inx && iny && inz;

  std::vector<Vec3> points, normals;
  points.reserve(*vertex_count);
  if (with_normals) normals.reserve(*vertex_count);
  std::vector<double> values(props.size());
  while (points.size() < *vertex_count) {
    if (!cur.next(line)) {
      throw Error(ErrorCode::kCountMismatch, "header declares " + std::to_string(*vertex_count) +
                                                 " vertices, body has " + std::to_string(points.size()));
    }
    const auto tok = split_ws(line);
    if (tok.empty()) continue;
    if (tok.size() != props.size()) {
      throw LineError(ErrorCode::kMalformedLine, cur.line_no(),
                      "expected " + std::to_string(props.size()) + " values");
    }
    for (std::size_t i = 0; i < tok.size(); ++i) {
      const auto [end, ec] = std::from_chars(tok[i].data(), tok[i].data() + tok[i].size(), values[i]);
      if (ec != std::errc() || end != tok[i].data() + tok[i].size()) {
        throw LineError(ErrorCode::kMalformedLine, cur.line_no(), "bad number '" + std::string(tok[i]) + "'");
      }
    }
    points.push_back({values[*ix], values[*iy], values[*iz]});
    if (with_normals) normals.push_back({values[*inx], values[*iny], values[*inz]});
  }
  if (!later_elements) {
    while (cur.next(line)) {
      if (!split_ws(line).empty()) {
        throw Error(ErrorCode::kCountMismatch,
                    "header declares " + std::to_string(*vertex_count) + " vertices, body has more");
      }
    }
  }
  return PointCloud(std::move(points), std::move(normals));
}

PointCloud read_ply(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_ply(text);
  } catch (const LineError& e) {
    throw LineError(e.code(), e.line(), path.string() + ": " + e.what());
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string format_ply(const PointCloud& cloud) {
  std::string out = "ply\nformat ascii 1.0\nelement vertex " + std::to_string(cloud.size()) +
                    "\nproperty float x\nproperty float y\nproperty float z\n";
  if (cloud.has_normals()) out += "property float nx\nproperty float ny\nproperty float nz\n";
  out += "end_header\n";
  char buf[160];
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3 p = cloud.point(i);
    if (cloud.has_normals()) {
      const Vec3 n = cloud.normals()[i];
      std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g %.9g %.9g %.9g\n", p.x, p.y, p.z, n.x, n.y, n.z);
    } else {
      std::snprintf(buf, sizeof buf, "%.9g %.9g %.9g\n", p.x, p.y, p.z);
    }
    out += buf;
  }
  return out;
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << format_ply(cloud);
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace graspkit
