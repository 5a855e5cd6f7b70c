#include "clgd/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace clgd {
namespace {

[[noreturn]] void fail_at(const std::string& path, std::size_t line,
                          const std::string& what) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

bool is_blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

bool is_comment(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return false;
}

// istream extraction rejects "nan"/"inf" tokens and mangles overflow, so
// coordinates go through strtod; the non-finite check can then say what was
// actually wrong with the value.
bool next_double(std::istringstream& in, double& out) {
  std::string token;
  if (!(in >> token)) return false;
  const char* begin = token.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end != begin && end == begin + token.size();
}

Vec3 parse_point(const std::string& path, std::size_t line_no,
                 const std::string& line) {
  std::istringstream in(line);
  Vec3 p;
  if (!next_double(in, p.x()) || !next_double(in, p.y()) ||
      !next_double(in, p.z())) {
    fail_at(path, line_no, "expected 3 coordinates");
  }
  std::string rest;
  if (in >> rest) {
    fail_at(path, line_no, "expected 3 coordinates, found extra data");
  }
  if (!p.allFinite()) {
    fail_at(path, line_no, "non-finite coordinate");
  }
  return p;
}

PointCloud load_xyz(const std::string& path, std::istream& in) {
  PointCloud cloud;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line) || is_comment(line)) continue;
    cloud.points.push_back(parse_point(path, line_no, line));
  }
  if (cloud.empty()) {
    throw std::runtime_error(path + ": no points found");
  }
  return cloud;
}

struct PlyElement {
  std::string name;
  std::size_t count = 0;
  std::vector<std::string> properties;
  bool has_list = false;
};

PointCloud load_ply(const std::string& path, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  auto next_line = [&](const char* context) {
    if (!std::getline(in, line)) {
      fail_at(path, line_no + 1, std::string("unexpected end of file in ") +
                                     context);
    }
    ++line_no;
  };

  next_line("header");
  if (line != "ply" && line != "ply\r") {
    fail_at(path, line_no, "not a PLY file (missing 'ply' magic)");
  }

  std::vector<PlyElement> elements;
  bool header_done = false;
  bool format_seen = false;
  while (!header_done) {
    next_line("header");
    std::istringstream hdr(line);
    std::string keyword;
    hdr >> keyword;
    if (keyword == "comment" || keyword == "obj_info" || keyword.empty()) {
      continue;
    }
    if (keyword == "format") {
      std::string kind;
      hdr >> kind;
      if (kind != "ascii") {
        fail_at(path, line_no, "only ascii PLY is supported");
      }
      format_seen = true;
    } else if (keyword == "element") {
      PlyElement element;
      if (!(hdr >> element.name >> element.count)) {
        fail_at(path, line_no, "malformed element declaration");
      }
      elements.push_back(element);
    } else if (keyword == "property") {
      if (elements.empty()) {
        fail_at(path, line_no, "property before any element");
      }
      std::string type;
      hdr >> type;
      if (type == "list") {
        elements.back().has_list = true;
        continue;
      }
      std::string name;
      if (!(hdr >> name)) {
        fail_at(path, line_no, "malformed property declaration");
      }
      elements.back().properties.push_back(name);
    } else if (keyword == "end_header") {
      header_done = true;
    } else {
      fail_at(path, line_no, "unknown header keyword '" + keyword + "'");
    }
  }
  if (!format_seen) {
    fail_at(path, line_no, "header ends without a format declaration");
  }

  PointCloud cloud;
  bool vertex_seen = false;
  for (const PlyElement& element : elements) {
    const bool is_vertex = element.name == "vertex";
    if (is_vertex) {
      vertex_seen = true;
      if (element.has_list) {
        fail_at(path, line_no,
                "list properties in the vertex element are not supported");
      }
    }
    std::ptrdiff_t ix = -1, iy = -1, iz = -1;
    if (is_vertex) {
      for (std::size_t i = 0; i < element.properties.size(); ++i) {
        if (element.properties[i] == "x") ix = static_cast<std::ptrdiff_t>(i);
        if (element.properties[i] == "y") iy = static_cast<std::ptrdiff_t>(i);
        if (element.properties[i] == "z") iz = static_cast<std::ptrdiff_t>(i);
      }
      if (ix < 0 || iy < 0 || iz < 0) {
        fail_at(path, line_no, "vertex element lacks x/y/z properties");
      }
    }
    for (std::size_t row = 0; row < element.count; ++row) {
      next_line(("element '" + element.name + "'").c_str());
      if (!is_vertex) continue;
      std::istringstream data(line);
      std::vector<double> values(element.properties.size());
      for (double& v : values) {
        if (!next_double(data, v)) {
          fail_at(path, line_no, "malformed vertex row");
        }
      }
      const Vec3 p(values[static_cast<std::size_t>(ix)],
                   values[static_cast<std::size_t>(iy)],
                   values[static_cast<std::size_t>(iz)]);
      if (!p.allFinite()) {
        fail_at(path, line_no, "non-finite coordinate");
      }
      cloud.points.push_back(p);
    }
  }
  if (!vertex_seen) {
    fail_at(path, line_no, "no vertex element in header");
  }
  if (cloud.empty()) {
    throw std::runtime_error(path + ": no points found");
  }
  return cloud;
}

CloudFormat detect_format(const std::string& path, CloudFormat format) {
  if (format != CloudFormat::kAuto) return format;
  const std::size_t dot = path.find_last_of('.');
  if (dot != std::string::npos && path.substr(dot) == ".ply") {
    return CloudFormat::kPly;
  }
  return CloudFormat::kXyz;
}

void write_points(std::FILE* out, const PointCloud& cloud) {
  for (const Vec3& p : cloud.points) {
    std::fprintf(out, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
  }
}

}  // namespace

CloudFormat cloud_format_from_name(const std::string& name) {
  if (name == "auto") return CloudFormat::kAuto;
  if (name == "xyz") return CloudFormat::kXyz;
  if (name == "ply") return CloudFormat::kPly;
  throw std::invalid_argument("unknown cloud format: " + name +
                              " (expected auto, xyz, or ply)");
}

PointCloud load_cloud(const std::string& path, CloudFormat format) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path + " for reading");
  }
  if (detect_format(path, format) == CloudFormat::kPly) {
    return load_ply(path, in);
  }
  return load_xyz(path, in);
}

void save_cloud(const PointCloud& cloud, const std::string& path,
                CloudFormat format) {
  if (cloud.empty()) {
    throw std::invalid_argument("refusing to save an empty cloud: " + path);
  }
  cloud.validate();
  std::FILE* out = std::fopen(path.c_str(), "w");
  if (out == nullptr) {
    throw std::runtime_error("cannot open " + path + " for writing");
  }
  if (detect_format(path, format) == CloudFormat::kPly) {
    std::fprintf(out,
                 "ply\nformat ascii 1.0\nelement vertex %zu\n"
                 "property double x\nproperty double y\nproperty double z\n"
                 "end_header\n",
                 cloud.size());
  }
  write_points(out, cloud);
  if (std::fclose(out) != 0) {
    throw std::runtime_error("error while writing " + path);
  }
}

}  // namespace clgd
