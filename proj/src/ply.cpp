#include "handover/ply.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace handover {

namespace {

enum class Scalar { kI8, kU8, kI16, kU16, kI32, kU32, kF32, kF64 };

struct Property {
  std::string name;
  Scalar type = Scalar::kF32;
  bool is_list = false;
  Scalar count_type = Scalar::kU8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> props;
};

[[noreturn]] void malformed(const std::string& what) {
  fail(ErrorCode::kMalformedHeader, "PLY header: " + what);
}

Scalar parse_scalar(const std::string& t) {
  if (t == "char" || t == "int8") return Scalar::kI8;
  if (t == "uchar" || t == "uint8") return Scalar::kU8;
  if (t == "short" || t == "int16") return Scalar::kI16;
  if (t == "ushort" || t == "uint16") return Scalar::kU16;
  if (t == "int" || t == "int32") return Scalar::kI32;
  if (t == "uint" || t == "uint32") return Scalar::kU32;
  if (t == "float" || t == "float32") return Scalar::kF32;
  if (t == "double" || t == "float64") return Scalar::kF64;
  malformed("unknown property type '" + t + "'");
}

std::size_t scalar_size(Scalar s) {
  switch (s) {
    case Scalar::kI8: case Scalar::kU8: return 1;
    case Scalar::kI16: case Scalar::kU16: return 2;
    case Scalar::kI32: case Scalar::kU32: case Scalar::kF32: return 4;
    case Scalar::kF64: return 8;
  }
  return 4;
}

double read_binary(std::istream& in, Scalar s) {
  unsigned char b[8];
  const std::size_t n = scalar_size(s);
  if (!in.read(reinterpret_cast<char*>(b), static_cast<std::streamsize>(n))) {
    fail(ErrorCode::kInvalidInput, "PLY body ends early");
  }
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < n; ++i) bits |= std::uint64_t{b[i]} << (8 * i);
  switch (s) {
    case Scalar::kI8: return static_cast<std::int8_t>(bits);
    case Scalar::kU8: return static_cast<std::uint8_t>(bits);
    case Scalar::kI16: return static_cast<std::int16_t>(bits);
    case Scalar::kU16: return static_cast<std::uint16_t>(bits);
    case Scalar::kI32: return static_cast<std::int32_t>(bits);
    case Scalar::kU32: return static_cast<std::uint32_t>(bits);
    case Scalar::kF32: return std::bit_cast<float>(static_cast<std::uint32_t>(bits));
    case Scalar::kF64: return std::bit_cast<double>(bits);
  }
  return 0.0;
}

double read_ascii(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) fail(ErrorCode::kInvalidInput, "PLY body ends early");
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::kInvalidInput, "PLY body: '" + tok + "' is not a number");
  }
}

void write_f32(std::ostream& out, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.write(b, 4);
}

}  // namespace

ObjectCloud read_ply(std::istream& in, std::string name) {
  std::string line;
  if (!std::getline(in, line) || (line != "ply" && line != "ply\r")) malformed("missing 'ply' magic");

  bool binary = false;
  bool have_format = false;
  std::vector<Element> elements;
  for (;;) {
    if (!std::getline(in, line)) malformed("missing end_header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    if (key.empty() || key == "comment" || key == "obj_info") continue;
    if (key == "end_header") break;
    if (key == "format") {
      std::string enc, ver;
      ls >> enc >> ver;
      if (enc == "ascii") {
        binary = false;
      } else if (enc == "binary_little_endian") {
        binary = true;
      } else if (enc == "binary_big_endian") {
        fail(ErrorCode::kUnsupportedEncoding, "big-endian PLY is not supported");
      } else {
        malformed("unknown format '" + enc + "'");
      }
      have_format = true;
    } else if (key == "element") {
      Element e;
      long long count = -1;
      ls >> e.name >> count;
      if (e.name.empty() || count < 0) malformed("bad element line '" + line + "'");
      e.count = static_cast<std::size_t>(count);
      elements.push_back(std::move(e));
    } else if (key == "property") {
      if (elements.empty()) malformed("property before any element");
      Property p;
      std::string type;
      ls >> type;
      if (type == "list") {
        std::string ct, it;
        ls >> ct >> it >> p.name;
        p.is_list = true;
        p.count_type = parse_scalar(ct);
        p.type = parse_scalar(it);
      } else {
        p.type = parse_scalar(type);
        ls >> p.name;
      }
      if (p.name.empty()) malformed("property without a name");
      elements.back().props.push_back(std::move(p));
    } else {
      malformed("unexpected line '" + line + "'");
    }
  }
  if (!have_format) malformed("missing format line");

  const Element* vertex = nullptr;
  for (const auto& e : elements) {
    if (e.name == "vertex") vertex = &e;
  }
  if (!vertex) malformed("no vertex element");
  int ix[6] = {-1, -1, -1, -1, -1, -1};
  const char* wanted[6] = {"x", "y", "z", "nx", "ny", "nz"};
  for (std::size_t p = 0; p < vertex->props.size(); ++p) {
    for (int w = 0; w < 6; ++w) {
      if (vertex->props[p].name == wanted[w] && !vertex->props[p].is_list) ix[w] = static_cast<int>(p);
    }
  }
  if (ix[0] < 0 || ix[1] < 0 || ix[2] < 0) malformed("vertex element lacks x/y/z");
  const bool has_normals = ix[3] >= 0 && ix[4] >= 0 && ix[5] >= 0;

  ObjectCloud cloud{std::move(name), VertexMatrix(static_cast<Eigen::Index>(vertex->count), 3),
                    std::nullopt};
  VertexMatrix normals(has_normals ? vertex->count : 0, 3);

  // ascii values are rounded to the declared type, like their binary twins
  auto value = [&](Scalar s) {
    if (binary) return read_binary(in, s);
    const double v = read_ascii(in);
    return s == Scalar::kF32 ? static_cast<double>(static_cast<float>(v)) : v;
  };
  std::vector<double> row;
  for (const auto& e : elements) {
    for (std::size_t r = 0; r < e.count; ++r) {
      row.assign(e.props.size(), 0.0);
      for (std::size_t p = 0; p < e.props.size(); ++p) {
        const Property& prop = e.props[p];
        if (prop.is_list) {
          const double n = value(prop.count_type);
          if (!(n >= 0.0)) fail(ErrorCode::kInvalidInput, "PLY body: negative list length");
          for (long long k = 0; k < static_cast<long long>(n); ++k) (void)value(prop.type);
        } else {
          row[p] = value(prop.type);
        }
      }
      if (&e != vertex) continue;
      const auto i = static_cast<Eigen::Index>(r);
      cloud.points.row(i) << row[ix[0]], row[ix[1]], row[ix[2]];
      if (has_normals) normals.row(i) << row[ix[3]], row[ix[4]], row[ix[5]];
    }
  }

  if (cloud.points.rows() == 0) fail(ErrorCode::kInvalidInput, "PLY has no vertices");
  if (!cloud.points.allFinite()) fail(ErrorCode::kInvalidInput, "PLY has non-finite coordinates");
  if (has_normals) {
    for (Eigen::Index i = 0; i < normals.rows(); ++i) {
      const double n = normals.row(i).norm();
      if (!(n > 1e-12) || !std::isfinite(n)) {
        fail(ErrorCode::kInvalidInput, "PLY normal " + std::to_string(i) + " is zero or non-finite");
      }
      // stored float32 normals are already unit to ~1e-7; keep them bit-exact
      if (std::abs(n - 1.0) > 1e-6) normals.row(i) /= n;
    }
    cloud.normals = std::move(normals);
  }
  return cloud;
}

ObjectCloud load_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
  return read_ply(in, path.stem().string());
}

void write_ply(std::ostream& out, const ObjectCloud& cloud, PlyEncoding encoding) {
  const bool normals = cloud.normals.has_value();
  out << "ply\n"
      << (encoding == PlyEncoding::kAscii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n")
      << "comment object " << cloud.name << "\n"
      << "element vertex " << cloud.points.rows() << "\n"
      << "property float x\nproperty float y\nproperty float z\n";
  if (normals) out << "property float nx\nproperty float ny\nproperty float nz\n";
  out << "end_header\n";

  for (Eigen::Index i = 0; i < cloud.points.rows(); ++i) {
    double v[6] = {cloud.points(i, 0), cloud.points(i, 1), cloud.points(i, 2), 0, 0, 0};
    if (normals) {
      for (int c = 0; c < 3; ++c) v[3 + c] = (*cloud.normals)(i, c);
    }
    const int n = normals ? 6 : 3;
    if (encoding == PlyEncoding::kAscii) {
      char buf[32];
      for (int c = 0; c < n; ++c) {
        std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(static_cast<float>(v[c])));
        out << buf << (c + 1 < n ? ' ' : '\n');
      }
    } else {
      for (int c = 0; c < n; ++c) write_f32(out, v[c]);
    }
  }
}

void save_ply(const std::filesystem::path& path, const ObjectCloud& cloud, PlyEncoding encoding) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
  write_ply(out, cloud, encoding);
  if (!out) fail(ErrorCode::kIoError, "write to '" + path.string() + "' failed");
}

}  // namespace handover
