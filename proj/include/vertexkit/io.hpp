#pragma once

#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "vertexkit/common.hpp"

namespace vertexkit {

// Shortest round-trippable decimal form; keeps rerun output byte-identical.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string fmt17(cplx z) { return "[" + fmt17(z.real()) + "," + fmt17(z.imag()) + "]"; }

inline void atomic_write(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), "cannot open output file");
    out << content;
    out.flush();
    require(out.good(), "write failed");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open input file");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

namespace jsonw {

inline std::string num(double x) { return fmt17(x); }
inline std::string num(std::size_t x) { return std::to_string(x); }
inline std::string num(int x) { return std::to_string(x); }
inline std::string str(const std::string& s) { return "\"" + s + "\""; }

inline std::string array(const std::vector<double>& v) {
  std::string out = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += num(v[i]);
  }
  return out + "]";
}

inline std::string matrix(const Mat& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) out += ",";
    out += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ",";
      out += num(m(r, c));
    }
    out += "]";
  }
  return out + "]";
}

inline std::string matrix(const CMatX& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) out += ",";
    out += "[";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ",";
      out += fmt17(m(r, c));
    }
    out += "]";
  }
  return out + "]";
}

}  // namespace jsonw

// Cache files carry exactly these four keys.
inline std::string mode_cache_json(int p, int q, std::size_t length,
                                   const std::vector<double>& coeffs) {
  std::string out = "{\"p\":" + jsonw::num(p) + ",\"q\":" + jsonw::num(q) +
                    ",\"length\":" + jsonw::num(length) + ",\"coeffs\":" + jsonw::array(coeffs) +
                    "}";
  return out;
}

// Dense grid CSV with a two-line header naming the payload.
inline std::string csv_matrix(const std::string& kind, std::size_t N, int index_base,
                              const Mat& m) {
  std::string out = "kind,N,index_base\n" + kind + "," + std::to_string(N) + "," +
                    std::to_string(index_base) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ",";
      out += fmt17(m(r, c));
    }
    out += "\n";
  }
  return out;
}

// Complex cells are flattened to adjacent re,im fields.
inline std::string csv_matrix(const std::string& kind, std::size_t N, int index_base,
                              const CMatX& m) {
  std::string out = "kind,N,index_base\n" + kind + "," + std::to_string(N) + "," +
                    std::to_string(index_base) + "\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ",";
      out += fmt17(m(r, c).real()) + "," + fmt17(m(r, c).imag());
    }
    out += "\n";
  }
  return out;
}

inline std::string csv_modes(int p, int q, const std::vector<double>& coeffs) {
  std::string out = "kind,N,index_base\nmodes_p" + std::to_string(p) + "_q" + std::to_string(q) +
                    "," + std::to_string(coeffs.empty() ? 0 : coeffs.size() - 1) + ",0\n";
  for (double c : coeffs) out += fmt17(c) + "\n";
  return out;
}

}  // namespace vertexkit
