#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "vertexkit/io.hpp"
#include "vertexkit/modes.hpp"

namespace vertexkit {

inline std::filesystem::path cache_dir(const std::string& override_dir = "") {
  if (!override_dir.empty()) return override_dir;
  if (const char* env = std::getenv("VERTEXKIT_CACHE"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home)
    return std::filesystem::path(home) / ".cache" / "vertexkit";
  return std::filesystem::path(".vertexkit-cache");
}

inline std::filesystem::path cache_file(const std::filesystem::path& dir, const ExponentPair& e,
                                        std::size_t L) {
  return dir / ("modes_p" + std::to_string(e.p) + "_q" + std::to_string(e.q) + "_L" +
                std::to_string(L) + ".json");
}

inline std::optional<ModeTable> load_cached_modes(const std::filesystem::path& file,
                                                  const ExponentPair& e, std::size_t L) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(file, ec)) return std::nullopt;
  nlohmann::json j = nlohmann::json::parse(read_text(file), nullptr, false);
  if (j.is_discarded()) return std::nullopt;
  if (!j.is_object() || !j.contains("p") || !j.contains("q") || !j.contains("length") ||
      !j.contains("coeffs"))
    return std::nullopt;
  if (!j["p"].is_number_integer() || !j["q"].is_number_integer() ||
      !j["length"].is_number_unsigned() || !j["coeffs"].is_array())
    return std::nullopt;
  if (j["p"].get<int>() != e.p || j["q"].get<int>() != e.q ||
      j["length"].get<std::size_t>() != L)
    return std::nullopt;
  const auto& arr = j["coeffs"];
  if (arr.size() != L + 1) return std::nullopt;
  ModeTable t;
  t.exponents = e;
  t.coeffs.resize(L + 1);
  for (std::size_t k = 0; k <= L; ++k) {
    if (!arr[k].is_number()) return std::nullopt;
    t.coeffs[k] = arr[k].get<double>();
  }
  if (t.coeffs[0] != 1.0) return std::nullopt;
  return t;
}

inline void save_cached_modes(const std::filesystem::path& file, const ModeTable& t) {
  atomic_write(file, mode_cache_json(t.exponents.p, t.exponents.q, t.length(), t.coeffs));
}

// Exact-key lookup; anything stale or malformed is regenerated and rewritten.
inline ModeTable obtain_modes(const ExponentPair& e, std::size_t L,
                              const std::string& dir_override = "") {
  validate_exponents(e);
  const auto dir = cache_dir(dir_override);
  const auto file = cache_file(dir, e, L);
  if (auto cached = load_cached_modes(file, e, L)) return *cached;
  ModeTable t = generate_modes(e, L);
  save_cached_modes(file, t);
  return t;
}

inline std::vector<std::string> cache_list(const std::string& dir_override = "") {
  std::vector<std::string> names;
  const auto dir = cache_dir(dir_override);
  std::error_code ec;
  for (auto it = std::filesystem::directory_iterator(dir, ec);
       it != std::filesystem::directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file() && it->path().extension() == ".json")
      names.push_back(it->path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

inline std::size_t cache_clear(const std::string& dir_override = "") {
  std::size_t removed = 0;
  const auto dir = cache_dir(dir_override);
  std::error_code ec;
  for (auto it = std::filesystem::directory_iterator(dir, ec);
       it != std::filesystem::directory_iterator(); it.increment(ec)) {
    if (ec) break;
    if (it->is_regular_file() && it->path().extension() == ".json") {
      std::error_code rc;
      if (std::filesystem::remove(it->path(), rc)) ++removed;
    }
  }
  return removed;
}

inline void cache_prewarm(const std::string& dir_override = "") {
  obtain_modes({3, 1}, 8192, dir_override);
  obtain_modes({3, 2}, 8192, dir_override);
}

}  // namespace vertexkit
