#pragma once

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "locoh/error.hpp"
#include "locoh/fp.hpp"
#include "locoh/version.hpp"

// Report assembly and the optional content-addressed result cache.  The JSON
// report is canonical; CSV and aligned text are derived from it.

namespace locoh {

using json = nlohmann::ordered_json;

inline u64 fnv1a64(const std::string& data) {
  u64 h = 1469598103934665603ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex64(u64 v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

struct Report {
  std::string hash;
  std::string version = kVersion;
  json tasks = json::array();

  json to_json() const {
    json out;
    out["hash"] = hash;
    out["version"] = version;
    out["tasks"] = tasks;
    return out;
  }

  std::string to_json_text() const { return to_json().dump(2) + "\n"; }

  // One row per task; nested objects are embedded as compact JSON.
  std::string to_csv() const {
    std::ostringstream out;
    out << "id,kind,inputs,result,ms\n";
    for (const auto& t : tasks) {
      out << t["id"].get<u64>() << "," << t["kind"].get<std::string>() << ","
          << csv_quote(t["inputs"].dump()) << ","
          << csv_quote(t["result"].dump()) << "," << t["ms"].get<u64>()
          << "\n";
    }
    return out.str();
  }

  std::string to_text() const {
    std::ostringstream out;
    out << "report " << hash << " (version " << version << ")\n";
    for (const auto& t : tasks) {
      out << "  [" << t["id"].get<u64>() << "] " << t["kind"].get<std::string>()
          << "  " << t["inputs"].dump() << "\n      " << t["result"].dump()
          << "  (" << t["ms"].get<u64>() << " ms)\n";
    }
    return out.str();
  }

 private:
  static std::string csv_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      out += c;
      if (c == '"') out += '"';
    }
    out += '"';
    return out;
  }
};

// Results keyed by the hash of everything that can influence them: the
// scenario's definitions and settings, the task directive, and the tool
// version.  Writes go through a temporary file and a rename.
class ResultCache {
 public:
  explicit ResultCache(std::string dir) : dir_(std::move(dir)) {}

  bool lookup(const std::string& key, json& out) const {
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return false;
    try {
      out = json::parse(in);
      return true;
    } catch (const json::exception&) {
      return false;
    }
  }

  void store(const std::string& key, const json& value) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);  // open below reports failure
    const std::string final_path = path_for(key);
    const std::string tmp_path =
        final_path + ".tmp" + std::to_string(u64(::getpid()));
    {
      std::ofstream out(tmp_path, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cache: cannot write \"" + tmp_path + "\"");
      out << value.dump();
    }
    if (std::rename(tmp_path.c_str(), final_path.c_str()) != 0) {
      std::remove(tmp_path.c_str());
      throw Error("cache: cannot move result into \"" + final_path + "\"");
    }
  }

 private:
  std::string path_for(const std::string& key) const {
    return dir_ + "/" + key + ".json";
  }

  std::string dir_;
};

}  // namespace locoh
