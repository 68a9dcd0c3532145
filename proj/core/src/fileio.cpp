#include "cotagnet/fileio.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "cotagnet/error.hpp"

namespace cotagnet {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw DataError("error reading '" + path.string() + "'");
  return std::move(buf).str();
}

void write_file_atomic(const fs::path& path, std::string_view contents) {
  static std::atomic<unsigned> counter{0};
  std::error_code ec;
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw DataError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) {
      fs::remove(tmp, ec);
      throw DataError("error writing '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    throw DataError("cannot rename onto '" + path.string() + "': " + ec.message());
  }
}

namespace {

bool has_suffix(const std::string& name, const std::vector<std::string>& suffixes) {
  return std::any_of(suffixes.begin(), suffixes.end(), [&](const std::string& s) {
    return name.size() >= s.size() && name.compare(name.size() - s.size(), s.size(), s) == 0;
  });
}

}  // namespace

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& paths,
                                    const std::vector<std::string>& suffixes) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    std::error_code ec;
    const auto status = fs::status(p, ec);
    if (ec || !fs::exists(status)) throw DataError("input '" + p.string() + "' does not exist");
    if (fs::is_directory(status)) {
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && has_suffix(entry.path().filename().string(), suffixes)) {
          out.push_back(entry.path());
        }
      }
      // Stack Exchange layout: <dir>/<community>/Posts.xml
      if (std::find(suffixes.begin(), suffixes.end(), "Posts.xml") != suffixes.end()) {
        for (const auto& entry : fs::directory_iterator(p)) {
          if (!entry.is_directory()) continue;
          const fs::path posts = entry.path() / "Posts.xml";
          if (fs::is_regular_file(posts)) out.push_back(posts);
        }
      }
    } else {
      out.push_back(p);
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace cotagnet
