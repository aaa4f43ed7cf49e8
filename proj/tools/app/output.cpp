#include "output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace ramsey::app {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void StagedOutput::add(std::string name, std::string content) {
  for (auto& [n, c] : files_) {
    if (n == name) {
      c = std::move(content);
      return;
    }
  }
  files_.emplace_back(std::move(name), std::move(content));
}

void StagedOutput::commit() const {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir_.string() + ": " + ec.message());

  std::vector<fs::path> written;
  auto cleanup = [&] {
    for (const auto& p : written) fs::remove(p, ec);
  };
  for (const auto& [name, content] : files_) {
    const fs::path tmp = dir_ / ("." + name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.close();
    if (!out) {
      cleanup();
      throw std::runtime_error("cannot write " + tmp.string());
    }
    written.push_back(tmp);
  }
  for (const auto& [name, content] : files_) {
    fs::rename(dir_ / ("." + name + ".tmp"), dir_ / name, ec);
    if (ec) {
      cleanup();
      throw std::runtime_error("cannot rename into " + (dir_ / name).string() + ": " + ec.message());
    }
  }
}

}  // namespace ramsey::app
