#include "cid/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

#include <fmt/format.h>

#include "cid/errors.hpp"

namespace cid {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T ParseNumber(std::string_view field, std::size_t line_no, std::string_view column) {
  T value{};
  const char* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw Error(Errc::kIo, fmt::format("line {}: cannot parse {} value '{}'", line_no,
                                       column, std::string(field)));
  }
  return value;
}

// Returns data rows (header checked), skipping blank lines.
std::vector<std::pair<std::size_t, std::vector<std::string_view>>> ReadRows(
    std::istream& in, std::vector<std::string>& storage,
    const std::vector<std::string_view>& header) {
  std::string line;
  std::size_t line_no = 0;
  bool saw_header = false;
  std::vector<std::pair<std::size_t, std::size_t>> kept;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    if (!saw_header) {
      if (SplitFields(line) != header) {
        std::string expected;
        for (const auto h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
        throw Error(Errc::kIo, fmt::format("line {}: expected header '{}', got '{}'",
                                           line_no, expected, std::string(Trim(line))));
      }
      saw_header = true;
      continue;
    }
    storage.push_back(line);
    kept.emplace_back(line_no, storage.size() - 1);
  }
  if (!saw_header) throw Error(Errc::kIo, "empty file: missing header");
  std::vector<std::pair<std::size_t, std::vector<std::string_view>>> rows;
  for (const auto& [no, idx] : kept) {
    auto fields = SplitFields(storage[idx]);
    if (fields.size() != header.size()) {
      throw Error(Errc::kIo, fmt::format("line {}: expected {} fields, got {}", no,
                                         header.size(), fields.size()));
    }
    rows.emplace_back(no, std::move(fields));
  }
  return rows;
}

std::ifstream OpenInput(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIo, fmt::format("cannot open '{}'", path.string()));
  return in;
}

std::string Num(double v) { return fmt::format("{:.12g}", v); }

}  // namespace

ElectionDataset ReadElectionCsv(std::istream& in) {
  std::vector<std::string> storage;
  std::vector<ElectionRecord> records;
  for (const auto& [no, f] : ReadRows(in, storage, {"year", "growth", "vote"})) {
    records.push_back({ParseNumber<int>(f[0], no, "year"),
                       ParseNumber<double>(f[1], no, "growth"),
                       ParseNumber<double>(f[2], no, "vote")});
  }
  return ElectionDataset(std::move(records));
}

ElectionDataset ReadElectionCsv(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ReadElectionCsv(in);
}

std::vector<std::uint64_t> ReadLeadCountsCsv(std::istream& in) {
  std::vector<std::string> storage;
  std::vector<std::uint64_t> counts;
  for (const auto& [no, f] : ReadRows(in, storage, {"level", "count"})) {
    const auto level = ParseNumber<std::uint64_t>(f[0], no, "level");
    if (level != counts.size() + 1) {
      throw Error(Errc::kIo, fmt::format("line {}: expected level {}, got {}", no,
                                         counts.size() + 1, level));
    }
    counts.push_back(ParseNumber<std::uint64_t>(f[1], no, "count"));
  }
  return counts;
}

std::vector<std::uint64_t> ReadLeadCountsCsv(const std::filesystem::path& path) {
  auto in = OpenInput(path);
  return ReadLeadCountsCsv(in);
}

std::string CurveToCsv(const CidCurve& curve) {
  std::string out = "t,estimate,lo,hi,decision,d_t,j_t,cid\n";
  for (const auto& p : curve.points) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", Num(p.t), Num(p.estimate),
                       p.interval ? Num(p.interval->lower) : "",
                       p.interval ? Num(p.interval->upper) : "", DecisionName(p.decision),
                       p.d_t, p.j_t ? Num(*p.j_t) : "", Num(p.cid));
  }
  return out;
}

void WriteFilesAtomic(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files) {
  namespace fs = std::filesystem;
  std::vector<fs::path> temps;
  auto cleanup = [&temps] {
    std::error_code ec;
    for (const auto& t : temps) fs::remove(t, ec);
  };
  try {
    for (const auto& [path, content] : files) {
      if (path.has_parent_path()) fs::create_directories(path.parent_path());
      fs::path tmp = path;
      tmp += ".tmp";
      temps.push_back(tmp);
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << content;
      out.close();
      if (!out) throw Error(Errc::kIo, fmt::format("cannot write '{}'", tmp.string()));
    }
    for (std::size_t i = 0; i < files.size(); ++i) {
      fs::rename(temps[i], files[i].first);
    }
  } catch (const fs::filesystem_error& e) {
    cleanup();
    throw Error(Errc::kIo, e.what());
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace cid
