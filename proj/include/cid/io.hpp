#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <utility>
#include <vector>

#include "cid/regression.hpp"
#include "cid/sweep.hpp"

namespace cid {

// CSV with header `year,growth,vote`.
ElectionDataset ReadElectionCsv(std::istream& in);
ElectionDataset ReadElectionCsv(const std::filesystem::path& path);

// CSV with header `level,count`; levels must be 1..K in order.
std::vector<std::uint64_t> ReadLeadCountsCsv(std::istream& in);
std::vector<std::uint64_t> ReadLeadCountsCsv(const std::filesystem::path& path);

// Header `t,estimate,lo,hi,decision,d_t,j_t,cid`; fields that do not apply to
// the curve's metric are left empty.
std::string CurveToCsv(const CidCurve& curve);

// Writes every file to a sibling temporary and renames only after all writes
// succeed, so a failure leaves none of the targets half-written.
void WriteFilesAtomic(
    const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace cid
