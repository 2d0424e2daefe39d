#pragma once

// On-disk cache of exact split grids.  Each entry is a text file of matrix
// dumps guarded by an FNV-1a checksum.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "splitdec/split.hpp"

namespace splitdec {

std::string fnv1a_hex(std::string_view data);

struct CacheKey {
  std::string artifact;  // "split" or "qtet"
  std::string graph;
  int base_vertex = 0;
  std::vector<int> ordering;
  int qsign = 1;  // part of the key for qtet artifacts only
  std::string backend;

  std::string canonical() const;
  std::string hex() const { return fnv1a_hex(canonical()); }
};

/// Text form of the four grids (cell dimensions, C, Cinv per grid).
std::string serialize_split(const SplitSystem<Scalar>& sys, const GroundField& field);
SplitSystem<Scalar> deserialize_split(const std::string& text, const SchemeData& s, const DualData& dual,
                                      const DistanceData& dd, const ExactBackend& be);

/// Writes <dir>/<key>.split.  Creates the directory when missing.
void cache_store(const std::string& dir, const CacheKey& key, const SplitSystem<Scalar>& sys,
                 const GroundField& field);
/// nullopt when there is no entry; CacheCorrupt when the entry fails its
/// checksum or does not parse.
std::optional<SplitSystem<Scalar>> cache_load(const std::string& dir, const CacheKey& key, const SchemeData& s,
                                              const DualData& dual, const DistanceData& dd, const ExactBackend& be);

}  // namespace splitdec
