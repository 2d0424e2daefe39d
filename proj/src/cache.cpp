#include "splitdec/cache.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace splitdec {

namespace {

constexpr const char* kMagic = "splitdec-cache/1";

std::string entry_path(const std::string& dir, const CacheKey& key) {
  return (std::filesystem::path(dir) / (key.hex() + "." + key.artifact)).string();
}

}  // namespace

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string CacheKey::canonical() const {
  std::ostringstream os;
  os << artifact << '|' << graph << '|' << base_vertex << '|';
  for (size_t k = 0; k < ordering.size(); ++k) os << (k ? "," : "") << ordering[k];
  os << '|' << (artifact == "qtet" ? std::to_string(qsign) : "*") << '|' << backend;
  return os.str();
}

std::string serialize_split(const SplitSystem<Scalar>& sys, const GroundField& field) {
  std::ostringstream os;
  for (SplitKind k : kAllSplits) {
    const SplitGrid<Scalar>& g = sys.grid(k);
    os << "grid " << split_name(k) << '\n' << "dims";
    for (int i = 0; i <= g.D(); ++i)
      for (int j = 0; j <= g.D(); ++j) os << ' ' << g.dim(i, j);
    os << '\n' << dump_matrix(g.C(), field) << dump_matrix(g.Cinv(), field);
  }
  return os.str();
}

SplitSystem<Scalar> deserialize_split(const std::string& text, const SchemeData& s, const DualData& dual,
                                      const DistanceData& dd, const ExactBackend& be) {
  std::istringstream is(text);
  const int w = s.D + 1;
  // every matrix dump is a header line plus n rows
  auto read_block = [&](long rows) {
    std::string out, line;
    for (long r = 0; r <= rows; ++r) {
      if (!std::getline(is, line)) throw Error(ErrorKind::ParseError, "cache entry truncated");
      out += line + '\n';
    }
    return out;
  };
  std::array<SplitGrid<Scalar>, 4> grids;
  for (size_t t = 0; t < 4; ++t) {
    std::string line;
    if (!std::getline(is, line) || line != "grid " + split_name(kAllSplits[t]))
      throw Error(ErrorKind::ParseError, "cache entry: expected grid " + split_name(kAllSplits[t]));
    if (!std::getline(is, line)) throw Error(ErrorKind::ParseError, "cache entry truncated");
    std::istringstream ds(line);
    std::string tag;
    ds >> tag;
    std::vector<Index> dims;
    Index d;
    while (ds >> d) dims.push_back(d);
    if (tag != "dims" || dims.size() != static_cast<size_t>(w * w))
      throw Error(ErrorKind::ParseError, "cache entry: bad dims line");
    ExactMat C = parse_matrix(read_block(s.n));
    ExactMat Cinv = parse_matrix(read_block(s.n));
    grids[t] = SplitGrid<Scalar>::from_cells(kAllSplits[t], s, dual, dd, dims, std::move(C), std::move(Cinv), be);
  }
  return SplitSystem<Scalar>::from_grids(std::move(grids));
}

void cache_store(const std::string& dir, const CacheKey& key, const SplitSystem<Scalar>& sys,
                 const GroundField& field) {
  std::filesystem::create_directories(dir);
  const std::string payload = serialize_split(sys, field);
  const std::string path = entry_path(dir, key);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    os << kMagic << '\n' << key.canonical() << '\n' << fnv1a_hex(payload) << '\n' << payload;
    if (!os) throw Error(ErrorKind::ConfigError, "cannot write cache entry " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::optional<SplitSystem<Scalar>> cache_load(const std::string& dir, const CacheKey& key, const SchemeData& s,
                                              const DualData& dual, const DistanceData& dd, const ExactBackend& be) {
  const std::string path = entry_path(dir, key);
  std::ifstream is(path, std::ios::binary);
  if (!is) return std::nullopt;
  std::string magic, canonical, sum;
  std::getline(is, magic);
  std::getline(is, canonical);
  std::getline(is, sum);
  std::ostringstream rest;
  rest << is.rdbuf();
  const std::string payload = rest.str();
  if (magic != kMagic || canonical != key.canonical())
    throw Error(ErrorKind::CacheCorrupt, path + ": header does not match the key");
  if (fnv1a_hex(payload) != sum) throw Error(ErrorKind::CacheCorrupt, path + ": checksum mismatch");
  try {
    return deserialize_split(payload, s, dual, dd, be);
  } catch (const Error& e) {
    throw Error(ErrorKind::CacheCorrupt, path + ": " + e.what());
  }
}

}  // namespace splitdec
