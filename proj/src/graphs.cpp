#include "splitdec/graphs.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace splitdec {

namespace {

// Monic irreducible polynomials, constant term first.
std::vector<int> irreducible(int p, int k) {
  if (p == 2 && k == 2) return {1, 1, 1};     // t^2 + t + 1
  if (p == 2 && k == 3) return {1, 1, 0, 1};  // t^3 + t + 1
  if (p == 3 && k == 2) return {1, 0, 1};     // t^2 + 1
  return {0, 1};                              // t
}

std::vector<int> digits(int x, int p, int k) {
  std::vector<int> d(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) {
    d[static_cast<size_t>(i)] = x % p;
    x /= p;
  }
  return d;
}

int undigits(const std::vector<int>& d, int p) {
  int x = 0;
  for (size_t i = d.size(); i-- > 0;) x = x * p + d[i];
  return x;
}

std::vector<int> parse_ints(const std::string& args, const std::string& descriptor) {
  std::vector<int> out;
  std::stringstream ss(args);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      size_t used = 0;
      int v = std::stoi(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      out.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::ConfigError, "bad graph descriptor '" + descriptor + "'");
    }
  }
  return out;
}

std::string matrix_label(const std::vector<int>& m, int rows, int cols) {
  std::string s = "[";
  for (int i = 0; i < rows; ++i) {
    if (i) s += ';';
    for (int j = 0; j < cols; ++j) {
      if (j) s += ' ';
      s += std::to_string(m[static_cast<size_t>(i * cols + j)]);
    }
  }
  return s + "]";
}

// Forms graph on the given label set (closed under subtraction): vertices
// adjacent iff the difference has rank 1.
Graph forms_graph(const FiniteField& f, std::vector<std::vector<int>> labels, int rows, int cols,
                  const std::string& name) {
  std::sort(labels.begin(), labels.end());
  const int q = f.order();
  const int cells = rows * cols;
  long space = 1;
  for (int k = 0; k < cells; ++k) space *= q;
  auto code = [&](const std::vector<int>& m) {
    long c = 0;
    for (int v : m) c = c * q + v;
    return c;
  };
  std::vector<int> index(static_cast<size_t>(space), -1);
  for (size_t v = 0; v < labels.size(); ++v) index[static_cast<size_t>(code(labels[v]))] = static_cast<int>(v);
  std::vector<int> rank(labels.size());
  for (size_t v = 0; v < labels.size(); ++v) rank[v] = f.rank(labels[v], rows, cols);

  Graph g;
  g.n = static_cast<int>(labels.size());
  g.name = name;
  g.adj.assign(labels.size(), {});
  std::vector<int> diff(static_cast<size_t>(cells));
  for (int u = 0; u < g.n; ++u) {
    for (int v = u + 1; v < g.n; ++v) {
      for (int k = 0; k < cells; ++k)
        diff[static_cast<size_t>(k)] = f.sub(labels[static_cast<size_t>(u)][static_cast<size_t>(k)],
                                             labels[static_cast<size_t>(v)][static_cast<size_t>(k)]);
      int w = index[static_cast<size_t>(code(diff))];
      if (w < 0) throw Error(ErrorKind::DegenerateParameters, name + ": label set not closed under subtraction");
      if (rank[static_cast<size_t>(w)] == 1) {
        g.adj[static_cast<size_t>(u)].push_back(v);
        g.adj[static_cast<size_t>(v)].push_back(u);
      }
    }
  }
  for (auto& l : labels) g.labels.push_back(matrix_label(l, rows, cols));
  return g;
}

}  // namespace

FiniteField::FiniteField(int order) : order_(order) {
  switch (order) {
    case 2: case 3: case 5: case 7: p_ = order; k_ = 1; break;
    case 4: p_ = 2; k_ = 2; break;
    case 8: p_ = 2; k_ = 3; break;
    case 9: p_ = 3; k_ = 2; break;
    default:
      throw Error(ErrorKind::UnsupportedFieldOrder, "GF(" + std::to_string(order) + ") is not supported");
  }
  const size_t q = static_cast<size_t>(order);
  const std::vector<int> poly = irreducible(p_, k_);
  add_.resize(q * q);
  mul_.resize(q * q);
  for (int x = 0; x < order; ++x) {
    const std::vector<int> dx = digits(x, p_, k_);
    for (int y = 0; y < order; ++y) {
      const std::vector<int> dy = digits(y, p_, k_);
      std::vector<int> s(static_cast<size_t>(k_));
      for (int i = 0; i < k_; ++i) s[static_cast<size_t>(i)] = (dx[static_cast<size_t>(i)] + dy[static_cast<size_t>(i)]) % p_;
      add_[static_cast<size_t>(x * order + y)] = undigits(s, p_);

      std::vector<int> prod(static_cast<size_t>(2 * k_ - 1), 0);
      for (int i = 0; i < k_; ++i)
        for (int j = 0; j < k_; ++j)
          prod[static_cast<size_t>(i + j)] = (prod[static_cast<size_t>(i + j)] + dx[static_cast<size_t>(i)] * dy[static_cast<size_t>(j)]) % p_;
      for (int d = 2 * k_ - 2; d >= k_; --d) {
        const int c = prod[static_cast<size_t>(d)];
        if (c == 0) continue;
        for (int i = 0; i <= k_; ++i) {
          int& t = prod[static_cast<size_t>(d - k_ + i)];
          t = ((t - c * poly[static_cast<size_t>(i)]) % p_ + p_) % p_;
        }
      }
      prod.resize(static_cast<size_t>(k_));
      mul_[static_cast<size_t>(x * order + y)] = undigits(prod, p_);
    }
  }
  neg_.resize(q);
  inv_.assign(q, 0);
  frob_.resize(q);
  for (int x = 0; x < order; ++x) {
    for (int y = 0; y < order; ++y) {
      if (add(x, y) == 0) neg_[static_cast<size_t>(x)] = y;
      if (mul(x, y) == 1) inv_[static_cast<size_t>(x)] = y;
    }
    int pw = 1;
    for (int i = 0; i < p_; ++i) pw = mul(pw, x);
    frob_[static_cast<size_t>(x)] = pw;
  }
}

int FiniteField::inv(int x) const {
  if (x == 0) throw Error(ErrorKind::DivideByZero, "inverse of 0 in GF(" + std::to_string(order_) + ")");
  return inv_[static_cast<size_t>(x)];
}

int FiniteField::rank(std::vector<int> m, int rows, int cols) const {
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i)
      if (m[static_cast<size_t>(i * cols + c)] != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    for (int j = 0; j < cols; ++j) std::swap(m[static_cast<size_t>(r * cols + j)], m[static_cast<size_t>(piv * cols + j)]);
    const int inv_p = inv(m[static_cast<size_t>(r * cols + c)]);
    for (int i = r + 1; i < rows; ++i) {
      const int f = mul(m[static_cast<size_t>(i * cols + c)], inv_p);
      if (f == 0) continue;
      for (int j = c; j < cols; ++j)
        m[static_cast<size_t>(i * cols + j)] = sub(m[static_cast<size_t>(i * cols + j)], mul(f, m[static_cast<size_t>(r * cols + j)]));
    }
    ++r;
  }
  return r;
}

bool Graph::adjacent(int u, int v) const {
  const auto& l = adj[static_cast<size_t>(u)];
  return std::binary_search(l.begin(), l.end(), v);
}

ExactMat Graph::adjacency() const {
  ExactMat a = ExactMat::Zero(n, n);
  for (int u = 0; u < n; ++u)
    for (int v : adj[static_cast<size_t>(u)]) a(u, v) = Scalar(1);
  return a;
}

void validate(const Graph& g) {
  if (g.n <= 0) throw Error(ErrorKind::DegenerateParameters, "graph has no vertices");
  for (int u = 0; u < g.n; ++u) {
    const auto& l = g.adj[static_cast<size_t>(u)];
    for (size_t k = 0; k < l.size(); ++k) {
      const int v = l[k];
      if (v < 0 || v >= g.n) throw Error(ErrorKind::ParseError, "edge endpoint " + std::to_string(v) + " out of range");
      if (v == u) throw Error(ErrorKind::LoopOrMultiEdge, "loop at vertex " + std::to_string(u));
      if (k > 0 && l[k - 1] == v) {
        throw Error(ErrorKind::LoopOrMultiEdge, "repeated edge " + std::to_string(u) + " " + std::to_string(v));
      }
      if (!g.adjacent(v, u)) throw Error(ErrorKind::PropertyViolation, "adjacency not symmetric");
    }
  }
  std::vector<char> seen(static_cast<size_t>(g.n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int v : g.adj[static_cast<size_t>(u)])
      if (!seen[static_cast<size_t>(v)]) {
        seen[static_cast<size_t>(v)] = 1;
        ++count;
        stack.push_back(v);
      }
  }
  if (count != g.n) {
    throw Error(ErrorKind::Disconnected, std::to_string(g.n - count) + " of " + std::to_string(g.n) +
                                             " vertices unreachable from vertex 0");
  }
}

Graph hamming(int D, int q) {
  if (D < 1 || q < 2) throw Error(ErrorKind::DegenerateParameters, "H(D,q) needs D >= 1 and q >= 2");
  Graph g;
  g.name = "hamming:" + std::to_string(D) + "," + std::to_string(q);
  int n = 1;
  for (int k = 0; k < D; ++k) n *= q;
  g.n = n;
  g.adj.assign(static_cast<size_t>(n), {});
  for (int u = 0; u < n; ++u) {
    std::string label;
    for (int k = D - 1, x = u; k >= 0; --k) {
      int pw = 1;
      for (int t = 0; t < k; ++t) pw *= q;
      label += std::to_string(x / pw);
      x %= pw;
    }
    g.labels.push_back(label);
    int pw = 1;
    for (int k = 0; k < D; ++k, pw *= q) {
      const int digit = (u / pw) % q;
      for (int s = 0; s < q; ++s)
        if (s != digit) g.adj[static_cast<size_t>(u)].push_back(u + (s - digit) * pw);
    }
    std::sort(g.adj[static_cast<size_t>(u)].begin(), g.adj[static_cast<size_t>(u)].end());
  }
  return g;
}

Graph johnson(int n, int d) {
  if (d < 1 || d >= n) throw Error(ErrorKind::DegenerateParameters, "J(n,d) needs 1 <= d < n");
  std::vector<std::vector<int>> subsets;
  std::vector<int> cur(static_cast<size_t>(d));
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    subsets.push_back(cur);
    int i = d - 1;
    while (i >= 0 && cur[static_cast<size_t>(i)] == n - d + i) --i;
    if (i < 0) break;
    ++cur[static_cast<size_t>(i)];
    for (int j = i + 1; j < d; ++j) cur[static_cast<size_t>(j)] = cur[static_cast<size_t>(j - 1)] + 1;
  }
  Graph g;
  g.name = "johnson:" + std::to_string(n) + "," + std::to_string(d);
  g.n = static_cast<int>(subsets.size());
  g.adj.assign(subsets.size(), {});
  for (size_t u = 0; u < subsets.size(); ++u) {
    std::string label = "{";
    for (int k = 0; k < d; ++k) label += (k ? "," : "") + std::to_string(subsets[u][static_cast<size_t>(k)]);
    g.labels.push_back(label + "}");
    for (size_t v = 0; v < subsets.size(); ++v) {
      if (u == v) continue;
      std::vector<int> common;
      std::set_intersection(subsets[u].begin(), subsets[u].end(), subsets[v].begin(), subsets[v].end(),
                            std::back_inserter(common));
      if (static_cast<int>(common.size()) == d - 1) g.adj[u].push_back(static_cast<int>(v));
    }
  }
  return g;
}

Graph cycle(int n) {
  if (n < 3) throw Error(ErrorKind::DegenerateParameters, "C_n needs n >= 3");
  Graph g;
  g.name = "cycle:" + std::to_string(n);
  g.n = n;
  g.adj.assign(static_cast<size_t>(n), {});
  for (int u = 0; u < n; ++u) {
    g.adj[static_cast<size_t>(u)] = {(u + 1) % n, (u + n - 1) % n};
    std::sort(g.adj[static_cast<size_t>(u)].begin(), g.adj[static_cast<size_t>(u)].end());
    g.labels.push_back(std::to_string(u));
  }
  return g;
}

Graph bilinear_forms(int d, int e, int r) {
  if (d < 1 || e < 1) throw Error(ErrorKind::DegenerateParameters, "Bil(d x e, r) needs d, e >= 1");
  FiniteField f(r);
  const int cells = d * e;
  long n = 1;
  for (int k = 0; k < cells; ++k) n *= r;
  std::vector<std::vector<int>> labels;
  labels.reserve(static_cast<size_t>(n));
  for (long x = 0; x < n; ++x) {
    std::vector<int> m(static_cast<size_t>(cells));
    long y = x;
    for (int k = cells - 1; k >= 0; --k) {
      m[static_cast<size_t>(k)] = static_cast<int>(y % r);
      y /= r;
    }
    labels.push_back(std::move(m));
  }
  return forms_graph(f, std::move(labels), d, e,
                     "bilinear:" + std::to_string(d) + "," + std::to_string(e) + "," + std::to_string(r));
}

Graph hermitian_forms(int d, int r) {
  if (d < 1) throw Error(ErrorKind::DegenerateParameters, "Her(d, r) needs d >= 1");
  if (r * r > 9) throw Error(ErrorKind::UnsupportedFieldOrder, "GF(" + std::to_string(r * r) + ") is not supported");
  FiniteField f(r * r);
  if (f.degree() != 2) throw Error(ErrorKind::UnsupportedFieldOrder, "Her(d, r) needs r prime");
  // conjugation x -> x^r is the Frobenius itself since r is prime here
  std::vector<int> real, all;
  for (int x = 0; x < f.order(); ++x) {
    all.push_back(x);
    if (f.frobenius(x) == x) real.push_back(x);
  }
  std::vector<std::pair<int, int>> free_cells;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) free_cells.emplace_back(i, j);
  std::vector<std::vector<int>> labels;
  std::vector<size_t> choice(free_cells.size(), 0);
  while (true) {
    std::vector<int> m(static_cast<size_t>(d * d));
    for (size_t k = 0; k < free_cells.size(); ++k) {
      auto [i, j] = free_cells[k];
      const int v = i == j ? real[choice[k]] : all[choice[k]];
      m[static_cast<size_t>(i * d + j)] = v;
      m[static_cast<size_t>(j * d + i)] = i == j ? v : f.frobenius(v);
    }
    labels.push_back(std::move(m));
    size_t k = 0;
    for (; k < free_cells.size(); ++k) {
      const size_t limit = free_cells[k].first == free_cells[k].second ? real.size() : all.size();
      if (++choice[k] < limit) break;
      choice[k] = 0;
    }
    if (k == free_cells.size()) break;
  }
  return forms_graph(f, std::move(labels), d, d, "hermitian:" + std::to_string(d) + "," + std::to_string(r));
}

Graph build_family(const std::string& descriptor) {
  const size_t colon = descriptor.find(':');
  if (colon == std::string::npos) throw Error(ErrorKind::ConfigError, "graph descriptor needs family:params");
  const std::string family = descriptor.substr(0, colon), args = descriptor.substr(colon + 1);
  if (family == "file") return graph_from_file(args);
  std::vector<int> v = parse_ints(args, descriptor);
  auto need = [&](size_t k) {
    if (v.size() != k) throw Error(ErrorKind::ConfigError, family + " takes " + std::to_string(k) + " parameters");
  };
  Graph g;
  if (family == "hamming") {
    need(2);
    g = hamming(v[0], v[1]);
  } else if (family == "johnson") {
    need(2);
    g = johnson(v[0], v[1]);
  } else if (family == "cycle") {
    need(1);
    g = cycle(v[0]);
  } else if (family == "bilinear") {
    need(3);
    g = bilinear_forms(v[0], v[1], v[2]);
  } else if (family == "hermitian") {
    need(2);
    g = hermitian_forms(v[0], v[1]);
  } else {
    throw Error(ErrorKind::ConfigError, "unknown graph family '" + family + "'");
  }
  validate(g);
  return g;
}

Graph graph_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  Graph g;
  bool have_n = false;
  std::vector<std::pair<int, int>> edges;
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<long> tok;
    std::string word;
    while (ls >> word) {
      try {
        size_t used = 0;
        long v = std::stol(word, &used);
        if (used != word.size()) throw std::invalid_argument(word);
        tok.push_back(v);
      } catch (const std::exception&) {
        throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": bad token '" + word + "'");
      }
    }
    if (tok.empty()) continue;
    if (!have_n) {
      if (tok.size() != 1 || tok[0] <= 0) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected vertex count");
      g.n = static_cast<int>(tok[0]);
      have_n = true;
      continue;
    }
    if (tok.size() != 2) throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'u v'");
    if (tok[0] < 0 || tok[0] >= g.n || tok[1] < 0 || tok[1] >= g.n) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": vertex out of range");
    }
    if (tok[0] == tok[1]) throw Error(ErrorKind::LoopOrMultiEdge, "line " + std::to_string(lineno) + ": loop");
    edges.emplace_back(static_cast<int>(tok[0]), static_cast<int>(tok[1]));
  }
  if (!have_n) throw Error(ErrorKind::ParseError, "missing vertex count");
  g.adj.assign(static_cast<size_t>(g.n), {});
  for (auto [u, v] : edges) {
    g.adj[static_cast<size_t>(u)].push_back(v);
    g.adj[static_cast<size_t>(v)].push_back(u);
  }
  for (int u = 0; u < g.n; ++u) {
    g.labels.push_back(std::to_string(u));
    std::sort(g.adj[static_cast<size_t>(u)].begin(), g.adj[static_cast<size_t>(u)].end());
  }
  validate(g);
  return g;
}

Graph graph_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  Graph g = graph_from_text(ss.str());
  g.name = "file:" + path;
  return g;
}

ExactMat DistanceData::A(int i) const {
  ExactMat a = ExactMat::Zero(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if ((*this)(x, y) == i) a(x, y) = Scalar(1);
  return a;
}

std::vector<int> DistanceData::sphere(int x, int i) const {
  std::vector<int> out;
  for (int y = 0; y < n; ++y)
    if ((*this)(x, y) == i) out.push_back(y);
  return out;
}

std::vector<int> DistanceData::sphere_sizes(int x) const {
  std::vector<int> out(static_cast<size_t>(D + 1), 0);
  for (int y = 0; y < n; ++y) ++out[static_cast<size_t>((*this)(x, y))];
  return out;
}

DistanceData distance_data(const Graph& g) {
  DistanceData dd;
  dd.n = g.n;
  const size_t n = static_cast<size_t>(g.n);
  dd.dist.assign(n * n, 0xff);
  std::vector<int> queue(n);
  for (int s = 0; s < g.n; ++s) {
    uint8_t* row = &dd.dist[static_cast<size_t>(s) * n];
    row[s] = 0;
    size_t head = 0, tail = 0;
    queue[tail++] = s;
    while (head < tail) {
      const int u = queue[head++];
      for (int v : g.adj[static_cast<size_t>(u)]) {
        if (row[v] != 0xff) continue;
        if (row[u] >= 254) throw Error(ErrorKind::DegenerateParameters, "diameter too large");
        row[v] = static_cast<uint8_t>(row[u] + 1);
        queue[tail++] = v;
      }
    }
    if (tail != n) {
      throw Error(ErrorKind::Disconnected, "vertex " + std::to_string(s) + " reaches " + std::to_string(tail) +
                                               " of " + std::to_string(n) + " vertices");
    }
    for (size_t y = 0; y < n; ++y) dd.D = std::max(dd.D, static_cast<int>(row[y]));
  }
  for (size_t x = 0; x < n; ++x)
    for (size_t y = 0; y < x; ++y)
      if (dd.dist[x * n + y] != dd.dist[y * n + x]) throw Error(ErrorKind::PropertyViolation, "distance not symmetric");
  return dd;
}

std::string IntersectionData::array_string() const {
  std::string s = "{";
  for (int i = 0; i < D; ++i) s += (i ? "," : "") + std::to_string(b[static_cast<size_t>(i)]);
  s += ";";
  for (int i = 1; i <= D; ++i) s += (i > 1 ? "," : "") + std::to_string(c[static_cast<size_t>(i)]);
  return s + "}";
}

IntersectionData intersection_numbers(const Graph& g, const DistanceData& dd) {
  const int D = dd.D, n = dd.n;
  const size_t w = static_cast<size_t>(D + 1);
  IntersectionData out;
  out.D = D;
  out.p.assign(w * w * w, -1);
  std::vector<long> counts(w * w);
  auto count_pair = [&](int x, int y) {
    std::fill(counts.begin(), counts.end(), 0);
    const uint8_t* rx = &dd.dist[static_cast<size_t>(x) * static_cast<size_t>(n)];
    const uint8_t* ry = &dd.dist[static_cast<size_t>(y) * static_cast<size_t>(n)];
    for (int z = 0; z < n; ++z) ++counts[rx[z] * w + ry[z]];
  };
  // reference pair per distance: (0, first vertex at that distance)
  for (int h = 0; h <= D; ++h) {
    int y = dd.sphere(0, h).front();
    count_pair(0, y);
    std::copy(counts.begin(), counts.end(), out.p.begin() + static_cast<long>(static_cast<size_t>(h) * w * w));
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const int h = dd(x, y);
      count_pair(x, y);
      for (size_t k = 0; k < w * w; ++k) {
        const long expect = out.p[static_cast<size_t>(h) * w * w + k];
        if (counts[k] != expect) {
          throw Error(ErrorKind::NotDistanceRegular,
                      "pair (" + std::to_string(x) + "," + std::to_string(y) + ") at distance " + std::to_string(h) +
                          ": p^" + std::to_string(h) + "_{" + std::to_string(k / w) + "," + std::to_string(k % w) +
                          "} = " + std::to_string(counts[k]) + " vs " + std::to_string(expect));
        }
      }
    }
  }
  out.c.assign(w, 0);
  out.a.assign(w, 0);
  out.b.assign(w, 0);
  for (int i = 0; i <= D; ++i) {
    if (i > 0) out.c[static_cast<size_t>(i)] = out(i, 1, i - 1);
    out.a[static_cast<size_t>(i)] = out(i, 1, i);
    if (i < D) out.b[static_cast<size_t>(i)] = out(i, 1, i + 1);
  }
  for (int i = 0; i <= D; ++i) {
    if (out.c[static_cast<size_t>(i)] + out.a[static_cast<size_t>(i)] + out.b[static_cast<size_t>(i)] != out.b[0]) {
      throw Error(ErrorKind::NotDistanceRegular, "c_i + a_i + b_i != valency at i = " + std::to_string(i));
    }
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if ((dd(x, y) == 1) != g.adjacent(x, y)) throw Error(ErrorKind::PropertyViolation, "distance data does not match graph");
  return out;
}

}  // namespace splitdec
