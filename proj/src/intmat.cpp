#include "splitdec/detail/intmat.hpp"

#include <algorithm>
#include <mutex>

namespace splitdec::detail {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u}) {
    if (n % p == 0) return n == p;
  }
  uint32_t d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  for (uint64_t a : {2ull, 7ull, 61ull}) {
    if (a % n == 0) continue;
    uint64_t x = 1, base = a % n, e = d;
    while (e) {
      if (e & 1) x = x * base % n;
      base = base * base % n;
      e >>= 1;
    }
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = x * x % n;
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

size_t ceil_log2(size_t v) {
  size_t bits = 0;
  while ((size_t{1} << bits) < v) ++bits;
  return bits;
}

Integer from_i128(i128 v) {
  bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  uint64_t hi = static_cast<uint64_t>(u >> 64);
  uint64_t lo = static_cast<uint64_t>(u);
  Integer out(static_cast<unsigned long>(hi));
  out <<= 64;
  out += Integer(static_cast<unsigned long>(lo));
  if (neg) out = -out;
  return out;
}

uint64_t pow_mod(uint64_t base, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  base %= m;
  while (e) {
    if (e & 1) r = r * base % m;
    base = base * base % m;
    e >>= 1;
  }
  return r;
}

std::vector<uint32_t> reduce(const IntMatrix& m, uint32_t p) {
  std::vector<uint32_t> out(m.data.size());
  for (size_t k = 0; k < m.data.size(); ++k) {
    const Integer& v = m.data[k];
    if (v.fits_slong_p()) {
      long x = v.get_si() % static_cast<long>(p);
      out[k] = static_cast<uint32_t>(x < 0 ? x + static_cast<long>(p) : x);
    } else {
      out[k] = static_cast<uint32_t>(mpz_fdiv_ui(v.get_mpz_t(), p));
    }
  }
  return out;
}

IntMatrix matmul_native(const IntMatrix& a, const IntMatrix& b) {
  const Index m = a.rows, k = a.cols, n = b.cols;
  std::vector<int64_t> av(a.data.size()), bv(b.data.size());
  for (size_t t = 0; t < av.size(); ++t) av[t] = a.data[t].get_si();
  for (size_t t = 0; t < bv.size(); ++t) bv[t] = b.data[t].get_si();
  IntMatrix out(m, n);
  std::vector<i128> acc(static_cast<size_t>(n));
  for (Index i = 0; i < m; ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (Index l = 0; l < k; ++l) {
      const int64_t x = av[static_cast<size_t>(i * k + l)];
      if (x == 0) continue;
      const int64_t* brow = &bv[static_cast<size_t>(l * n)];
      for (Index j = 0; j < n; ++j) acc[static_cast<size_t>(j)] += static_cast<i128>(x) * brow[j];
    }
    for (Index j = 0; j < n; ++j) out(i, j) = from_i128(acc[static_cast<size_t>(j)]);
  }
  return out;
}

IntMatrix matmul_crt(const IntMatrix& a, const IntMatrix& b, size_t needed_bits) {
  const Index m = a.rows, k = a.cols, n = b.cols;
  const size_t nprimes = needed_bits / 30 + 1;
  std::vector<uint32_t> primes(nprimes);
  std::vector<std::vector<uint32_t>> residues(nprimes);
  for (size_t t = 0; t < nprimes; ++t) {
    const uint32_t p = word_prime(t);
    primes[t] = p;
    std::vector<uint32_t> ar = reduce(a, p), br = reduce(b, p);
    std::vector<uint32_t>& out = residues[t];
    out.assign(static_cast<size_t>(m * n), 0);
    std::vector<u128> acc(static_cast<size_t>(n));
    for (Index i = 0; i < m; ++i) {
      std::fill(acc.begin(), acc.end(), 0);
      for (Index l = 0; l < k; ++l) {
        const uint64_t x = ar[static_cast<size_t>(i * k + l)];
        if (x == 0) continue;
        const uint32_t* brow = &br[static_cast<size_t>(l * n)];
        for (Index j = 0; j < n; ++j) acc[static_cast<size_t>(j)] += x * brow[j];
      }
      for (Index j = 0; j < n; ++j) out[static_cast<size_t>(i * n + j)] = static_cast<uint32_t>(acc[static_cast<size_t>(j)] % p);
    }
  }
  // Garner: x = r0 + p0*(c1 + p1*(c2 + ...)), then shift to the symmetric range.
  std::vector<std::vector<uint64_t>> inv(nprimes, std::vector<uint64_t>(nprimes, 0));
  for (size_t s = 0; s < nprimes; ++s)
    for (size_t t = s + 1; t < nprimes; ++t) inv[s][t] = pow_mod(primes[s] % primes[t], primes[t] - 2, primes[t]);
  Integer modulus = 1;
  for (uint32_t p : primes) modulus *= p;
  Integer half = modulus / 2;
  IntMatrix out(m, n);
  std::vector<uint64_t> c(nprimes);
  for (size_t e = 0; e < static_cast<size_t>(m * n); ++e) {
    for (size_t t = 0; t < nprimes; ++t) {
      uint64_t x = residues[t][e];
      for (size_t s = 0; s < t; ++s) {
        x = (x + primes[t] - c[s] % primes[t]) % primes[t];
        x = x * inv[s][t] % primes[t];
      }
      c[t] = x;
    }
    Integer v = c[nprimes - 1];
    for (size_t t = nprimes - 1; t-- > 0;) {
      v *= primes[t];
      v += c[t];
    }
    if (v > half) v -= modulus;
    out.data[e] = std::move(v);
  }
  return out;
}

}  // namespace

size_t IntMatrix::max_bits() const {
  size_t bits = 0;
  for (const Integer& v : data) bits = std::max(bits, mpz_sizeinbase(v.get_mpz_t(), 2));
  return bits;
}

uint32_t word_prime(size_t index) {
  static std::mutex lock;
  static std::vector<uint32_t> primes;
  std::lock_guard<std::mutex> guard(lock);
  uint32_t candidate = primes.empty() ? 0x7fffffffu : primes.back() - 2;
  while (primes.size() <= index) {
    while (!is_prime_u32(candidate)) candidate -= 2;
    primes.push_back(candidate);
    candidate -= 2;
  }
  return primes[index];
}

IntMatrix int_matmul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols != b.rows) throw Error(ErrorKind::ShapeMismatch, "int_matmul: inner dimensions differ");
  const size_t ba = a.max_bits(), bb = b.max_bits();
  if (ba == 0 || bb == 0) {
    IntMatrix out(a.rows, b.cols);
    return out;
  }
  const size_t lk = ceil_log2(static_cast<size_t>(a.cols) + 1);
  if (ba <= 62 && bb <= 62 && ba + bb + lk <= 124) return matmul_native(a, b);
  return matmul_crt(a, b, ba + bb + lk + 2);
}

RowScaled scale_rows(const ExactMat& m, Part part) {
  RowScaled out{IntMatrix(m.rows(), m.cols()), std::vector<Integer>(static_cast<size_t>(m.rows()), 1)};
  for (Index i = 0; i < m.rows(); ++i) {
    Integer& den = out.den[static_cast<size_t>(i)];
    for (Index j = 0; j < m.cols(); ++j) {
      const Rational& v = part == Part::rational ? m(i, j).rational_part() : m(i, j).root_part();
      if (v.get_den() != 1) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    }
    for (Index j = 0; j < m.cols(); ++j) {
      const Rational& v = part == Part::rational ? m(i, j).rational_part() : m(i, j).root_part();
      if (sgn(v) == 0) continue;
      out.num(i, j) = v.get_num() * (den / v.get_den());
    }
  }
  return out;
}

ColScaled scale_cols(const ExactMat& m, Part part) {
  ColScaled out{IntMatrix(m.rows(), m.cols()), std::vector<Integer>(static_cast<size_t>(m.cols()), 1)};
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const Rational& v = part == Part::rational ? m(i, j).rational_part() : m(i, j).root_part();
      Integer& den = out.den[static_cast<size_t>(j)];
      if (v.get_den() != 1) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
    }
  }
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      const Rational& v = part == Part::rational ? m(i, j).rational_part() : m(i, j).root_part();
      if (sgn(v) == 0) continue;
      out.num(i, j) = v.get_num() * (out.den[static_cast<size_t>(j)] / v.get_den());
    }
  }
  return out;
}

std::vector<Rational> rational_matmul(const ExactMat& a, Part pa, const ExactMat& b, Part pb) {
  RowScaled ra = scale_rows(a, pa);
  ColScaled cb = scale_cols(b, pb);
  IntMatrix prod = int_matmul(ra.num, cb.num);
  std::vector<Rational> out(static_cast<size_t>(a.rows() * b.cols()));
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      const Integer& v = prod(i, j);
      if (sgn(v) == 0) continue;
      Rational& r = out[static_cast<size_t>(i * b.cols() + j)];
      r = Rational(v, ra.den[static_cast<size_t>(i)] * cb.den[static_cast<size_t>(j)]);
      r.canonicalize();
    }
  }
  return out;
}

}  // namespace splitdec::detail
