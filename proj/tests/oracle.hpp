#pragma once

// Slow reference implementations for cross-checking the complex machinery.
// Tuples are enumerated explicitly and looked up through a map, matrices are
// dense integer tables, ranks come from textbook elimination.  No index
// arithmetic is shared with the library side.

#include <cstddef>
#include <map>
#include <vector>

#include "locoh/fp.hpp"
#include "locoh/gmodule.hpp"
#include "locoh/group.hpp"

namespace oracle {

using locoh::i64;
using locoh::u32;

inline std::size_t gauss_rank(u32 p, std::vector<std::vector<i64>> m) {
  if (m.empty() || m[0].empty()) return 0;
  const std::size_t rows = m.size(), cols = m[0].size();
  for (auto& row : m)
    for (auto& x : row) x = ((x % i64(p)) + i64(p)) % i64(p);
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && m[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[r]);
    const i64 inv = locoh::inv_mod(u32(m[r][c]), p);
    for (auto& x : m[r]) x = (x * inv) % i64(p);
    for (std::size_t k = 0; k < rows; ++k) {
      if (k == r || m[k][c] == 0) continue;
      const i64 f = m[k][c];
      for (std::size_t j = 0; j < cols; ++j)
        m[k][j] = ((m[k][j] - f * m[r][j]) % i64(p) + i64(p)) % i64(p);
    }
    ++r;
  }
  return r;
}

// All length-n tuples of non-identity element indices, first slot slowest.
inline std::vector<std::vector<u32>> all_tuples(const locoh::FiniteGroup& g, std::size_t n) {
  std::vector<std::vector<u32>> out;
  std::vector<u32> cur;
  const auto rec = [&](auto&& self, std::size_t depth) -> void {
    if (depth == n) {
      out.push_back(cur);
      return;
    }
    for (u32 e = 1; e < g.order(); ++e) {
      cur.push_back(e);
      self(self, depth + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

inline std::map<std::vector<u32>, std::size_t> positions(
    const std::vector<std::vector<u32>>& tuples) {
  std::map<std::vector<u32>, std::size_t> pos;
  for (std::size_t i = 0; i < tuples.size(); ++i) pos[tuples[i]] = i;
  return pos;
}

inline std::vector<std::vector<i64>> naive_coboundary(const locoh::GModule& v, std::size_t n) {
  const auto& g = *v.group();
  const auto src = all_tuples(g, n);
  const auto dst = all_tuples(g, n + 1);
  const auto pos = positions(src);
  const std::size_t dv = v.dim();
  std::vector<std::vector<i64>> m(dst.size() * dv, std::vector<i64>(src.size() * dv, 0));
  for (std::size_t t = 0; t < dst.size(); ++t) {
    const auto& e = dst[t];
    const std::vector<u32> tail(e.begin() + 1, e.end());
    const std::size_t ti = pos.at(tail);
    for (std::size_t b2 = 0; b2 < dv; ++b2)
      for (std::size_t b = 0; b < dv; ++b)
        m[t * dv + b2][ti * dv + b] += i64(v.action(e[0]).at(b2, b));
    i64 sign = -1;
    for (std::size_t i = 1; i <= n; ++i) {
      const u32 prod = g.mult(e[i - 1], e[i]);
      if (prod != g.identity_index()) {
        std::vector<u32> merged;
        for (std::size_t k = 0; k + 1 < i; ++k) merged.push_back(e[k]);
        merged.push_back(prod);
        for (std::size_t k = i + 1; k <= n; ++k) merged.push_back(e[k]);
        const std::size_t mi = pos.at(merged);
        for (std::size_t b2 = 0; b2 < dv; ++b2) m[t * dv + b2][mi * dv + b2] += sign;
      }
      sign = -sign;
    }
    const std::vector<u32> prefix(e.begin(), e.end() - 1);
    const std::size_t pi = pos.at(prefix);
    for (std::size_t b2 = 0; b2 < dv; ++b2) m[t * dv + b2][pi * dv + b2] += sign;
  }
  return m;
}

inline std::vector<std::vector<i64>> naive_boundary(const locoh::GModule& v, std::size_t n) {
  const auto& g = *v.group();
  const auto src = all_tuples(g, n);
  const auto dst = all_tuples(g, n - 1);
  const auto pos = positions(dst);
  const std::size_t dv = v.dim();
  std::vector<std::vector<i64>> m(dst.size() * dv, std::vector<i64>(src.size() * dv, 0));
  for (std::size_t t = 0; t < src.size(); ++t) {
    const auto& e = src[t];
    const std::vector<u32> tail(e.begin() + 1, e.end());
    const std::size_t ti = pos.at(tail);
    const auto inv_act = v.action(g.inv(e[0]));
    for (std::size_t b2 = 0; b2 < dv; ++b2)
      for (std::size_t b = 0; b < dv; ++b)
        m[ti * dv + b2][t * dv + b] += i64(inv_act.at(b2, b));
    i64 sign = -1;
    for (std::size_t i = 1; i + 1 <= n; ++i) {
      const u32 prod = g.mult(e[i - 1], e[i]);
      if (prod != g.identity_index()) {
        std::vector<u32> merged;
        for (std::size_t k = 0; k + 1 < i; ++k) merged.push_back(e[k]);
        merged.push_back(prod);
        for (std::size_t k = i + 1; k < n; ++k) merged.push_back(e[k]);
        const std::size_t mi = pos.at(merged);
        for (std::size_t b = 0; b < dv; ++b) m[mi * dv + b][t * dv + b] += sign;
      }
      sign = -sign;
    }
    const std::vector<u32> prefix(e.begin(), e.end() - 1);
    const std::size_t pi = pos.at(prefix);
    for (std::size_t b = 0; b < dv; ++b) m[pi * dv + b][t * dv + b] += sign;
  }
  return m;
}

struct NaiveDims {
  std::size_t h, z, b;
};

inline NaiveDims naive_cohomology(const locoh::GModule& v, std::size_t n) {
  const std::size_t cn = all_tuples(*v.group(), n).size() * v.dim();
  const std::size_t z = cn - gauss_rank(v.modulus(), naive_coboundary(v, n));
  const std::size_t b = n == 0 ? 0 : gauss_rank(v.modulus(), naive_coboundary(v, n - 1));
  return {z - b, z, b};
}

inline NaiveDims naive_homology(const locoh::GModule& v, std::size_t n) {
  const std::size_t cn = all_tuples(*v.group(), n).size() * v.dim();
  const std::size_t rk = n == 0 ? 0 : gauss_rank(v.modulus(), naive_boundary(v, n));
  const std::size_t z = cn - rk;
  const std::size_t b = gauss_rank(v.modulus(), naive_boundary(v, n + 1));
  return {z - b, z, b};
}

}  // namespace oracle
