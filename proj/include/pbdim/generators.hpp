#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "design.hpp"
#include "field.hpp"

namespace pbdim {

constexpr long long kMaxGeneratedPoints = 1 << 20;

/// Points and lines of the affine space of dimension d over GF(q).  Points
/// are d-tuples over the field, numbered with coordinate 0 most significant;
/// lines are the point sets {u + t*w : t in GF(q)} over all u and all
/// directions w != 0, each line listed once.  Gives a PBD(q^d, {q}) with
/// q^(d-1) * (q^d - 1)/(q - 1) lines.
inline PBDesign affine_space(long long q, int d) {
  FiniteField f = field_for_order(q);
  if (d < 1) throw Error("dimension must be positive");
  long long npoints = 1;
  for (int i = 0; i < d; ++i) {
    npoints *= q;
    if (npoints > kMaxGeneratedPoints)
      throw TooLargeError("affine space exceeds " +
                          std::to_string(kMaxGeneratedPoints) + " points");
  }

  auto decode = [&](long long id) {
    std::vector<long long> c(d);
    for (int i = d - 1; i >= 0; --i) {
      c[i] = id % q;
      id /= q;
    }
    return c;
  };
  auto encode = [&](const std::vector<long long>& c) {
    long long id = 0;
    for (int i = 0; i < d; ++i) id = id * q + c[i];
    return id;
  };

  PBDesign out;
  out.v = (int)npoints;
  out.declared_sizes = std::vector<int>{(int)q};

  // Directions up to scalar: first nonzero coordinate is 1.  For each
  // direction, points on a common line share a coset; a visited stamp keyed
  // by direction avoids listing a line q times.
  std::vector<std::uint32_t> visited(npoints, 0);
  std::uint32_t epoch = 0;
  std::vector<long long> dir(d), base(d), cur(d);
  for (int lead = 0; lead < d; ++lead) {
    long long free_count = 1;
    for (int i = lead + 1; i < d; ++i) free_count *= q;
    for (long long tail = 0; tail < free_count; ++tail) {
      for (int i = 0; i < lead; ++i) dir[i] = 0;
      dir[lead] = 1;
      long long t = tail;
      for (int i = d - 1; i > lead; --i) {
        dir[i] = t % q;
        t /= q;
      }
      ++epoch;
      for (long long p = 0; p < npoints; ++p) {
        if (visited[p] == epoch) continue;
        base = decode(p);
        Block line;
        line.reserve(q);
        for (long long s = 0; s < q; ++s) {
          for (int i = 0; i < d; ++i) cur[i] = f.add(base[i], f.mul(s, dir[i]));
          long long id = encode(cur);
          visited[id] = epoch;
          line.push_back((int)id);
        }
        out.blocks.push_back(std::move(line));
      }
    }
  }
  canonicalize(out);
  return out;
}

/// Points and lines of the projective plane of order q: a PBD with
/// q^2 + q + 1 points, the same number of lines, every line of size q + 1.
/// Points are normalized homogeneous triples, numbered (1, a, b) first as
/// a*q + b, then (0, 1, c) as q^2 + c, then (0, 0, 1) last.
inline PBDesign projective_plane(long long q) {
  FiniteField f = field_for_order(q);
  long long npoints = q * q + q + 1;
  if (npoints > kMaxGeneratedPoints)
    throw TooLargeError("projective plane exceeds " +
                        std::to_string(kMaxGeneratedPoints) + " points");

  std::vector<std::array<long long, 3>> reps;
  reps.reserve(npoints);
  for (long long a = 0; a < q; ++a)
    for (long long b = 0; b < q; ++b) reps.push_back({1, a, b});
  for (long long c = 0; c < q; ++c) reps.push_back({0, 1, c});
  reps.push_back({0, 0, 1});

  PBDesign out;
  out.v = (int)npoints;
  out.declared_sizes = std::vector<int>{(int)(q + 1)};
  for (long long li = 0; li < npoints; ++li) {
    const auto& u = reps[li];
    Block line;
    line.reserve(q + 1);
    for (long long pi = 0; pi < npoints; ++pi) {
      const auto& x = reps[pi];
      long long dot = f.add(f.add(f.mul(u[0], x[0]), f.mul(u[1], x[1])),
                            f.mul(u[2], x[2]));
      if (dot == 0) line.push_back((int)pi);
    }
    out.blocks.push_back(std::move(line));
  }
  canonicalize(out);
  return out;
}

/// Transversal design TD(k, n) from the field of order n: a GDD with k
/// groups of size n whose n^2 blocks are the graphs of the linear maps
/// t -> a + b*t restricted to k slopes (plus an extra coordinate recording b
/// when k = n + 1).  Point i*n + e is element e of group i.  Requires n a
/// prime power and 2 <= k <= n + 1.
inline GroupDesign transversal_design(int k, long long n) {
  if (k < 2) throw Error("transversal designs need at least 2 groups");
  // Unsupported rather than a hard arithmetic error: the registry may still
  // supply this TD even though the field construction cannot.
  if (n < 2 || !prime_power_decompose(n))
    throw UnsupportedError("no field-based TD(" + std::to_string(k) + ", " +
                           std::to_string(n) + "): group size is not a prime "
                           "power");
  if (k > n + 1)
    throw UnsupportedError("no field-based TD(" + std::to_string(k) + ", " +
                           std::to_string(n) + "): k exceeds n + 1");
  FiniteField f = field_for_order(n);
  if ((long long)k * n > kMaxGeneratedPoints)
    throw TooLargeError("transversal design exceeds point budget");

  GroupDesign out;
  out.v = (int)(k * n);
  for (int i = 0; i < k; ++i) {
    Block grp;
    grp.reserve(n);
    for (long long e = 0; e < n; ++e) grp.push_back((int)(i * n + e));
    out.groups.push_back(std::move(grp));
  }
  bool extended = (k == n + 1);
  int slopes = extended ? (int)n : k;
  for (long long a = 0; a < n; ++a)
    for (long long b = 0; b < n; ++b) {
      Block blk;
      blk.reserve(k);
      for (int i = 0; i < slopes; ++i)
        blk.push_back((int)(i * n + f.add(a, f.mul(b, i))));
      if (extended) blk.push_back((int)(slopes * n + b));
      out.blocks.push_back(std::move(blk));
    }
  canonicalize(out);
  return out;
}

namespace detail {

// Bose: v = 6t + 3.  Points are (x, j) with x mod n = 2t + 1, j in {0,1,2},
// numbered j*n + x.  The quasigroup x*y = (x + y)/2 mod n (halving uses the
// odd modulus) is idempotent and symmetric.
inline PBDesign sts_bose(int t) {
  int n = 2 * t + 1;
  long long half = t + 1;  // inverse of 2 mod n
  PBDesign out;
  out.v = 3 * n;
  out.declared_sizes = std::vector<int>{3};
  auto pt = [&](long long j, long long x) { return (int)(j * n + x); };
  for (int x = 0; x < n; ++x)
    out.blocks.push_back({pt(0, x), pt(1, x), pt(2, x)});
  for (int j = 0; j < 3; ++j)
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        out.blocks.push_back(
            {pt(j, x), pt(j, y), pt((j + 1) % 3, (x + y) * half % n)});
  canonicalize(out);
  return out;
}

// Skolem: v = 6t + 1.  Points are (x, j) with x mod n = 2t plus one extra
// point 3n.  Uses the half-idempotent symmetric quasigroup on Z_{2t} given
// by h((x + y) mod 2t) with h(2s) = s, h(2s + 1) = t + s.
inline PBDesign sts_skolem(int t) {
  int n = 2 * t;
  PBDesign out;
  out.v = 3 * n + 1;
  out.declared_sizes = std::vector<int>{3};
  int infinity = 3 * n;
  auto pt = [&](int j, int x) { return j * n + x; };
  auto h = [&](int s) { return s % 2 == 0 ? s / 2 : t + (s - 1) / 2; };
  for (int i = 0; i < t; ++i)
    out.blocks.push_back({pt(0, i), pt(1, i), pt(2, i)});
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < t; ++i)
      out.blocks.push_back({infinity, pt(j, t + i), pt((j + 1) % 3, i)});
  for (int j = 0; j < 3; ++j)
    for (int x = 0; x < n; ++x)
      for (int y = x + 1; y < n; ++y)
        out.blocks.push_back(
            {pt(j, x), pt(j, y), pt((j + 1) % 3, h((x + y) % n))});
  canonicalize(out);
  return out;
}

}  // namespace detail

/// Steiner triple system of order v, for v = 1 or 3 (mod 6).  Order 1 is the
/// blockless system.
inline PBDesign steiner_triple_system(long long v) {
  if (v < 1 || (v % 6 != 1 && v % 6 != 3))
    throw InadmissibleError("no triple system of order " + std::to_string(v));
  if (v > kMaxGeneratedPoints)
    throw TooLargeError("triple system exceeds point budget");
  if (v == 1) {
    PBDesign out;
    out.v = 1;
    out.declared_sizes = std::vector<int>{3};
    return out;
  }
  return v % 6 == 3 ? detail::sts_bose((int)(v / 6))
                    : detail::sts_skolem((int)(v / 6));
}

}  // namespace pbdim
