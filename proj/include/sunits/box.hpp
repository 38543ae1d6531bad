#pragma once

// Height-box enumeration of field elements and the partitioned parallel
// driver shared by every brute-force scan.
//
// An element of height <= H is (a_0 + a_1 t + ... ) / D with 1 <= D <= H,
// |a_i| <= H and gcd(a_0, ..., a_{n-1}, D) = 1. The stream is ordered by
// denominator, then by the coordinate tuple in odometer order, and a shard is
// the set of denominators congruent to a fixed residue.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <thread>
#include <vector>

#include "sunits/number_field.hpp"

namespace sunits {

struct BoxShard {
  long index = 0;  // residue of the denominator
  long count = 1;  // modulus
};

namespace detail {

inline long gcd_long(long a, long b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b) {
    long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace detail

/// Calls fn(num, den) for every reduced fraction with max(|num|, den) <= H
/// and den in the shard. This is the rational-field stream without any
/// FieldElement construction.
template <class Fn>
void for_each_rational_in_box(long H, BoxShard shard, Fn&& fn) {
  require(H >= 1, ErrorKind::InvalidArgument, "height bound must be >= 1");
  std::vector<char> shares(static_cast<std::size_t>(H) + 1);
  for (long d = 1 + shard.index; d <= H; d += shard.count) {
    if (d == 1) fn(0L, 1L);
    // sieve out numerators sharing a prime with d
    std::fill(shares.begin(), shares.end(), 0);
    long rest = d;
    for (long q = 2; q * q <= rest; ++q) {
      if (rest % q) continue;
      while (rest % q == 0) rest /= q;
      for (long k = q; k <= H; k += q) shares[static_cast<std::size_t>(k)] = 1;
    }
    if (rest > 1)
      for (long k = rest; k <= H; k += rest) shares[static_cast<std::size_t>(k)] = 1;
    for (long a = 1; a <= H; ++a) {
      if (shares[static_cast<std::size_t>(a)]) continue;
      fn(a, d);
      fn(-a, d);
    }
  }
}

/// Calls fn(element) for every element of height <= H in the shard.
template <class Fn>
void for_each_in_box(const NumberField& K, long H, BoxShard shard, Fn&& fn) {
  require(H >= 1, ErrorKind::InvalidArgument, "height bound must be >= 1");
  const int n = K.degree();
  if (n == 1) {
    for_each_rational_in_box(H, shard, [&](long a, long d) { fn(K.from_rational(make_rational(Integer(a), Integer(d)))); });
    return;
  }
  std::vector<long> a(static_cast<std::size_t>(n));
  for (long d = 1 + shard.index; d <= H; d += shard.count) {
    std::fill(a.begin(), a.end(), -H);
    for (;;) {
      long g = d;
      for (long x : a) g = detail::gcd_long(g, x);
      if (g == 1) {
        std::vector<Rational> c;
        c.reserve(a.size());
        for (long x : a) c.push_back(make_rational(Integer(x), Integer(d)));
        fn(K.element(std::move(c)));
      }
      std::size_t i = 0;
      while (i < a.size() && a[i] == H) a[i++] = -H;
      if (i == a.size()) break;
      ++a[i];
    }
  }
}

template <class Fn>
void for_each_in_box(const NumberField& K, long H, Fn&& fn) {
  for_each_in_box(K, H, BoxShard{}, std::forward<Fn>(fn));
}

inline std::vector<FieldElement> enumerate_box(const NumberField& K, long H) {
  std::vector<FieldElement> out;
  for_each_in_box(K, H, [&](const FieldElement& x) { out.push_back(x); });
  return out;
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Runs work(shard, local_result) on `threads` disjoint shards and returns the
/// per-shard results in shard order. Merging them is the caller's job; every
/// caller sorts canonically, so the merged output is independent of the
/// thread count.
template <class Result, class Work>
std::vector<Result> run_sharded(unsigned threads, Work&& work) {
  threads = resolve_threads(threads);
  std::vector<Result> results(threads);
  if (threads == 1) {
    work(BoxShard{0, 1}, results[0]);
    return results;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        work(BoxShard{static_cast<long>(t), static_cast<long>(threads)}, results[t]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace sunits
