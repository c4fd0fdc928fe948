// Arithmetic in GF(q) for prime q, and in the quadratic extension
// GF(q^2) = GF(q)[w]/(w^2 - n) with n the smallest non-square of GF(q).
#pragma once

#include <cstdint>
#include <stdexcept>

namespace fgeo {

// Residues are plain ints in [0, q); all operations reduce eagerly.
struct PrimeField {
  int q;

  explicit PrimeField(int q_prime);

  int add(int x, int y) const {
    int s = x + y;
    return s >= q ? s - q : s;
  }
  int sub(int x, int y) const {
    int d = x - y;
    return d < 0 ? d + q : d;
  }
  int neg(int x) const { return x ? q - x : 0; }
  int mul(int x, int y) const { return x * y % q; }
  int inv(int x) const;
  int pow(int x, long long e) const;
  bool is_square(int x) const;
  int smallest_non_square() const;
};

// a + b*w with w^2 = n.
struct QuadExtElement {
  uint8_t a = 0, b = 0;
  bool operator==(const QuadExtElement&) const = default;
};

struct QuadExtField {
  PrimeField fp;
  int n;  // w^2 = n

  explicit QuadExtField(int q_prime);

  int q() const { return fp.q; }
  int order() const { return fp.q * fp.q; }

  QuadExtElement make(int a, int b) const {
    return {static_cast<uint8_t>(a), static_cast<uint8_t>(b)};
  }
  QuadExtElement zero() const { return {0, 0}; }
  QuadExtElement one() const { return {1, 0}; }
  QuadExtElement omega() const { return {0, 1}; }
  bool is_zero(QuadExtElement x) const { return x.a == 0 && x.b == 0; }
  bool in_subfield(QuadExtElement x) const { return x.b == 0; }

  // (a, b)-lexicographic rank; the element ordering used wherever a
  // deterministic choice among field elements is needed.
  int index_of(QuadExtElement x) const { return x.a * fp.q + x.b; }
  QuadExtElement element(int index) const {
    return make(index / fp.q, index % fp.q);
  }

  QuadExtElement add(QuadExtElement x, QuadExtElement y) const {
    return make(fp.add(x.a, y.a), fp.add(x.b, y.b));
  }
  QuadExtElement sub(QuadExtElement x, QuadExtElement y) const {
    return make(fp.sub(x.a, y.a), fp.sub(x.b, y.b));
  }
  QuadExtElement mul(QuadExtElement x, QuadExtElement y) const {
    // (a1 + b1 w)(a2 + b2 w) = a1 a2 + n b1 b2 + (a1 b2 + b1 a2) w
    int a = fp.add(fp.mul(x.a, y.a), fp.mul(n, fp.mul(x.b, y.b)));
    int b = fp.add(fp.mul(x.a, y.b), fp.mul(x.b, y.a));
    return make(a, b);
  }
  QuadExtElement scalar_mul(int c, QuadExtElement x) const {
    return make(fp.mul(c, x.a), fp.mul(c, x.b));
  }
  QuadExtElement frobenius(QuadExtElement x) const {
    // x -> x^q; for odd q, w^q = -w
    return make(x.a, fp.neg(x.b));
  }
  int norm(QuadExtElement x) const {
    // x * x^q = a^2 - n b^2, lands in GF(q)
    return fp.sub(fp.mul(x.a, x.a), fp.mul(n, fp.mul(x.b, x.b)));
  }
  QuadExtElement inv(QuadExtElement x) const;
  QuadExtElement pow(QuadExtElement x, long long e) const;

  int mult_order(QuadExtElement x) const;
  // Smallest element in index order whose multiplicative order is q^2 - 1.
  QuadExtElement primitive_element() const;
};

}  // namespace fgeo
