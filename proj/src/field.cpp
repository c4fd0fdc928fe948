#include "fgeo/field.hpp"

namespace fgeo {

namespace {

bool is_prime(int q) {
  if (q < 2) return false;
  for (int d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

}  // namespace

PrimeField::PrimeField(int q_prime) : q(q_prime) {
  if (!is_prime(q)) throw std::invalid_argument("modulus must be prime");
}

int PrimeField::inv(int x) const {
  if (x % q == 0) throw std::domain_error("inversion of zero in GF(q)");
  return pow(x, q - 2);
}

int PrimeField::pow(int x, long long e) const {
  x %= q;
  if (x < 0) x += q;
  long long m = q - 1;
  e %= m;
  if (e < 0) e += m;
  if (x == 0) return e == 0 ? 1 : 0;
  int r = 1, base = x;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

bool PrimeField::is_square(int x) const {
  x %= q;
  if (x < 0) x += q;
  for (int y = 0; y < q; ++y)
    if (mul(y, y) == x) return true;
  return false;
}

int PrimeField::smallest_non_square() const {
  for (int x = 2; x < q; ++x)
    if (!is_square(x)) return x;
  throw std::logic_error("no non-square found; q must be odd");
}

QuadExtField::QuadExtField(int q_prime)
    : fp(q_prime), n(fp.smallest_non_square()) {}

QuadExtElement QuadExtField::inv(QuadExtElement x) const {
  if (is_zero(x)) throw std::domain_error("inversion of zero in GF(q^2)");
  int nrm_inv = fp.inv(norm(x));
  return scalar_mul(nrm_inv, frobenius(x));
}

QuadExtElement QuadExtField::pow(QuadExtElement x, long long e) const {
  long long m = order() - 1;
  e %= m;
  if (e < 0) e += m;
  if (is_zero(x)) return e == 0 ? one() : zero();
  QuadExtElement r = one(), base = x;
  while (e) {
    if (e & 1) r = mul(r, base);
    base = mul(base, base);
    e >>= 1;
  }
  return r;
}

int QuadExtField::mult_order(QuadExtElement x) const {
  if (is_zero(x)) throw std::domain_error("order of zero is undefined");
  QuadExtElement y = x;
  int k = 1;
  while (!(y == one())) {
    y = mul(y, x);
    ++k;
  }
  return k;
}

QuadExtElement QuadExtField::primitive_element() const {
  int full = order() - 1;
  for (int idx = 1; idx < order(); ++idx) {
    QuadExtElement x = element(idx);
    if (mult_order(x) == full) return x;
  }
  throw std::logic_error("no primitive element found");
}

}  // namespace fgeo
