#include "doctest.h"
#include "fgeo/field.hpp"

using namespace fgeo;

TEST_SUITE_BEGIN("field");

TEST_CASE("prime field basics at q=5") {
  PrimeField f(5);
  CHECK(f.add(2, 4) == 1);
  CHECK(f.inv(3) == 2);
  CHECK(f.mul(0, 4) == 0);
  CHECK(f.sub(1, 3) == 3);
  CHECK(f.neg(0) == 0);
  CHECK(f.neg(2) == 3);
  CHECK_THROWS_AS(f.inv(0), std::domain_error);
  for (int x = 1; x < 5; ++x) CHECK(f.mul(x, f.inv(x)) == 1);
  CHECK_THROWS_AS(PrimeField(6), std::invalid_argument);
}

TEST_CASE("non-square choice") {
  CHECK(PrimeField(5).smallest_non_square() == 2);
  CHECK(PrimeField(7).smallest_non_square() == 3);
}

TEST_CASE("quadratic extension basics at q=5") {
  QuadExtField K(5);
  CHECK(K.n == 2);
  QuadExtElement w = K.omega();
  CHECK(K.mul(w, w) == K.make(2, 0));
  CHECK(K.inv(w) == K.make(0, 3));
  CHECK(K.norm(w) == 3);
  CHECK_THROWS_AS(K.inv(K.zero()), std::domain_error);
}

TEST_CASE("frobenius is an involutory automorphism fixing exactly GF(q)") {
  for (int q : {5, 7}) {
    QuadExtField K(q);
    int fixed = 0;
    for (int i = 0; i < K.order(); ++i) {
      QuadExtElement x = K.element(i);
      CHECK(K.frobenius(K.frobenius(x)) == x);
      CHECK(K.frobenius(x) == K.pow(x, q));
      if (K.frobenius(x) == x) {
        ++fixed;
        CHECK(K.in_subfield(x));
      }
    }
    CHECK(fixed == q);
    // automorphism: multiplicative over all pairs
    for (int i = 0; i < K.order(); ++i)
      for (int j = 0; j < K.order(); ++j) {
        QuadExtElement x = K.element(i), y = K.element(j);
        CHECK(K.frobenius(K.mul(x, y)) == K.mul(K.frobenius(x), K.frobenius(y)));
      }
  }
}

TEST_CASE("norm is multiplicative and lands in GF(q)") {
  QuadExtField K(5);
  for (int i = 0; i < 25; ++i)
    for (int j = 0; j < 25; ++j) {
      QuadExtElement x = K.element(i), y = K.element(j);
      CHECK(K.norm(K.mul(x, y)) == K.fp.mul(K.norm(x), K.norm(y)));
    }
}

TEST_CASE("every nonzero element has order dividing q^2-1") {
  for (int q : {5, 7}) {
    QuadExtField K(q);
    for (int i = 1; i < K.order(); ++i) {
      QuadExtElement x = K.element(i);
      CHECK(K.pow(x, K.order() - 1) == K.one());
      CHECK((K.order() - 1) % K.mult_order(x) == 0);
    }
  }
}

TEST_CASE("primitive element: exhaustive order oracle") {
  for (int q : {5, 7}) {
    QuadExtField K(q);
    int full = q * q - 1;
    QuadExtElement g = K.primitive_element();
    CHECK(K.mult_order(g) == full);
    // lex-smallest among all elements of full order
    for (int i = 1; i < K.index_of(g); ++i)
      CHECK(K.mult_order(K.element(i)) < full);
    // g^((q^2-1)/2) is the unique element of order 2, namely -1
    CHECK(K.pow(g, full / 2) == K.make(q - 1, 0));
  }
  QuadExtField K5(5);
  CHECK(K5.primitive_element() == K5.make(1, 2));
}

TEST_SUITE_END();
