// galois.hpp: finite fields GF(p^n) with p^n <= 16 as lookup tables.
//
// Elements are encoded as integers x = a_0 + a_1 p + ... + a_{n-1} p^{n-1},
// the coefficient vector of the residue polynomial a_0 + a_1 X + ... in the
// polynomial basis. For n = 1 this is plain arithmetic mod p.

#pragma once

#include <vector>

namespace boundsim {

class GaloisField {
public:
    int p() const { return p_; }
    int n() const { return n_; }
    int order() const { return order_; }

    /// Monic modulus, coefficients c_0..c_n (c_n == 1).
    const std::vector<int>& modulus() const { return modulus_; }

    int add(int a, int b) const { return add_[idx(a, b)]; }
    int mul(int a, int b) const { return mul_[idx(a, b)]; }
    int neg(int a) const;
    int inv(int a) const;  // a != 0
    int pow(int a, int e) const;

    /// Absolute trace a + a^p + ... + a^{p^{n-1}}, an element of the prime
    /// subfield returned as an integer in [0, p).
    int trace(int a) const;

    /// i-th polynomial coordinate of the element a.
    int coordinate(int a, int i) const;

    friend GaloisField gf_make(int p, int n);

private:
    GaloisField() = default;
    int idx(int a, int b) const { return a * order_ + b; }

    int p_ = 0;
    int n_ = 0;
    int order_ = 0;
    std::vector<int> modulus_;
    std::vector<int> add_;
    std::vector<int> mul_;
};

bool is_prime(int p);

/// Builds GF(p^n) using the lexicographically smallest monic irreducible
/// polynomial of degree n (coefficients compared from the highest degree
/// down). Throws NotPrime, TooLarge (p^n > 16) or OutOfRange (n < 1).
GaloisField gf_make(int p, int n);

/// Splits d into p^n when d is a prime power, returns false otherwise.
bool prime_power(int d, int& p, int& n);

}  // namespace boundsim
