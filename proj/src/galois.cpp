#include "boundsim/galois.hpp"

#include "boundsim/errors.hpp"

#include <string>

namespace boundsim {

namespace {

using Poly = std::vector<int>;  // coefficients, lowest degree first

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Remainder of a modulo a monic b over Z_p.
Poly poly_mod(Poly a, const Poly& b, int p) {
    trim(a);
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const int lead = a.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i)
            a[shift + i] = ((a[shift + i] - lead * b[i]) % p + p) % p;
        trim(a);
    }
    return a;
}

Poly decode(int x, int p, int n) {
    Poly a(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        a[static_cast<std::size_t>(i)] = x % p;
        x /= p;
    }
    return a;
}

int encode(const Poly& a, int p) {
    int x = 0;
    for (std::size_t i = a.size(); i-- > 0;) x = x * p + a[i];
    return x;
}

// Degree-n monic polynomial with lower coefficients taken from `low`.
Poly monic(int low, int p, int n) {
    Poly m = decode(low, p, n);
    m.push_back(1);
    return m;
}

bool irreducible(const Poly& f, int p) {
    const int n = static_cast<int>(f.size()) - 1;
    for (int deg = 1; deg <= n / 2; ++deg)
        for (int low = 0; low < ipow(p, deg); ++low)
            if (poly_mod(f, monic(low, p, deg), p).empty()) return false;
    return true;
}

}  // namespace

bool is_prime(int p) {
    if (p < 2) return false;
    for (int q = 2; q * q <= p; ++q)
        if (p % q == 0) return false;
    return true;
}

bool prime_power(int d, int& p, int& n) {
    if (d < 2) return false;
    for (int q = 2; q <= d; ++q) {
        if (d % q != 0) continue;
        if (!is_prime(q)) return false;
        int e = 0, rest = d;
        while (rest % q == 0) {
            rest /= q;
            ++e;
        }
        if (rest != 1) return false;
        p = q;
        n = e;
        return true;
    }
    return false;
}

int GaloisField::neg(int a) const {
    for (int b = 0; b < order_; ++b)
        if (add(a, b) == 0) return b;
    return 0;
}

int GaloisField::inv(int a) const {
    if (a == 0) throw OutOfRange("GaloisField::inv(0)");
    for (int b = 1; b < order_; ++b)
        if (mul(a, b) == 1) return b;
    throw NumericalError("GaloisField::inv: no inverse found");
}

int GaloisField::pow(int a, int e) const {
    int r = 1;
    for (int i = 0; i < e; ++i) r = mul(r, a);
    return r;
}

int GaloisField::trace(int a) const {
    int t = 0;
    int y = a;
    for (int i = 0; i < n_; ++i) {
        t = add(t, y);
        y = pow(y, p_);
    }
    return t;  // lies in the prime subfield, encoded as 0..p-1
}

int GaloisField::coordinate(int a, int i) const {
    for (int k = 0; k < i; ++k) a /= p_;
    return a % p_;
}

GaloisField gf_make(int p, int n) {
    if (!is_prime(p)) throw NotPrime(std::to_string(p) + " is not prime");
    if (n < 1) throw OutOfRange("field extension degree must be >= 1");
    if (n > 4 || ipow(p, n) > 16)
        throw TooLarge("GF(" + std::to_string(p) + "^" + std::to_string(n) + ") exceeds order 16");

    GaloisField f;
    f.p_ = p;
    f.n_ = n;
    f.order_ = ipow(p, n);

    if (n == 1) {
        f.modulus_ = {0, 1};
    } else {
        // Monic f = X^n + c_{n-1} X^{n-1} + ... + c_0, compared from c_{n-1}
        // downwards. With base-p encoding of (c_0..c_{n-1}) the most
        // significant digit is c_{n-1}, so ascending codes are already
        // lexicographic.
        for (int code = 0; code < f.order_; ++code) {
            Poly cand = monic(code, p, n);
            if (irreducible(cand, p)) {
                f.modulus_ = cand;
                break;
            }
        }
    }

    const std::size_t q = static_cast<std::size_t>(f.order_);
    f.add_.assign(q * q, 0);
    f.mul_.assign(q * q, 0);
    for (int a = 0; a < f.order_; ++a) {
        const Poly pa = decode(a, p, n);
        for (int b = 0; b < f.order_; ++b) {
            const Poly pb = decode(b, p, n);
            Poly sum(static_cast<std::size_t>(n));
            for (int i = 0; i < n; ++i)
                sum[static_cast<std::size_t>(i)] = (pa[static_cast<std::size_t>(i)] + pb[static_cast<std::size_t>(i)]) % p;
            Poly prod(static_cast<std::size_t>(2 * n - 1), 0);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    prod[static_cast<std::size_t>(i + j)] =
                        (prod[static_cast<std::size_t>(i + j)] + pa[static_cast<std::size_t>(i)] * pb[static_cast<std::size_t>(j)]) % p;
            Poly rem = poly_mod(prod, f.modulus_, p);
            rem.resize(static_cast<std::size_t>(n), 0);
            f.add_[f.idx(a, b)] = encode(sum, p);
            f.mul_[f.idx(a, b)] = encode(rem, p);
        }
    }
    return f;
}

}  // namespace boundsim
