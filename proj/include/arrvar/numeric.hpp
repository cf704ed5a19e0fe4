#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace arrvar {

using Int = mpz_class;
using Rat = mpq_class;
using IVec = std::vector<Int>;
using QVec = std::vector<Rat>;

struct error : std::runtime_error {
    explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

struct invalid_input : error {
    explicit invalid_input(const std::string& msg) : error(msg) {}
};

inline Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline Int gcd_vec(const IVec& v) {
    Int g = 0;
    for (const Int& x : v) g = gcd(g, x);
    return g;
}

inline bool is_zero(const IVec& v) {
    for (const Int& x : v)
        if (x != 0) return false;
    return true;
}

inline bool is_zero(const QVec& v) {
    for (const Rat& x : v)
        if (x != 0) return false;
    return true;
}

// v / gcd(v), keeping direction. The zero vector has no primitive form.
inline IVec primitive_vector(const IVec& v) {
    Int g = gcd_vec(v);
    if (g == 0) throw error("primitive_vector: zero vector");
    IVec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = v[i] / g;
    return w;
}

// Clears denominators and divides by the content; result spans the same ray.
inline IVec primitive_vector(const QVec& v) {
    Int den = 1;
    for (const Rat& x : v) den = lcm(den, x.get_den());
    IVec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        Rat s = v[i] * den;
        w[i] = s.get_num();
    }
    return primitive_vector(w);
}

inline Rat dot(const QVec& a, const QVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Int dot(const IVec& a, const IVec& b) {
    Int s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline Rat dot(const IVec& a, const QVec& b) {
    Rat s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += Rat(a[i]) * b[i];
    return s;
}

inline IVec add(const IVec& a, const IVec& b) {
    IVec c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
    return c;
}

inline IVec sub(const IVec& a, const IVec& b) {
    IVec c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
    return c;
}

inline IVec scale(const Int& s, const IVec& a) {
    IVec c(a.size());
    for (size_t i = 0; i < a.size(); ++i) c[i] = s * a[i];
    return c;
}

inline IVec neg(const IVec& a) { return scale(-1, a); }

// a*x + b*y
inline IVec combine(const Int& a, const IVec& x, const Int& b, const IVec& y) {
    IVec c(x.size());
    for (size_t i = 0; i < x.size(); ++i) c[i] = a * x[i] + b * y[i];
    return c;
}

inline QVec to_rat(const IVec& v) {
    QVec w(v.size());
    for (size_t i = 0; i < v.size(); ++i) w[i] = Rat(v[i]);
    return w;
}

inline bool lex_less(const IVec& a, const IVec& b) {
    for (size_t i = 0; i < a.size() && i < b.size(); ++i) {
        int c = cmp(a[i], b[i]);
        if (c != 0) return c < 0;
    }
    return a.size() < b.size();
}

inline std::string to_string(const Int& x) { return x.get_str(); }

inline std::string to_string(const Rat& x) {
    if (x.get_den() == 1) return x.get_num().get_str();
    return x.get_num().get_str() + "/" + x.get_den().get_str();
}

inline std::string to_string(const IVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v[i]);
    }
    return s + ")";
}

inline std::string to_string(const QVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ", ";
        s += to_string(v[i]);
    }
    return s + ")";
}

}  // namespace arrvar
