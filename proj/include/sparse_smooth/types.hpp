#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace sparse_smooth {

// Arbitrary-precision integer used for every quantity that can outgrow a
// machine word (constructed N, cyclotomic values, factorizations).
using ArbInt = mpz_class;

inline std::string to_decimal(const ArbInt& v) { return v.get_str(10); }

inline ArbInt from_u64(std::uint64_t v) {
    ArbInt r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
    return r;
}

inline bool fits_u64(const ArbInt& v) {
    return sgn(v) >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const ArbInt& v) {
    std::uint64_t r = 0;
    if (sgn(v) == 0) return 0;
    mpz_export(&r, nullptr, 1, sizeof(r), 0, 0, v.get_mpz_t());
    return r;
}

}  // namespace sparse_smooth
