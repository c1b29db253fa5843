#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Cohomology of Z/n with trivial F_p coefficients from the normalized bar
// complex, written with plain integers so it shares no code with the library.
namespace bar {

inline std::size_t rank_mod(std::vector<std::vector<long>> a, long p) {
    std::size_t r = 0, rows = a.size(), cols = rows ? a[0].size() : 0;
    auto inv = [p](long x) {
        long res = 1, e = p - 2;
        for (x %= p; e; e >>= 1, x = x * x % p)
            if (e & 1) res = res * x % p;
        return res;
    };
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] % p == 0) ++piv;
        if (piv == rows) continue;
        std::swap(a[piv], a[r]);
        long iv = inv(((a[r][c] % p) + p) % p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] % p == 0) continue;
            long m = ((a[i][c] % p) + p) % p * iv % p;
            for (std::size_t j = c; j < cols; ++j) a[i][j] = ((a[i][j] - m * a[r][j]) % p + p) % p;
        }
        ++r;
    }
    return r;
}

// Tuples of nonzero residues mod n, as base-(n-1) digits.
inline std::vector<std::vector<long>> tuples(long n, int k) {
    std::vector<std::vector<long>> out{{}};
    for (int i = 0; i < k; ++i) {
        std::vector<std::vector<long>> next;
        for (const auto& t : out)
            for (long g = 1; g < n; ++g) {
                auto u = t;
                u.push_back(g);
                next.push_back(u);
            }
        out = next;
    }
    return out;
}

inline std::size_t position(const std::vector<long>& t, long n) {
    std::size_t idx = 0;
    for (long g : t) idx = idx * static_cast<std::size_t>(n - 1) + static_cast<std::size_t>(g - 1);
    return idx;
}

// Matrix of d: C^k -> C^{k+1}, rows indexed by (k+1)-tuples.
inline std::vector<std::vector<long>> differential(long n, int k, long p) {
    auto src = tuples(n, k), dst = tuples(n, k + 1);
    std::vector<std::vector<long>> d(dst.size(), std::vector<long>(src.size(), 0));
    for (std::size_t r = 0; r < dst.size(); ++r) {
        const auto& t = dst[r];
        for (int i = 0; i <= k + 1; ++i) {
            std::vector<long> f;
            if (i == 0) {
                f.assign(t.begin() + 1, t.end());
            } else if (i == k + 1) {
                f.assign(t.begin(), t.end() - 1);
            } else {
                f.assign(t.begin(), t.begin() + i - 1);
                long c = (t[i - 1] + t[i]) % n;
                if (c == 0) continue;
                f.push_back(c);
                f.insert(f.end(), t.begin() + i + 1, t.end());
            }
            long sign = (i % 2 == 0) ? 1 : p - 1;
            auto& e = d[r][position(f, n)];
            e = (e + sign) % p;
        }
    }
    return d;
}

inline std::vector<std::size_t> cyclic_cohomology(long n, long p, int max_degree) {
    std::vector<std::size_t> rk;
    for (int k = 0; k <= max_degree; ++k) rk.push_back(rank_mod(differential(n, k, p), p));
    std::vector<std::size_t> out;
    for (int k = 0; k <= max_degree; ++k) {
        std::size_t dim = tuples(n, k).size();
        out.push_back(dim - rk[k] - (k > 0 ? rk[k - 1] : 0));
    }
    return out;
}

}  // namespace bar
