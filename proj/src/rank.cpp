#include "bellnl/matrix.hpp"

#include <algorithm>
#include <optional>
#include <random>

namespace bellnl {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

std::size_t bareiss_rank(std::vector<std::vector<mpz_class>> a, std::size_t cols)
{
    const std::size_t rows = a.size();
    std::size_t rank = 0;
    mpz_class prev = 1;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t piv = rank;
        while (piv < rows && a[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(a[piv], a[rank]);
        const mpz_class& pk = a[rank][c];
        for (std::size_t i = rank + 1; i < rows; ++i) {
            const mpz_class f = a[i][c];
            for (std::size_t j = c + 1; j < cols; ++j) {
                mpz_class v = pk * a[i][j] - f * a[rank][j];
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = std::move(v);
            }
            a[i][c] = 0;
        }
        prev = pk;
        ++rank;
    }
    return rank;
}

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p)
{
    u64 r = 1;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 reduce(i128 v, u64 p)
{
    i128 r = v % static_cast<i128>(p);
    if (r < 0)
        r += p;
    return static_cast<u64>(r);
}

// Reduced row echelon form mod p in place; returns pivot columns.
std::vector<std::size_t> rref_mod(std::vector<std::vector<u64>>& a, std::size_t cols, u64 p)
{
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t piv = r;
        while (piv < a.size() && a[piv][c] == 0)
            ++piv;
        if (piv == a.size())
            continue;
        std::swap(a[piv], a[r]);
        const u64 inv = powmod(a[r][c], p - 2, p);
        for (std::size_t j = c; j < cols; ++j)
            a[r][j] = mulmod(a[r][j], inv, p);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            const u64 f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (a[r][j]) {
                    u64 t = mulmod(f, a[r][j], p);
                    a[i][j] = a[i][j] >= t ? a[i][j] - t : a[i][j] + p - t;
                }
        }
        pivots.push_back(c);
        ++r;
    }
    a.resize(r);
    return pivots;
}

// a/b with |a|, b <= sqrt(m/2) and a = u*b mod m, if one exists.
std::optional<Rational> reconstruct(const mpz_class& u, const mpz_class& m)
{
    mpz_class bound;
    mpz_class half = m / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    mpz_class r0 = m, r1 = u, t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        mpz_class t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound)
        return std::nullopt;
    Rational q(r1, t1);
    q.canonicalize();
    return q;
}

struct ModularImage {
    u64 p;
    std::vector<std::size_t> pivots;
    std::vector<std::vector<u64>> rref;
};

ModularImage modular_image(const std::vector<SparseIntRow>& rows, std::size_t cols, u64 p, std::mt19937_64& rng)
{
    std::vector<std::vector<u64>> dense;
    const std::size_t target = cols + 8;
    if (rows.size() <= target) {
        dense.assign(rows.size(), std::vector<u64>(cols, 0));
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t k = 0; k < rows[i].cols.size(); ++k)
                dense[i][rows[i].cols[k]] = reduce(rows[i].vals[k], p);
    } else {
        // Random combinations keep the rank with high probability and never raise it.
        std::vector<std::vector<i128>> acc(target, std::vector<i128>(cols, 0));
        std::uniform_int_distribution<std::int64_t> coef(0, (std::int64_t{1} << 30) - 1);
        std::vector<std::int64_t> w(target);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (auto& x : w)
                x = coef(rng);
            for (std::size_t k = 0; k < rows[i].cols.size(); ++k) {
                const i128 v = rows[i].vals[k];
                const std::uint32_t c = rows[i].cols[k];
                for (std::size_t t = 0; t < target; ++t)
                    acc[t][c] += v * w[t];
            }
            if ((i & 0xFFFF) == 0xFFFF)
                for (auto& row : acc)
                    for (auto& x : row)
                        x = reduce(x, p);
        }
        dense.assign(target, std::vector<u64>(cols, 0));
        for (std::size_t t = 0; t < target; ++t)
            for (std::size_t c = 0; c < cols; ++c)
                dense[t][c] = reduce(acc[t][c], p);
    }
    ModularImage img{p, {}, std::move(dense)};
    img.pivots = rref_mod(img.rref, cols, p);
    return img;
}

// Checks rows * z == 0 exactly for an integer vector z.
bool annihilates(const std::vector<SparseIntRow>& rows, const std::vector<mpz_class>& z)
{
    bool small = true;
    for (const auto& v : z)
        if (!v.fits_slong_p() || abs(v) > mpz_class(1L << 40))
            small = false;
    if (small) {
        std::vector<std::int64_t> zz(z.size());
        for (std::size_t i = 0; i < z.size(); ++i)
            zz[i] = z[i].get_si();
        for (const auto& r : rows) {
            i128 s = 0;
            for (std::size_t k = 0; k < r.cols.size(); ++k)
                s += static_cast<i128>(r.vals[k]) * zz[r.cols[k]];
            if (s != 0)
                return false;
        }
        return true;
    }
    for (const auto& r : rows) {
        mpz_class s = 0;
        for (std::size_t k = 0; k < r.cols.size(); ++k)
            s += r.vals[k] * z[r.cols[k]];
        if (s != 0)
            return false;
    }
    return true;
}

std::size_t dense_fallback(const std::vector<SparseIntRow>& rows, std::size_t cols)
{
    std::vector<std::vector<mpz_class>> a(rows.size(), std::vector<mpz_class>(cols));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].cols.size(); ++k)
            a[i][rows[i].cols[k]] += rows[i].vals[k];
    return bareiss_rank(std::move(a), cols);
}

} // namespace

std::size_t exact_rank(const RationalMatrix& m)
{
    std::vector<std::vector<mpz_class>> a(m.rows(), std::vector<mpz_class>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i) {
        mpz_class l = 1;
        for (std::size_t j = 0; j < m.cols(); ++j)
            mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < m.cols(); ++j)
            a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
    }
    return bareiss_rank(std::move(a), m.cols());
}

std::size_t certified_rank(const std::vector<SparseIntRow>& rows, std::size_t cols)
{
    if (rows.empty() || cols == 0)
        return 0;
    std::mt19937_64 rng(0x5eed5eedULL);
    std::vector<ModularImage> images;
    mpz_class modulus = 1;
    mpz_class start = mpz_class(1) << 62;
    for (int attempt = 0; attempt < 8; ++attempt) {
        mpz_class pz;
        mpz_class from = start - mpz_class(attempt + 1) * (mpz_class(1) << 40);
        mpz_nextprime(pz.get_mpz_t(), from.get_mpz_t());
        const u64 p = pz.get_ui();
        ModularImage img = modular_image(rows, cols, p, rng);
        if (!images.empty() && img.pivots != images.front().pivots) {
            // Keep the image of largest rank; smaller ones hit an unlucky prime.
            if (img.pivots.size() > images.front().pivots.size()) {
                images.clear();
                modulus = 1;
            } else {
                continue;
            }
        }
        modulus *= pz;
        images.push_back(std::move(img));

        const auto& pivots = images.front().pivots;
        std::vector<bool> is_pivot(cols, false);
        for (auto c : pivots)
            is_pivot[c] = true;
        bool ok = true;
        for (std::size_t f = 0; f < cols && ok; ++f) {
            if (is_pivot[f])
                continue;
            // Kernel vector: z_f = 1, z_{pivot i} = -rref[i][f].
            std::vector<Rational> z(cols, Rational(0));
            z[f] = 1;
            for (std::size_t i = 0; i < pivots.size() && ok; ++i) {
                mpz_class residue = 0, mod = 1;
                for (const auto& im : images) {
                    const u64 v = im.rref[i][f] == 0 ? 0 : im.p - im.rref[i][f];
                    // CRT step: residue' = residue (mod mod), v (mod p).
                    mpz_class pm = im.p;
                    mpz_class inv;
                    mpz_class mm = mod % pm;
                    mpz_invert(inv.get_mpz_t(), mm.get_mpz_t(), pm.get_mpz_t());
                    mpz_class diff = (mpz_class(static_cast<unsigned long>(v)) - residue % pm) % pm;
                    if (diff < 0)
                        diff += pm;
                    mpz_class k = (diff * inv) % pm;
                    residue += k * mod;
                    mod *= pm;
                }
                auto q = reconstruct(residue, mod);
                if (!q)
                    ok = false;
                else
                    z[pivots[i]] = *q;
            }
            if (!ok)
                break;
            mpz_class l = 1;
            for (const auto& v : z)
                mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
            std::vector<mpz_class> zi(cols);
            for (std::size_t c = 0; c < cols; ++c)
                zi[c] = z[c].get_num() * (l / z[c].get_den());
            ok = annihilates(rows, zi);
        }
        // Kernel vectors have distinct free-column unit patterns, so they are independent.
        if (ok)
            return pivots.size();
    }
    return dense_fallback(rows, cols);
}

std::size_t certified_rank_01(const std::vector<std::vector<std::uint32_t>>& supports, std::size_t cols)
{
    std::vector<SparseIntRow> rows(supports.size());
    for (std::size_t i = 0; i < supports.size(); ++i) {
        rows[i].cols = supports[i];
        rows[i].vals.assign(supports[i].size(), 1);
    }
    return certified_rank(rows, cols);
}

} // namespace bellnl
