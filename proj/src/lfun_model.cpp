#include "lfun_model.hpp"

#include <numeric>

namespace torex {

BranchMeta::BranchMeta(std::int64_t p, std::int64_t n, int r, int i, std::int64_t twist,
                       PadicInt g)
    : prime(p), tame_level(n), component_r(r), branch_i(i), twist_discriminant(twist),
      gamma(std::move(g)) {
    if (p < 3) throw Error(ErrorCode::InvalidArgument, "prime must be an odd prime >= 3");
    if (n < 1) throw Error(ErrorCode::InvalidArgument, "tame level must be positive");
    if (r < 0 || r >= p - 1 || i < 0 || i >= p - 1)
        throw Error(ErrorCode::InvalidArgument, "branch indices live mod p-1");
    if (twist != 0) {
        long long t = twist < 0 ? -twist : twist;
        if (std::gcd(t, static_cast<long long>(p * n)) != 1)
            throw Error(ErrorCode::InvalidArgument,
                        "twist discriminant must be coprime to p*N");
    }
    if (gamma.prime() != p)
        throw Error(ErrorCode::PrimeMismatch, "gamma over a different prime");
    if (gamma.precision() < 2)
        throw Error(ErrorCode::InvalidArgument, "gamma needs precision >= 2");
    std::uint64_t pp = static_cast<std::uint64_t>(p);
    if (gamma.residue() % pp != 1 || gamma.residue() % (pp * pp) == 1)
        throw Error(ErrorCode::InvalidArgument, "gamma must generate 1 + pZ_p");
}

SpecialPoint::SpecialPoint(int k, RootOfUnity nebentype, int j_, RootOfUnity cyclotomic,
                           const std::optional<BranchMeta>& meta)
    : weight(k), nebentype_root(nebentype), j(j_), cyclotomic_root(cyclotomic) {
    if (k < 2) throw Error(ErrorCode::InvalidArgument, "weight must be >= 2");
    if (j < 1 || j > k - 1)
        throw Error(ErrorCode::InvalidArgument, "twist exponent must lie in [1, k-1]");
    if (meta) {
        // The omega-part of the nebentype is r - (k-2) mod p-1; its parity
        // gives eps(-1), which must match (-1)^k.
        long long pm1 = meta->prime - 1;
        long long a = ((meta->component_r - (k - 2)) % pm1 + pm1) % pm1;
        if ((a % 2) != (k % 2))
            throw Error(ErrorCode::InvalidArgument,
                        "nebentype parity incompatible with the weight");
    }
}

std::pair<CycElt, CycElt> to_coordinates(const SpecialPoint& pt, const BranchMeta& meta,
                                         int level, int precision) {
    if (level < pt.nebentype_root.reduced_level() || level < pt.cyclotomic_root.reduced_level())
        throw Error(ErrorCode::LevelMismatch, "level too small for the point's roots");
    PadicInt g = meta.gamma.reduced(std::min(precision, meta.gamma.precision()));
    CycElt one = CycElt::constant(PadicInt(meta.prime, precision, 1), level);
    PadicInt gw = g.pow(static_cast<std::uint64_t>(pt.weight - 2));
    PadicInt gt = g.pow(static_cast<std::uint64_t>(pt.j - 1));
    CycElt x = gw * as_element(pt.nebentype_root, level, precision) - one;
    CycElt y = gt * as_element(pt.cyclotomic_root, level, precision) - one;
    return {x, y};
}

bool is_central(const SpecialPoint& pt) { return 2 * pt.j == pt.weight; }

std::set<int> self_dual_indices(int r, std::int64_t p) {
    std::set<int> out;
    int pm1 = static_cast<int>(p - 1);
    for (int i = 0; i < pm1; ++i)
        if ((2 * i - r) % pm1 == 0) out.insert(i);
    return out;
}

namespace {

// Jacobi symbol (a | n) for odd n > 0.
int jacobi(long long a, long long n) {
    a %= n;
    if (a < 0) a += n;
    int result = 1;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            long long m = n % 8;
            if (m == 3 || m == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

} // namespace

int kronecker(long long d, long long n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    if (d % 2 == 0 && n % 2 == 0) return 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (d < 0) result = -result;
    }
    int v = 0;
    while (n % 2 == 0) { n /= 2; ++v; }
    if (v % 2 == 1) {
        long long m = ((d % 8) + 8) % 8;
        if (m == 3 || m == 5) result = -result;
    }
    return result * jacobi(d, n);
}

namespace {

bool squarefree(long long n) {
    if (n < 0) n = -n;
    for (long long i = 2; i * i <= n; ++i)
        if (n % (i * i) == 0) return false;
    return true;
}

bool is_fundamental(long long d) {
    if (d == 1 || d == 0) return false;
    long long m4 = ((d % 4) + 4) % 4;
    if (m4 == 1) return squarefree(d);
    if (m4 == 0) {
        long long q = d / 4;
        long long qm4 = ((q % 4) + 4) % 4;
        return (qm4 == 2 || qm4 == 3) && squarefree(q);
    }
    return false;
}

} // namespace

std::vector<long long> enum_discriminants(long long bound, std::int64_t p, std::int64_t n) {
    if (bound < 1) return {};
    std::vector<long long> out;
    for (long long ad = 1; ad < bound; ++ad) {
        for (long long d : {-ad, ad}) {
            if (!is_fundamental(d)) continue;
            if (std::gcd(ad, static_cast<long long>(p * n)) != 1) continue;
            out.push_back(d);
        }
    }
    return out;
}

} // namespace torex
