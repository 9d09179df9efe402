#include "cyclotomic.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace torex {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

struct EisensteinCache {
    std::mutex mtx;
    // (p, level) -> coefficients mod p^precision for the largest precision seen
    std::map<std::pair<std::int64_t, int>, std::pair<int, std::vector<std::uint64_t>>> table;
};

EisensteinCache& eis_cache() {
    static EisensteinCache c;
    return c;
}

// Phi_{p^m}(1+x) = sum_{i<p} (1+x)^(i*p^(m-1)), built from one running Pascal row.
std::vector<std::uint64_t> build_eisenstein(std::int64_t p, int level, int precision) {
    std::uint64_t mod = pow_u64_checked(p, precision);
    if (level == 0) return {0, 1}; // Phi_1(1+x) = x

    int step = 1;
    for (int i = 1; i < level; ++i) step *= static_cast<int>(p);
    int e = static_cast<int>(p - 1) * step;

    std::vector<std::uint64_t> acc(e + 1, 0);
    std::vector<std::uint64_t> row(e + 1, 0);
    row[0] = 1;
    int next_mark = 0, mark_count = 0;
    for (int n = 0; n <= e; ++n) {
        if (n > 0) {
            for (int k = std::min(n, e); k >= 1; --k)
                row[k] = (row[k] + row[k - 1]) % mod;
        }
        if (n == next_mark && mark_count < static_cast<int>(p)) {
            for (int k = 0; k <= n; ++k) acc[k] = (acc[k] + row[k]) % mod;
            ++mark_count;
            next_mark += step;
        }
    }
    return acc;
}

std::vector<std::uint64_t> eisenstein(std::int64_t p, int level, int precision) {
    auto& cache = eis_cache();
    std::lock_guard<std::mutex> lock(cache.mtx);
    auto key = std::make_pair(p, level);
    auto it = cache.table.find(key);
    if (it == cache.table.end() || it->second.first < precision) {
        cache.table[key] = {precision, build_eisenstein(p, level, precision)};
        it = cache.table.find(key);
    }
    if (it->second.first == precision) return it->second.second;
    std::uint64_t mod = pow_u64_checked(p, precision);
    std::vector<std::uint64_t> out = it->second.second;
    for (auto& c : out) c %= mod;
    return out;
}

// Reduce a raw polynomial (mod p^precision) by the monic E_m in place.
void reduce_by_eisenstein(std::vector<std::uint64_t>& poly, std::int64_t p, int level,
                          int precision) {
    int e = ramification_degree(p, level);
    if (static_cast<int>(poly.size()) <= e) return;
    std::uint64_t mod = pow_u64_checked(p, precision);
    auto E = eisenstein(p, level, precision);
    for (int d = static_cast<int>(poly.size()) - 1; d >= e; --d) {
        std::uint64_t c = poly[d];
        if (c == 0) continue;
        poly[d] = 0;
        for (int j = 0; j < e; ++j) {
            std::uint64_t sub = mulmod(c, E[j], mod);
            poly[d - e + j] = (poly[d - e + j] + mod - sub) % mod;
        }
    }
    poly.resize(e);
}

} // namespace

int ramification_degree(std::int64_t p, int level) {
    if (level < 0) throw Error(ErrorCode::InvalidArgument, "negative level");
    if (level == 0) return 1;
    long long e = p - 1;
    for (int i = 1; i < level; ++i) {
        e *= p;
        if (e > (1 << 20))
            throw Error(ErrorCode::InvalidArgument, "cyclotomic level too large");
    }
    return static_cast<int>(e);
}

RootOfUnity::RootOfUnity(std::int64_t p, int m, std::int64_t t) : prime(p), level(m) {
    if (m < 0) throw Error(ErrorCode::InvalidArgument, "negative root level");
    std::int64_t order = 1;
    for (int i = 0; i < m; ++i) order *= p;
    exponent = ((t % order) + order) % order;
}

bool RootOfUnity::is_trivial() const { return exponent == 0; }

bool RootOfUnity::is_primitive() const {
    return level >= 1 && exponent % prime != 0 && exponent != 0;
}

RootOfUnity RootOfUnity::inverse() const {
    return RootOfUnity(prime, level, -exponent);
}

int RootOfUnity::reduced_level() const {
    if (exponent == 0) return 0;
    std::int64_t t = exponent;
    int m = level;
    while (m > 0 && t % prime == 0) { t /= prime; --m; }
    return m;
}

CycElt::CycElt(std::int64_t prime, int level, std::vector<PadicInt> coeffs)
    : prime_(prime), level_(level), coeffs_(std::move(coeffs)) {
    int e = ramification_degree(prime, level);
    if (static_cast<int>(coeffs_.size()) != e)
        throw Error(ErrorCode::InvalidArgument, "coefficient vector length must equal e");
    for (const auto& c : coeffs_)
        if (c.prime() != prime_)
            throw Error(ErrorCode::PrimeMismatch, "coefficient over a different prime");
}

CycElt CycElt::zero(std::int64_t prime, int level, int precision) {
    int e = ramification_degree(prime, level);
    return CycElt(prime, level, std::vector<PadicInt>(e, PadicInt(prime, precision, 0)));
}

CycElt CycElt::constant(const PadicInt& c, int level) {
    CycElt z = zero(c.prime(), level, c.precision());
    std::vector<PadicInt> v = z.coeffs_;
    v[0] = c;
    return CycElt(c.prime(), level, std::move(v));
}

CycElt CycElt::uniformizer(std::int64_t prime, int level, int precision) {
    if (level < 1) throw Error(ErrorCode::InvalidArgument, "uniformizer needs level >= 1");
    CycElt z = zero(prime, level, precision);
    std::vector<PadicInt> v = z.coeffs_;
    v[1] = PadicInt(prime, precision, 1);
    return CycElt(prime, level, std::move(v));
}

int CycElt::min_precision() const {
    int m = coeffs_[0].precision();
    for (const auto& c : coeffs_) m = std::min(m, c.precision());
    return m;
}

bool CycElt::is_zero_at_precision() const {
    for (const auto& c : coeffs_)
        if (!c.is_zero()) return false;
    return true;
}

bool CycElt::is_rational_at_precision() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        if (!coeffs_[i].is_zero()) return false;
    return true;
}

CycElt CycElt::operator-() const {
    std::vector<PadicInt> v;
    v.reserve(coeffs_.size());
    for (const auto& c : coeffs_) v.push_back(-c);
    return CycElt(prime_, level_, std::move(v));
}

namespace {

// Equalize levels and precisions, returning raw residue vectors mod p^prec.
struct Aligned {
    std::int64_t p;
    int level;
    int prec;
    std::vector<std::uint64_t> a, b;
};

Aligned align(const CycElt& x, const CycElt& y) {
    if (x.prime() != y.prime())
        throw Error(ErrorCode::PrimeMismatch, "operands over different primes");
    CycElt a = x, b = y;
    if (a.level() < b.level()) a = raise_level(a, b.level());
    if (b.level() < a.level()) b = raise_level(b, a.level());
    int prec = std::min(a.min_precision(), b.min_precision());
    std::uint64_t mod = pow_u64_checked(a.prime(), prec);
    Aligned out{a.prime(), a.level(), prec, {}, {}};
    out.a.reserve(a.coeffs().size());
    out.b.reserve(b.coeffs().size());
    for (const auto& c : a.coeffs()) out.a.push_back(c.residue() % mod);
    for (const auto& c : b.coeffs()) out.b.push_back(c.residue() % mod);
    return out;
}

CycElt from_raw(std::int64_t p, int level, int prec, const std::vector<std::uint64_t>& raw) {
    std::vector<PadicInt> v;
    v.reserve(raw.size());
    for (std::uint64_t r : raw) v.emplace_back(p, prec, r);
    return CycElt(p, level, std::move(v));
}

} // namespace

CycElt operator+(const CycElt& x, const CycElt& y) {
    Aligned al = align(x, y);
    std::uint64_t mod = pow_u64_checked(al.p, al.prec);
    std::vector<std::uint64_t> out(al.a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (al.a[i] + al.b[i]) % mod;
    return from_raw(al.p, al.level, al.prec, out);
}

CycElt operator-(const CycElt& x, const CycElt& y) {
    Aligned al = align(x, y);
    std::uint64_t mod = pow_u64_checked(al.p, al.prec);
    std::vector<std::uint64_t> out(al.a.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (al.a[i] + mod - al.b[i]) % mod;
    return from_raw(al.p, al.level, al.prec, out);
}

CycElt operator*(const CycElt& x, const CycElt& y) {
    Aligned al = align(x, y);
    std::uint64_t mod = pow_u64_checked(al.p, al.prec);
    std::size_t n = al.a.size();
    std::vector<std::uint64_t> conv(2 * n - 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (al.a[i] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (al.b[j] == 0) continue;
            conv[i + j] = (conv[i + j] + mulmod(al.a[i], al.b[j], mod)) % mod;
        }
    }
    reduce_by_eisenstein(conv, al.p, al.level, al.prec);
    return from_raw(al.p, al.level, al.prec, conv);
}

CycElt operator*(const PadicInt& s, const CycElt& a) {
    std::vector<PadicInt> v;
    v.reserve(a.coeffs().size());
    for (const auto& c : a.coeffs()) v.push_back(s * c);
    return CycElt(a.prime(), a.level(), std::move(v));
}

CycElt CycElt::pow(std::uint64_t e) const {
    CycElt result = constant(PadicInt(prime_, min_precision(), 1), level_);
    CycElt base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        base = base * base;
        e >>= 1;
    }
    return result;
}

CycElt CycElt::reduced(int new_precision) const {
    std::vector<PadicInt> v;
    v.reserve(coeffs_.size());
    for (const auto& c : coeffs_) v.push_back(c.reduced(std::min(new_precision, c.precision())));
    return CycElt(prime_, level_, std::move(v));
}

Valuation valuation_cyc(const CycElt& a) {
    int e = a.ring_degree();
    bool have_exact = false;
    Rational best_exact(0);
    bool have_bound = false;
    Rational best_bound(0);
    for (int i = 0; i < e; ++i) {
        const PadicInt& c = a.coeffs()[i];
        Rational offset(i, e);
        if (c.is_zero()) {
            Rational b = Rational(c.precision()) + offset;
            if (!have_bound || b < best_bound) { have_bound = true; best_bound = b; }
        } else {
            Rational v = Rational(int_valuation(c.residue(), a.prime())) + offset;
            if (!have_exact || v < best_exact) { have_exact = true; best_exact = v; }
        }
    }
    if (!have_exact) return Valuation::at_least(best_bound);
    if (have_bound && !(best_exact < best_bound))
        return Valuation::at_least(best_bound);
    return Valuation::exact(best_exact);
}

CycElt raise_level(const CycElt& a, int new_level) {
    if (new_level < a.level())
        throw Error(ErrorCode::LevelMismatch, "cannot lower a cyclotomic level");
    if (new_level == a.level()) return a;
    int prec = a.min_precision();
    std::uint64_t shift = 1;
    for (int i = 0; i < new_level - a.level(); ++i)
        shift *= static_cast<std::uint64_t>(a.prime());
    // image of pi under the inclusion
    CycElt one = CycElt::constant(PadicInt(a.prime(), prec, 1), new_level);
    CycElt image = CycElt::uniformizer(a.prime(), new_level, prec);
    image = (image + one).pow(shift) - one;
    // Horner over the old coordinates
    CycElt acc = CycElt::zero(a.prime(), new_level, prec);
    for (int i = a.ring_degree() - 1; i >= 0; --i)
        acc = acc * image + CycElt::constant(a.coeffs()[i], new_level);
    return acc;
}

CycElt as_element(const RootOfUnity& r, int at_level, int precision) {
    if (at_level < r.level)
        throw Error(ErrorCode::LevelMismatch, "embedding level too small for the root");
    if (r.is_trivial() || at_level == 0)
        return CycElt::constant(PadicInt(r.prime, precision, 1), at_level);
    std::uint64_t exp = static_cast<std::uint64_t>(r.exponent);
    for (int i = 0; i < at_level - r.level; ++i)
        exp *= static_cast<std::uint64_t>(r.prime);
    CycElt one = CycElt::constant(PadicInt(r.prime, precision, 1), at_level);
    CycElt z = CycElt::uniformizer(r.prime, at_level, precision) + one;
    return z.pow(exp);
}

std::vector<std::uint64_t> eisenstein_coefficients(std::int64_t p, int level, int precision) {
    return eisenstein(p, level, precision);
}

} // namespace torex
