#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "cyclotomic.hpp"
#include "padic.hpp"

namespace torex {

/// Arithmetic identity of one branch of a two-variable p-adic L-function.
struct BranchMeta {
    std::int64_t prime;
    std::int64_t tame_level;
    int component_r;        // residue mod p-1 fixed by the family
    int branch_i;           // residue mod p-1 selecting the branch
    std::int64_t twist_discriminant; // 0 = untwisted
    PadicInt gamma;

    BranchMeta(std::int64_t p, std::int64_t n, int r, int i, std::int64_t twist,
               PadicInt g);
};

/// Interpolation point: weight k, nebentype value zeta = eps(gamma), twist
/// exponent j and cyclotomic root zeta'.
struct SpecialPoint {
    int weight;
    RootOfUnity nebentype_root;
    int j;
    RootOfUnity cyclotomic_root;

    /// Validates 1 <= j <= k-1 and, when meta is supplied, the nebentype
    /// parity constraint eps(-1) = (-1)^k for the family's component.
    SpecialPoint(int k, RootOfUnity nebentype, int j_, RootOfUnity cyclotomic,
                 const std::optional<BranchMeta>& meta = std::nullopt);
};

/// Coordinates (gamma^(k-2) zeta - 1, gamma^(j-1) zeta' - 1) on the polydisk.
std::pair<CycElt, CycElt> to_coordinates(const SpecialPoint& pt, const BranchMeta& meta,
                                         int level, int precision);

/// Only central values can vanish.
bool is_central(const SpecialPoint& pt);

/// Branch indices i with 2i = r (mod p-1): the self-dual branches.
std::set<int> self_dual_indices(int r, std::int64_t p);

/// Kronecker symbol (d | n), full domain.
int kronecker(long long d, long long n);

/// Fundamental discriminants D with |D| < bound and gcd(D, p*N) = 1,
/// ascending by (|D|, D).
std::vector<long long> enum_discriminants(long long bound, std::int64_t p, std::int64_t n);

} // namespace torex
