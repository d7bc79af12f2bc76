//! Enumerable universal₂ hash families over prime fields.
//!
//! Inputs `a ∈ {0..q^k−1}` are read as little-endian base-`q` digit vectors in `F_q^k`
//! (digit 0 least significant); outputs are encoded the same way over `F_q^m`.
//!
//! * `toeplitz`: `f_t(a) = T a` with the `m × k` Toeplitz matrix `T[i][j] = t[i − j + k − 1]`,
//!   one member per `t ∈ F_q^{m+k−1}`.
//! * `modified_toeplitz`: `f_t(a) = X a₁ + a₂` with `a₁` the first `k − m` digits, `a₂` the
//!   last `m`, and `X` the `m × (k − m)` Toeplitz matrix on `t ∈ F_q^{k−1}`. When `k = m`
//!   there is no `X` and the family is the identity alone.
//!
//! Member `i` uses the parameter vector given by the little-endian base-`q` digits of `i`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::state::ClassicalFunction;

/// Largest admissible domain `q^k`.
pub const MAX_DOMAIN: u64 = 1 << 16;
/// Largest admissible number of members.
pub const MAX_MEMBERS: u64 = 1 << 20;
/// Largest domain for all-pairs collision counting.
pub const MAX_PAIRS_DOMAIN: u64 = 1 << 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyKind {
    Toeplitz,
    ModifiedToeplitz,
    ExplicitList,
}

impl FamilyKind {
    pub fn name(self) -> &'static str {
        match self {
            FamilyKind::Toeplitz => "toeplitz",
            FamilyKind::ModifiedToeplitz => "modified_toeplitz",
            FamilyKind::ExplicitList => "explicit_list",
        }
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "toeplitz" => Ok(FamilyKind::Toeplitz),
            "modified_toeplitz" => Ok(FamilyKind::ModifiedToeplitz),
            "explicit_list" => Ok(FamilyKind::ExplicitList),
            other => Err(Error::InvalidFamily(format!("unknown family kind `{other}`"))),
        }
    }
}

/// One function of a family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub index: usize,
    pub function: ClassicalFunction,
}

/// Exact worst-case collision probability of a family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CollisionStats {
    /// `max_{a≠b} #{members with f(a) = f(b)} / member_count`.
    pub max_collision_prob: Ratio<u64>,
    pub is_universal2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    kind: FamilyKind,
    q: u64,
    k: u32,
    m: u32,
    params: u32,
    domain: usize,
    range: usize,
    member_count: usize,
    explicit: Vec<ClassicalFunction>,
}

fn checked_pow(q: u64, e: u32, cap: u64, what: &str) -> Result<u64> {
    match q.checked_pow(e) {
        Some(v) if v <= cap => Ok(v),
        _ => Err(Error::InvalidFamily(format!("{what} {q}^{e} exceeds the cap {cap}"))),
    }
}

/// Build a Toeplitz or modified-Toeplitz family.
pub fn make_family(kind: FamilyKind, q: u64, k: u32, m: u32) -> Result<HashFamily> {
    HashFamily::new(kind, q, k, m)
}

impl HashFamily {
    pub fn new(kind: FamilyKind, q: u64, k: u32, m: u32) -> Result<Self> {
        if kind == FamilyKind::ExplicitList {
            return Err(Error::InvalidFamily(
                "explicit lists are built from their functions with HashFamily::explicit".to_string(),
            ));
        }
        if !matches!(q, 2 | 3 | 5) {
            return Err(Error::InvalidFamily(format!("field order {q} is not one of the primes 2, 3, 5")));
        }
        if k == 0 || m == 0 || m > k {
            return Err(Error::InvalidFamily(format!("need 1 ≤ m ≤ k, got k = {k}, m = {m}")));
        }
        let params = match kind {
            FamilyKind::Toeplitz => m + k - 1,
            FamilyKind::ModifiedToeplitz if k == m => 0,
            _ => k - 1,
        };
        let domain = checked_pow(q, k, MAX_DOMAIN, "domain size")? as usize;
        let member_count = checked_pow(q, params, MAX_MEMBERS, "member count")? as usize;
        Ok(Self {
            kind,
            q,
            k,
            m,
            params,
            domain,
            range: q.pow(m) as usize,
            member_count,
            explicit: Vec::new(),
        })
    }

    /// A family given by its member functions, which share one domain and range.
    pub fn explicit(functions: Vec<ClassicalFunction>) -> Result<Self> {
        let first = functions
            .first()
            .ok_or_else(|| Error::InvalidFamily("explicit family needs at least one member".to_string()))?;
        let (domain, range) = (first.domain_size(), first.range_size());
        if functions.iter().any(|f| f.domain_size() != domain || f.range_size() != range) {
            return Err(Error::InvalidFamily("explicit members disagree on domain or range".to_string()));
        }
        if functions.len() as u64 > MAX_MEMBERS || domain as u64 > MAX_DOMAIN {
            return Err(Error::InvalidFamily("explicit family exceeds the size caps".to_string()));
        }
        Ok(Self {
            kind: FamilyKind::ExplicitList,
            q: 0,
            k: 0,
            m: 0,
            params: 0,
            domain,
            range,
            member_count: functions.len(),
            explicit: functions,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    /// `q`; zero for explicit lists.
    pub fn field_order(&self) -> u64 {
        self.q
    }

    pub fn input_len(&self) -> u32 {
        self.k
    }

    pub fn output_len(&self) -> u32 {
        self.m
    }

    /// Number of Toeplitz diagonal parameters.
    pub fn parameter_count(&self) -> u32 {
        self.params
    }

    /// `|A| = q^k`.
    pub fn domain_size(&self) -> usize {
        self.domain
    }

    /// `M = q^m`.
    pub fn range_size(&self) -> usize {
        self.range
    }

    pub fn member_count(&self) -> usize {
        self.member_count
    }

    fn digits(&self, mut x: usize, len: u32) -> Vec<u64> {
        let q = self.q as usize;
        (0..len)
            .map(|_| {
                let d = x % q;
                x /= q;
                d as u64
            })
            .collect()
    }

    fn encode(&self, digits: &[u64]) -> usize {
        digits.iter().rev().fold(0usize, |acc, &d| acc * self.q as usize + d as usize)
    }

    /// Diagonal parameters of member `index`.
    pub fn parameters(&self, index: usize) -> Vec<u64> {
        self.digits(index, self.params)
    }

    /// `f_index(a)`, for matrix kinds and explicit lists alike.
    pub fn evaluate(&self, index: usize, a: usize) -> usize {
        if self.kind == FamilyKind::ExplicitList {
            return self.explicit[index].apply(a);
        }
        let t = self.parameters(index);
        self.evaluate_with(&t, a)
    }

    fn evaluate_with(&self, t: &[u64], a: usize) -> usize {
        let q = self.q;
        let (k, m) = (self.k as usize, self.m as usize);
        let d = self.digits(a, self.k);
        let mut out = vec![0u64; m];
        match self.kind {
            FamilyKind::Toeplitz => {
                for (i, o) in out.iter_mut().enumerate() {
                    for (j, &dj) in d.iter().enumerate() {
                        *o += t[i + k - 1 - j] * dj;
                    }
                    *o %= q;
                }
            }
            FamilyKind::ModifiedToeplitz => {
                let w = k - m;
                for (i, o) in out.iter_mut().enumerate() {
                    let mut acc = d[w + i];
                    for (j, &dj) in d[..w].iter().enumerate() {
                        acc += t[i + w - 1 - j] * dj;
                    }
                    *o = acc % q;
                }
            }
            FamilyKind::ExplicitList => unreachable!("explicit members are tabulated"),
        }
        self.encode(&out)
    }

    /// Member `index` with its table materialized.
    pub fn member(&self, index: usize) -> Result<FamilyMember> {
        if index >= self.member_count {
            return Err(Error::InvalidFamily(format!(
                "member index {index} out of range 0..{}",
                self.member_count
            )));
        }
        let function = if self.kind == FamilyKind::ExplicitList {
            self.explicit[index].clone()
        } else {
            let t = self.parameters(index);
            let table = (0..self.domain).map(|a| self.evaluate_with(&t, a)).collect();
            ClassicalFunction::new(table, self.range)?
        };
        Ok(FamilyMember { index, function })
    }

    /// All members in parameter-index order.
    pub fn enumerate_members(&self) -> impl Iterator<Item = FamilyMember> + '_ {
        (0..self.member_count).map(move |i| self.member(i).expect("index within member_count"))
    }

    /// A uniformly random member, reproducible per seed.
    pub fn sample_member(&self, seed: u64) -> FamilyMember {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let index = rng.random_range(0..self.member_count);
        self.member(index).expect("index within member_count")
    }

    fn stats_from_count(&self, worst: u64) -> CollisionStats {
        let n = self.member_count as u64;
        CollisionStats {
            max_collision_prob: Ratio::new(worst, n),
            is_universal2: worst * self.range as u64 <= n,
        }
    }

    /// Exact collision statistics by counting every member on every input pair.
    pub fn collision_stats(&self) -> Result<CollisionStats> {
        let n = self.domain;
        if n as u64 > MAX_PAIRS_DOMAIN {
            return Err(Error::InvalidFamily(format!(
                "all-pairs collision count needs |A| ≤ {MAX_PAIRS_DOMAIN}, got {n}"
            )));
        }
        let mut counts = vec![0u64; n * n.saturating_sub(1) / 2];
        let mut table = vec![0usize; n];
        for idx in 0..self.member_count {
            for (a, slot) in table.iter_mut().enumerate() {
                *slot = self.evaluate(idx, a);
            }
            let mut p = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if table[a] == table[b] {
                        counts[p] += 1;
                    }
                    p += 1;
                }
            }
        }
        Ok(self.stats_from_count(counts.into_iter().max().unwrap_or(0)))
    }

    /// Exact collision statistics for matrix kinds via linear algebra over `F_q`.
    ///
    /// Both kinds are linear, so `f(a) = f(b)` iff `f(a − b) = 0`. For each nonzero
    /// difference `d` the colliding parameters form the solution set of a linear system in
    /// `t`, of size `q^{n − rank}` when consistent.
    pub fn collision_stats_linear(&self) -> Result<CollisionStats> {
        if self.kind == FamilyKind::ExplicitList {
            return Err(Error::InvalidFamily("explicit lists have no linear structure".to_string()));
        }
        let (k, m, n) = (self.k as usize, self.m as usize, self.params as usize);
        let q = self.q;
        let mut worst = 0u64;
        for diff in 1..self.domain {
            let d = self.digits(diff, self.k);
            // rows: one equation per output digit, columns: n parameters + right-hand side
            let mut sys = vec![vec![0u64; n + 1]; m];
            for (i, row) in sys.iter_mut().enumerate() {
                match self.kind {
                    FamilyKind::Toeplitz => {
                        for (j, &dj) in d.iter().enumerate() {
                            row[i + k - 1 - j] = (row[i + k - 1 - j] + dj) % q;
                        }
                    }
                    _ => {
                        let w = k - m;
                        for (j, &dj) in d[..w].iter().enumerate() {
                            row[i + w - 1 - j] = (row[i + w - 1 - j] + dj) % q;
                        }
                        row[n] = (q - d[w + i]) % q;
                    }
                }
            }
            if let Some(rank) = solve_rank(&mut sys, n, q) {
                worst = worst.max(q.pow((n - rank) as u32));
            }
        }
        Ok(self.stats_from_count(worst))
    }
}

fn inverse_mod(a: u64, q: u64) -> u64 {
    (1..q).find(|&x| a * x % q == 1).expect("q prime and a nonzero")
}

/// Row-reduce the augmented system `[A | b]` over `F_q`; the rank of `A`, or `None` if the
/// system is inconsistent.
fn solve_rank(sys: &mut [Vec<u64>], n: usize, q: u64) -> Option<usize> {
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..sys.len()).find(|&r| sys[r][col] != 0) else {
            continue;
        };
        sys.swap(rank, pivot);
        let inv = inverse_mod(sys[rank][col], q);
        for x in sys[rank].iter_mut() {
            *x = *x * inv % q;
        }
        for r in 0..sys.len() {
            if r != rank && sys[r][col] != 0 {
                let factor = sys[r][col];
                let pivot_row = sys[rank].clone();
                for (x, &p) in sys[r].iter_mut().zip(&pivot_row) {
                    *x = (*x + q * q - factor * p % q) % q;
                }
            }
        }
        rank += 1;
    }
    if sys[rank..].iter().any(|row| row[n] != 0) {
        None
    } else {
        Some(rank)
    }
}

impl fmt::Display for HashFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            FamilyKind::ExplicitList => write!(
                f,
                "explicit_list:n={},domain={},range={}",
                self.member_count, self.domain, self.range
            ),
            kind => write!(f, "{}:q={},k={},m={}", kind.name(), self.q, self.k, self.m),
        }
    }
}

/// Parses descriptors such as `toeplitz:q=2,k=4,m=2`.
impl FromStr for HashFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| Error::InvalidFamily(format!("`{s}`: {why}"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected `kind:q=..,k=..,m=..`"))?;
        let kind: FamilyKind = kind.trim().parse()?;
        let (mut q, mut k, mut m) = (None, None, None);
        for part in rest.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            let value: u64 = value.trim().parse().map_err(|_| bad("parameter is not an integer"))?;
            let slot = match key.trim() {
                "q" => &mut q,
                "k" => &mut k,
                "m" => &mut m,
                other => return Err(bad(&format!("unknown parameter `{other}`"))),
            };
            if slot.replace(value).is_some() {
                return Err(bad("parameter given twice"));
            }
        }
        let q = q.ok_or_else(|| bad("missing q"))?;
        let k = u32::try_from(k.ok_or_else(|| bad("missing k"))?).map_err(|_| bad("k too large"))?;
        let m = u32::try_from(m.ok_or_else(|| bad("missing m"))?).map_err(|_| bad("m too large"))?;
        HashFamily::new(kind, q, k, m)
    }
}

/// Owned descriptor string of a family.
pub fn descriptor(f: &HashFamily) -> String {
    format!("{f}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(kind: FamilyKind, q: u64, k: u32, m: u32) -> HashFamily {
        make_family(kind, q, k, m).unwrap()
    }

    #[test]
    fn member_counts() {
        assert_eq!(fam(FamilyKind::Toeplitz, 2, 2, 1).member_count(), 4);
        assert_eq!(fam(FamilyKind::ModifiedToeplitz, 2, 2, 1).member_count(), 2);
        assert_eq!(fam(FamilyKind::ModifiedToeplitz, 3, 3, 1).member_count(), 9);
        assert_eq!(fam(FamilyKind::Toeplitz, 3, 4, 2).member_count(), 3usize.pow(5));
        assert_eq!(fam(FamilyKind::ModifiedToeplitz, 2, 3, 3).member_count(), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(make_family(FamilyKind::Toeplitz, 4, 2, 1).is_err());
        assert!(make_family(FamilyKind::Toeplitz, 7, 2, 1).is_err());
        assert!(make_family(FamilyKind::Toeplitz, 2, 2, 3).is_err());
        assert!(make_family(FamilyKind::Toeplitz, 2, 17, 1).is_err());
        assert!(make_family(FamilyKind::Toeplitz, 2, 16, 8).is_err());
        assert!(make_family(FamilyKind::ExplicitList, 2, 2, 1).is_err());
    }

    #[test]
    fn toeplitz_tables_match_matrix_products() {
        let f = fam(FamilyKind::Toeplitz, 2, 2, 1);
        // member t = (t0, t1): T = [t1 t0]; f(a) = t1·a0 + t0·a1
        for idx in 0..4 {
            let (t0, t1) = (idx & 1, (idx >> 1) & 1);
            let member = f.member(idx).unwrap();
            for a in 0..4 {
                let (a0, a1) = (a & 1, (a >> 1) & 1);
                assert_eq!(member.function.apply(a), (t1 * a0 + t0 * a1) % 2);
            }
        }
    }

    #[test]
    fn modified_member_example() {
        let f = fam(FamilyKind::ModifiedToeplitz, 2, 2, 1);
        let member = f.member(1).unwrap();
        assert_eq!(member.function.table(), &[0, 1, 1, 0]);
        assert_eq!(f.member(0).unwrap().function.table(), &[0, 0, 1, 1]);
    }

    #[test]
    fn enumeration_covers_indices_in_order() {
        let f = fam(FamilyKind::Toeplitz, 3, 2, 1);
        let members: Vec<_> = f.enumerate_members().collect();
        assert_eq!(members.len(), 9);
        assert_eq!(members[0].index, 0);
        assert_eq!(members[8].index, 8);
        let mut tables: Vec<_> = members.iter().map(|m| m.function.table().to_vec()).collect();
        tables.sort();
        tables.dedup();
        assert_eq!(tables.len(), 9);
    }

    #[test]
    fn collision_examples() {
        let s = fam(FamilyKind::Toeplitz, 2, 2, 1).collision_stats().unwrap();
        assert_eq!(s.max_collision_prob, Ratio::new(1, 2));
        assert!(s.is_universal2);
        let s = fam(FamilyKind::ModifiedToeplitz, 2, 2, 1).collision_stats().unwrap();
        assert_eq!(s.max_collision_prob, Ratio::new(1, 2));
        assert!(s.is_universal2);
        let constant = ClassicalFunction::constant(4, 2, 0).unwrap();
        let s = HashFamily::explicit(vec![constant, ClassicalFunction::new(vec![0, 1, 0, 1], 2).unwrap()])
            .unwrap()
            .collision_stats()
            .unwrap();
        assert!(!s.is_universal2);
        assert!(fam(FamilyKind::Toeplitz, 2, 11, 1).collision_stats().is_err());
    }

    #[test]
    fn linear_route_agrees_with_all_pairs() {
        for kind in [FamilyKind::Toeplitz, FamilyKind::ModifiedToeplitz] {
            for (q, k_max) in [(2u64, 5u32), (3, 3), (5, 2)] {
                for k in 1..=k_max {
                    for m in 1..=k {
                        let f = fam(kind, q, k, m);
                        assert_eq!(
                            f.collision_stats().unwrap(),
                            f.collision_stats_linear().unwrap(),
                            "{f}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let f = fam(FamilyKind::Toeplitz, 2, 3, 2);
        assert_eq!(f.sample_member(7), f.sample_member(7));
        for seed in 0..100 {
            assert!(f.sample_member(seed).index < f.member_count());
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let f: HashFamily = "toeplitz:q=2,k=4,m=2".parse().unwrap();
        assert_eq!(f, fam(FamilyKind::Toeplitz, 2, 4, 2));
        assert_eq!(descriptor(&f), "toeplitz:q=2,k=4,m=2");
        let g: HashFamily = "modified_toeplitz: q=3, k=3, m=1".parse().unwrap();
        assert_eq!(g.member_count(), 9);
        for bad in ["toeplitz", "toeplitz:q=2,k=4", "toeplitz:q=2,k=4,m=2,m=1", "foo:q=2,k=1,m=1", "toeplitz:q=x,k=1,m=1"] {
            assert!(bad.parse::<HashFamily>().is_err(), "{bad}");
        }
    }
}
