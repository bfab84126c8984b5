//! Exact counts of 3-part compositions of `n` with pairwise coprime parts.
//!
//! [`count_t3_oracle`] checks every composition directly.
//! [`count_t3_mobius`] inverts over the divisibility poset instead:
//!
//! ```text
//! T(n) = sum_a mu(0, a) S(a)
//! ```
//!
//! Each poset element `a` is written as `a_i = d g_j g_k`. Its Möbius value is
//! `2^omega(d) (-1)^(omega(g1) + omega(g2) + omega(g3))`, and `S(a)` vanishes
//! unless `d | n` and `a1 + a2 + a3 <= n`. Only the `O(n^{3/2})` triples
//! passing that test are visited.

use std::fmt;

use rayon::prelude::*;

use crate::arith::{gcd, omega, sieve_primes, squarefree_divisors, Triple};
use crate::diophantine::{count_positive_closed, count_s, TripleDecomposition};
use crate::error::{invalid, Error, Result};
use crate::poset::{Poset, MAX_ENUMERATED_PRIMES};

/// Largest `n` the brute-force oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_LIMIT: u64 = 5000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Oracle,
    Mobius,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Mobius => "mobius",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracle" => Ok(Method::Oracle),
            "mobius" => Ok(Method::Mobius),
            other => Err(invalid(format!("unknown method {other:?}"))),
        }
    }
}

/// `T3(n)` and how it was obtained. `terms_evaluated` counts compositions for
/// the oracle and poset terms for the Möbius sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountResult {
    pub n: u64,
    pub t: u64,
    pub terms_evaluated: u64,
    pub method: Method,
}

/// Number of 3-part compositions of `n`, `C(n - 1, 2)`.
pub fn compositions(n: u64) -> u64 {
    if n < 3 {
        0
    } else {
        (n - 1) * (n - 2) / 2
    }
}

/// Direct enumeration of all compositions `(t1, t2, n - t1 - t2)`.
pub fn count_t3_oracle(n: u64, oracle_limit: u64) -> Result<CountResult> {
    if n > oracle_limit {
        return Err(Error::ResourceLimit(format!("oracle limited to n <= {oracle_limit}, got {n}")));
    }
    let mut t = 0;
    let mut terms = 0;
    for t1 in 1..n.saturating_sub(1) {
        for t2 in 1..n - t1 {
            let t3 = n - t1 - t2;
            terms += 1;
            if gcd(t1, t2) == 1 && gcd(t1, t3) == 1 && gcd(t2, t3) == 1 {
                t += 1;
            }
        }
    }
    Ok(CountResult { n, t, terms_evaluated: terms, method: Method::Oracle })
}

/// Number of `1 <= t < n` coprime to `n`, i.e. pairwise coprime 2-part
/// compositions.
pub fn count_t2_oracle(n: u64) -> u64 {
    (1..n).filter(|&t| gcd(t, n) == 1).count() as u64
}

/// `mu(0, a)` for the element with common part `d` and pair cofactors `g`.
pub fn term_coefficient(d: u64, g: Triple) -> Result<i64> {
    TripleDecomposition::new(d, g)?;
    let pairs: u32 = g.iter().map(|&gi| omega(gi)).sum::<Result<u32>>()?;
    let sign = if pairs.is_multiple_of(2) { 1 } else { -1 };
    let weight = 1i64.checked_shl(omega(d)?).ok_or(Error::Overflow("term coefficient"))?;
    Ok(sign * weight)
}

/// Squarefree flag and distinct prime count for every `k <= limit`.
struct SmallNumbers {
    squarefree: Vec<bool>,
    omega: Vec<u32>,
}

impl SmallNumbers {
    fn new(limit: u64) -> Result<Self> {
        let table = sieve_primes(limit.max(2))?;
        let mut squarefree = vec![false; limit as usize + 1];
        let mut omega = vec![0; limit as usize + 1];
        for k in 1..=limit {
            let fac = table.factorize(k)?;
            squarefree[k as usize] = fac.is_squarefree();
            omega[k as usize] = fac.omega();
        }
        Ok(Self { squarefree, omega })
    }

    fn usable(&self, k: u64, d: u64) -> bool {
        self.squarefree[k as usize] && gcd(k, d) == 1
    }
}

/// `T3(n)` from the Möbius sum over the poset, pruned to terms with `d | n`
/// and `d (g2 g3 + g1 g3 + g1 g2) <= n`.
pub fn count_t3_mobius(n: u64) -> Result<CountResult> {
    if n < 3 {
        return Err(invalid(format!("the Möbius count needs n >= 3, got {n}")));
    }
    let small = SmallNumbers::new(n)?;
    let mut total: i128 = 0;
    let mut terms: u64 = 0;

    for d in squarefree_divisors(n)? {
        let m = n / d;
        let weight = 1i128 << small.omega[d as usize];
        // With g2 = g3 = 1 the pruning bound reads 2 g1 + 1 <= m.
        for g1 in (1..).take_while(|&g1| 2 * g1 < m) {
            if !small.usable(g1, d) {
                continue;
            }
            for g2 in (1..).take_while(|&g2| g1 * g2 + g1 + g2 <= m) {
                if !small.usable(g2, d) || gcd(g1, g2) != 1 {
                    continue;
                }
                let g3_max = (m - g1 * g2) / (g1 + g2);
                for g3 in 1..=g3_max {
                    if !small.usable(g3, d) || gcd(g1, g3) != 1 || gcd(g2, g3) != 1 {
                        continue;
                    }
                    let s = count_positive_closed(m, [g1, g2, g3])?.count;
                    let parity = small.omega[g1 as usize] + small.omega[g2 as usize] + small.omega[g3 as usize];
                    let term = if parity % 2 == 0 { weight } else { -weight } * i128::from(s);
                    total = total.checked_add(term).ok_or(Error::Overflow("mobius accumulator"))?;
                    terms += 1;
                }
            }
        }
    }

    let t = u64::try_from(total).map_err(|_| Error::Overflow("negative or oversized mobius total"))?;
    debug_assert!(t <= compositions(n));
    Ok(CountResult { n, t, terms_evaluated: terms, method: Method::Mobius })
}

/// The unpruned Möbius sum over every element of the poset on the primes
/// `<= n`, for `n` small enough that at most eight primes are involved.
pub fn count_t3_poset_sum(n: u64) -> Result<i128> {
    if n < 2 {
        return Ok(0);
    }
    let primes = sieve_primes(n)?.primes().to_vec();
    if primes.len() > MAX_ENUMERATED_PRIMES {
        return Err(Error::ResourceLimit(format!(
            "n = {n} involves {} primes, more than {MAX_ENUMERATED_PRIMES}",
            primes.len()
        )));
    }
    let poset = Poset::new(primes);
    let mut total = 0i128;
    for x in poset.iter() {
        let s = count_s(x.triple()?, n)?.count;
        total += i128::from(x.mobius_closed()) * i128::from(s);
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    /// Budget handed to the oracle.
    pub oracle_limit: u64,
    /// Values of `n` up to this bound are also counted by the oracle and must
    /// agree.
    pub cross_check_limit: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        Self { oracle_limit: DEFAULT_ORACLE_LIMIT, cross_check_limit: DEFAULT_ORACLE_LIMIT }
    }
}

/// `n_from, n_from + stride, ...` up to `n_to` inclusive.
pub fn scan_points(n_from: u64, n_to: u64, stride: u64) -> Result<Vec<u64>> {
    if stride == 0 {
        return Err(invalid("stride must be at least 1"));
    }
    if n_from > n_to {
        return Err(invalid(format!("empty range {n_from}..={n_to}")));
    }
    Ok((n_from..=n_to).step_by(stride as usize).collect())
}

/// Möbius counts over a range, in ascending `n`, cross-checked against the
/// oracle where configured. The first failing `n` aborts the scan.
pub fn scan(n_from: u64, n_to: u64, stride: u64, config: &ScanConfig) -> Result<Vec<CountResult>> {
    if n_from < 3 {
        return Err(invalid(format!("scan must start at n >= 3, got {n_from}")));
    }
    scan_points(n_from, n_to, stride)?
        .into_par_iter()
        .map(|n| {
            let at = |e: Error| Error::AtN { n, source: Box::new(e) };
            let result = count_t3_mobius(n).map_err(at)?;
            if n <= config.cross_check_limit {
                let oracle = count_t3_oracle(n, config.oracle_limit).map_err(at)?;
                if oracle.t != result.t {
                    return Err(Error::Mismatch { n, mobius: result.t, oracle: oracle.t });
                }
            }
            Ok(result)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_squarefree;
    use crate::poset::PosetElement;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn oracle_examples() {
        let t = |n| count_t3_oracle(n, DEFAULT_ORACLE_LIMIT).unwrap().t;
        assert_eq!(t(3), 1);
        assert_eq!(t(4), 3);
        assert_eq!(t(6), 9);
        assert_eq!(t(2), 0);
        assert_eq!(t(0), 0);
        assert!(matches!(count_t3_oracle(5001, DEFAULT_ORACLE_LIMIT), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn t2_examples() {
        assert_eq!(count_t2_oracle(2), 1);
        assert_eq!(count_t2_oracle(7), 6);
        assert_eq!(count_t2_oracle(12), 4);
        assert_eq!(count_t2_oracle(1), 0);
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(term_coefficient(1, [1, 1, 1]).unwrap(), 1);
        assert_eq!(term_coefficient(1, [2, 1, 1]).unwrap(), -1);
        assert_eq!(term_coefficient(6, [5, 1, 1]).unwrap(), -4);
        let element = PosetElement::from_triple([6, 30, 30]).unwrap();
        assert_eq!(element.mobius_closed(), -4);
        assert!(term_coefficient(2, [2, 1, 1]).is_err());
        assert!(term_coefficient(1, [3, 3, 1]).is_err());
    }

    #[test]
    fn mobius_examples() {
        let result = count_t3_mobius(3).unwrap();
        assert_eq!((result.t, result.terms_evaluated, result.method), (1, 1, Method::Mobius));
        assert_eq!(count_t3_mobius(6).unwrap().t, 9);
        // Frozen from the oracle.
        assert_eq!(count_t3_mobius(100).unwrap().t, 2025);
        assert_eq!(count_t3_mobius(210).unwrap().t, 12591);
        assert!(count_t3_mobius(2).is_err());
    }

    #[test]
    fn mobius_matches_oracle_up_to_300() {
        for n in 3..=300 {
            let oracle = count_t3_oracle(n, DEFAULT_ORACLE_LIMIT).unwrap();
            let mobius = count_t3_mobius(n).unwrap();
            assert_eq!(mobius.t, oracle.t, "n = {n}");
            assert!(mobius.t <= compositions(n));
            assert!(mobius.terms_evaluated > 0);
        }
    }

    #[test]
    fn unpruned_poset_sum_agrees() {
        // 23 would be the ninth prime.
        for n in 3..=22 {
            assert_eq!(count_t3_poset_sum(n).unwrap(), i128::from(count_t3_mobius(n).unwrap().t), "n = {n}");
        }
        assert!(matches!(count_t3_poset_sum(23), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn pruned_terms_vanish() {
        for n in [10u64, 12, 17] {
            let poset = Poset::new(sieve_primes(n).unwrap().primes().to_vec());
            for x in poset.iter() {
                let a = x.triple().unwrap();
                let dec = crate::diophantine::decompose(a).unwrap();
                let kept = n % dec.d == 0 && a.iter().sum::<u64>() <= n;
                if !kept {
                    assert_eq!(count_s(a, n).unwrap().count, 0, "{x}");
                }
            }
        }
    }

    #[test]
    fn coefficient_matches_poset_mobius() {
        let primes = [2u64, 3, 5, 7, 11, 13];
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            // Each prime lands in d, one of the g_i, or nowhere.
            let mut d = 1;
            let mut g = [1u64; 3];
            for &p in &primes {
                match rng.random_range(0..5) {
                    0 => d *= p,
                    k @ 1..=3 => g[k - 1] *= p,
                    _ => {}
                }
            }
            let a = TripleDecomposition::new(d, g).unwrap().triple().unwrap();
            let element = PosetElement::from_triple(a).unwrap();
            assert_eq!(term_coefficient(d, g).unwrap(), element.mobius_closed(), "d = {d}, g = {g:?}");
        }
    }

    #[test]
    fn divisible_by_three_beyond_three() {
        for n in 4..=500 {
            let oracle = count_t3_oracle(n, DEFAULT_ORACLE_LIMIT).unwrap().t;
            assert_eq!(oracle % 3, 0, "n = {n}");
        }
    }

    #[test]
    fn support_grows_subquadratically() {
        for n in [250u64, 500, 1000, 2000] {
            let small = count_t3_mobius(n).unwrap().terms_evaluated;
            let large = count_t3_mobius(2 * n).unwrap().terms_evaluated;
            assert!(large <= 4 * small, "n = {n}: {large} > 4 * {small}");
        }
    }

    #[test]
    fn scan_examples() {
        let config = ScanConfig::default();
        let ts: Vec<u64> = scan(3, 6, 1, &config).unwrap().iter().map(|r| r.t).collect();
        assert_eq!(ts, vec![1, 3, 3, 9]);
        assert_eq!(scan(3, 3, 1, &config).unwrap().len(), 1);
        let hundred = scan(100, 100, 1, &config).unwrap();
        assert_eq!(hundred[0].t, count_t3_oracle(100, 5000).unwrap().t);
        let ns: Vec<u64> = scan(10, 40, 7, &config).unwrap().iter().map(|r| r.n).collect();
        assert_eq!(ns, vec![10, 17, 24, 31, 38]);
        assert!(scan(6, 3, 1, &config).is_err());
        assert!(scan(3, 6, 0, &config).is_err());
        assert!(scan(2, 6, 1, &config).is_err());
    }

    #[test]
    fn scan_reports_oracle_budget_failures() {
        let config = ScanConfig { oracle_limit: 10, cross_check_limit: 20 };
        match scan(8, 12, 1, &config) {
            Err(Error::AtN { n, source }) => {
                assert!(n == 11 || n == 12);
                assert!(matches!(*source, Error::ResourceLimit(_)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn squarefree_helper_agrees() {
        let small = SmallNumbers::new(1000).unwrap();
        for k in 1..=1000u64 {
            assert_eq!(small.squarefree[k as usize], is_squarefree(k));
            assert_eq!(small.omega[k as usize], omega(k).unwrap());
        }
    }
}
