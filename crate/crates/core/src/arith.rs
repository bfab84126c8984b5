//! Prime sieving, factorization and the small multiplicative helpers used by
//! every other module.
//!
//! [`PrimeTable`] stores a smallest-prime-factor array, so factoring any
//! `m <= limit` costs `O(log m)` divisions. Values above the table limit fall
//! back to trial division.

use crate::error::{invalid, Error, Result};

/// A triple of positive integers, indexed by coordinate.
pub type Triple = [u64; 3];

/// Primes up to `limit` together with a smallest-prime-factor lookup.
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    spf: Vec<u32>,
}

/// Builds a [`PrimeTable`] with a linear sieve.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(invalid(format!("sieve limit must be at least 2, got {limit}")));
    }
    if limit > u64::from(u32::MAX) {
        return Err(Error::ResourceLimit(format!(
            "sieve limit {limit} exceeds the 32-bit smallest-factor table"
        )));
    }
    let size = usize::try_from(limit)
        .map_err(|_| Error::ResourceLimit(format!("sieve limit {limit} is not addressable")))?
        + 1;

    let mut spf = vec![0u32; size];
    let mut primes: Vec<u64> = Vec::new();
    for m in 2..size {
        if spf[m] == 0 {
            spf[m] = m as u32;
            primes.push(m as u64);
        }
        let lowest = spf[m] as u64;
        for &p in &primes {
            let composite = p * m as u64;
            if p > lowest || composite > limit {
                break;
            }
            spf[composite as usize] = p as u32;
        }
    }
    Ok(PrimeTable { limit, primes, spf })
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Primes in `[2, limit]`, ascending.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Smallest prime factor of `m`, for `2 <= m <= limit`.
    pub fn smallest_factor(&self, m: u64) -> Option<u64> {
        if m < 2 || m > self.limit {
            return None;
        }
        Some(u64::from(self.spf[m as usize]))
    }

    pub fn is_prime(&self, m: u64) -> bool {
        self.smallest_factor(m) == Some(m)
    }

    /// Factors `n`, using the table when `n <= limit` and trial division
    /// otherwise.
    pub fn factorize(&self, n: u64) -> Result<Factorization> {
        if n == 0 {
            return Err(invalid("cannot factor 0"));
        }
        if n > self.limit {
            return trial_factorize(n, self.primes.iter().copied());
        }
        let mut factors: Vec<(u64, u32)> = Vec::new();
        let mut rest = n;
        while rest > 1 {
            let p = u64::from(self.spf[rest as usize]);
            let mut e = 0;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        Ok(Factorization { value: n, factors })
    }
}

/// Prime factorization `value = prod p^e`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    value: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Number of distinct prime factors.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn radical(&self) -> u64 {
        self.primes().product()
    }
}

/// Trial division over `candidates`, continuing with odd numbers past them
/// while the cofactor still has a factor below its square root.
fn trial_factorize(n: u64, candidates: impl Iterator<Item = u64>) -> Result<Factorization> {
    if n == 0 {
        return Err(invalid("cannot factor 0"));
    }
    let mut factors = Vec::new();
    let mut rest = n;
    let mut strip = |p: u64, rest: &mut u64| {
        if (*rest).is_multiple_of(p) {
            let mut e = 0;
            while (*rest).is_multiple_of(p) {
                *rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    };

    let mut last = 1u64;
    for p in candidates {
        if p.saturating_mul(p) > rest {
            break;
        }
        strip(p, &mut rest);
        last = p;
    }
    let mut d = if last < 3 { 3 } else { last + 2 };
    if last < 2 {
        strip(2, &mut rest);
    }
    while d.saturating_mul(d) <= rest {
        strip(d, &mut rest);
        d += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(Factorization { value: n, factors })
}

/// Factors `n` by trial division.
pub fn factorize(n: u64) -> Result<Factorization> {
    trial_factorize(n, std::iter::empty())
}

/// Number of distinct prime factors of `n`.
pub fn omega(n: u64) -> Result<u32> {
    Ok(factorize(n)?.omega())
}

/// All squarefree divisors of `n` (the divisors of its radical), ascending.
pub fn squarefree_divisors(n: u64) -> Result<Vec<u64>> {
    let fac = factorize(n)?;
    let mut divisors = vec![1u64];
    for p in fac.primes() {
        let extended: Vec<u64> = divisors.iter().map(|&d| d * p).collect();
        divisors.extend(extended);
    }
    divisors.sort_unstable();
    Ok(divisors)
}

/// Euler's totient, exact: multiply by `p - 1` and divide by `p` per prime.
pub fn euler_phi(n: u64) -> Result<u64> {
    let fac = factorize(n)?;
    Ok(fac.primes().fold(n, |acc, p| acc / p * (p - 1)))
}

pub fn is_squarefree(n: u64) -> bool {
    n != 0 && factorize(n).map(|f| f.is_squarefree()).unwrap_or(false)
}

/// `gcd(0, 0) = 0`.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `lcm(0, x) = 0`; overflow is reported, never wrapped.
pub fn lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / gcd(a, b)).checked_mul(b).ok_or(Error::Overflow("lcm"))
}

/// Componentwise lcm of two triples.
pub fn triple_lcm(a: Triple, b: Triple) -> Result<Triple> {
    Ok([lcm(a[0], b[0])?, lcm(a[1], b[1])?, lcm(a[2], b[2])?])
}

/// Returns `(g, x, y)` with `a x + b y = g = gcd(a, b) >= 0`.
pub fn extended_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Plain Eratosthenes sieve returning only the prime list; cheaper than a
/// [`PrimeTable`] when no factorization is needed.
pub fn primes_up_to(limit: u64) -> Result<Vec<u64>> {
    let size = usize::try_from(limit)
        .ok()
        .and_then(|l| l.checked_add(1))
        .ok_or_else(|| Error::ResourceLimit(format!("prime limit {limit} is not addressable")))?;
    if limit < 2 {
        return Ok(Vec::new());
    }
    let mut composite = vec![false; size];
    let mut primes = Vec::new();
    for m in 2..size {
        if composite[m] {
            continue;
        }
        primes.push(m as u64);
        let mut k = m.saturating_mul(m);
        while k < size {
            composite[k] = true;
            k += m;
        }
    }
    Ok(primes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn is_prime_trial(m: u64) -> bool {
        m >= 2 && (2..m).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
    }

    #[test]
    fn sieve_small_limits() {
        assert_eq!(sieve_primes(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(sieve_primes(2).unwrap().primes(), &[2]);
        assert!(matches!(sieve_primes(1), Err(Error::InvalidArgument(_))));
        assert!(matches!(sieve_primes(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn sieve_matches_trial_division() {
        let expected: Vec<u64> = (2..=100).filter(|&m| is_prime_trial(m)).collect();
        assert_eq!(expected.len(), 25);
        assert_eq!(sieve_primes(100).unwrap().primes(), expected.as_slice());

        let table = sieve_primes(5000).unwrap();
        for m in 2..=5000 {
            let p = table.smallest_factor(m).unwrap();
            assert!(is_prime_trial(p) && m % p == 0);
            assert!((2..p).all(|q| m % q != 0), "spf({m}) = {p} not smallest");
        }
        assert_eq!(primes_up_to(5000).unwrap(), table.primes());
    }

    #[test]
    fn factorize_examples() {
        let table = sieve_primes(40_000).unwrap();
        assert!(table.factorize(1).unwrap().factors().is_empty());
        assert_eq!(table.factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        let primorial = [(2, 1), (3, 1), (5, 1), (7, 1), (11, 1), (13, 1)];
        assert_eq!(table.factorize(30030).unwrap().factors(), &primorial);
        assert_eq!(factorize(30030).unwrap().factors(), &primorial);
        assert!(matches!(table.factorize(0), Err(Error::InvalidArgument(_))));
        assert!(matches!(factorize(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn factorize_past_table_limit() {
        let table = sieve_primes(100).unwrap();
        // 101 * 103 and 2^3 * 10007 both need primes beyond the table.
        assert_eq!(table.factorize(10403).unwrap().factors(), &[(101, 1), (103, 1)]);
        assert_eq!(table.factorize(80056).unwrap().factors(), &[(2, 3), (10007, 1)]);
        assert_eq!(table.factorize(97 * 97 * 89).unwrap().factors(), &[(89, 1), (97, 2)]);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(1).unwrap(), 0);
        assert_eq!(omega(12).unwrap(), 2);
        assert_eq!(omega(30030).unwrap(), 6);
    }

    #[test]
    fn squarefree_divisor_examples() {
        assert_eq!(squarefree_divisors(1).unwrap(), vec![1]);
        let by_filter: Vec<u64> = (1..=12).filter(|d| 12 % d == 0 && is_squarefree(*d)).collect();
        assert_eq!(squarefree_divisors(12).unwrap(), by_filter);
        assert_eq!(squarefree_divisors(30).unwrap(), vec![1, 2, 3, 5, 6, 10, 15, 30]);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(7).unwrap(), 6);
        assert_eq!(euler_phi(12).unwrap(), 4);
    }

    #[test]
    fn gcd_lcm_conventions() {
        assert_eq!(gcd(6, 10), 2);
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(0, 0), 0);
        assert_eq!(lcm(0, 5).unwrap(), 0);
        assert_eq!(lcm(4, 6).unwrap(), 12);
        assert_eq!(triple_lcm([2, 2, 1], [1, 3, 3]).unwrap(), [2, 6, 3]);
        assert_eq!(lcm(u64::MAX, u64::MAX - 1), Err(Error::Overflow("lcm")));
    }

    #[test]
    fn extended_gcd_bezout() {
        for (a, b) in [(240, 46), (3, 2), (1, 1), (0, 5), (17, 0), (-12, 18)] {
            let (g, x, y) = extended_gcd(a, b);
            assert_eq!(a * x + b * y, g);
            assert_eq!(g as u64, gcd(a.unsigned_abs() as u64, b.unsigned_abs() as u64));
        }
    }

    #[test]
    fn phi_and_divisor_count_up_to_ten_thousand() {
        for n in 1..=10_000u64 {
            let coprime = (1..=n).filter(|&t| gcd(t, n) == 1).count() as u64;
            assert_eq!(euler_phi(n).unwrap(), coprime, "phi({n})");
            let divisors = squarefree_divisors(n).unwrap();
            assert_eq!(divisors.len(), 1 << omega(n).unwrap());
        }
    }

    #[test]
    fn factorization_reconstructs_every_value() {
        let table = sieve_primes(100_000).unwrap();
        for n in 1..=100_000u64 {
            let fac = table.factorize(n).unwrap();
            let product: u64 = fac.factors().iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(product, n);
            assert!(fac.factors().windows(2).all(|w| w[0].0 < w[1].0));
            assert!(fac.factors().iter().all(|&(p, e)| e >= 1 && table.is_prime(p)));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn phi_is_multiplicative(a in 1u64..=1000, b in 1u64..=1000) {
            prop_assume!(gcd(a, b) == 1);
            prop_assert_eq!(euler_phi(a * b).unwrap(), euler_phi(a).unwrap() * euler_phi(b).unwrap());
        }

        #[test]
        fn trial_and_table_factorization_agree(n in 1u64..2_000_000) {
            let table = sieve_primes(1000).unwrap();
            prop_assert_eq!(table.factorize(n).unwrap(), factorize(n).unwrap());
        }
    }
}
