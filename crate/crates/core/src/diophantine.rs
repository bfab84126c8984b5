//! Exact counts of positive solutions to `a1 x1 + a2 x2 + a3 x3 = n` for
//! squarefree coefficient triples coming from the divisibility poset.
//!
//! After removing `d = gcd(a1, a2, a3)` the coefficients take the form
//! `(g2 g3, g1 g3, g1 g2)` with the `g_i` pairwise coprime. The solution set of
//! `g2 g3 x1 + g1 g3 x2 + g1 g2 x3 = m` is then a translate of the lattice
//! spanned by `(g1, 0, -g3)` and `(0, g2, -g3)`. Scaling the first two
//! coordinates by `1/g_i` sends it to a translate `q + Z^2`, and the positive
//! solutions become the points of `q + N^2` strictly inside the triangle
//! `z1 + z2 < m / (g1 g2 g3)`. Those lie on consecutive anti-diagonals holding
//! 1, 2, 3, ... points, so the count is always a binomial `C(t, 2)`.
//!
//! Everything is integer arithmetic over the common denominator `g1 g2 g3`.

use num_rational::Ratio;

use crate::arith::{extended_gcd, factorize, gcd, Triple};
use crate::error::{invalid, Error, Result};

/// Iteration budget for [`count_positive_bruteforce`] when callers have no
/// opinion.
pub const DEFAULT_BRUTEFORCE_BUDGET: u64 = 1 << 31;

/// `a_i = d * g_j * g_k` with `d = gcd(a)` and the `g_i` pairwise coprime and
/// coprime to `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TripleDecomposition {
    pub d: u64,
    pub g: Triple,
}

impl TripleDecomposition {
    /// Validates the coprimality invariants.
    pub fn new(d: u64, g: Triple) -> Result<Self> {
        if d == 0 {
            return Err(invalid("d must be positive"));
        }
        check_coprime(g)?;
        if g.iter().any(|&gi| gcd(gi, d) != 1) {
            return Err(invalid(format!("g = {g:?} is not coprime to d = {d}")));
        }
        Ok(Self { d, g })
    }

    /// `g1 g2 g3`.
    pub fn l(&self) -> u64 {
        self.g.iter().product()
    }

    pub fn triple(&self) -> Result<Triple> {
        let [g1, g2, g3] = self.g;
        let part = |x: u64, y: u64| {
            x.checked_mul(y).and_then(|xy| xy.checked_mul(self.d)).ok_or(Error::Overflow("triple reconstruction"))
        };
        Ok([part(g2, g3)?, part(g1, g3)?, part(g1, g2)?])
    }
}

/// Splits a squarefree triple into its common part and pairwise cofactors.
pub fn decompose(a: Triple) -> Result<TripleDecomposition> {
    for &ai in &a {
        if ai == 0 || !factorize(ai)?.is_squarefree() {
            return Err(invalid(format!("component {ai} of {a:?} is not a positive squarefree integer")));
        }
    }
    let d = gcd(gcd(a[0], a[1]), a[2]);
    let b = a.map(|ai| ai / d);
    let g = [gcd(b[1], b[2]), gcd(b[0], b[2]), gcd(b[0], b[1])];
    let dec = TripleDecomposition::new(d, g)?;
    // Fails when some prime divides exactly one coordinate.
    if dec.triple()? != a {
        return Err(invalid(format!("{a:?} is not generated by prime pairs")));
    }
    Ok(dec)
}

fn check_coprime(g: Triple) -> Result<()> {
    if g.contains(&0) {
        return Err(invalid(format!("g = {g:?} has a zero entry")));
    }
    if gcd(g[0], g[1]) != 1 || gcd(g[0], g[2]) != 1 || gcd(g[1], g[2]) != 1 {
        return Err(invalid(format!("g = {g:?} is not pairwise coprime")));
    }
    Ok(())
}

/// The coefficients `(g2 g3, g1 g3, g1 g2)`.
pub fn coefficients(g: Triple) -> [u128; 3] {
    let [g1, g2, g3] = g.map(u128::from);
    [g2 * g3, g1 * g3, g1 * g2]
}

/// Some integer solution of `g2 g3 v1 + g1 g3 v2 + g1 g2 v3 = m`; entries may
/// be negative.
///
/// `v1` solves `g2 g3 v1 = m (mod g1)`, which leaves
/// `g3 v2 + g2 v3 = (m - g2 g3 v1) / g1` for the coprime pair `(g3, g2)`.
pub fn particular_solution(m: u64, g: Triple) -> Result<[i128; 3]> {
    check_coprime(g)?;
    let [g1, g2, g3] = g.map(i128::from);
    let m = i128::from(m);

    let (_, inverse, _) = extended_gcd((g2 * g3) % g1, g1);
    let v1 = (m % g1 * inverse).rem_euclid(g1);
    let rest = m - g2 * g3 * v1;
    debug_assert_eq!(rest % g1, 0);
    let rest = rest / g1;

    let (_, u, w) = extended_gcd(g3, g2);
    let v = [v1, rest * u, rest * w];
    debug_assert_eq!(residual(m, g, v), 0);
    Ok(v)
}

fn residual(m: i128, g: Triple, v: [i128; 3]) -> i128 {
    let c = coefficients(g).map(|c| c as i128);
    c[0] * v[0] + c[1] * v[1] + c[2] * v[2] - m
}

/// Exact positive-solution count together with the lattice parameters.
///
/// `count = C(t, 2)` and `r = t - lambda`, so
/// `count = (lambda + r)(lambda + r - 1) / 2`. When the triangle contains no
/// lattice points `t` is reported as 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionCount {
    pub count: u64,
    pub t: u64,
    /// `m / (g1 g2 g3)`, the scale of the counting triangle.
    pub lambda: Ratio<i128>,
    pub r: Ratio<i128>,
}

impl SolutionCount {
    fn from_t(t: u64, lambda: Ratio<i128>) -> Result<Self> {
        let count = u128::from(t) * u128::from(t.saturating_sub(1)) / 2;
        let count = u64::try_from(count).map_err(|_| Error::Overflow("solution count"))?;
        let r = Ratio::from_integer(i128::from(t)) - lambda;
        Ok(Self { count, t, lambda, r })
    }

    fn zero(lambda: Ratio<i128>) -> Self {
        Self { count: 0, t: 0, r: -lambda, lambda }
    }

    /// `|r| <= 2`.
    pub fn r_within_bound(&self) -> bool {
        let two = Ratio::from_integer(2);
        self.r <= two && self.r >= -two
    }
}

/// Counts positive solutions of `g2 g3 x1 + g1 g3 x2 + g1 g2 x3 = m`.
pub fn count_positive_closed(m: u64, g: Triple) -> Result<SolutionCount> {
    let v = particular_solution(m, g)?;
    count_positive_from(m, g, v)
}

/// Same as [`count_positive_closed`] but starting from a caller-supplied
/// particular solution `v`. The result depends only on the coset, not on `v`.
pub fn count_positive_from(m: u64, g: Triple, v: [i128; 3]) -> Result<SolutionCount> {
    check_coprime(g)?;
    if m == 0 {
        return Err(invalid("m must be positive"));
    }
    if residual(i128::from(m), g, v) != 0 {
        return Err(invalid(format!("{v:?} does not solve the equation for m = {m}, g = {g:?}")));
    }
    let [g1, g2, g3] = g.map(i128::from);
    let denom = g1 * g2 * g3;
    let m = i128::from(m);
    let lambda = Ratio::new(m, denom);

    // q_i = v_i / g_i reduced into (0, 1], kept as numerators over g_i.
    let q1 = (v[0] - 1).rem_euclid(g1) + 1;
    let q2 = (v[1] - 1).rem_euclid(g2) + 1;
    // (q1 + q2) scaled to the common denominator.
    let corner = q1 * g2 * g3 + q2 * g1 * g3;

    let gap = m - corner;
    let t = if gap <= 0 {
        1
    } else {
        // Largest s >= 0 with corner + s * denom < m.
        let s = (gap - 1) / denom;
        u64::try_from(s + 2).map_err(|_| Error::Overflow("lattice parameter t"))?
    };
    let result = SolutionCount::from_t(t, lambda)?;
    debug_assert!(result.r_within_bound(), "|r| > 2 for m = {m}, g = {g:?}: {result:?}");
    Ok(result)
}

/// Reference count by direct enumeration of `x1, x2`, solving for `x3`.
/// Fails if the estimated number of `(x1, x2)` pairs exceeds `budget`.
pub fn count_positive_bruteforce(m: u64, g: Triple, budget: u64) -> Result<u64> {
    check_coprime(g)?;
    let [c1, c2, c3] = coefficients(g);
    let m = u128::from(m);
    let estimate = (m / c1).saturating_mul(m / c2);
    if estimate > u128::from(budget) {
        return Err(Error::ResourceLimit(format!(
            "brute-force count needs ~{estimate} iterations, budget is {budget}"
        )));
    }
    let mut count = 0u64;
    let mut x1 = 1u128;
    while c1 * x1 < m {
        let mut x2 = 1u128;
        while c1 * x1 + c2 * x2 < m {
            let rest = m - c1 * x1 - c2 * x2;
            if rest.is_multiple_of(c3) {
                count += 1;
            }
            x2 += 1;
        }
        x1 += 1;
    }
    Ok(count)
}

/// `S(a)`: the number of compositions `s` of `n` into three positive parts
/// with `a_i | s_i`.
///
/// When `d(a)` does not divide `n` the count is zero, reported with `t = 0`
/// and `r = -lambda` (the `|r| <= 2` bound is not claimed in that case).
pub fn count_s(a: Triple, n: u64) -> Result<SolutionCount> {
    let dec = decompose(a)?;
    count_s_decomposed(&dec, n)
}

/// [`count_s`] for an already decomposed triple.
pub fn count_s_decomposed(dec: &TripleDecomposition, n: u64) -> Result<SolutionCount> {
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    if !n.is_multiple_of(dec.d) {
        let denom = i128::from(dec.d) * i128::from(dec.l());
        return Ok(SolutionCount::zero(Ratio::new(i128::from(n), denom)));
    }
    count_positive_closed(n / dec.d, dec.g)
}
