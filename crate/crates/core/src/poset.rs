//! The lattice of divisibility patterns generated by `(p,p,1)`, `(p,1,p)` and
//! `(1,p,p)` under componentwise lcm.
//!
//! Each element factors prime by prime into a local pattern: which of the
//! three coordinates the prime divides. Only five patterns occur (nothing, one
//! of the three pairs, or all three), so the whole poset is the product of
//! five-element local posets and its Möbius function is a product of local
//! values. Elements are stored sparsely, listing only primes with a non-empty
//! pattern.
//!
//! Two routes to `mu(0, x)` are provided: [`Poset::mobius_recursive`] uses the
//! defining recursion over an interval, [`PosetElement::mobius_closed`] uses
//! the product formula. They are meant to be checked against each other.

use std::collections::HashMap;
use std::fmt;

use crate::arith::{factorize, Triple};
use crate::error::{invalid, Error, Result};

/// Largest prime set [`Poset::enumerate`] will expand (5^8 = 390625 elements).
pub const MAX_ENUMERATED_PRIMES: usize = 8;

/// Which coordinates of a triple a single prime divides.
///
/// Bit `i` is set iff the prime divides coordinate `i`. Patterns touching
/// exactly one coordinate are not elements of the poset and are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalElement(u8);

impl LocalElement {
    /// `(1,1,1)`
    pub const BOTTOM: Self = Self(0b000);
    /// `(p,p,1)`
    pub const PAIR_01: Self = Self(0b011);
    /// `(p,1,p)`
    pub const PAIR_02: Self = Self(0b101);
    /// `(1,p,p)`
    pub const PAIR_12: Self = Self(0b110);
    /// `(p,p,p)`
    pub const TOP: Self = Self(0b111);

    pub const ALL: [Self; 5] = [Self::BOTTOM, Self::PAIR_01, Self::PAIR_02, Self::PAIR_12, Self::TOP];

    pub fn new(mask: u8) -> Result<Self> {
        if mask > 0b111 || mask.count_ones() == 1 {
            return Err(invalid(format!("mask {mask:#05b} is not a local poset element")));
        }
        Ok(Self(mask))
    }

    pub fn from_divides(divides: [bool; 3]) -> Result<Self> {
        Self::new(divides.iter().enumerate().fold(0, |m, (i, &d)| m | (u8::from(d) << i)))
    }

    pub fn mask(self) -> u8 {
        self.0
    }

    pub fn divides(self, coordinate: usize) -> bool {
        self.0 >> coordinate & 1 == 1
    }

    /// Number of coordinates divisible by the prime: 0, 2 or 3.
    pub fn kappa(self) -> u8 {
        self.0.count_ones() as u8
    }

    pub fn is_below(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn join(self, other: Self) -> Self {
        Self(self.0 | other.0)
    }

    /// `mu(0, x)` in the local poset: `(-1)^(kappa - 1) (kappa - 1)`, which is
    /// 1 at the bottom, -1 on the pairs and 2 at the top.
    pub fn mobius_from_bottom(self) -> i64 {
        match self.kappa() {
            0 => 1,
            2 => -1,
            3 => 2,
            _ => unreachable!("kappa = 1 is rejected at construction"),
        }
    }
}

impl fmt::Display for LocalElement {
    /// Coordinates left to right, so `(p,p,1)` prints as `110`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..3 {
            f.write_str(if self.divides(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// One poset element: a local pattern for every prime with a non-empty one,
/// sorted by prime.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PosetElement {
    assignment: Vec<(u64, LocalElement)>,
}

/// Per-prime count of coordinates divisible by that prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KappaProfile {
    pub kappa: Vec<(u64, u8)>,
}

impl PosetElement {
    pub fn bottom() -> Self {
        Self::default()
    }

    /// Builds an element from `(prime, pattern)` pairs. Bottom patterns are
    /// dropped; a repeated prime is an error.
    pub fn from_assignment(pairs: impl IntoIterator<Item = (u64, LocalElement)>) -> Result<Self> {
        let mut assignment: Vec<(u64, LocalElement)> =
            pairs.into_iter().filter(|&(_, l)| l != LocalElement::BOTTOM).collect();
        assignment.sort_unstable_by_key(|&(p, _)| p);
        if assignment.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("prime assigned twice in poset element"));
        }
        Ok(Self { assignment })
    }

    /// Factors a triple of squarefree integers into its local patterns.
    pub fn from_triple(a: Triple) -> Result<Self> {
        let mut pairs: Vec<(u64, [bool; 3])> = Vec::new();
        for (i, &ai) in a.iter().enumerate() {
            let fac = factorize(ai)?;
            if !fac.is_squarefree() {
                return Err(invalid(format!("component {ai} of {a:?} is not squarefree")));
            }
            for p in fac.primes() {
                match pairs.iter_mut().find(|(q, _)| *q == p) {
                    Some((_, flags)) => flags[i] = true,
                    None => {
                        let mut flags = [false; 3];
                        flags[i] = true;
                        pairs.push((p, flags));
                    }
                }
            }
        }
        let locals = pairs
            .into_iter()
            .map(|(p, flags)| Ok((p, LocalElement::from_divides(flags)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::from_assignment(locals)
    }

    /// Multiplies the primes back into a triple.
    pub fn triple(&self) -> Result<Triple> {
        let mut a = [1u64; 3];
        for &(p, local) in &self.assignment {
            for (i, ai) in a.iter_mut().enumerate() {
                if local.divides(i) {
                    *ai = ai.checked_mul(p).ok_or(Error::Overflow("poset element triple"))?;
                }
            }
        }
        Ok(a)
    }

    pub fn assignment(&self) -> &[(u64, LocalElement)] {
        &self.assignment
    }

    pub fn local(&self, p: u64) -> LocalElement {
        self.assignment
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.assignment[i].1)
            .unwrap_or(LocalElement::BOTTOM)
    }

    pub fn kappa(&self, p: u64) -> u8 {
        self.local(p).kappa()
    }

    pub fn kappa_profile(&self) -> KappaProfile {
        KappaProfile { kappa: self.assignment.iter().map(|&(p, l)| (p, l.kappa())).collect() }
    }

    pub fn is_bottom(&self) -> bool {
        self.assignment.is_empty()
    }

    /// Sum of local ranks; strictly increases along the order.
    pub fn rank(&self) -> u32 {
        self.assignment.iter().map(|&(_, l)| u32::from(l.kappa())).sum()
    }

    /// Componentwise divisibility, i.e. submask at every prime.
    pub fn is_below(&self, other: &Self) -> bool {
        self.assignment.iter().all(|&(p, l)| l.is_below(other.local(p)))
    }

    /// Componentwise lcm.
    pub fn join(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.assignment.len() + other.assignment.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.assignment, &other.assignment);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push(b[j]);
                j += 1;
            } else {
                out.push((a[i].0, a[i].1.join(b[j].1)));
                i += 1;
                j += 1;
            }
        }
        Self { assignment: out }
    }

    /// `mu(0, x)` from the product formula: a factor 2 for every prime
    /// dividing all three coordinates and -1 for every prime dividing two.
    pub fn mobius_closed(&self) -> i64 {
        self.assignment.iter().map(|&(_, l)| l.mobius_from_bottom()).product()
    }
}

impl fmt::Display for PosetElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (p, l)) in self.assignment.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p} -> {l}")?;
        }
        f.write_str("}")
    }
}

/// The poset over a fixed finite set of primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    primes: Vec<u64>,
}

impl Poset {
    /// Primes are sorted and deduplicated; primality is the caller's concern.
    pub fn new(primes: impl IntoIterator<Item = u64>) -> Self {
        let mut primes: Vec<u64> = primes.into_iter().collect();
        primes.sort_unstable();
        primes.dedup();
        Self { primes }
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `5^|primes|`, or `None` if that overflows.
    pub fn cardinality(&self) -> Option<u64> {
        5u64.checked_pow(u32::try_from(self.primes.len()).ok()?)
    }

    pub fn contains(&self, x: &PosetElement) -> bool {
        x.assignment.iter().all(|(p, _)| self.primes.binary_search(p).is_ok())
    }

    fn check(&self, x: &PosetElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(invalid(format!("element {x} uses primes outside {:?}", self.primes)))
        }
    }

    pub fn leq(&self, x: &PosetElement, y: &PosetElement) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.is_below(y))
    }

    pub fn join(&self, x: &PosetElement, y: &PosetElement) -> Result<PosetElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(x.join(y))
    }

    /// Lazily walks all elements in mixed-radix order.
    pub fn iter(&self) -> impl Iterator<Item = PosetElement> + '_ {
        let mut digits = vec![0usize; self.primes.len()];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let element = PosetElement {
                assignment: self
                    .primes
                    .iter()
                    .zip(&digits)
                    .filter(|&(_, &d)| d != 0)
                    .map(|(&p, &d)| (p, LocalElement::ALL[d]))
                    .collect(),
            };
            done = true;
            for d in digits.iter_mut() {
                *d += 1;
                if *d < LocalElement::ALL.len() {
                    done = false;
                    break;
                }
                *d = 0;
            }
            Some(element)
        })
    }

    /// Every element, each exactly once.
    pub fn enumerate(&self) -> Result<Vec<PosetElement>> {
        if self.primes.len() > MAX_ENUMERATED_PRIMES {
            return Err(Error::ResourceLimit(format!(
                "enumerating {} primes exceeds the cap of {MAX_ENUMERATED_PRIMES}",
                self.primes.len()
            )));
        }
        Ok(self.iter().collect())
    }

    /// All `z` with `x <= z <= y`, sorted by rank.
    pub fn interval(&self, x: &PosetElement, y: &PosetElement) -> Result<Vec<PosetElement>> {
        if !self.leq(x, y)? {
            return Err(invalid(format!("{x} is not below {y}")));
        }
        // Interval factors into local intervals at the primes where y is non-trivial.
        let local_choices: Vec<(u64, Vec<LocalElement>)> = y
            .assignment
            .iter()
            .map(|&(p, top)| {
                let bottom = x.local(p);
                let choices =
                    LocalElement::ALL.into_iter().filter(|l| bottom.is_below(*l) && l.is_below(top)).collect();
                (p, choices)
            })
            .collect();

        let size = local_choices.iter().try_fold(1usize, |acc, (_, c)| acc.checked_mul(c.len()));
        let cap = 5usize.pow(MAX_ENUMERATED_PRIMES as u32);
        match size {
            Some(s) if s <= cap => {}
            _ => return Err(Error::ResourceLimit(format!("interval [{x}, {y}] is larger than {cap}"))),
        }

        let mut elements = vec![PosetElement::bottom()];
        for (p, choices) in &local_choices {
            elements = elements
                .iter()
                .flat_map(|e| {
                    choices.iter().map(move |&l| {
                        let mut next = e.clone();
                        if l != LocalElement::BOTTOM {
                            next.assignment.push((*p, l));
                        }
                        next
                    })
                })
                .collect();
        }
        elements.sort_by_key(PosetElement::rank);
        Ok(elements)
    }

    /// `mu(x, y)` from the defining recursion `mu(x, x) = 1`,
    /// `mu(x, z) = -sum_{x <= w < z} mu(x, w)`, evaluated over the whole
    /// interval in rank order so each value is computed once.
    pub fn mobius_recursive(&self, x: &PosetElement, y: &PosetElement) -> Result<i64> {
        let interval = self.interval(x, y)?;
        let mut memo: HashMap<&PosetElement, i64> = HashMap::with_capacity(interval.len());
        for (k, z) in interval.iter().enumerate() {
            let value = if z == x {
                1
            } else {
                // Anything strictly below z has strictly smaller rank.
                -interval[..k].iter().filter(|w| w.is_below(z) && *w != z).map(|w| memo[w]).sum::<i64>()
            };
            memo.insert(z, value);
        }
        Ok(memo[y])
    }
}
