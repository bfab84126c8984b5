//! Self-checks behind `coprime-count verify`. Each check pits a fast route
//! against an independent slow one.

use std::io::{self, Write};

use coprime_core::arith::{euler_phi, gcd, is_squarefree};
use coprime_core::counter::{count_t2_oracle, count_t3_mobius, count_t3_oracle, count_t3_poset_sum};
use coprime_core::diophantine::{count_positive_bruteforce, count_positive_closed, DEFAULT_BRUTEFORCE_BUDGET};
use coprime_core::{Poset, PosetElement, Triple};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn mobius_agreement() -> Check {
    let bottom = PosetElement::bottom();
    let mut count = 0;
    for primes in [vec![2], vec![2, 3], vec![2, 3, 5]] {
        let poset = Poset::new(primes);
        for x in poset.enumerate().map_err(|e| e.to_string())? {
            let recursive = poset.mobius_recursive(&bottom, &x).map_err(|e| e.to_string())?;
            if recursive != x.mobius_closed() {
                return Err(format!("{x}: recursive {recursive}, closed {}", x.mobius_closed()));
            }
            count += 1;
        }
    }
    Ok(format!("{count} elements"))
}

fn diophantine_agreement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut done = 0;
    while done < 300 {
        let g: Triple = [rng.random_range(1..=30), rng.random_range(1..=30), rng.random_range(1..=30)];
        let coprime = gcd(g[0], g[1]) == 1 && gcd(g[0], g[2]) == 1 && gcd(g[1], g[2]) == 1;
        if !coprime || g.iter().product::<u64>() > 200 || !g.iter().all(|&x| is_squarefree(x)) {
            continue;
        }
        let m = rng.random_range(1..=10_000);
        let closed = count_positive_closed(m, g).map_err(|e| e.to_string())?;
        let brute = count_positive_bruteforce(m, g, DEFAULT_BRUTEFORCE_BUDGET).map_err(|e| e.to_string())?;
        if closed.count != brute || (closed.count > 0 && !closed.r_within_bound()) {
            return Err(format!("m = {m}, g = {g:?}: closed {closed:?}, brute {brute}"));
        }
        done += 1;
    }
    Ok(format!("{done} random instances"))
}

fn counter_agreement(oracle_limit: u64) -> Check {
    let top = oracle_limit.min(300);
    if top < 3 {
        return Ok("skipped, oracle limit below 3".into());
    }
    for n in 3..=top {
        let mobius = count_t3_mobius(n).map_err(|e| e.to_string())?.t;
        let oracle = count_t3_oracle(n, oracle_limit).map_err(|e| e.to_string())?.t;
        if mobius != oracle {
            return Err(format!("n = {n}: mobius {mobius}, oracle {oracle}"));
        }
    }
    Ok(format!("3 <= n <= {top}"))
}

fn full_poset_sum() -> Check {
    for n in 3..=22 {
        let full = count_t3_poset_sum(n).map_err(|e| e.to_string())?;
        let pruned = count_t3_mobius(n).map_err(|e| e.to_string())?.t;
        if full != i128::from(pruned) {
            return Err(format!("n = {n}: full sum {full}, pruned {pruned}"));
        }
    }
    Ok("3 <= n <= 22".into())
}

fn totient_identity() -> Check {
    for n in 2..=2000 {
        let phi = euler_phi(n).map_err(|e| e.to_string())?;
        if phi != count_t2_oracle(n) {
            return Err(format!("n = {n}"));
        }
    }
    Ok("2 <= n <= 2000".into())
}

/// Runs every check, writing one line each, and returns the number that failed.
pub fn run_all(out: &mut dyn Write, oracle_limit: u64) -> io::Result<usize> {
    let checks: Vec<(&str, Check)> = vec![
        ("poset mobius: closed form vs recursion", mobius_agreement()),
        ("lattice count vs brute force", diophantine_agreement()),
        ("mobius count vs oracle", counter_agreement(oracle_limit)),
        ("pruned vs full poset sum", full_poset_sum()),
        ("two-part count vs totient", totient_identity()),
    ];
    let mut failed = 0;
    for (name, result) in checks {
        match result {
            Ok(detail) => writeln!(out, "[PASS] {name} ({detail})")?,
            Err(detail) => {
                failed += 1;
                writeln!(out, "[FAIL] {name}: {detail}")?;
            }
        }
    }
    Ok(failed)
}
