//! Term supplies for sweeps: exhaustive enumeration and a few classics.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::parse::parse_lambda;
use super::term::{Db, Term};

/// All terms of exactly `size` nodes whose free indices are below `free`.
pub fn terms_of_size(size: usize, free: usize) -> Vec<Db> {
    match size {
        0 => Vec::new(),
        1 => (0..free).map(Db::Var).collect(),
        _ => {
            let mut out: Vec<Db> = terms_of_size(size - 1, free + 1).into_iter().map(Db::abs).collect();
            for left in 1..size - 1 {
                let rights = terms_of_size(size - 1 - left, free);
                if rights.is_empty() {
                    continue;
                }
                for f in terms_of_size(left, free) {
                    out.extend(rights.iter().map(|a| Db::app(f.clone(), a.clone())));
                }
            }
            out
        }
    }
}

/// Every closed term with at most `max_size` nodes, smallest first.
pub fn closed_terms(max_size: usize) -> Vec<Db> {
    (1..=max_size).flat_map(|n| terms_of_size(n, 0)).collect()
}

/// Closed classics used alongside the enumeration.
pub const NAMED: [(&str, &str); 11] = [
    ("I", r"\x. x"),
    ("K", r"\x y. x"),
    ("S", r"\x y z. x z (y z)"),
    ("Omega", r"(\x. x x) (\x. x x)"),
    ("true", r"\t f. t"),
    ("false", r"\t f. f"),
    ("eq", r"\a b. a b (b (\t f. f) (\t f. t))"),
    ("church0", r"\f x. x"),
    ("church1", r"\f x. f x"),
    ("church2", r"\f x. f (f x)"),
    ("church3", r"\f x. f (f (f x))"),
];

pub fn named(name: &str) -> Option<Term> {
    NAMED.iter().find(|(n, _)| *n == name).map(|(_, src)| parse_lambda(src).expect("classic parses"))
}

pub fn named_terms() -> Vec<(&'static str, Term)> {
    NAMED.iter().map(|(n, src)| (*n, parse_lambda(src).expect("classic parses"))).collect()
}

/// Deterministic generator for sampled sweeps.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random term of roughly `budget` nodes with free indices below `free`.
pub fn random_term(rng: &mut impl Rng, budget: usize, free: usize) -> Db {
    if budget <= 1 || (free > 0 && rng.gen_bool(0.2)) {
        if free == 0 {
            return Db::abs(Db::Var(0));
        }
        return Db::Var(rng.gen_range(0..free));
    }
    if rng.gen_bool(0.4) {
        Db::abs(random_term(rng, budget - 1, free + 1))
    } else {
        let left = rng.gen_range(1..budget.max(2));
        let right = budget.saturating_sub(left + 1).max(1);
        Db::app(random_term(rng, left, free), random_term(rng, right, free))
    }
}

/// `count` distinct picks from `pool`, or all of it when smaller.
pub fn sample<T: Clone>(rng: &mut impl Rng, pool: &[T], count: usize) -> Vec<T> {
    pool.choose_multiple(rng, count.min(pool.len())).cloned().collect()
}
