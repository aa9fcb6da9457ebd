//! Random formulas and lassos for cross-checking translations.

use rand::Rng;

use super::{Formula, LassoWord};
use crate::alphabet::Letter;

/// A random formula with at most `size` nodes over `atoms` (nonempty).
/// Leaves are atoms four times out of five, constants otherwise.
pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, size: usize, atoms: &[String]) -> Formula {
    if size <= 1 {
        return match rng.gen_range(0..10) {
            0 => Formula::True,
            1 => Formula::False,
            _ => Formula::atom(&atoms[rng.gen_range(0..atoms.len())]),
        };
    }
    let binary = size >= 3 && rng.gen_bool(0.5);
    if binary {
        let left = rng.gen_range(1..size - 1);
        let a = random_formula(rng, left, atoms);
        let b = random_formula(rng, size - 1 - left, atoms);
        match rng.gen_range(0..4) {
            0 => Formula::and(a, b),
            1 => Formula::or(a, b),
            2 => Formula::until(a, b),
            _ => Formula::release(a, b),
        }
    } else {
        let a = random_formula(rng, size - 1, atoms);
        match rng.gen_range(0..4) {
            0 => Formula::not(a),
            1 => Formula::next(a),
            2 => Formula::eventually(a),
            _ => Formula::always(a),
        }
    }
}

/// A random lasso over `num_ap` propositions with prefix length in
/// `0..=max_prefix` and cycle length in `1..=max_cycle`.
pub fn random_lasso<R: Rng + ?Sized>(
    rng: &mut R,
    num_ap: usize,
    max_prefix: usize,
    max_cycle: usize,
) -> LassoWord {
    let letters = 1u32 << num_ap;
    let p = rng.gen_range(0..=max_prefix);
    let prefix: Vec<Letter> = (0..p).map(|_| Letter(rng.gen_range(0..letters))).collect();
    let c = rng.gen_range(1..=max_cycle.max(1));
    let cycle: Vec<Letter> = (0..c).map(|_| Letter(rng.gen_range(0..letters))).collect();
    LassoWord::new(prefix, cycle)
}
