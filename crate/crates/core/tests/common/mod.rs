#![allow(dead_code)]

use bipolar_core::algebra::{rat, Rational};
use bipolar_core::cumulants::{CumulantFamily, ElementModel};
use bipolar_core::partitions::Letter;
use bipolar_core::recursions::CircularParams;
use bipolar_core::DiagElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `q` with denominator at most 12, `r` entries in `{0, 1/6, …, 3}`.
pub fn random_params(rng: &mut ChaCha8Rng) -> CircularParams<Rational> {
    let den: i64 = rng.random_range(2..=12);
    let q = rat(rng.random_range(1..den), den);
    let mut r: [[Rational; 2]; 2] = Default::default();
    for x in r.iter_mut().flatten() {
        *x = rat(rng.random_range(0..=18), 6);
    }
    CircularParams::new(q, r).unwrap()
}

pub fn seeded_params(count: usize, seed: u64) -> Vec<CircularParams<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_params(&mut rng)).collect()
}

pub fn alt(first: Letter, n: usize) -> Vec<Letter> {
    (0..n).flat_map(|_| [first, first.dual()]).collect()
}

/// `E(w)` with `b` inserted before letter `pos` (interior), every other coefficient the unit.
pub fn moment_with(fam: &CumulantFamily<Rational>, word: &[Letter], pos: usize, b: &DiagElement<Rational>) -> DiagElement<Rational> {
    let mut interior = vec![DiagElement::unit(fam.dim()); word.len() - 1];
    interior[pos - 1] = b.clone();
    fam.moment(word, &interior).unwrap()
}

/// `E(w)` with unit coefficients.
pub fn plain_moment(fam: &CumulantFamily<Rational>, word: &[Letter]) -> DiagElement<Rational> {
    fam.moment(word, &vec![DiagElement::unit(fam.dim()); word.len() - 1]).unwrap()
}

/// Like `moment_with`, but `pos` may sit at either end of the word.
pub fn moment_at(fam: &CumulantFamily<Rational>, word: &[Letter], pos: usize, b: &DiagElement<Rational>) -> DiagElement<Rational> {
    if pos == 0 {
        b * &plain_moment(fam, word)
    } else if pos == word.len() {
        &plain_moment(fam, word) * b
    } else {
        moment_with(fam, word, pos, b)
    }
}
