//! Bounded checks of the defining properties: Haar, balanced, R-diagonal,
//! traciality, and the automorphism conditions.
//!
//! Word-level checks draw coefficients from the basis vectors plus the unit.
//! Every tested expression is multilinear in its coefficients, so the basis
//! alone would already suffice.

use alloc::vec;
use alloc::vec::Vec;

use super::{basis_tuples, ElementModel};
use crate::algebra::{DiagElement, LinearMapD, Scalar, TraceWeights};
use crate::error::{Error, Result};
use crate::partitions::{all_words, max_alt_interval_partition, Letter};

/// Longest word the bounded checks will enumerate.
pub const MAX_CHECK_LEN: usize = 6;

/// How many witnesses a report keeps.
const WITNESS_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    /// A moment with unequal numbers of `a` and `a*`.
    Unbalanced,
    /// An odd alternating moment `E(a b₁ a* ⋯ a)`.
    OddAlternating,
    /// The centered product over the blocks of `σ(ε)`.
    CenteredProduct,
    /// `τ(E(xy)) ≠ τ(E(yx))` for a rotation of the word.
    TraceRotation,
}

/// A nonzero value where a check expected zero.
///
/// `coeffs` holds the coefficient after each letter except for centered-product
/// and trace witnesses, where it holds one coefficient per letter (the last one
/// trailing the word).
#[derive(Clone, PartialEq)]
pub struct Witness<S> {
    pub kind: WitnessKind,
    pub word: Vec<Letter>,
    pub coeffs: Vec<DiagElement<S>>,
    pub value: DiagElement<S>,
}

impl<S: Scalar> core::fmt::Debug for Witness<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Witness")
            .field("kind", &self.kind)
            .field("word", &crate::partitions::word_eps_string(&self.word))
            .field("coeffs", &self.coeffs)
            .field("value", &self.value)
            .finish()
    }
}

#[derive(Clone, PartialEq)]
pub struct CheckReport<S> {
    pub checked: usize,
    pub violations: usize,
    /// The first violations found, in enumeration order.
    pub witnesses: Vec<Witness<S>>,
}

impl<S: Scalar> core::fmt::Debug for CheckReport<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("CheckReport")
            .field("checked", &self.checked)
            .field("violations", &self.violations)
            .field("witnesses", &self.witnesses)
            .finish()
    }
}

impl<S: Scalar> CheckReport<S> {
    fn new() -> Self {
        CheckReport {
            checked: 0,
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn first_witness(&self) -> Option<&Witness<S>> {
        self.witnesses.first()
    }

    fn record(&mut self, kind: WitnessKind, word: &[Letter], coeffs: &[DiagElement<S>], value: DiagElement<S>) {
        self.checked += 1;
        if value.is_zero() {
            return;
        }
        self.violations += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(Witness {
                kind,
                word: word.to_vec(),
                coeffs: coeffs.to_vec(),
                value,
            });
        }
    }
}

fn check_len(max_len: usize) -> Result<()> {
    if max_len > MAX_CHECK_LEN {
        Err(Error::GuardExceeded {
            guard: "max_len",
            limit: MAX_CHECK_LEN,
            value: max_len,
        })
    } else {
        Ok(())
    }
}

/// The basis vectors `e₁ … e_d` followed by the unit.
pub fn coefficient_set<S: Scalar>(d: usize) -> Vec<DiagElement<S>> {
    let mut set: Vec<DiagElement<S>> = (0..d).map(|i| DiagElement::basis(d, i)).collect();
    set.push(DiagElement::unit(d));
    set
}

fn coefficient_tuples<S: Scalar>(d: usize, k: usize) -> Vec<Vec<DiagElement<S>>> {
    let set = coefficient_set::<S>(d);
    basis_tuples(set.len(), k)
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| set[i].clone()).collect())
        .collect()
}

fn power_word(l: Letter, k: usize) -> Vec<Letter> {
    vec![l; k]
}

/// `E(u^k) = 0` and `E((u*)^k) = 0` for `1 ≤ k ≤ max_power`.
pub fn check_haar<S: Scalar, M: ElementModel<S> + ?Sized>(model: &M, max_power: usize) -> Result<bool> {
    let d = model.dim();
    for k in 1..=max_power {
        let ones = vec![DiagElement::unit(d); k - 1];
        for l in [Letter::A, Letter::Star] {
            if !model.moment(&power_word(l, k), &ones)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All moments with unequal letter counts vanish, up to `max_len`.
pub fn check_balanced<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    max_len: usize,
) -> Result<CheckReport<S>> {
    check_len(max_len)?;
    let d = model.dim();
    let mut report = CheckReport::new();
    for n in 1..=max_len {
        let tuples = coefficient_tuples::<S>(d, n - 1);
        for word in all_words(n) {
            let stars = word.iter().filter(|&&l| l == Letter::Star).count();
            if 2 * stars == n {
                continue;
            }
            for coeffs in &tuples {
                let value = model.moment(&word, coeffs)?;
                report.record(WitnessKind::Unbalanced, &word, coeffs, value);
            }
        }
    }
    Ok(report)
}

fn alternating(start: Letter, n: usize) -> Vec<Letter> {
    (0..n)
        .map(|i| if i % 2 == 0 { start } else { start.dual() })
        .collect()
}

/// `E(Π_{V ∈ σ(ε)} (X_V − E(X_V)))` where `X_V = Π_{j ∈ V} a^{ε(j)} b_j`.
///
/// `coeffs` has one entry per letter.
fn centered_product<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    eps: &[Letter],
    coeffs: &[DiagElement<S>],
) -> Result<DiagElement<S>> {
    let d = model.dim();
    let blocks = max_alt_interval_partition(eps);
    let mut block_means = Vec::with_capacity(blocks.len());
    for b in &blocks {
        let (lo, hi) = (b[0] - 1, *b.last().unwrap());
        let m = model.moment(&eps[lo..hi], &coeffs[lo..hi - 1])?;
        block_means.push(&m * &coeffs[hi - 1]);
    }
    let mut total = DiagElement::zero(d);
    for mask in 0u32..1 << blocks.len() {
        // Blocks in the mask are replaced by their expectations.
        let mut lead = DiagElement::unit(d);
        let mut letters: Vec<Letter> = Vec::new();
        let mut interior: Vec<DiagElement<S>> = Vec::new();
        let mut trailing = DiagElement::unit(d);
        for (k, b) in blocks.iter().enumerate() {
            if mask >> k & 1 == 1 {
                if letters.is_empty() {
                    lead = &lead * &block_means[k];
                } else {
                    trailing = &trailing * &block_means[k];
                }
                continue;
            }
            for &j in b {
                if !letters.is_empty() {
                    interior.push(trailing);
                    trailing = DiagElement::unit(d);
                }
                letters.push(eps[j - 1]);
                trailing = &trailing * &coeffs[j - 1];
            }
        }
        let value = if letters.is_empty() {
            &lead * &trailing
        } else {
            model.moment_outer(&lead, &letters, &interior, &trailing)?
        };
        total = if mask.count_ones() % 2 == 0 {
            &total + &value
        } else {
            &total - &value
        };
    }
    Ok(total)
}

/// The R-diagonal moment conditions up to `max_len`: odd alternating moments
/// vanish, and so does every centered product over `σ(ε)`.
///
/// The last coefficient of a centered product is fixed to the unit: the
/// expression is right `B`-linear in it.
pub fn check_r_diagonal_moments<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    max_len: usize,
) -> Result<CheckReport<S>> {
    check_len(max_len)?;
    let d = model.dim();
    let mut report = CheckReport::new();
    for n in (1..=max_len).step_by(2) {
        let tuples = coefficient_tuples::<S>(d, n - 1);
        for start in [Letter::A, Letter::Star] {
            let word = alternating(start, n);
            for coeffs in &tuples {
                let value = model.moment(&word, coeffs)?;
                report.record(WitnessKind::OddAlternating, &word, coeffs, value);
            }
        }
    }
    for n in 1..=max_len {
        let tuples = coefficient_tuples::<S>(d, n - 1);
        for eps in all_words(n) {
            for head in &tuples {
                let mut coeffs = head.clone();
                coeffs.push(DiagElement::unit(d));
                let value = centered_product(model, &eps, &coeffs)?;
                report.record(WitnessKind::CenteredProduct, &eps, &coeffs, value);
            }
        }
    }
    Ok(report)
}

/// `τ(E(xy)) = τ(E(yx))` for every rotation of words up to `max_len`, with a
/// basis coefficient after each letter.
pub fn check_trace_property<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    w: &TraceWeights<S>,
    max_len: usize,
) -> Result<CheckReport<S>> {
    check_len(max_len)?;
    let d = model.dim();
    let mut report = CheckReport::new();
    let eval = |word: &[Letter], coeffs: &[DiagElement<S>]| -> Result<S> {
        let n = word.len();
        let m = model.moment(word, &coeffs[..n - 1])?;
        w.trace(&(&m * &coeffs[n - 1]))
    };
    for n in 2..=max_len {
        for word in all_words(n) {
            for idx in basis_tuples(d, n) {
                let coeffs: Vec<DiagElement<S>> =
                    idx.iter().map(|&i| DiagElement::basis(d, i)).collect();
                let base = eval(&word, &coeffs)?;
                for k in 1..n {
                    let mut rw = word.clone();
                    rw.rotate_left(k);
                    let mut rc = coeffs.clone();
                    rc.rotate_left(k);
                    let diff = eval(&rw, &rc)? - base.clone();
                    let value = DiagElement::splat(d, diff);
                    report.record(WitnessKind::TraceRotation, &word, &coeffs, value);
                }
            }
        }
    }
    Ok(report)
}

/// `τ(α₁₂(eᵢ)eⱼ) − τ(eᵢα₂₁(eⱼ))` for all basis pairs, row-major in `(i, j)`.
pub fn traciality_defects<S: Scalar>(
    w: &TraceWeights<S>,
    a12: &LinearMapD<S>,
    a21: &LinearMapD<S>,
) -> Result<Vec<S>> {
    let d = w.dim();
    if a12.dim() != d || a21.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: a12.dim().max(a21.dim()),
        });
    }
    let mut out = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            let ei = DiagElement::basis(d, i);
            let ej = DiagElement::basis(d, j);
            let lhs = w.trace(&(&a12.apply(&ei)? * &ej))?;
            let rhs = w.trace(&(&ei * &a21.apply(&ej)?))?;
            out.push(lhs - rhs);
        }
    }
    Ok(out)
}

/// `τ(α₁₂(b₁)b₂) = τ(b₁α₂₁(b₂))` for all `b₁, b₂`; bilinearity reduces this to basis pairs.
pub fn check_traciality<S: Scalar>(w: &TraceWeights<S>, a12: &LinearMapD<S>, a21: &LinearMapD<S>) -> bool {
    traciality_defects(w, a12, a21)
        .map(|v| v.iter().all(|x| x.is_zero()))
        .unwrap_or(false)
}

fn perm_matrix<S: Scalar>(perm: &[usize]) -> LinearMapD<S> {
    LinearMapD::permutation(perm)
}

/// `θ⁻¹(b)` for `θ(b)ᵢ = b[perm[i]]`.
pub fn permute_inverse<S: Scalar>(b: &DiagElement<S>, perm: &[usize]) -> DiagElement<S> {
    let mut inv = vec![0; perm.len()];
    for (i, &p) in perm.iter().enumerate() {
        inv[p] = i;
    }
    b.permute(&inv)
}

fn valid_perm(perm: &[usize], d: usize) -> bool {
    let mut seen = vec![false; d];
    perm.len() == d && perm.iter().all(|&p| p < d && !core::mem::replace(&mut seen[p], true))
}

/// `α₂₁ = θ ∘ α₁₂ ∘ θ` where `θ` permutes coordinates.
///
/// For a permutation that is not an involution the right-hand `θ` is read as
/// `θ⁻¹`; both readings agree for `d = 2`.
pub fn check_auto_condition<S: Scalar>(a12: &LinearMapD<S>, a21: &LinearMapD<S>, perm: &[usize]) -> bool {
    let d = a12.dim();
    if !valid_perm(perm, d) || a21.dim() != d {
        return false;
    }
    let theta: LinearMapD<S> = perm_matrix(perm);
    let theta_inv = theta.inverse().expect("permutations are invertible");
    let conj = theta
        .compose(a12)
        .and_then(|m| m.compose(&theta_inv))
        .expect("dimensions agree");
    conj == *a21
}

/// `E(a* θ⁻¹(b₁) a b₂ a* θ⁻¹(b₃) a ⋯ a* θ⁻¹(b_{2n−1}) a)`.
pub fn even_part_moments<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    perm: &[usize],
    bargs: &[DiagElement<S>],
) -> Result<DiagElement<S>> {
    if bargs.len().is_multiple_of(2) {
        return Err(Error::ArityMismatch {
            expected: bargs.len() + 1,
            found: bargs.len(),
        });
    }
    let n = bargs.len().div_ceil(2);
    check_len(2 * n)?;
    if !valid_perm(perm, model.dim()) {
        return Err(Error::InvalidParams("theta must permute the coordinates".into()));
    }
    let word: Vec<Letter> = (0..n).flat_map(|_| [Letter::Star, Letter::A]).collect();
    let coeffs: Vec<DiagElement<S>> = bargs
        .iter()
        .enumerate()
        .map(|(i, b)| if i % 2 == 0 { permute_inverse(b, perm) } else { b.clone() })
        .collect();
    model.moment(&word, &coeffs)
}

/// `E((aa*)^k) = θ⁻¹(E((a*a)^k))` for `1 ≤ k ≤ max_k`.
pub fn check_theta_moment_identity<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    perm: &[usize],
    max_k: usize,
) -> Result<bool> {
    check_len(2 * max_k)?;
    let d = model.dim();
    if !valid_perm(perm, d) {
        return Err(Error::InvalidParams("theta must permute the coordinates".into()));
    }
    for k in 1..=max_k {
        let ones = vec![DiagElement::unit(d); 2 * k - 1];
        let left: Vec<Letter> = (0..k).flat_map(|_| [Letter::A, Letter::Star]).collect();
        let right: Vec<Letter> = (0..k).flat_map(|_| [Letter::Star, Letter::A]).collect();
        let lhs = model.moment(&left, &ones)?;
        let rhs = permute_inverse(&model.moment(&right, &ones)?, perm);
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Both sides of `E(aa* b aa*) = θ⁻¹(E(a*a θ(b) a*a))`.
pub fn normalizing_sides<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    b: &DiagElement<S>,
    perm: &[usize],
) -> Result<(DiagElement<S>, DiagElement<S>)> {
    let d = model.dim();
    if !valid_perm(perm, d) {
        return Err(Error::InvalidParams("theta must permute the coordinates".into()));
    }
    let one = DiagElement::unit(d);
    let lhs = model.moment(
        &[Letter::A, Letter::Star, Letter::A, Letter::Star],
        &[one.clone(), b.clone(), one.clone()],
    )?;
    let inner = model.moment(
        &[Letter::Star, Letter::A, Letter::Star, Letter::A],
        &[one.clone(), b.permute(perm), one],
    )?;
    Ok((lhs, permute_inverse(&inner, perm)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{int, rat, Rational};
    use crate::cumulants::{circular_family, CumulantFamily};

    type L = LinearMapD<Rational>;
    type D = DiagElement<Rational>;

    fn mat(a: Rational, b: Rational, c: Rational, d: Rational) -> L {
        LinearMapD::new(vec![vec![a, b], vec![c, d]]).unwrap()
    }

    fn example_maps() -> (L, L) {
        (
            mat(rat(1, 2), int(0), rat(1, 2), int(1)),
            mat(rat(1, 2), rat(1, 2), int(0), int(1)),
        )
    }

    const ID: [usize; 2] = [0, 1];
    const FLIP: [usize; 2] = [1, 0];

    #[test]
    fn traciality_examples() {
        let half = TraceWeights::two_point(rat(1, 2)).unwrap();
        let ones = mat(int(1), int(1), int(1), int(1));
        assert!(check_traciality(&half, &ones, &ones));
        let (a12, a21) = example_maps();
        assert!(check_traciality(&half, &a12, &a21));
        let third = TraceWeights::two_point(rat(1, 3)).unwrap();
        // s₂₁ = q·r₁₂/(1−q) would be 1/2 here, not 1.
        let r = mat(int(1), int(1), int(1), int(1));
        assert!(!check_traciality(&third, &r, &r));
    }

    #[test]
    fn auto_condition_examples() {
        let q = rat(1, 3);
        let rows = mat(q.clone(), int(1) - q.clone(), q.clone(), int(1) - q);
        assert!(check_auto_condition(&rows, &rows, &ID));
        let (a12, a21) = example_maps();
        assert!(!check_auto_condition(&a12, &a21, &ID));
        assert!(!check_auto_condition(&a12, &a21, &FLIP));
        let theta = L::permutation(&FLIP);
        let conj = theta.compose(&a12).unwrap().compose(&theta).unwrap();
        assert!(check_auto_condition(&a12, &conj, &FLIP));
    }

    #[test]
    fn circular_family_is_r_diagonal_and_balanced() {
        let (a12, a21) = example_maps();
        let fam = circular_family(&a12, &a21).unwrap();
        assert!(check_r_diagonal_moments(&fam, 4).unwrap().passed());
        assert!(check_balanced(&fam, 4).unwrap().passed());
        assert!(check_r_diagonal_moments(&fam, 7).is_err());
    }

    #[test]
    fn constant_unitary_is_not_haar() {
        let mut fam = CumulantFamily::<Rational>::new(2);
        fam.insert(vec![Letter::A], crate::algebra::MultilinearMapD::constant(&D::unit(2)))
            .unwrap();
        fam.insert(vec![Letter::Star], crate::algebra::MultilinearMapD::constant(&D::unit(2)))
            .unwrap();
        assert!(!check_haar(&fam, 1).unwrap());
    }

    #[test]
    fn theta_identity_examples() {
        let (a12, a21) = example_maps();
        let fam = circular_family(&a12, &a21).unwrap();
        assert!(!check_theta_moment_identity(&fam, &ID, 2).unwrap());
        let sym = circular_family(&a12, &a12).unwrap();
        assert!(check_theta_moment_identity(&sym, &ID, 3).unwrap());
        let theta = L::permutation(&FLIP);
        let conj = theta.compose(&a12).unwrap().compose(&theta).unwrap();
        let flipped = circular_family(&a12, &conj).unwrap();
        assert!(check_theta_moment_identity(&flipped, &FLIP, 3).unwrap());
    }

    #[test]
    fn even_part_unfolds_definition() {
        let (a12, a21) = example_maps();
        let fam = circular_family(&a12, &a21).unwrap();
        let one = D::unit(2);
        let g2_1 = fam.moment(&[Letter::Star, Letter::A], &[one.clone()]).unwrap();
        assert_eq!(even_part_moments(&fam, &ID, &[one.clone()]).unwrap(), g2_1);
        let e1 = D::basis(2, 0);
        let e2 = D::basis(2, 1);
        assert_eq!(
            even_part_moments(&fam, &FLIP, &[e1]).unwrap(),
            fam.moment(&[Letter::Star, Letter::A], &[e2]).unwrap()
        );
        assert!(even_part_moments(&fam, &ID, &[one.clone(), one]).is_err());
    }

    #[test]
    fn normalizing_equation_fails_for_example() {
        let (a12, a21) = example_maps();
        let fam = circular_family(&a12, &a21).unwrap();
        let b = D::basis(2, 0);
        for perm in [ID, FLIP] {
            let (lhs, rhs) = normalizing_sides(&fam, &b, &perm).unwrap();
            assert_eq!(lhs, D::new(vec![rat(1, 2), rat(1, 4)]));
            assert_ne!(lhs, rhs);
        }
    }
}
