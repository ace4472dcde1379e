//! The `B`-valued moment–cumulant formula for a pair `(a, a*)` over `B = ℂ^d`.

mod checks;

pub use checks::{
    check_auto_condition, check_balanced, check_haar, check_r_diagonal_moments,
    check_theta_moment_identity, check_trace_property, check_traciality, coefficient_set,
    even_part_moments, normalizing_sides, permute_inverse, traciality_defects, CheckReport,
    Witness, WitnessKind, MAX_CHECK_LEN,
};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::algebra::{DiagElement, LinearMapD, MultilinearMapD, Scalar};
use crate::error::{Error, Result};
use crate::partitions::{all_words, enumerate_noncrossing_where, restrict_word, Letter, NCPartition, NC_GUARD};

/// Largest order `cumulants_from_moments` will compute.
pub const CUMULANT_ORDER_GUARD: usize = 8;

/// The cumulant maps `α_j` of `(a, a*)`; absent words are the zero map.
#[derive(Clone, PartialEq)]
pub struct CumulantFamily<S> {
    d: usize,
    maps: BTreeMap<Vec<Letter>, MultilinearMapD<S>>,
}

impl<S: Scalar> core::fmt::Debug for CumulantFamily<S> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let mut m = f.debug_map();
        for (w, map) in &self.maps {
            m.entry(&crate::partitions::word_index_string(w), map);
        }
        m.finish()
    }
}

impl<S: Scalar> CumulantFamily<S> {
    pub fn new(d: usize) -> Self {
        CumulantFamily {
            d,
            maps: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    /// Store `α_word`; a zero map is dropped so the family stays sparse.
    pub fn insert(&mut self, word: Vec<Letter>, map: MultilinearMapD<S>) -> Result<()> {
        if word.is_empty() || map.order() + 1 != word.len() {
            return Err(Error::ArityMismatch {
                expected: word.len().saturating_sub(1),
                found: map.order(),
            });
        }
        if map.dim() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: map.dim(),
            });
        }
        if map.is_zero() {
            self.maps.remove(&word);
        } else {
            self.maps.insert(word, map);
        }
        Ok(())
    }

    pub fn get(&self, word: &[Letter]) -> Option<&MultilinearMapD<S>> {
        self.maps.get(word)
    }

    pub fn maps(&self) -> impl Iterator<Item = (&Vec<Letter>, &MultilinearMapD<S>)> {
        self.maps.iter()
    }

    pub fn max_order(&self) -> usize {
        self.maps.keys().map(|w| w.len()).max().unwrap_or(0)
    }

    /// Whether only `α₁₂` and `α₂₁` are present.
    pub fn is_circular(&self) -> bool {
        self.maps
            .keys()
            .all(|w| w.as_slice() == [Letter::A, Letter::Star] || w.as_slice() == [Letter::Star, Letter::A])
    }

    pub fn linear(&self, word: &[Letter]) -> LinearMapD<S> {
        self.get(word)
            .and_then(|m| m.as_linear())
            .unwrap_or_else(|| LinearMapD::zero(self.d))
    }

    /// Same family restricted to words of length at most `n`.
    pub fn truncated(&self, n: usize) -> Self {
        CumulantFamily {
            d: self.d,
            maps: self
                .maps
                .iter()
                .filter(|(w, _)| w.len() <= n)
                .map(|(w, m)| (w.clone(), m.clone()))
                .collect(),
        }
    }
}

/// The circular family with the given `α₁₂` and `α₂₁`.
pub fn circular_family<S: Scalar>(a12: &LinearMapD<S>, a21: &LinearMapD<S>) -> Result<CumulantFamily<S>> {
    if a12.dim() != a21.dim() {
        return Err(Error::DimensionMismatch {
            expected: a12.dim(),
            found: a21.dim(),
        });
    }
    a12.check_nonnegative()?;
    a21.check_nonnegative()?;
    let mut fam = CumulantFamily::new(a12.dim());
    fam.insert(alloc::vec![Letter::A, Letter::Star], MultilinearMapD::from_linear(a12))?;
    fam.insert(alloc::vec![Letter::Star, Letter::A], MultilinearMapD::from_linear(a21))?;
    Ok(fam)
}

/// Something that can evaluate `B`-valued `*`-moments of a fixed element `a`.
pub trait ElementModel<S: Scalar> {
    fn dim(&self) -> usize;

    /// `E(a^{w₁} b₁ a^{w₂} ⋯ b_{n−1} a^{w_n})` for interior coefficients `b₁ … b_{n−1}`.
    fn moment(&self, word: &[Letter], interior: &[DiagElement<S>]) -> Result<DiagElement<S>>;

    /// `E(b₀ a^{w₁} b₁ ⋯ a^{w_n} b_n)`; the outer coefficients factor out because `B` is diagonal.
    fn moment_outer(
        &self,
        b0: &DiagElement<S>,
        word: &[Letter],
        interior: &[DiagElement<S>],
        bn: &DiagElement<S>,
    ) -> Result<DiagElement<S>> {
        let m = self.moment(word, interior)?;
        b0.try_mul(&m)?.try_mul(bn)
    }
}

impl<S: Scalar> ElementModel<S> for CumulantFamily<S> {
    fn dim(&self) -> usize {
        self.d
    }

    fn moment(&self, word: &[Letter], interior: &[DiagElement<S>]) -> Result<DiagElement<S>> {
        moment_from_cumulants(self, word, interior)
    }
}

fn check_args<S: Scalar>(d: usize, n: usize, bargs: &[DiagElement<S>]) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParams("empty word".into()));
    }
    if bargs.len() + 1 != n {
        return Err(Error::ArityMismatch {
            expected: n - 1,
            found: bargs.len(),
        });
    }
    if let Some(bad) = bargs.iter().find(|b| b.dim() != d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: bad.dim(),
        });
    }
    Ok(())
}

/// `α̂_π[b₁, …, b_{n−1}]` for the word `j`.
pub fn hat_alpha<S: Scalar>(
    pi: &NCPartition,
    j: &[Letter],
    bargs: &[DiagElement<S>],
    fam: &CumulantFamily<S>,
) -> Result<DiagElement<S>> {
    if pi.n() != j.len() {
        return Err(Error::DimensionMismatch {
            expected: pi.n(),
            found: j.len(),
        });
    }
    check_args(fam.dim(), j.len(), bargs)?;
    Ok(hat(pi, j, bargs, fam).unwrap_or_else(|| DiagElement::zero(fam.dim())))
}

/// `None` stands for the zero element (some block hits an absent map).
fn hat<S: Scalar>(
    pi: &NCPartition,
    j: &[Letter],
    bargs: &[DiagElement<S>],
    fam: &CumulantFamily<S>,
) -> Option<DiagElement<S>> {
    let n = j.len();
    if pi.is_full() {
        return Some(fam.get(j)?.apply(bargs).expect("arity checked"));
    }
    let block = pi.leftmost_interval_block();
    let (p, q) = (block[0], block.len());
    let end = p + q - 1;
    let inner = fam
        .get(&j[p - 1..end])?
        .apply(&bargs[p - 1..end - 1])
        .expect("arity checked");
    let rest = pi.remove_interval(block);
    let mut j2: Vec<Letter> = Vec::with_capacity(n - q);
    j2.extend_from_slice(&j[..p - 1]);
    j2.extend_from_slice(&j[end..]);
    if p >= 2 && end < n {
        // b_{p−1} · α(inner) · b_{p+q−1} merges into one coefficient.
        let merged = &(&bargs[p - 2] * &inner) * &bargs[end - 1];
        let mut b2: Vec<DiagElement<S>> = Vec::with_capacity(n - q - 1);
        b2.extend_from_slice(&bargs[..p - 2]);
        b2.push(merged);
        b2.extend_from_slice(&bargs[end..]);
        hat(&rest, &j2, &b2, fam)
    } else if p >= 2 {
        let left = hat(&rest, &j2, &bargs[..p - 2], fam)?;
        Some(&(&left * &bargs[p - 2]) * &inner)
    } else {
        let right = hat(&rest, &j2, &bargs[q..], fam)?;
        Some(&(&inner * &bargs[q - 1]) * &right)
    }
}

/// Partitions of `NC(|j|)` whose every block carries a nonzero cumulant map.
fn contributing_partitions<S: Scalar>(fam: &CumulantFamily<S>, j: &[Letter]) -> Result<Vec<NCPartition>> {
    enumerate_noncrossing_where(j.len(), |block| {
        let w = restrict_word(j, block).expect("block within word");
        fam.get(&w).is_some()
    })
}

/// `E(a^{j₁} b₁ ⋯ b_{n−1} a^{j_n}) = Σ_{π ∈ NC(n)} α̂_π[b₁, …, b_{n−1}]`.
pub fn moment_from_cumulants<S: Scalar>(
    fam: &CumulantFamily<S>,
    j: &[Letter],
    bargs: &[DiagElement<S>],
) -> Result<DiagElement<S>> {
    check_args(fam.dim(), j.len(), bargs)?;
    if j.len() > NC_GUARD {
        return Err(Error::GuardExceeded {
            guard: "nc_enumeration",
            limit: NC_GUARD,
            value: j.len(),
        });
    }
    let mut total = DiagElement::zero(fam.dim());
    for pi in contributing_partitions(fam, j)? {
        if let Some(v) = hat(&pi, j, bargs, fam) {
            total = &total + &v;
        }
    }
    Ok(total)
}

/// Tuples of basis vectors, as index lists in lexicographic order.
pub(crate) fn basis_tuples(d: usize, k: usize) -> Vec<Vec<usize>> {
    let count = d.pow(k as u32);
    (0..count)
        .map(|mut flat| {
            let mut idx = alloc::vec![0; k];
            for slot in idx.iter_mut().rev() {
                *slot = flat % d;
                flat /= d;
            }
            idx
        })
        .collect()
}

/// Recover the cumulant maps of a model up to `max_order` by inverting the
/// moment–cumulant formula order by order.
pub fn cumulants_from_moments<S: Scalar, M: ElementModel<S> + ?Sized>(
    model: &M,
    max_order: usize,
) -> Result<CumulantFamily<S>> {
    if max_order > CUMULANT_ORDER_GUARD {
        return Err(Error::GuardExceeded {
            guard: "cumulant_order",
            limit: CUMULANT_ORDER_GUARD,
            value: max_order,
        });
    }
    let d = model.dim();
    let mut fam = CumulantFamily::new(d);
    for n in 1..=max_order {
        let mut found: Vec<(Vec<Letter>, MultilinearMapD<S>)> = Vec::new();
        for j in all_words(n) {
            let lower = contributing_partitions(&fam, &j)?;
            let mut map = MultilinearMapD::zero(d, n - 1);
            for idx in basis_tuples(d, n - 1) {
                let args: Vec<DiagElement<S>> =
                    idx.iter().map(|&i| DiagElement::basis(d, i)).collect();
                let mut value = model.moment(&j, &args)?;
                for pi in lower.iter().filter(|p| !p.is_full()) {
                    if let Some(v) = hat(pi, &j, &args, &fam) {
                        value = &value - &v;
                    }
                }
                for (out, x) in value.into_entries().into_iter().enumerate() {
                    map.set(out, &idx, x);
                }
            }
            found.push((j, map));
        }
        for (j, map) in found {
            fam.insert(j, map)?;
        }
    }
    Ok(fam)
}
