//! 2×2 matrices over the group algebra of `ℤ^k` with the diagonal conditional
//! expectation, and the two Haar unitaries built from them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{DiagElement, Scalar};
use crate::cumulants::ElementModel;
use crate::error::{Error, Result};
use crate::partitions::Letter;

/// Longest word `word_expectation` will multiply out.
pub const GROUP_WORD_GUARD: usize = 8;

/// A finitely supported function `ℤ^k → S` with convolution product.
#[derive(Clone, PartialEq)]
pub struct GroupAlgebraElement<S> {
    k: usize,
    terms: BTreeMap<Vec<i64>, S>,
}

impl<S: Scalar> GroupAlgebraElement<S> {
    pub fn zero(k: usize) -> Self {
        GroupAlgebraElement {
            k,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(k: usize, c: S) -> Self {
        GroupAlgebraElement::from_terms(k, [(vec![0; k], c)]).expect("rank matches")
    }

    pub fn one(k: usize) -> Self {
        GroupAlgebraElement::constant(k, S::one())
    }

    /// The group element `g` with coefficient 1.
    pub fn group_element(g: Vec<i64>) -> Self {
        let k = g.len();
        GroupAlgebraElement::from_terms(k, [(g, S::one())]).expect("rank matches")
    }

    /// The `i`th generator of `ℤ^k`.
    pub fn generator(k: usize, i: usize) -> Self {
        let mut g = vec![0; k];
        g[i] = 1;
        GroupAlgebraElement::group_element(g)
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, S)>>(k: usize, terms: I) -> Result<Self> {
        let mut out = GroupAlgebraElement::zero(k);
        for (g, c) in terms {
            if g.len() != k {
                return Err(Error::DimensionMismatch {
                    expected: k,
                    found: g.len(),
                });
            }
            out.add_term(g, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: Vec<i64>, c: S) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&g) {
            Some(old) => old + c,
            None => c,
        };
        if !sum.is_zero() {
            self.terms.insert(g, sum);
        }
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &S)> {
        self.terms.iter()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The canonical trace: the coefficient at the identity.
    pub fn trace(&self) -> S {
        self.terms.get(&vec![0; self.k]).cloned().unwrap_or_else(S::zero)
    }

    /// Negate every group index; coefficients are real.
    pub fn adjoint(&self) -> Self {
        GroupAlgebraElement {
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|(g, c)| (g.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = GroupAlgebraElement::zero(self.k);
        for (g, x) in &self.terms {
            out.add_term(g.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "rank mismatch");
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.k, other.k, "rank mismatch");
        let mut out = GroupAlgebraElement::zero(self.k);
        for (g1, c1) in &self.terms {
            for (g2, c2) in &other.terms {
                let g: Vec<i64> = g1.iter().zip(g2).map(|(a, b)| a + b).collect();
                out.add_term(g, c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<S: Scalar> fmt::Debug for GroupAlgebraElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (g, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{c}·{g:?}")?;
        }
        Ok(())
    }
}

/// A 2×2 matrix over a group algebra.
#[derive(Clone, PartialEq)]
pub struct Mat2GA<S> {
    entries: [[GroupAlgebraElement<S>; 2]; 2],
}

impl<S: Scalar> fmt::Debug for Mat2GA<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl<S: Scalar> Mat2GA<S> {
    pub fn new(entries: [[GroupAlgebraElement<S>; 2]; 2]) -> Result<Self> {
        let k = entries[0][0].rank();
        if let Some(bad) = entries.iter().flatten().find(|e| e.rank() != k) {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: bad.rank(),
            });
        }
        Ok(Mat2GA { entries })
    }

    pub fn identity(k: usize) -> Self {
        Mat2GA::from_diag(k, &DiagElement::unit(2))
    }

    /// A diagonal matrix with constant entries, i.e. an element of `B`.
    pub fn from_diag(k: usize, b: &DiagElement<S>) -> Self {
        let z = GroupAlgebraElement::zero(k);
        Mat2GA {
            entries: [
                [GroupAlgebraElement::constant(k, b.get(0).clone()), z.clone()],
                [z, GroupAlgebraElement::constant(k, b.get(1).clone())],
            ],
        }
    }

    /// `m ⊗ x` for a scalar matrix `m`.
    pub fn tensor(m: [[S; 2]; 2], x: &GroupAlgebraElement<S>) -> Self {
        Mat2GA {
            entries: m.map(|row| row.map(|c| x.scale(&c))),
        }
    }

    pub fn rank(&self) -> usize {
        self.entries[0][0].rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GroupAlgebraElement<S> {
        &self.entries[i][j]
    }

    pub fn add(&self, other: &Self) -> Self {
        Mat2GA {
            entries: [0, 1].map(|i| [0, 1].map(|j| self.entries[i][j].add(&other.entries[i][j]))),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Mat2GA {
            entries: [0, 1].map(|i| [0, 1].map(|j| self.entries[i][j].sub(&other.entries[i][j]))),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Mat2GA {
            entries: [0, 1].map(|i| {
                [0, 1].map(|j| {
                    self.entries[i][0]
                        .mul(&other.entries[0][j])
                        .add(&self.entries[i][1].mul(&other.entries[1][j]))
                })
            }),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Mat2GA {
            entries: [0, 1].map(|i| [0, 1].map(|j| self.entries[j][i].adjoint())),
        }
    }

    /// Multiply by a diagonal constant on the right (scales column `j` by `b[j]`).
    pub fn mul_diag(&self, b: &DiagElement<S>) -> Self {
        Mat2GA {
            entries: [0, 1].map(|i| [0, 1].map(|j| self.entries[i][j].scale(b.get(j)))),
        }
    }

    /// `E` onto `B`: the traces of the diagonal entries.
    pub fn cond_expect(&self) -> DiagElement<S> {
        DiagElement::new(vec![self.entries[0][0].trace(), self.entries[1][1].trace()])
    }

    pub fn is_unitary(&self) -> bool {
        let id = Mat2GA::identity(self.rank());
        self.mul(&self.adjoint()) == id && self.adjoint().mul(self) == id
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleUnitary {
    /// `u = p ⊗ v + (1 − p) ⊗ v*` over `ℤ`.
    Circle,
    /// `u = p ⊗ v + (1 − p) ⊗ w` over `ℤ²`.
    Torus,
}

/// The example unitary with `p = ½·[[1,1],[1,1]]`.
pub fn build_example_unitary<S: Scalar>(which: ExampleUnitary) -> Mat2GA<S> {
    let half = S::from_frac(1, 2);
    let p = [[half.clone(), half.clone()], [half.clone(), half.clone()]];
    let q = [[half.clone(), -half.clone()], [-half.clone(), half]];
    match which {
        ExampleUnitary::Circle => {
            let v = GroupAlgebraElement::generator(1, 0);
            Mat2GA::tensor(p, &v).add(&Mat2GA::tensor(q, &v.adjoint()))
        }
        ExampleUnitary::Torus => {
            let v = GroupAlgebraElement::generator(2, 0);
            let w = GroupAlgebraElement::generator(2, 1);
            Mat2GA::tensor(p, &v).add(&Mat2GA::tensor(q, &w))
        }
    }
}

/// A unitary together with its adjoint, evaluated as an element model.
#[derive(Clone)]
pub struct GroupModel<S> {
    u: Mat2GA<S>,
    u_star: Mat2GA<S>,
}

impl<S: Scalar> GroupModel<S> {
    pub fn new(u: Mat2GA<S>) -> Self {
        let u_star = u.adjoint();
        GroupModel { u, u_star }
    }

    pub fn example(which: ExampleUnitary) -> Self {
        GroupModel::new(build_example_unitary(which))
    }

    pub fn unitary(&self) -> &Mat2GA<S> {
        &self.u
    }

    fn letter(&self, l: Letter) -> &Mat2GA<S> {
        match l {
            Letter::A => &self.u,
            Letter::Star => &self.u_star,
        }
    }

    /// The product `u^{ε₁} b₁ ⋯ b_{n−1} u^{ε_n}` as a matrix.
    pub fn word_product(&self, eps: &[Letter], coeffs: &[DiagElement<S>]) -> Result<Mat2GA<S>> {
        if eps.is_empty() {
            return Err(Error::InvalidParams("empty word".into()));
        }
        if eps.len() > GROUP_WORD_GUARD {
            return Err(Error::GuardExceeded {
                guard: "group_word_length",
                limit: GROUP_WORD_GUARD,
                value: eps.len(),
            });
        }
        if coeffs.len() + 1 != eps.len() {
            return Err(Error::ArityMismatch {
                expected: eps.len() - 1,
                found: coeffs.len(),
            });
        }
        if let Some(bad) = coeffs.iter().find(|b| b.dim() != 2) {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: bad.dim(),
            });
        }
        let mut acc = self.letter(eps[0]).clone();
        for (b, &l) in coeffs.iter().zip(&eps[1..]) {
            acc = acc.mul_diag(b).mul(self.letter(l));
        }
        Ok(acc)
    }
}

/// `E(u^{ε₁} b₁ ⋯ b_{n−1} u^{ε_n})`.
pub fn word_expectation<S: Scalar>(
    u: &Mat2GA<S>,
    eps: &[Letter],
    coeffs: &[DiagElement<S>],
) -> Result<DiagElement<S>> {
    Ok(GroupModel::new(u.clone()).word_product(eps, coeffs)?.cond_expect())
}

/// `E([u*b₁u − E(u*b₁u)] b₂ [ub₃u* − E(ub₃u*)])`.
pub fn centered_triple<S: Scalar>(
    u: &Mat2GA<S>,
    b1: &DiagElement<S>,
    b2: &DiagElement<S>,
    b3: &DiagElement<S>,
) -> DiagElement<S> {
    let k = u.rank();
    let x = u.adjoint().mul(&Mat2GA::from_diag(k, b1)).mul(u);
    let x = x.sub(&Mat2GA::from_diag(k, &x.cond_expect()));
    let y = u.mul(&Mat2GA::from_diag(k, b3)).mul(&u.adjoint());
    let y = y.sub(&Mat2GA::from_diag(k, &y.cond_expect()));
    x.mul_diag(b2).mul(&y).cond_expect()
}

impl<S: Scalar> ElementModel<S> for GroupModel<S> {
    fn dim(&self) -> usize {
        2
    }

    fn moment(&self, word: &[Letter], interior: &[DiagElement<S>]) -> Result<DiagElement<S>> {
        Ok(self.word_product(word, interior)?.cond_expect())
    }
}
