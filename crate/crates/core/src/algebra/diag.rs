//! The diagonal algebra `B = ℂ^d`, its traces, and (multi)linear maps on it.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// An element of `ℂ^d` with componentwise operations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagElement<S> {
    entries: Vec<S>,
}

impl<S: Scalar> DiagElement<S> {
    pub fn new(entries: Vec<S>) -> Self {
        assert!(!entries.is_empty(), "DiagElement needs d >= 1");
        DiagElement { entries }
    }

    pub fn unit(d: usize) -> Self {
        DiagElement::new(vec![S::one(); d])
    }

    pub fn zero(d: usize) -> Self {
        DiagElement::new(vec![S::zero(); d])
    }

    /// The `i`th minimal projection `e_i` (0-based).
    pub fn basis(d: usize, i: usize) -> Self {
        let mut e = vec![S::zero(); d];
        e[i] = S::one();
        DiagElement::new(e)
    }

    pub fn splat(d: usize, c: S) -> Self {
        DiagElement::new(vec![c; d])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<S> {
        self.entries
    }

    pub fn get(&self, i: usize) -> &S {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.entries.iter().all(|x| x.is_one())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    /// Over real coefficients the adjoint is the identity.
    pub fn adjoint(&self) -> Self {
        self.clone()
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DiagElement<T> {
        DiagElement::new(self.entries.iter().map(f).collect())
    }

    /// Reorder coordinates: component `i` of the result is component `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        DiagElement::new(perm.iter().map(|&j| self.entries[j].clone()).collect())
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            })
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        DiagElement::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        )
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a.clone() + b.clone()))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a.clone() - b.clone()))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(self.zip(other, |a, b| a.clone() * b.clone()))
    }
}

// Operator forms panic on a dimension mismatch; use the `try_*` methods on
// untrusted input.
impl<S: Scalar> Add for &DiagElement<S> {
    type Output = DiagElement<S>;
    fn add(self, rhs: &DiagElement<S>) -> DiagElement<S> {
        self.try_add(rhs).expect("dimension mismatch")
    }
}

impl<S: Scalar> Sub for &DiagElement<S> {
    type Output = DiagElement<S>;
    fn sub(self, rhs: &DiagElement<S>) -> DiagElement<S> {
        self.try_sub(rhs).expect("dimension mismatch")
    }
}

impl<S: Scalar> Mul for &DiagElement<S> {
    type Output = DiagElement<S>;
    fn mul(self, rhs: &DiagElement<S>) -> DiagElement<S> {
        self.try_mul(rhs).expect("dimension mismatch")
    }
}

impl<S: Scalar> Neg for &DiagElement<S> {
    type Output = DiagElement<S>;
    fn neg(self) -> DiagElement<S> {
        self.map(|x| -x.clone())
    }
}

impl<S: fmt::Display> fmt::Display for DiagElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, x) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(")")
    }
}

impl<S: fmt::Display> fmt::Debug for DiagElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A faithful trace `τ(b) = Σ wᵢ bᵢ` on `ℂ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceWeights<S> {
    weights: Vec<S>,
}

impl<S: Scalar> TraceWeights<S> {
    pub fn new(weights: Vec<S>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParams("trace needs at least one weight".into()));
        }
        let total = weights.iter().cloned().fold(S::zero(), |a, b| a + b);
        if !total.is_one() {
            return Err(Error::InvalidParams("trace weights must sum to 1".into()));
        }
        if weights
            .iter()
            .any(|w| w.sign() == Some(core::cmp::Ordering::Less) || w.is_zero())
        {
            return Err(Error::InvalidParams("trace weights must be positive".into()));
        }
        Ok(TraceWeights { weights })
    }

    /// `τ(x, y) = q·x + (1 − q)·y` on `ℂ²`.
    pub fn two_point(q: S) -> Result<Self> {
        let p = S::one() - q.clone();
        TraceWeights::new(vec![q, p])
    }

    pub fn weights(&self) -> &[S] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn trace(&self, b: &DiagElement<S>) -> Result<S> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: b.dim(),
            });
        }
        Ok(self
            .weights
            .iter()
            .zip(b.entries())
            .fold(S::zero(), |acc, (w, x)| acc + w.clone() * x.clone()))
    }
}

/// A linear map `ℂ^d → ℂ^d`; row `i` holds the coefficients of output component `i`.
#[derive(Clone, PartialEq)]
pub struct LinearMapD<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> LinearMapD<S> {
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(bad) = rows.iter().find(|r| r.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: bad.len(),
            });
        }
        Ok(LinearMapD { rows })
    }

    pub fn identity(d: usize) -> Self {
        LinearMapD {
            rows: (0..d)
                .map(|i| (0..d).map(|j| if i == j { S::one() } else { S::zero() }).collect())
                .collect(),
        }
    }

    pub fn zero(d: usize) -> Self {
        LinearMapD {
            rows: vec![vec![S::zero(); d]; d],
        }
    }

    /// The coordinate permutation `b ↦ b∘perm` (component `i` of the output is `b[perm[i]]`).
    pub fn permutation(perm: &[usize]) -> Self {
        let d = perm.len();
        LinearMapD {
            rows: (0..d)
                .map(|i| (0..d).map(|j| if perm[i] == j { S::one() } else { S::zero() }).collect())
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.rows[i][j]
    }

    pub fn apply(&self, b: &DiagElement<S>) -> Result<DiagElement<S>> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: b.dim(),
            });
        }
        Ok(DiagElement::new(
            self.rows
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(b.entries())
                        .fold(S::zero(), |acc, (m, x)| acc + m.clone() * x.clone())
                })
                .collect(),
        ))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let d = self.dim();
        if other.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: other.dim(),
            });
        }
        Ok(LinearMapD {
            rows: (0..d)
                .map(|i| {
                    (0..d)
                        .map(|j| {
                            (0..d).fold(S::zero(), |acc, k| {
                                acc + self.rows[i][k].clone() * other.rows[k][j].clone()
                            })
                        })
                        .collect()
                })
                .collect(),
        })
    }

    pub fn scale(&self, c: &S) -> Self {
        LinearMapD {
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|x| x.clone() * c.clone()).collect())
                .collect(),
        }
    }

    pub fn determinant(&self) -> S {
        let mut m = self.rows.clone();
        let d = self.dim();
        let mut det = S::one();
        for col in 0..d {
            let Some(piv) = (col..d).find(|&r| !m[r][col].is_zero()) else {
                return S::zero();
            };
            if piv != col {
                m.swap(piv, col);
                det = -det;
            }
            let p = m[col][col].clone();
            det = det * p.clone();
            let p_inv = p.inv().expect("pivot is nonzero");
            for r in col + 1..d {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = m[r][col].clone() * p_inv.clone();
                for c in col..d {
                    let v = m[col][c].clone() * f.clone();
                    m[r][c] = m[r][c].clone() - v;
                }
            }
        }
        det
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.dim();
        let mut a = self.rows.clone();
        let mut inv = LinearMapD::<S>::identity(d).rows;
        for col in 0..d {
            let piv = (col..d)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::SingularMap)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let p_inv = a[col][col].inv().ok_or(Error::SingularMap)?;
            for c in 0..d {
                a[col][c] = a[col][c].clone() * p_inv.clone();
                inv[col][c] = inv[col][c].clone() * p_inv.clone();
            }
            for r in 0..d {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..d {
                    let x = a[col][c].clone() * f.clone();
                    a[r][c] = a[r][c].clone() - x;
                    let y = inv[col][c].clone() * f.clone();
                    inv[r][c] = inv[r][c].clone() - y;
                }
            }
        }
        Ok(LinearMapD { rows: inv })
    }

    /// Error unless every entry is known to be nonnegative. Symbolic entries pass.
    pub fn check_nonnegative(&self) -> Result<()> {
        let negative = self
            .rows
            .iter()
            .flatten()
            .any(|x| x.is_nonnegative() == Some(false));
        if negative {
            Err(Error::NegativeEntry)
        } else {
            Ok(())
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> LinearMapD<T> {
        LinearMapD {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
        }
    }
}

impl<S: fmt::Display> fmt::Debug for LinearMapD<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("[")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// A map `B^k → B`, linear in each argument.
///
/// The tensor is stored flat, indexed by `(output; arg₁, …, arg_k)` with the
/// output component most significant and `arg₁` next.
#[derive(Clone, PartialEq)]
pub struct MultilinearMapD<S> {
    d: usize,
    order: usize,
    tensor: Vec<S>,
}

impl<S: Scalar> MultilinearMapD<S> {
    pub fn new(d: usize, order: usize, tensor: Vec<S>) -> Result<Self> {
        let expected = d.pow(order as u32 + 1);
        if tensor.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: tensor.len(),
            });
        }
        Ok(MultilinearMapD { d, order, tensor })
    }

    pub fn zero(d: usize, order: usize) -> Self {
        MultilinearMapD {
            d,
            order,
            tensor: vec![S::zero(); d.pow(order as u32 + 1)],
        }
    }

    /// Order-0 map with the given value.
    pub fn constant(c: &DiagElement<S>) -> Self {
        MultilinearMapD {
            d: c.dim(),
            order: 0,
            tensor: c.entries().to_vec(),
        }
    }

    pub fn from_linear(m: &LinearMapD<S>) -> Self {
        MultilinearMapD {
            d: m.dim(),
            order: 1,
            tensor: m.rows().iter().flatten().cloned().collect(),
        }
    }

    /// The order-1 map as a matrix.
    pub fn as_linear(&self) -> Option<LinearMapD<S>> {
        if self.order != 1 {
            return None;
        }
        Some(LinearMapD {
            rows: self.tensor.chunks(self.d).map(|c| c.to_vec()).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn tensor(&self) -> &[S] {
        &self.tensor
    }

    pub fn is_zero(&self) -> bool {
        self.tensor.iter().all(|x| x.is_zero())
    }

    fn flat_index(&self, out: usize, args: &[usize]) -> usize {
        args.iter().fold(out, |acc, &a| acc * self.d + a)
    }

    pub fn get(&self, out: usize, args: &[usize]) -> &S {
        &self.tensor[self.flat_index(out, args)]
    }

    pub fn set(&mut self, out: usize, args: &[usize], value: S) {
        let i = self.flat_index(out, args);
        self.tensor[i] = value;
    }

    pub fn apply(&self, args: &[DiagElement<S>]) -> Result<DiagElement<S>> {
        if args.len() != self.order {
            return Err(Error::ArityMismatch {
                expected: self.order,
                found: args.len(),
            });
        }
        if let Some(bad) = args.iter().find(|a| a.dim() != self.d) {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                found: bad.dim(),
            });
        }
        let d = self.d;
        let inner = d.pow(self.order as u32);
        let mut out = vec![S::zero(); d];
        let mut idx = vec![0usize; self.order];
        for flat in 0..inner {
            let mut rest = flat;
            for slot in idx.iter_mut().rev() {
                *slot = rest % d;
                rest /= d;
            }
            let mut weight = S::one();
            let mut vanishes = false;
            for (a, &i) in args.iter().zip(&idx) {
                let x = a.get(i);
                if x.is_zero() {
                    vanishes = true;
                    break;
                }
                weight = weight * x.clone();
            }
            if vanishes {
                continue;
            }
            for (o, slot) in out.iter_mut().enumerate() {
                let t = &self.tensor[o * inner + flat];
                if !t.is_zero() {
                    *slot = slot.clone() + t.clone() * weight.clone();
                }
            }
        }
        Ok(DiagElement::new(out))
    }
}

impl<S: fmt::Display> fmt::Debug for MultilinearMapD<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultilinearMapD(d={}, order={}, [", self.d, self.order)?;
        for (i, x) in self.tensor.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{int, rat, Rational};
    use num_traits::{One, Zero};
    use proptest::prelude::*;

    type D = DiagElement<Rational>;
    type L = LinearMapD<Rational>;

    fn d2(x: Rational, y: Rational) -> D {
        DiagElement::new(vec![x, y])
    }

    fn mat(rows: [[Rational; 2]; 2]) -> L {
        LinearMapD::new(rows.into_iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn apply_linear_examples() {
        let a12 = mat([[rat(1, 2), int(0)], [rat(1, 2), int(1)]]);
        assert_eq!(a12.apply(&D::unit(2)).unwrap(), d2(rat(1, 2), rat(3, 2)));
        let a21 = mat([[rat(1, 2), rat(1, 2)], [int(0), int(1)]]);
        assert_eq!(a21.apply(&D::basis(2, 0)).unwrap(), d2(rat(1, 2), int(0)));
        let b = d2(rat(5, 7), int(-3));
        assert_eq!(L::identity(2).apply(&b).unwrap(), b);
        assert_eq!(
            L::identity(3).apply(&b),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        );
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(L::identity(2).inverse().unwrap(), L::identity(2));
        let diag = mat([[int(2), int(0)], [int(0), int(3)]]);
        assert_eq!(
            diag.inverse().unwrap(),
            mat([[rat(1, 2), int(0)], [int(0), rat(1, 3)]])
        );
        let ones = mat([[int(1), int(1)], [int(1), int(1)]]);
        assert_eq!(ones.inverse(), Err(Error::SingularMap));
        assert_eq!(ones.determinant(), int(0));
    }

    #[test]
    fn trace_examples() {
        let half = TraceWeights::two_point(rat(1, 2)).unwrap();
        assert_eq!(half.trace(&d2(int(1), int(-1))).unwrap(), int(0));
        assert_eq!(half.trace(&d2(rat(1, 2), rat(1, 4))).unwrap(), rat(3, 8));
        let q = crate::RatFun::var(crate::Var::Q);
        let w = TraceWeights::two_point(q).unwrap();
        assert!(w.trace(&DiagElement::unit(2)).unwrap().is_one());
        assert!(TraceWeights::new(vec![rat(1, 2), rat(1, 3)]).is_err());
        assert!(TraceWeights::two_point(int(0)).is_err());
    }

    #[test]
    fn multilinear_examples() {
        let c = d2(int(4), rat(1, 9));
        assert_eq!(MultilinearMapD::constant(&c).apply(&[]).unwrap(), c);
        let id = MultilinearMapD::from_linear(&L::identity(2));
        let b = d2(int(2), int(5));
        assert_eq!(id.apply(&[b.clone()]).unwrap(), b);
        let ones = MultilinearMapD::new(2, 2, vec![int(1); 8]).unwrap();
        assert_eq!(
            ones.apply(&[D::basis(2, 0), D::basis(2, 1)]).unwrap(),
            d2(int(1), int(1))
        );
        assert_eq!(
            ones.apply(&[D::unit(2)]),
            Err(Error::ArityMismatch { expected: 2, found: 1 })
        );
    }

    #[test]
    fn nonnegativity() {
        assert!(mat([[int(0), int(1)], [int(2), int(3)]]).check_nonnegative().is_ok());
        assert_eq!(
            mat([[int(0), int(-1)], [int(2), int(3)]]).check_nonnegative(),
            Err(Error::NegativeEntry)
        );
    }

    fn arb_rat() -> impl Strategy<Value = Rational> {
        (-20i64..20, 1i64..7).prop_map(|(n, d)| rat(n, d))
    }

    fn arb_mat() -> impl Strategy<Value = L> {
        proptest::array::uniform4(arb_rat())
            .prop_map(|[a, b, c, d]| mat([[a, b], [c, d]]))
    }

    proptest! {
        #[test]
        fn composition_is_application(m1 in arb_mat(), m2 in arb_mat(), x in arb_rat(), y in arb_rat()) {
            let b = d2(x, y);
            let lhs = m1.compose(&m2).unwrap().apply(&b).unwrap();
            let rhs = m1.apply(&m2.apply(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_composes_to_identity(m in arb_mat()) {
            match m.inverse() {
                Ok(inv) => {
                    prop_assert_eq!(m.compose(&inv).unwrap(), L::identity(2));
                    prop_assert_eq!(inv.compose(&m).unwrap(), L::identity(2));
                }
                Err(e) => {
                    prop_assert_eq!(e, Error::SingularMap);
                    prop_assert!(m.determinant().is_zero());
                }
            }
        }
    }
}
