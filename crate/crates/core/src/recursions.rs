//! The circular-element recursion stack on `ℂ²`: the series `g₁, g₂`, the maps
//! `G, G′, H, H′`, coordinate functionals for the basis `{g₂(0), g₂(1)}`, the maps
//! `N₁, N₂`, `M₀`, and the residual of the trilinear expansion of `M₀`.
//!
//! Everything is generic over [`Scalar`], so the same code runs on rationals and on
//! rational functions in the parameters.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{DiagElement, LinearMapD, Scalar, TraceWeights};
use crate::cumulants::{circular_family, CumulantFamily};
use crate::error::{Error, Result};

/// Parameters `q, R` of a tracial circular element over `ℂ²`.
///
/// `α_(1,2)` has matrix `R`. `α_(2,1)` is derived from the trace `τ(x,y) = qx + (1−q)y`
/// and is never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct CircularParams<S> {
    q: S,
    r: [[S; 2]; 2],
}

impl<S: Scalar> CircularParams<S> {
    /// Rejects numeric `q ∉ (0,1)` and negative numeric entries of `R`.
    /// Symbolic entries are accepted as long as `q` and `1 − q` are invertible.
    pub fn new(q: S, r: [[S; 2]; 2]) -> Result<Self> {
        if let Some(qv) = q.as_rational() {
            let one = crate::algebra::Rational::from_integer(1.into());
            if qv <= num_traits::Zero::zero() || qv >= one {
                return Err(Error::InvalidParams("q must lie strictly between 0 and 1".into()));
            }
        }
        if q.inv().is_none() || (S::one() - q.clone()).inv().is_none() {
            return Err(Error::InvalidParams("q and 1 - q must be invertible".into()));
        }
        if r.iter().flatten().any(|x| x.is_nonnegative() == Some(false)) {
            return Err(Error::NegativeEntry);
        }
        Ok(CircularParams { q, r })
    }

    pub fn q(&self) -> &S {
        &self.q
    }

    pub fn r(&self) -> &[[S; 2]; 2] {
        &self.r
    }

    /// The matrix `S` of `α_(2,1)`, from `s₁₁=r₁₁`, `s₂₂=r₂₂`, `s₂₁=q·r₁₂/(1−q)`, `s₁₂=(1−q)·r₂₁/q`.
    pub fn s(&self) -> [[S; 2]; 2] {
        let q = self.q.clone();
        let p = S::one() - q.clone();
        // Invertibility was checked in `new`.
        let q_inv = q.inv().expect("q invertible");
        let p_inv = p.inv().expect("1 - q invertible");
        let r = &self.r;
        [
            [r[0][0].clone(), p * q_inv * r[1][0].clone()],
            [q * p_inv * r[0][1].clone(), r[1][1].clone()],
        ]
    }

    pub fn alpha12(&self) -> LinearMapD<S> {
        LinearMapD::new(self.r.iter().map(|row| row.to_vec()).collect()).expect("2x2")
    }

    pub fn alpha21(&self) -> LinearMapD<S> {
        LinearMapD::new(self.s().iter().map(|row| row.to_vec()).collect()).expect("2x2")
    }

    pub fn trace_weights(&self) -> Result<TraceWeights<S>> {
        TraceWeights::two_point(self.q.clone())
    }

    /// The circular cumulant family `{α_(1,2), α_(2,1)}`.
    pub fn family(&self) -> Result<CumulantFamily<S>> {
        circular_family(&self.alpha12(), &self.alpha21())
    }

    /// `R ↦ t²R`, the effect of replacing `a` by `ta`.
    pub fn rescale(&self, t: &S) -> Result<Self> {
        match t.sign() {
            Some(core::cmp::Ordering::Greater) => {}
            Some(_) => return Err(Error::NonPositiveScale),
            None if t.is_zero() => return Err(Error::NonPositiveScale),
            None => {}
        }
        let t2 = t.clone() * t.clone();
        let r = self.r.clone().map(|row| row.map(|x| x * t2.clone()));
        CircularParams::new(self.q.clone(), r)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<CircularParams<T>> {
        let r = [
            [f(&self.r[0][0]), f(&self.r[0][1])],
            [f(&self.r[1][0]), f(&self.r[1][1])],
        ];
        CircularParams::new(f(&self.q), r)
    }
}

/// How `N₂(b) = E(u* b u)` is obtained.
#[derive(Clone, Debug, PartialEq)]
pub enum N2Choice<S> {
    /// `N₂ = α_(1,2)⁻¹ ∘ N₁ ∘ α_(2,1)`.
    Invertible,
    /// `N₂ = [[m₁₁, 1−m₁₁], [1−m₂₂, m₂₂]]`.
    Parametric(S, S),
}

impl<S: Scalar> N2Choice<S> {
    /// Checks numeric parametric entries lie in `[0,1]`.
    pub fn validate(&self) -> Result<()> {
        if let N2Choice::Parametric(m11, m22) = self {
            for m in [m11, m22] {
                if m.is_nonnegative() == Some(false) || (S::one() - m.clone()).is_nonnegative() == Some(false) {
                    return Err(Error::InvalidParams("m11 and m22 must lie in [0, 1]".into()));
                }
            }
        }
        Ok(())
    }
}

/// Which of the four two-sided maps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GhMap {
    /// `G(n,b,k) = E((yy*)ⁿ b (yy*)ᵏ)`
    G,
    /// `G′(n,b,k) = E((y*y)ⁿ y* b y (y*y)ᵏ)`
    GPrime,
    /// `H(n,b,k) = E((y*y)ⁿ b (y*y)ᵏ)`
    H,
    /// `H′(n,b,k) = E((yy*)ⁿ y b y* (yy*)ᵏ)`
    HPrime,
}

impl GhMap {
    pub const ALL: [GhMap; 4] = [GhMap::G, GhMap::GPrime, GhMap::H, GhMap::HPrime];

    pub fn name(self) -> &'static str {
        match self {
            GhMap::G => "G",
            GhMap::GPrime => "G'",
            GhMap::H => "H",
            GhMap::HPrime => "H'",
        }
    }

    pub fn from_name(s: &str) -> Option<GhMap> {
        match s {
            "G" => Some(GhMap::G),
            "G'" | "Gprime" => Some(GhMap::GPrime),
            "H" => Some(GhMap::H),
            "H'" | "Hprime" => Some(GhMap::HPrime),
            _ => None,
        }
    }
}

/// Coordinates for the basis `{g₂(0), g₂(1)}` of `ℂ²`, as coefficient pairs:
/// `Pᵢ((x,y)) = pᵢ[0]·x + pᵢ[1]·y`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoordFunctionals<S> {
    pub p1: [S; 2],
    pub p2: [S; 2],
}

impl<S: Scalar> CoordFunctionals<S> {
    pub fn p1(&self, b: &DiagElement<S>) -> S {
        self.p1[0].clone() * b.get(0).clone() + self.p1[1].clone() * b.get(1).clone()
    }

    pub fn p2(&self, b: &DiagElement<S>) -> S {
        self.p2[0].clone() * b.get(0).clone() + self.p2[1].clone() * b.get(1).clone()
    }
}

/// `P₂((x,y)) = (x−y)/(g₂(1)₁−g₂(1)₂)`, `P₁((x,y)) = x − P₂((x,y))·g₂(1)₁`.
pub fn coord_functionals<S: Scalar>(g2_1: &DiagElement<S>) -> Result<CoordFunctionals<S>> {
    if g2_1.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: g2_1.dim(),
        });
    }
    let delta = g2_1.get(0).clone() - g2_1.get(1).clone();
    let inv = delta.inv().ok_or(Error::DegenerateBasis)?;
    let g = g2_1.get(0).clone();
    let p2 = [inv.clone(), -inv.clone()];
    let p1 = [S::one() - g.clone() * inv.clone(), g * inv];
    Ok(CoordFunctionals { p1, p2 })
}

type GhKey = (GhMap, usize, usize, usize);

/// Memoized evaluator for one parameter set.
///
/// Memo tables are owned by the evaluator, so a single writer is guaranteed by `&mut self`.
/// The middle argument of the two-sided maps is split over the basis, so the memo key
/// is `(map, n, k, basis index)`.
pub struct Recursions<S> {
    a12: LinearMapD<S>,
    a21: LinearMapD<S>,
    g1: Vec<DiagElement<S>>,
    g2: Vec<DiagElement<S>>,
    gh: BTreeMap<GhKey, DiagElement<S>>,
    coords: Option<CoordFunctionals<S>>,
}

impl<S: Scalar> Recursions<S> {
    pub fn new(params: &CircularParams<S>) -> Self {
        Self::from_maps(params.alpha12(), params.alpha21()).expect("2x2 maps")
    }

    /// Any pair of linear cumulant maps of equal dimension. `N₁, N₂, M₀` need `d = 2`.
    pub fn from_maps(a12: LinearMapD<S>, a21: LinearMapD<S>) -> Result<Self> {
        if a12.dim() != a21.dim() {
            return Err(Error::DimensionMismatch {
                expected: a12.dim(),
                found: a21.dim(),
            });
        }
        let d = a12.dim();
        Ok(Recursions {
            a12,
            a21,
            g1: vec![DiagElement::unit(d)],
            g2: vec![DiagElement::unit(d)],
            gh: BTreeMap::new(),
            coords: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.a12.dim()
    }

    pub fn alpha12(&self) -> &LinearMapD<S> {
        &self.a12
    }

    pub fn alpha21(&self) -> &LinearMapD<S> {
        &self.a21
    }

    fn a12(&self, b: &DiagElement<S>) -> DiagElement<S> {
        self.a12.apply(b).expect("dimension checked")
    }

    fn a21(&self, b: &DiagElement<S>) -> DiagElement<S> {
        self.a21.apply(b).expect("dimension checked")
    }

    fn extend_g(&mut self, n: usize) {
        let d = self.dim();
        while self.g1.len() <= n {
            let m = self.g1.len();
            let mut s1 = DiagElement::zero(d);
            let mut s2 = DiagElement::zero(d);
            for i in 1..=m {
                s1 = &s1 + &(&self.a12(&self.g2[i - 1]) * &self.g1[m - i]);
                s2 = &s2 + &(&self.a21(&self.g1[i - 1]) * &self.g2[m - i]);
            }
            self.g1.push(s1);
            self.g2.push(s2);
        }
    }

    /// `g₁(n) = E((yy*)ⁿ)`.
    pub fn g1(&mut self, n: usize) -> DiagElement<S> {
        self.extend_g(n);
        self.g1[n].clone()
    }

    /// `g₂(n) = E((y*y)ⁿ)`.
    pub fn g2(&mut self, n: usize) -> DiagElement<S> {
        self.extend_g(n);
        self.g2[n].clone()
    }

    /// `(g₁(0..=n), g₂(0..=n))`.
    pub fn g_series(&mut self, n: usize) -> (Vec<DiagElement<S>>, Vec<DiagElement<S>>) {
        self.extend_g(n);
        (self.g1[..=n].to_vec(), self.g2[..=n].to_vec())
    }

    /// One of `G, G′, H, H′` at `(n, b, k)`.
    pub fn gh(&mut self, which: GhMap, n: usize, b: &DiagElement<S>, k: usize) -> Result<DiagElement<S>> {
        let d = self.dim();
        if b.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: b.dim(),
            });
        }
        let mut total = DiagElement::zero(d);
        for (i, c) in b.entries().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let v = self.gh_basis(which, n, k, i);
            total = &total + &v.scale(c);
        }
        Ok(total)
    }

    fn gh_basis(&mut self, which: GhMap, n: usize, k: usize, idx: usize) -> DiagElement<S> {
        if let Some(v) = self.gh.get(&(which, n, k, idx)) {
            return v.clone();
        }
        self.extend_g(n + k + 1);
        let d = self.dim();
        let b = DiagElement::basis(d, idx);
        // G/G′ use (α_(1,2), g₁) on the outside and (α_(2,1), g₂) inside; H/H′ swap the roles.
        let primary = matches!(which, GhMap::G | GhMap::H);
        let first_family = matches!(which, GhMap::G | GhMap::GPrime);
        let (plain, prime) = if first_family {
            (GhMap::G, GhMap::GPrime)
        } else {
            (GhMap::H, GhMap::HPrime)
        };
        // For G and H′ the outer letter pattern is yy*; for G′ and H it is y*y.
        let outer_is_a12 = matches!(which, GhMap::G | GhMap::HPrime);
        let mut total = DiagElement::zero(d);
        if primary {
            if n == 0 {
                let g = if first_family { &self.g1[k] } else { &self.g2[k] };
                total = &b * g;
            } else {
                for i in 1..=n {
                    let inner = if outer_is_a12 { self.g2[i - 1].clone() } else { self.g1[i - 1].clone() };
                    let head = self.apply_outer(outer_is_a12, &inner);
                    let rest = self.gh_basis(plain, n - i, k, idx);
                    total = &total + &(&head * &rest);
                }
                for j in 1..=k {
                    let inner = self.gh_basis(prime, n - 1, j - 1, idx);
                    let head = self.apply_outer(outer_is_a12, &inner);
                    let tail = if outer_is_a12 { &self.g1[k - j] } else { &self.g2[k - j] };
                    total = &total + &(&head * tail);
                }
            }
        } else if n == 0 {
            for j in 0..=k {
                let inner = if first_family { &b * &self.g1[j] } else { &b * &self.g2[j] };
                let head = self.apply_outer(outer_is_a12, &inner);
                let tail = if outer_is_a12 { &self.g1[k - j] } else { &self.g2[k - j] };
                total = &total + &(&head * tail);
            }
        } else {
            for i in 1..=n {
                let inner = if outer_is_a12 { self.g2[i - 1].clone() } else { self.g1[i - 1].clone() };
                let head = self.apply_outer(outer_is_a12, &inner);
                let rest = self.gh_basis(prime, n - i, k, idx);
                total = &total + &(&head * &rest);
            }
            for j in 0..=k {
                let inner = self.gh_basis(plain, n, j, idx);
                let head = self.apply_outer(outer_is_a12, &inner);
                let tail = if outer_is_a12 { &self.g1[k - j] } else { &self.g2[k - j] };
                total = &total + &(&head * tail);
            }
        }
        self.gh.insert((which, n, k, idx), total.clone());
        total
    }

    fn apply_outer(&self, use_a12: bool, b: &DiagElement<S>) -> DiagElement<S> {
        if use_a12 {
            self.a12(b)
        } else {
            self.a21(b)
        }
    }

    fn require_d2(&self) -> Result<()> {
        if self.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: self.dim(),
            });
        }
        Ok(())
    }

    /// Coordinate functionals for `{g₂(0), g₂(1)}`; `DegenerateBasis` when `g₂(1)` is a multiple of `1`.
    pub fn coord_functionals(&mut self) -> Result<CoordFunctionals<S>> {
        self.require_d2()?;
        if let Some(c) = &self.coords {
            return Ok(c.clone());
        }
        let g = self.g2(1);
        let c = coord_functionals(&g)?;
        self.coords = Some(c.clone());
        Ok(c)
    }

    /// Matrix of `N₁(b) = P₁(b)·g₁(0) + P₂(b)·g₁(1)`.
    pub fn n1_map(&mut self) -> Result<LinearMapD<S>> {
        let c = self.coord_functionals()?;
        let g = self.g1(1);
        let rows = (0..2)
            .map(|r| {
                (0..2)
                    .map(|col| c.p1[col].clone() + c.p2[col].clone() * g.get(r).clone())
                    .collect()
            })
            .collect();
        LinearMapD::new(rows)
    }

    pub fn n1(&mut self, b: &DiagElement<S>) -> Result<DiagElement<S>> {
        self.n1_map()?.apply(b)
    }

    pub fn n2_map(&mut self, choice: &N2Choice<S>) -> Result<LinearMapD<S>> {
        self.require_d2()?;
        match choice {
            N2Choice::Invertible => {
                let inv = self.a12.inverse()?;
                let n1 = self.n1_map()?;
                inv.compose(&n1)?.compose(&self.a21)
            }
            N2Choice::Parametric(m11, m22) => LinearMapD::new(vec![
                vec![m11.clone(), S::one() - m11.clone()],
                vec![S::one() - m22.clone(), m22.clone()],
            ]),
        }
    }

    pub fn n2(&mut self, choice: &N2Choice<S>, b: &DiagElement<S>) -> Result<DiagElement<S>> {
        self.n2_map(choice)?.apply(b)
    }

    /// `M₀(n,m,k) = G(n, g₂(m), k) − N₁(H(n, N₂(g₂(m)), k)) + N₁(g₂(n)·N₂(g₂(m))·g₂(k))`.
    pub fn m0(&mut self, choice: &N2Choice<S>, n: usize, m: usize, k: usize) -> Result<DiagElement<S>> {
        let n1 = self.n1_map()?;
        let n2 = self.n2_map(choice)?;
        self.m0_with(&n1, &n2, n, m, k)
    }

    fn m0_with(
        &mut self,
        n1: &LinearMapD<S>,
        n2: &LinearMapD<S>,
        n: usize,
        m: usize,
        k: usize,
    ) -> Result<DiagElement<S>> {
        let g2m = self.g2(m);
        let mid = n2.apply(&g2m)?;
        let first = self.gh(GhMap::G, n, &g2m, k)?;
        let second = n1.apply(&self.gh(GhMap::H, n, &mid, k)?)?;
        let prod = &(&self.g2(n) * &mid) * &self.g2(k);
        let third = n1.apply(&prod)?;
        Ok(&(&first - &second) + &third)
    }

    /// `M₀(n,m,k)` minus its expansion over `M₀` on `{0,1}³` with coefficients
    /// `cᵢ = P₁(g₂(·))`, `dᵢ = P₂(g₂(·))`. Zero exactly when the expansion is consistent.
    pub fn m_expansion_residual(
        &mut self,
        choice: &N2Choice<S>,
        n: usize,
        m: usize,
        k: usize,
    ) -> Result<DiagElement<S>> {
        let coords = self.coord_functionals()?;
        let n1 = self.n1_map()?;
        let n2 = self.n2_map(choice)?;
        let lhs = self.m0_with(&n1, &n2, n, m, k)?;
        let cd: Vec<[S; 2]> = [n, m, k]
            .iter()
            .map(|&i| {
                let g = self.g2(i);
                [coords.p1(&g), coords.p2(&g)]
            })
            .collect();
        let mut expansion = DiagElement::zero(2);
        for bits in 0..8usize {
            let (b1, b2, b3) = ((bits >> 2) & 1, (bits >> 1) & 1, bits & 1);
            let coeff = cd[0][b1].clone() * cd[1][b2].clone() * cd[2][b3].clone();
            if coeff.is_zero() {
                continue;
            }
            let v = self.m0_with(&n1, &n2, b1, b2, b3)?;
            expansion = &expansion + &v.scale(&coeff);
        }
        Ok(&lhs - &expansion)
    }
}
