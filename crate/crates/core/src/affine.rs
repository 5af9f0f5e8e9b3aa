//! Affine isometries `x ↦ A x + t` of an affine space over a quadratic space.

use crate::classify::{Classification, ClassifiedGroup, SemidirectProduct};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::orthogonal::{OrthogonalGroup, OrthogonalMap};
use crate::quadspace::QuadraticSpace;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct AffineIsometry<S: Scalar> {
    linear: OrthogonalMap<S>,
    translation: Vector<S>,
}

impl<S: Scalar> AffineIsometry<S> {
    pub fn new(linear: OrthogonalMap<S>, translation: Vector<S>) -> Result<Self> {
        linear.space().check_dim(&translation)?;
        Ok(AffineIsometry { linear, translation })
    }

    pub fn identity(space: QuadraticSpace<S>) -> Self {
        let n = space.dim();
        AffineIsometry { linear: OrthogonalMap::identity(space), translation: vec![S::zero(); n] }
    }

    pub fn translation_by(space: QuadraticSpace<S>, t: Vector<S>) -> Result<Self> {
        Self::new(OrthogonalMap::identity(space), t)
    }

    pub fn from_linear(linear: OrthogonalMap<S>) -> Self {
        let n = linear.space().dim();
        AffineIsometry { linear, translation: vec![S::zero(); n] }
    }

    /// Reads an `(n+1)×(n+1)` matrix `[[A, t], [0, 1]]`.
    pub fn from_homogeneous(space: QuadraticSpace<S>, h: &Matrix<S>) -> Result<Self> {
        let n = space.dim();
        if h.rows() != n + 1 || h.cols() != n + 1 {
            return Err(Error::DimensionMismatch { expected: n + 1, found: h.rows().max(h.cols()) });
        }
        let bottom_ok = (0..n).all(|j| h[(n, j)].is_zero()) && h[(n, n)] == S::one();
        if !bottom_ok {
            return Err(Error::InvalidParameter("homogeneous matrix must end with row [0 … 0 1]".into()));
        }
        let a = Matrix::from_fn(n, n, |i, j| h[(i, j)].clone());
        let t = (0..n).map(|i| h[(i, n)].clone()).collect();
        Self::new(OrthogonalMap::new(space, a)?, t)
    }

    pub fn to_homogeneous(&self) -> Matrix<S> {
        let n = self.space().dim();
        let a = self.linear.matrix();
        Matrix::from_fn(n + 1, n + 1, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => self.translation[i].clone(),
            (false, true) => S::zero(),
            (false, false) => S::one(),
        })
    }

    pub fn space(&self) -> &QuadraticSpace<S> {
        self.linear.space()
    }

    pub fn linear(&self) -> &OrthogonalMap<S> {
        &self.linear
    }

    pub fn translation(&self) -> &[S] {
        &self.translation
    }

    pub fn is_pure_translation(&self) -> bool {
        self.linear.is_identity()
    }

    pub fn apply(&self, x: &[S]) -> Result<Vector<S>> {
        Ok(linalg::add(&self.linear.apply(x)?, &self.translation))
    }

    /// `self ∘ other = (A₁A₂, A₁t₂ + t₁)`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        let linear = self.linear.compose(&other.linear)?;
        let translation = linalg::add(&self.linear.matrix().mul_vec(&other.translation), &self.translation);
        Ok(AffineIsometry { linear, translation })
    }

    /// `(A⁻¹, −A⁻¹t)`
    pub fn inverse(&self) -> Self {
        let linear = self.linear.inverse();
        let translation = linalg::scale(&linear.matrix().mul_vec(&self.translation), &-S::one());
        AffineIsometry { linear, translation }
    }

    pub fn approx_eq(&self, other: &Self, tol: &S) -> bool {
        self.linear.approx_eq(&other.linear, tol) && linalg::approx_eq_vec(&self.translation, &other.translation, tol)
    }

    /// Translations are all direct, so the label is that of the linear part.
    pub fn classify(&self) -> Result<Classification> {
        if self.is_pure_translation() {
            return Ok(Classification::Direct);
        }
        self.linear.classify()
    }

    /// Elements whose squares compose to `self`.
    ///
    /// With linear witnesses `W₁ … W_m`, the square of `(W, c)` is
    /// `(W², (W + I)c)`, so giving only the first witness a translation
    /// `c₁ = (W₁ + I)⁻¹ t` reproduces `(A, t)`. When `W₁ + I` is singular the
    /// list is instead prefixed with the half translation `(I, t/2)`, using
    /// `(A, t) = (I, t) ∘ (A, 0)`.
    pub fn direct_witness(&self) -> Result<Vec<AffineIsometry<S>>> {
        if self.classify()? == Classification::Indirect {
            return Err(Error::WitnessUnavailable);
        }
        let space = self.space().clone();
        let n = space.dim();
        let zero = vec![S::zero(); n];
        let t_is_zero = self.translation.iter().all(|x| x.is_zero());
        let linear_witnesses = if self.is_pure_translation() { Vec::new() } else { self.linear.direct_witness()? };

        let mut out: Vec<AffineIsometry<S>> =
            linear_witnesses.iter().map(|w| AffineIsometry { linear: w.clone(), translation: zero.clone() }).collect();
        if t_is_zero {
            return Ok(out);
        }
        let shift = out.first().and_then(|first| {
            let w_plus_i = first.linear.matrix() + &Matrix::identity(n);
            let rhs = Matrix::from_columns(std::slice::from_ref(&self.translation));
            w_plus_i.solve(&rhs, space.tolerance()).map(|c| c.column(0))
        });
        match shift {
            Some(c) => out[0].translation = c,
            None => {
                let half = self.translation.iter().map(Scalar::half).collect();
                out.insert(0, AffineIsometry::translation_by(space.clone(), half)?);
            }
        }

        let mut product = AffineIsometry::identity(space.clone());
        for w in &out {
            product = product.compose(&w.compose(w)?)?;
        }
        let scale = self.to_homogeneous().max_abs().to_f64_lossy().max(1.0);
        let tol = S::tolerance((space.tolerance_f64() * 10.0).max(1e-10) * scale * scale);
        if !product.approx_eq(self, &tol) {
            return Err(Error::NumericalBreakdown {
                context: "affine witness does not square to the element".into(),
                tolerance: space.tolerance_f64(),
            });
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> AffineIsometry<f64> {
        AffineIsometry {
            linear: self.linear.to_f64(),
            translation: self.translation.iter().map(Scalar::to_f64_lossy).collect(),
        }
    }
}

/// Translations of an `n`-dimensional space, written additively.
#[derive(Clone, Copy, Debug)]
pub struct TranslationGroup {
    pub dim: usize,
}

impl TranslationGroup {
    pub fn new(dim: usize) -> Self {
        TranslationGroup { dim }
    }
}

impl ClassifiedGroup for TranslationGroup {
    type Element = Vector<f64>;

    fn compose(&self, g: &Vector<f64>, h: &Vector<f64>) -> Vector<f64> {
        linalg::add(g, h)
    }

    fn inverse(&self, g: &Vector<f64>) -> Vector<f64> {
        g.iter().map(|x| -x).collect()
    }

    fn identity(&self) -> Vector<f64> {
        vec![0.0; self.dim]
    }

    fn equal(&self, g: &Vector<f64>, h: &Vector<f64>, tol: f64) -> bool {
        linalg::approx_eq_vec(g, h, &tol)
    }

    fn classify(&self, _g: &Vector<f64>) -> Result<Classification> {
        Ok(Classification::Direct)
    }

    fn witness(&self, g: &Vector<f64>) -> Option<Result<Vec<Vector<f64>>>> {
        let half: Vector<f64> = g.iter().map(|x| x / 2.0).collect();
        Some(Ok(if half.iter().all(|x| *x == 0.0) { Vec::new() } else { vec![half] }))
    }
}

/// `T ⋊ O(p,q)` built from its factors, with `φ_A(t) = A t`.
pub type AffineTower =
    SemidirectProduct<TranslationGroup, OrthogonalGroup<f64>, fn(&OrthogonalMap<f64>, &Vector<f64>) -> Vector<f64>>;

pub fn affine_tower(space: QuadraticSpace<f64>) -> AffineTower {
    fn act(a: &OrthogonalMap<f64>, t: &Vector<f64>) -> Vector<f64> {
        a.matrix().mul_vec(t)
    }
    SemidirectProduct::new(
        TranslationGroup::new(space.dim()),
        OrthogonalGroup::new(space),
        act as fn(&OrthogonalMap<f64>, &Vector<f64>) -> Vector<f64>,
    )
}

/// The affine isometry group of a fixed space, classified in closed form.
#[derive(Clone, Debug)]
pub struct AffineGroup<S: Scalar> {
    pub space: QuadraticSpace<S>,
}

impl<S: Scalar> AffineGroup<S> {
    pub fn new(space: QuadraticSpace<S>) -> Self {
        AffineGroup { space }
    }
}

impl<S: Scalar> ClassifiedGroup for AffineGroup<S> {
    type Element = AffineIsometry<S>;

    fn compose(&self, g: &AffineIsometry<S>, h: &AffineIsometry<S>) -> AffineIsometry<S> {
        g.compose(h).expect("elements of one group share a space")
    }

    fn inverse(&self, g: &AffineIsometry<S>) -> AffineIsometry<S> {
        g.inverse()
    }

    fn identity(&self) -> AffineIsometry<S> {
        AffineIsometry::identity(self.space.clone())
    }

    fn equal(&self, g: &AffineIsometry<S>, h: &AffineIsometry<S>, tol: f64) -> bool {
        g.approx_eq(h, &S::tolerance(tol))
    }

    fn classify(&self, g: &AffineIsometry<S>) -> Result<Classification> {
        g.classify()
    }

    fn witness(&self, g: &AffineIsometry<S>) -> Option<Result<Vec<AffineIsometry<S>>>> {
        Some(g.direct_witness())
    }
}
