//! Real quadratic spaces `(V, Q)` of signature `(p, q)`.
//!
//! The metric is always the canonical diagonal form `G = diag(+1 × p, −1 × q)`.
//! Callers holding a general non-degenerate symmetric form must diagonalize
//! it first.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::orthogonal::OrthogonalMap;
use crate::scalar::{Scalar, DEFAULT_TOLERANCE};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub p: usize,
    pub q: usize,
}

impl Signature {
    pub fn new(p: usize, q: usize) -> Result<Self> {
        if p + q == 0 {
            return Err(Error::InvalidSignature { p, q });
        }
        Ok(Signature { p, q })
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    /// True for positive-definite signatures `(n, 0)`.
    pub fn is_euclidean(&self) -> bool {
        self.q == 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

/// Sign of `Q(w)` relative to the isotropy threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VectorSign {
    Positive,
    Negative,
    Null,
}

#[derive(Clone, Debug)]
pub struct QuadraticSpace<S> {
    signature: Signature,
    tolerance: S,
    tolerance_f64: f64,
}

impl<S: Scalar> PartialEq for QuadraticSpace<S> {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
    }
}

impl<S: Scalar> QuadraticSpace<S> {
    /// Space with the default tolerance (ignored in exact mode).
    pub fn new(p: usize, q: usize) -> Result<Self> {
        Self::with_tolerance(p, q, DEFAULT_TOLERANCE)
    }

    pub fn with_tolerance(p: usize, q: usize, tol: f64) -> Result<Self> {
        if !tol.is_finite() || tol < 0.0 {
            return Err(Error::InvalidParameter(format!("tolerance must be finite and nonnegative, got {tol}")));
        }
        let signature = Signature::new(p, q)?;
        let tolerance_f64 = if S::EXACT { 0.0 } else { tol };
        Ok(QuadraticSpace { signature, tolerance: S::tolerance(tol), tolerance_f64 })
    }

    pub fn signature(&self) -> Signature {
        self.signature
    }

    pub fn dim(&self) -> usize {
        self.signature.dim()
    }

    pub fn tolerance(&self) -> &S {
        &self.tolerance
    }

    pub fn tolerance_f64(&self) -> f64 {
        self.tolerance_f64
    }

    /// Diagonal entry `G_ii`.
    pub fn metric_entry(&self, i: usize) -> S {
        if i < self.signature.p {
            S::one()
        } else {
            -S::one()
        }
    }

    pub fn metric(&self) -> Matrix<S> {
        let diag: Vec<S> = (0..self.dim()).map(|i| self.metric_entry(i)).collect();
        Matrix::from_diagonal(&diag)
    }

    /// `G w`
    pub fn lower(&self, w: &[S]) -> Vector<S> {
        w.iter().enumerate().map(|(i, x)| if i < self.signature.p { x.clone() } else { -x.clone() }).collect()
    }

    pub(crate) fn check_dim(&self, w: &[S]) -> Result<()> {
        if w.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: w.len() });
        }
        Ok(())
    }

    /// `Q(w) = Σ G_ii w_i²`
    pub fn eval_q(&self, w: &[S]) -> Result<S> {
        self.check_dim(w)?;
        Ok(self.q_unchecked(w))
    }

    pub(crate) fn q_unchecked(&self, w: &[S]) -> S {
        self.b_unchecked(w, w)
    }

    /// Symmetric bilinear form `B(x, y)` with `B(w, w) = Q(w)`.
    pub fn bilinear(&self, x: &[S], y: &[S]) -> Result<S> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.b_unchecked(x, y))
    }

    pub(crate) fn b_unchecked(&self, x: &[S], y: &[S]) -> S {
        let p = self.signature.p;
        x.iter().zip(y).enumerate().fold(S::zero(), |acc, (i, (a, b))| {
            let t = a.clone() * b.clone();
            if i < p {
                acc + t
            } else {
                acc - t
            }
        })
    }

    /// Squared interval `S²_{x,y} = Q(x − y)`; may be positive, negative or null.
    pub fn interval(&self, x: &[S], y: &[S]) -> Result<S> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        Ok(self.q_unchecked(&linalg::sub(x, y)))
    }

    /// Positive iff `Q(w) > τ‖w‖²`, Negative iff `Q(w) < −τ‖w‖²`, else Null.
    pub fn vector_sign(&self, w: &[S]) -> Result<VectorSign> {
        self.check_dim(w)?;
        Ok(self.sign_unchecked(w))
    }

    pub(crate) fn sign_unchecked(&self, w: &[S]) -> VectorSign {
        let q = self.q_unchecked(w);
        let threshold = self.tolerance.clone() * linalg::norm_sq(w);
        if q > threshold {
            VectorSign::Positive
        } else if q < -threshold {
            VectorSign::Negative
        } else {
            VectorSign::Null
        }
    }

    /// Image of `x` under the reflection supported by `u`:
    /// `x − 2 B(x,u)/Q(u) · u`.
    pub fn reflect(&self, u: &[S], x: &[S]) -> Result<Vector<S>> {
        self.check_dim(u)?;
        self.check_dim(x)?;
        if self.sign_unchecked(u) == VectorSign::Null {
            return Err(Error::NullSupportingVector);
        }
        Ok(self.reflect_unchecked(u, &self.q_unchecked(u), x))
    }

    pub(crate) fn reflect_unchecked(&self, u: &[S], qu: &S, x: &[S]) -> Vector<S> {
        let k = S::from_int(2) * self.b_unchecked(x, u) / qu.clone();
        linalg::sub(x, &linalg::scale(u, &k))
    }

    /// Matrix `I − 2 u uᵀ G / Q(u)`.
    pub fn reflection_matrix(&self, u: &[S]) -> Result<Matrix<S>> {
        self.check_dim(u)?;
        if self.sign_unchecked(u) == VectorSign::Null {
            return Err(Error::NullSupportingVector);
        }
        let k = S::from_int(2) / self.q_unchecked(u);
        let outer = Matrix::outer(u, &self.lower(u)).scale(&k);
        Ok(&Matrix::identity(self.dim()) - &outer)
    }

    /// The reflection supported by `u` as an element of `O(p,q)`.
    pub fn reflection(&self, u: &[S]) -> Result<OrthogonalMap<S>> {
        let m = self.reflection_matrix(u)?;
        Ok(OrthogonalMap::from_parts_unchecked(self.clone(), m))
    }

    /// Same space over `f64`, keeping the float tolerance.
    pub fn to_f64(&self) -> QuadraticSpace<f64> {
        QuadraticSpace {
            signature: self.signature,
            tolerance: if S::EXACT { DEFAULT_TOLERANCE } else { self.tolerance_f64 },
            tolerance_f64: if S::EXACT { DEFAULT_TOLERANCE } else { self.tolerance_f64 },
        }
    }
}
