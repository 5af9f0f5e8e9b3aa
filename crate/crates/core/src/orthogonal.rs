//! Elements of the orthogonal group `O(p,q)`.
//!
//! Classification factors a map into reflections and reads off the parity
//! pair `(k mod 2, #negative supports mod 2)`. The map is direct exactly when
//! both parities are even. Determinant and orthochronous tests are only ever
//! used as cross-checks.

use std::ops::Add;

use crate::classify::{Classification, ClassifiedGroup};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::quadspace::{QuadraticSpace, VectorSign};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalMap<S: Scalar> {
    space: QuadraticSpace<S>,
    matrix: Matrix<S>,
}

/// `max |MᵀGM − G|`
pub fn membership_deviation<S: Scalar>(space: &QuadraticSpace<S>, m: &Matrix<S>) -> S {
    let g = space.metric();
    (&(&m.transpose() * &g) * m).max_abs_diff(&g)
}

/// True iff `M` is `n × n` and `‖MᵀGM − G‖_max` is within the space tolerance.
pub fn is_member<S: Scalar>(space: &QuadraticSpace<S>, m: &Matrix<S>) -> bool {
    m.rows() == space.dim() && m.is_square() && membership_deviation(space, m).is_negligible(space.tolerance())
}

impl<S: Scalar> OrthogonalMap<S> {
    pub fn new(space: QuadraticSpace<S>, matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: matrix.rows().max(matrix.cols()) });
        }
        let deviation = membership_deviation(&space, &matrix);
        if !deviation.is_negligible(space.tolerance()) {
            return Err(Error::NotOrthogonal { deviation: deviation.to_f64_lossy(), tolerance: space.tolerance_f64() });
        }
        Ok(OrthogonalMap { space, matrix })
    }

    pub(crate) fn from_parts_unchecked(space: QuadraticSpace<S>, matrix: Matrix<S>) -> Self {
        OrthogonalMap { space, matrix }
    }

    pub fn identity(space: QuadraticSpace<S>) -> Self {
        let n = space.dim();
        OrthogonalMap { space, matrix: Matrix::identity(n) }
    }

    /// Product `r(u₁) ⋯ r(u_k)` of reflections.
    pub fn from_reflections(space: QuadraticSpace<S>, supports: &[Vector<S>]) -> Result<Self> {
        let mut m = Matrix::identity(space.dim());
        for u in supports {
            m = &m * &space.reflection_matrix(u)?;
        }
        Ok(OrthogonalMap { space, matrix: m })
    }

    pub fn space(&self) -> &QuadraticSpace<S> {
        &self.space
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.matrix
    }

    pub fn apply(&self, x: &[S]) -> Result<Vector<S>> {
        self.space.check_dim(x)?;
        Ok(self.matrix.mul_vec(x))
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch);
        }
        Ok(OrthogonalMap { space: self.space.clone(), matrix: &self.matrix * &other.matrix })
    }

    /// `M⁻¹ = G Mᵀ G`
    pub fn inverse(&self) -> Self {
        let g = self.space.metric();
        OrthogonalMap { space: self.space.clone(), matrix: &(&g * &self.matrix.transpose()) * &g }
    }

    pub fn approx_eq(&self, other: &Self, tol: &S) -> bool {
        self.space == other.space && self.matrix.approx_eq(&other.matrix, tol)
    }

    pub fn is_identity(&self) -> bool {
        self.matrix.is_identity(self.space.tolerance())
    }

    pub fn determinant(&self) -> S {
        self.matrix.determinant()
    }

    pub fn to_f64(&self) -> OrthogonalMap<f64> {
        OrthogonalMap { space: self.space.to_f64(), matrix: self.matrix.map(|x| x.to_f64_lossy()) }
    }

    /// Cartan–Dieudonné factorization with pivots in index order.
    pub fn decompose(&self) -> Result<ReflectionFactorization<S>> {
        let order: Vec<usize> = (0..self.space.dim()).collect();
        self.decompose_with_order(&order)
    }

    /// Factorization processing the basis vectors in the given order.
    ///
    /// At each pivot `e` with current image `x ≠ e`, the support `x − e`
    /// sends `x` to `e` in one reflection; the pair `x + e`, `e` does it in
    /// two. Whichever of `x − e`, `x + e` has the larger `|Q|` is used, and
    /// since `Q(x − e) + Q(x + e) = 4 Q(e)` at least one is anisotropic.
    /// Both supports are orthogonal to the pivots already fixed, so the
    /// procedure terminates after at most `2n` reflections.
    pub fn decompose_with_order(&self, order: &[usize]) -> Result<ReflectionFactorization<S>> {
        let n = self.space.dim();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::InvalidParameter(format!("pivot order must be a permutation of 0..{n}")));
        }
        let space = &self.space;
        let tol = space.tolerance();
        let mut current = self.matrix.clone();
        let mut supports: Vec<Vector<S>> = Vec::with_capacity(2 * n);

        for &i in order {
            let e = linalg::basis_vector::<S>(n, i);
            let x = current.column(i);
            if linalg::approx_eq_vec(&x, &e, tol) {
                continue;
            }
            let minus = linalg::sub(&x, &e);
            let plus = linalg::add(&x, &e);
            let minus_ok = space.sign_unchecked(&minus) != VectorSign::Null;
            let plus_ok = space.sign_unchecked(&plus) != VectorSign::Null;
            let use_minus = minus_ok && (!plus_ok || space.q_unchecked(&minus).abs() >= space.q_unchecked(&plus).abs());
            let step: Vec<Vector<S>> = if use_minus {
                vec![minus]
            } else if plus_ok {
                // r(e) · r(x+e) sends x to e, so the factor contributes r(x+e) · r(e).
                vec![plus, e]
            } else {
                return Err(Error::NumericalBreakdown {
                    context: format!("pivot {i}: both x−e and x+e are isotropic"),
                    tolerance: space.tolerance_f64(),
                });
            };
            for u in &step {
                let u = normalize_support(space, u);
                let qu = space.q_unchecked(&u);
                let cols: Vec<Vector<S>> =
                    (0..n).map(|j| space.reflect_unchecked(&u, &qu, &current.column(j))).collect();
                current = Matrix::from_columns(&cols);
            }
            supports.extend(step.iter().map(|u| normalize_support(space, u)));
        }

        let residual = current.max_abs_diff(&Matrix::identity(n));
        let residual_tol = if S::EXACT { S::zero() } else { S::tolerance(space.tolerance_f64().sqrt()) };
        if !residual.is_negligible(&residual_tol) {
            return Err(Error::NumericalBreakdown {
                context: format!("elimination left residual {:e}", residual.to_f64_lossy()),
                tolerance: space.tolerance_f64(),
            });
        }
        let signs = supports.iter().map(|u| space.sign_unchecked(u)).collect();
        Ok(ReflectionFactorization { supports, signs })
    }

    /// Parity pair of any reflection factorization, cross-checked against
    /// the sign of the determinant.
    pub fn parity_pair(&self) -> Result<ParityPair> {
        let pair = self.decompose()?.parity_pair();
        let det_negative = self.determinant() < S::zero();
        if det_negative != (pair.total_parity == 1) {
            return Err(Error::InternalInconsistency(format!(
                "reflection count parity {} disagrees with determinant sign",
                pair.total_parity
            )));
        }
        Ok(pair)
    }

    pub fn classify(&self) -> Result<Classification> {
        Ok(self.parity_pair()?.classification())
    }

    /// Maps `W₁ … W_m` with `W₁² ⋯ W_m² = M`.
    ///
    /// Reflections are reordered (sign-preserving) so that supports of equal
    /// sign are adjacent, then taken in pairs. Each pair acts on the plane
    /// its supports span and as the identity on the orthogonal complement;
    /// its in-plane square root extends by the identity.
    pub fn direct_witness(&self) -> Result<Vec<OrthogonalMap<S>>> {
        let factors = self.decompose()?;
        if factors.parity_pair().classification() != Classification::Direct {
            return Err(Error::WitnessUnavailable);
        }
        let space = &self.space;
        let sorted = factors.sorted_by_sign(space);
        let mut witnesses = Vec::new();
        for pair in sorted.chunks(2) {
            let [u1, u2] = pair else {
                return Err(Error::InternalInconsistency("odd number of supports in a direct map".into()));
            };
            witnesses.extend(pair_square_roots(space, u1, u2)?);
        }

        let mut product = Matrix::identity(space.dim());
        for w in &witnesses {
            product = &product * &(&w.matrix * &w.matrix);
        }
        let err = product.max_abs_diff(&self.matrix);
        if !err.is_negligible(&reconstruction_tolerance(space, &self.matrix)) {
            return Err(Error::NumericalBreakdown {
                context: format!("squared witnesses miss the map by {:e}", err.to_f64_lossy()),
                tolerance: space.tolerance_f64(),
            });
        }
        Ok(witnesses)
    }
}

fn reconstruction_tolerance<S: Scalar>(space: &QuadraticSpace<S>, m: &Matrix<S>) -> S {
    if S::EXACT {
        S::zero()
    } else {
        let scale = m.max_abs().to_f64_lossy().max(1.0);
        S::tolerance((space.tolerance_f64() * 10.0).max(1e-10) * scale * scale)
    }
}

/// Float supports are rescaled to `|Q(u)| = 1`; exact ones are left alone.
fn normalize_support<S: Scalar>(space: &QuadraticSpace<S>, u: &[S]) -> Vector<S> {
    if S::EXACT {
        return u.to_vec();
    }
    match space.q_unchecked(u).abs().sqrt() {
        Some(r) if !r.is_zero() => linalg::scale(u, &(S::one() / r)),
        _ => u.to_vec(),
    }
}

/// Square roots for the product `r(u₁) r(u₂)` of two same-sign reflections.
///
/// With `U = [u₁ u₂]` and Gram matrix `S = UᵀGU`, maps of the form
/// `I + U X UᵀG` multiply like the 2×2 matrices `I + X S`, so the square
/// root is taken in 2×2 and lifted back.
fn pair_square_roots<S: Scalar>(space: &QuadraticSpace<S>, u1: &[S], u2: &[S]) -> Result<Vec<OrthogonalMap<S>>> {
    let two = S::from_int(2);
    let q1 = space.q_unchecked(u1);
    let q2 = space.q_unchecked(u2);
    let b12 = space.b_unchecked(u1, u2);
    let gram = Matrix::from_rows(vec![vec![q1.clone(), b12.clone()], vec![b12.clone(), q2.clone()]]).expect("2x2");
    let a = two.clone() / q1;
    let b = two.clone() / q2;
    let c = Matrix::from_rows(vec![vec![-a.clone(), a * b.clone() * b12], vec![S::zero(), -b]]).expect("2x2");
    let i2 = Matrix::<S>::identity(2);
    let t = &i2 + &(&c * &gram);
    let tol = space.tolerance();
    let gram_inv = gram.inverse(tol);
    let det_gram = gram.determinant();

    let lift = |d: &Matrix<S>| -> OrthogonalMap<S> {
        let u = Matrix::from_columns(&[u1.to_vec(), u2.to_vec()]);
        let ug = &u.transpose() * &space.metric();
        let m = &Matrix::identity(space.dim()) + &(&(&u * d) * &ug);
        OrthogonalMap::from_parts_unchecked(space.clone(), m)
    };
    let breakdown = |what: &str| Error::NumericalBreakdown {
        context: format!("witness pairing plane: {what}"),
        tolerance: space.tolerance_f64(),
    };

    // Rotation by nearly π: split off a quarter turn J (J² = −I, JᵀSJ = S).
    if det_gram > S::zero() && t.trace() < -S::one() {
        let gram_inv = gram_inv.ok_or_else(|| breakdown("singular Gram matrix"))?;
        let root_det = det_gram
            .sqrt()
            .ok_or_else(|| Error::WitnessNotRepresentable(format!("sqrt of Gram determinant {det_gram}")))?;
        let k = Matrix::from_rows(vec![vec![S::zero(), -S::one()], vec![S::one(), S::zero()]]).expect("2x2");
        let j = (&k * &gram).scale(&(S::one() / root_det));
        let rest = &(-&j) * &t;
        let mut out = Vec::with_capacity(2);
        for target in [j, rest] {
            let root = principal_sqrt_2x2(&target).ok_or_else(|| breakdown("quarter-turn split"))?;
            out.push(lift(&(&(&root? - &i2) * &gram_inv)));
        }
        return Ok(out);
    }

    let root = principal_sqrt_2x2(&t).ok_or_else(|| breakdown("trace at −2"))??;
    let d = match gram_inv {
        Some(inv) => &(&root - &i2) * &inv,
        None => {
            // Degenerate plane: N = CS is nilpotent, so √(I+N) = I + N/2 − N²/8
            // and the root is I + U(C/2 − CSC/8)UᵀG.
            let trace_gap = t.trace() - two.clone();
            if !trace_gap.is_negligible(&S::tolerance(space.tolerance_f64().sqrt())) {
                return Err(breakdown("degenerate plane with non-unipotent product"));
            }
            let csc = &(&c * &gram) * &c;
            &c.scale(&(S::one() / two)) - &csc.scale(&(S::one() / S::from_int(8)))
        }
    };
    Ok(vec![lift(&d)])
}

/// `(T + I)/√(tr T + 2)` for a 2×2 `T` with determinant 1. `None` when the
/// trace is at (or numerically indistinguishable from) −2.
fn principal_sqrt_2x2<S: Scalar>(t: &Matrix<S>) -> Option<Result<Matrix<S>>> {
    let c2 = t.trace() + S::from_int(2);
    let floor = S::tolerance(1e-12);
    if c2 <= floor || c2.is_zero() {
        return None;
    }
    let root = match c2.sqrt() {
        Some(c) => c,
        None => return Some(Err(Error::WitnessNotRepresentable(format!("sqrt of trace + 2 = {c2}")))),
    };
    Some(Ok((t + &Matrix::identity(2)).scale(&(S::one() / root))))
}

/// Supports `u₁ … u_k` with `M = r(u₁) ⋯ r(u_k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ReflectionFactorization<S> {
    pub supports: Vec<Vector<S>>,
    pub signs: Vec<VectorSign>,
}

impl<S: Scalar> ReflectionFactorization<S> {
    pub fn len(&self) -> usize {
        self.supports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.supports.is_empty()
    }

    pub fn reconstruct(&self, space: &QuadraticSpace<S>) -> Result<Matrix<S>> {
        Ok(OrthogonalMap::from_reflections(space.clone(), &self.supports)?.into_matrix())
    }

    pub fn negative_count(&self) -> usize {
        self.signs.iter().filter(|s| **s == VectorSign::Negative).count()
    }

    pub fn parity_pair(&self) -> ParityPair {
        ParityPair { total_parity: (self.len() % 2) as u8, negative_parity: (self.negative_count() % 2) as u8 }
    }

    /// Same product with all positive supports before all negative ones,
    /// using `r(u) r(v) = r(v) r(r_v(u))`.
    fn sorted_by_sign(&self, space: &QuadraticSpace<S>) -> Vec<Vector<S>> {
        let mut items: Vec<(Vector<S>, VectorSign)> =
            self.supports.iter().cloned().zip(self.signs.iter().copied()).collect();
        let mut swapped = true;
        while swapped {
            swapped = false;
            for i in 0..items.len().saturating_sub(1) {
                if items[i].1 == VectorSign::Negative && items[i + 1].1 == VectorSign::Positive {
                    let (u, su) = items[i].clone();
                    let (v, sv) = items[i + 1].clone();
                    let qv = space.q_unchecked(&v);
                    let moved = normalize_support(space, &space.reflect_unchecked(&v, &qv, &u));
                    items[i] = (v, sv);
                    items[i + 1] = (moved, su);
                    swapped = true;
                }
            }
        }
        items.into_iter().map(|(u, _)| u).collect()
    }
}

/// `(k mod 2, #negative supports mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ParityPair {
    pub total_parity: u8,
    pub negative_parity: u8,
}

impl ParityPair {
    pub fn new(total_parity: u8, negative_parity: u8) -> Self {
        ParityPair { total_parity: total_parity % 2, negative_parity: negative_parity % 2 }
    }

    pub fn classification(&self) -> Classification {
        if self.total_parity == 0 && self.negative_parity == 0 {
            Classification::Direct
        } else {
            Classification::Indirect
        }
    }

    pub fn as_array(&self) -> [u8; 2] {
        [self.total_parity, self.negative_parity]
    }
}

impl Add for ParityPair {
    type Output = ParityPair;
    fn add(self, rhs: ParityPair) -> ParityPair {
        ParityPair::new(self.total_parity + rhs.total_parity, self.negative_parity + rhs.negative_parity)
    }
}

/// `O(p,q)` of a fixed space as a [`ClassifiedGroup`].
#[derive(Clone, Debug)]
pub struct OrthogonalGroup<S: Scalar> {
    pub space: QuadraticSpace<S>,
}

impl<S: Scalar> OrthogonalGroup<S> {
    pub fn new(space: QuadraticSpace<S>) -> Self {
        OrthogonalGroup { space }
    }
}

impl<S: Scalar> ClassifiedGroup for OrthogonalGroup<S> {
    type Element = OrthogonalMap<S>;

    fn compose(&self, g: &OrthogonalMap<S>, h: &OrthogonalMap<S>) -> OrthogonalMap<S> {
        OrthogonalMap::from_parts_unchecked(self.space.clone(), &g.matrix * &h.matrix)
    }

    fn inverse(&self, g: &OrthogonalMap<S>) -> OrthogonalMap<S> {
        g.inverse()
    }

    fn identity(&self) -> OrthogonalMap<S> {
        OrthogonalMap::identity(self.space.clone())
    }

    fn equal(&self, g: &OrthogonalMap<S>, h: &OrthogonalMap<S>, tol: f64) -> bool {
        g.matrix.approx_eq(&h.matrix, &S::tolerance(tol))
    }

    fn classify(&self, g: &OrthogonalMap<S>) -> Result<Classification> {
        g.classify()
    }

    fn witness(&self, g: &OrthogonalMap<S>) -> Option<Result<Vec<OrthogonalMap<S>>>> {
        Some(g.direct_witness())
    }
}
