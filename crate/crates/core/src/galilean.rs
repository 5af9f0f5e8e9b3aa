//! Isometries of Newton–Cartan spacetime.
//!
//! An element is stored in the normal form `τ ∘ b ∘ q`: a spatial part
//! `q = (σ, Ω)` acting as `(t, x) ↦ (σt, Ωx)`, a boost `b_v : (t, x) ↦
//! (t, x + t v)` and a translation `τ : (t, x) ↦ (t + s, x + z)`. Together
//! they act as `(t, x) ↦ (σt + s, Ωx + σt v + z)`.
//!
//! Newton–Cartan spacetime carries two degenerate metrics rather than a
//! quadratic form, so `Ω` is never factored into reflections of a
//! quadratic space. The label is read off `(σ, det Ω)`; the tower built by
//! [`galilean_tower`] re-derives it from the factor groups.

use crate::affine::TranslationGroup;
use crate::classify::{
    finite_classification, Classification, ClassifiedGroup, DirectProduct, SemidirectElement, SemidirectProduct,
};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix, Vector};
use crate::orthogonal::OrthogonalMap;
use crate::quadspace::QuadraticSpace;
use crate::scalar::Scalar;

pub type Vec3<S> = [S; 3];

fn to3<S: Clone>(v: Vec<S>) -> Vec3<S> {
    match <[S; 3]>::try_from(v) {
        Ok(a) => a,
        Err(v) => panic!("expected a 3-vector, got length {}", v.len()),
    }
}

fn add3<S: Scalar>(a: &Vec3<S>, b: &Vec3<S>) -> Vec3<S> {
    to3(linalg::add(a, b))
}

fn scale3<S: Scalar>(a: &Vec3<S>, k: &S) -> Vec3<S> {
    to3(linalg::scale(a, k))
}

fn sign_scalar<S: Scalar>(sigma: i8) -> S {
    S::from_int(i64::from(sigma))
}

#[derive(Clone, Debug, PartialEq)]
pub struct Event<S> {
    pub t: S,
    pub x: Vec3<S>,
}

impl<S: Scalar> Event<S> {
    pub fn new(t: S, x: Vec3<S>) -> Self {
        Event { t, x }
    }

    pub fn approx_eq(&self, other: &Self, tol: &S) -> bool {
        (self.t.clone() - other.t.clone()).abs() <= *tol && linalg::approx_eq_vec(&self.x, &other.x, tol)
    }
}

/// Rotation by `angle` about `axis` (normalized internally).
pub fn axis_angle(axis: &Vec3<f64>, angle: f64) -> Matrix<f64> {
    let n = linalg::norm_sq(axis).sqrt();
    let [x, y, z] = [axis[0] / n, axis[1] / n, axis[2] / n];
    let (s, c) = angle.sin_cos();
    let k = 1.0 - c;
    Matrix::from_rows(vec![
        vec![c + x * x * k, x * y * k - z * s, x * z * k + y * s],
        vec![y * x * k + z * s, c + y * y * k, y * z * k - x * s],
        vec![z * x * k - y * s, z * y * k + x * s, c + z * z * k],
    ])
    .expect("3x3")
}

/// `I − 2nnᵀ/‖n‖²`, the reflection in the plane orthogonal to `n`.
pub fn plane_reflection<S: Scalar>(n: &Vec3<S>) -> Matrix<S> {
    let k = S::from_int(2) / linalg::norm_sq(n);
    &Matrix::identity(3) - &Matrix::outer(n, n).scale(&k)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GalileanIsometry<S: Scalar> {
    pub sigma: i8,
    pub omega: Matrix<S>,
    pub v: Vec3<S>,
    pub s: S,
    pub z: Vec3<S>,
}

impl<S: Scalar> GalileanIsometry<S> {
    /// Checks `σ = ±1` and `ΩᵀΩ = I` within `tol` (exactly when `S` is exact).
    pub fn new(sigma: i8, omega: Matrix<S>, v: Vec3<S>, s: S, z: Vec3<S>, tol: f64) -> Result<Self> {
        if sigma != 1 && sigma != -1 {
            return Err(Error::InvalidParameter(format!("sigma must be ±1, got {sigma}")));
        }
        if omega.rows() != 3 || !omega.is_square() {
            return Err(Error::DimensionMismatch { expected: 3, found: omega.rows().max(omega.cols()) });
        }
        let deviation = (&omega.transpose() * &omega).max_abs_diff(&Matrix::identity(3));
        if !deviation.is_negligible(&S::tolerance(tol)) {
            return Err(Error::NotOrthogonal { deviation: deviation.to_f64_lossy(), tolerance: tol });
        }
        Ok(GalileanIsometry { sigma, omega, v, s, z })
    }

    fn zero3() -> Vec3<S> {
        [S::zero(), S::zero(), S::zero()]
    }

    pub fn identity() -> Self {
        Self::spatial(1, Matrix::identity(3))
    }

    /// `q = (σ, Ω)` with no boost or translation. `Ω` is trusted.
    pub fn spatial(sigma: i8, omega: Matrix<S>) -> Self {
        GalileanIsometry { sigma, omega, v: Self::zero3(), s: S::zero(), z: Self::zero3() }
    }

    pub fn time_reversal() -> Self {
        Self::spatial(-1, Matrix::identity(3))
    }

    pub fn parity() -> Self {
        Self::spatial(1, Matrix::identity(3).scale(&-S::one()))
    }

    pub fn parity_time_reversal() -> Self {
        Self::spatial(-1, Matrix::identity(3).scale(&-S::one()))
    }

    pub fn boost(v: Vec3<S>) -> Self {
        GalileanIsometry { v, ..Self::identity() }
    }

    pub fn translation(s: S, z: Vec3<S>) -> Self {
        GalileanIsometry { s, z, ..Self::identity() }
    }

    /// `(σt + s, Ωx + σt v + z)`
    pub fn act(&self, e: &Event<S>) -> Event<S> {
        let st = sign_scalar::<S>(self.sigma) * e.t.clone();
        let x = add3(&add3(&to3(self.omega.mul_vec(&e.x)), &scale3(&self.v, &st)), &self.z);
        Event { t: st + self.s.clone(), x }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        let s1 = sign_scalar::<S>(self.sigma);
        let omega_v2 = to3(self.omega.mul_vec(&other.v));
        let omega_z2 = to3(self.omega.mul_vec(&other.z));
        GalileanIsometry {
            sigma: self.sigma * other.sigma,
            omega: &self.omega * &other.omega,
            v: add3(&self.v, &scale3(&omega_v2, &s1)),
            s: self.s.clone() + s1.clone() * other.s.clone(),
            z: add3(&add3(&self.z, &omega_z2), &scale3(&self.v, &(s1 * other.s.clone()))),
        }
    }

    /// `(σ, Ωᵀ, −σΩᵀv, −σs, −Ωᵀ(z − s v))`
    pub fn inverse(&self) -> Self {
        let sg = sign_scalar::<S>(self.sigma);
        let ot = self.omega.transpose();
        let z_minus_sv = to3(linalg::sub(&self.z, &linalg::scale(&self.v, &self.s)));
        GalileanIsometry {
            sigma: self.sigma,
            v: scale3(&to3(ot.mul_vec(&self.v)), &-sg.clone()),
            s: -(sg * self.s.clone()),
            z: scale3(&to3(ot.mul_vec(&z_minus_sv)), &-S::one()),
            omega: ot,
        }
    }

    /// `h ∘ self ∘ h⁻¹`
    pub fn conjugated_by(&self, h: &Self) -> Self {
        h.compose(self).compose(&h.inverse())
    }

    pub fn det_omega(&self) -> S {
        self.omega.determinant()
    }

    /// `(σ = −1, det Ω < 0)` as bits; a homomorphism onto `(Z/2)²`.
    pub fn chi(&self) -> [u8; 2] {
        [u8::from(self.sigma < 0), u8::from(self.det_omega() < S::zero())]
    }

    pub fn classify(&self) -> Classification {
        if self.chi() == [0, 0] {
            Classification::Direct
        } else {
            Classification::Indirect
        }
    }

    pub fn spatial_part(&self) -> Self {
        Self::spatial(self.sigma, self.omega.clone())
    }

    pub fn is_identity(&self, tol: &S) -> bool {
        self.approx_eq(&Self::identity(), tol)
    }

    pub fn approx_eq(&self, other: &Self, tol: &S) -> bool {
        self.sigma == other.sigma
            && self.omega.approx_eq(&other.omega, tol)
            && linalg::approx_eq_vec(&self.v, &other.v, tol)
            && (self.s.clone() - other.s.clone()).abs() <= *tol
            && linalg::approx_eq_vec(&self.z, &other.z, tol)
    }

    /// Witnesses `[τ(s/2, z/2), b_{v/2}, W₁, …]` with `Wᵢ` spatial rotations
    /// whose squares compose to `Ω`; trivial factors are dropped.
    pub fn direct_witness(&self, tol: f64) -> Result<Vec<GalileanIsometry<S>>> {
        if self.classify() == Classification::Indirect {
            return Err(Error::WitnessUnavailable);
        }
        let is_zero = |v: &[S]| v.iter().all(|x| x.is_zero());
        let mut out = Vec::new();
        if !self.s.is_zero() || !is_zero(&self.z) {
            out.push(Self::translation(self.s.half(), to3(self.z.iter().map(Scalar::half).collect())));
        }
        if !is_zero(&self.v) {
            out.push(Self::boost(to3(self.v.iter().map(Scalar::half).collect())));
        }
        let space = QuadraticSpace::<S>::with_tolerance(3, 0, tol)?;
        let q = OrthogonalMap::new(space, self.omega.clone())?;
        for w in q.direct_witness()? {
            out.push(Self::spatial(1, w.into_matrix()));
        }

        let product = out.iter().fold(Self::identity(), |acc, w| acc.compose(&w.compose(w)));
        let scale = self.v.iter().chain(&self.z).chain([&self.s]).map(|x| x.to_f64_lossy().abs()).fold(1.0, f64::max);
        if !product.approx_eq(self, &S::tolerance((tol * 10.0).max(1e-10) * scale)) {
            return Err(Error::NumericalBreakdown {
                context: "Galilean witness does not square to the element".into(),
                tolerance: tol,
            });
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> GalileanIsometry<f64> {
        let f = |v: &Vec3<S>| -> Vec3<f64> { [v[0].to_f64_lossy(), v[1].to_f64_lossy(), v[2].to_f64_lossy()] };
        GalileanIsometry {
            sigma: self.sigma,
            omega: self.omega.map(|x| x.to_f64_lossy()),
            v: f(&self.v),
            s: self.s.to_f64_lossy(),
            z: f(&self.z),
        }
    }
}

/// The full Galilean group with the closed-form label.
#[derive(Clone, Copy, Debug)]
pub struct GalileanGroup {
    pub tolerance: f64,
}

impl ClassifiedGroup for GalileanGroup {
    type Element = GalileanIsometry<f64>;

    fn compose(&self, g: &Self::Element, h: &Self::Element) -> Self::Element {
        g.compose(h)
    }

    fn inverse(&self, g: &Self::Element) -> Self::Element {
        g.inverse()
    }

    fn identity(&self) -> Self::Element {
        GalileanIsometry::identity()
    }

    fn equal(&self, g: &Self::Element, h: &Self::Element, tol: f64) -> bool {
        g.approx_eq(h, &tol)
    }

    fn classify(&self, g: &Self::Element) -> Result<Classification> {
        Ok(g.classify())
    }

    fn witness(&self, g: &Self::Element) -> Option<Result<Vec<Self::Element>>> {
        Some(g.direct_witness(self.tolerance))
    }
}

/// Element of `{I, P, T, PT}`: signs applied to time and to space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct KleinElement {
    pub time_sign: i8,
    pub space_sign: i8,
}

impl KleinElement {
    pub const I: KleinElement = KleinElement { time_sign: 1, space_sign: 1 };
    pub const P: KleinElement = KleinElement { time_sign: 1, space_sign: -1 };
    pub const T: KleinElement = KleinElement { time_sign: -1, space_sign: 1 };
    pub const PT: KleinElement = KleinElement { time_sign: -1, space_sign: -1 };
    pub const ALL: [KleinElement; 4] = [Self::I, Self::P, Self::T, Self::PT];

    pub fn name(&self) -> &'static str {
        match (self.time_sign, self.space_sign) {
            (1, 1) => "I",
            (1, _) => "P",
            (_, 1) => "T",
            _ => "PT",
        }
    }

    pub fn compose(&self, other: &Self) -> Self {
        KleinElement { time_sign: self.time_sign * other.time_sign, space_sign: self.space_sign * other.space_sign }
    }
}

/// `{I, P, T, PT}` classified by its own square closure.
#[derive(Clone, Copy, Debug, Default)]
pub struct KleinGroup;

impl ClassifiedGroup for KleinGroup {
    type Element = KleinElement;

    fn compose(&self, g: &KleinElement, h: &KleinElement) -> KleinElement {
        g.compose(h)
    }

    fn inverse(&self, g: &KleinElement) -> KleinElement {
        *g
    }

    fn identity(&self) -> KleinElement {
        KleinElement::I
    }

    fn equal(&self, g: &KleinElement, h: &KleinElement, _tol: f64) -> bool {
        g == h
    }

    fn classify(&self, g: &KleinElement) -> Result<Classification> {
        let labels = finite_classification(&KleinElement::ALL, KleinElement::compose, |a, b| a == b)?;
        let i = KleinElement::ALL.iter().position(|k| k == g).expect("all four elements listed");
        Ok(labels[i])
    }

    fn witness(&self, g: &KleinElement) -> Option<Result<Vec<KleinElement>>> {
        Some(if *g == KleinElement::I { Ok(Vec::new()) } else { Err(Error::WitnessUnavailable) })
    }
}

/// `SO(3)`. Every rotation is the square of its half-angle rotation.
#[derive(Clone, Copy, Debug)]
pub struct RotationGroup {
    pub tolerance: f64,
}

impl ClassifiedGroup for RotationGroup {
    type Element = Matrix<f64>;

    fn compose(&self, g: &Matrix<f64>, h: &Matrix<f64>) -> Matrix<f64> {
        g * h
    }

    fn inverse(&self, g: &Matrix<f64>) -> Matrix<f64> {
        g.transpose()
    }

    fn identity(&self) -> Matrix<f64> {
        Matrix::identity(3)
    }

    fn equal(&self, g: &Matrix<f64>, h: &Matrix<f64>, tol: f64) -> bool {
        g.approx_eq(h, &tol)
    }

    fn classify(&self, _g: &Matrix<f64>) -> Result<Classification> {
        Ok(Classification::Direct)
    }

    fn witness(&self, g: &Matrix<f64>) -> Option<Result<Vec<Matrix<f64>>>> {
        let run = || -> Result<Vec<Matrix<f64>>> {
            let space = QuadraticSpace::with_tolerance(3, 0, self.tolerance)?;
            Ok(OrthogonalMap::new(space, g.clone())?
                .direct_witness()?
                .into_iter()
                .map(OrthogonalMap::into_matrix)
                .collect())
        };
        Some(run())
    }
}

pub type SpatialElement = SemidirectElement<KleinElement, Matrix<f64>>;
pub type LinearElement = SemidirectElement<Vector<f64>, SpatialElement>;
pub type TowerElement = SemidirectElement<Vector<f64>, LinearElement>;

type BoostAction = fn(&SpatialElement, &Vector<f64>) -> Vector<f64>;
type TranslationAction = fn(&LinearElement, &Vector<f64>) -> Vector<f64>;

/// `Q = K × SO(3)`
pub type SpatialGroup = DirectProduct<KleinGroup, RotationGroup>;
/// `L = B ⋊ Q`
pub type LinearGalileanGroup = SemidirectProduct<TranslationGroup, SpatialGroup, BoostAction>;
/// `GAL = T ⋊ L`
pub type GalileanTower = SemidirectProduct<TranslationGroup, LinearGalileanGroup, TranslationAction>;

fn spatial_sign_and_matrix(q: &SpatialElement) -> (f64, Matrix<f64>) {
    (f64::from(q.n.time_sign), q.h.scale(&f64::from(q.n.space_sign)))
}

/// `q b_v q⁻¹ = b_{σΩv}`
fn boost_action(q: &SpatialElement, v: &Vector<f64>) -> Vector<f64> {
    let (sigma, omega) = spatial_sign_and_matrix(q);
    linalg::scale(&omega.mul_vec(v), &sigma)
}

/// `l τ(s, z) l⁻¹ = τ(σs, Ωz + σ s v)` for `l = b_v ∘ q`.
fn translation_action(l: &LinearElement, sz: &Vector<f64>) -> Vector<f64> {
    let (sigma, omega) = spatial_sign_and_matrix(&l.h);
    let s = sz[0];
    let z = omega.mul_vec(&sz[1..]);
    let mut out = vec![sigma * s];
    out.extend(linalg::add(&z, &linalg::scale(&l.n, &(sigma * s))));
    out
}

/// `T ⋊ (B ⋊ (K × SO(3)))` assembled from the product combinators.
pub fn galilean_tower(tolerance: f64) -> GalileanTower {
    let spatial = DirectProduct::new(KleinGroup, RotationGroup { tolerance });
    let linear = SemidirectProduct::new(TranslationGroup::new(3), spatial, boost_action as BoostAction);
    SemidirectProduct::new(TranslationGroup::new(4), linear, translation_action as TranslationAction)
}

impl GalileanIsometry<f64> {
    /// Splits `Ω = ε R` with `ε = sign det Ω`, `R ∈ SO(3)`.
    pub fn to_tower(&self) -> TowerElement {
        let eps = if self.det_omega() < 0.0 { -1i8 } else { 1 };
        let k = KleinElement { time_sign: self.sigma, space_sign: eps };
        let r = self.omega.scale(&f64::from(eps));
        let mut sz = vec![self.s];
        sz.extend_from_slice(&self.z);
        SemidirectElement { n: sz, h: SemidirectElement { n: self.v.to_vec(), h: SemidirectElement { n: k, h: r } } }
    }

    pub fn from_tower(e: &TowerElement) -> Self {
        let (sigma, omega) = spatial_sign_and_matrix(&e.h.h);
        GalileanIsometry { sigma: sigma as i8, omega, v: to3(e.h.n.clone()), s: e.n[0], z: to3(e.n[1..].to_vec()) }
    }
}
