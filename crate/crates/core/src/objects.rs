//! Spacetime objects, their symmetries and chirality verdicts.
//!
//! A rigid body moving uniformly is summarized by its shape, axis, mass
//! center, velocity `ν` and spin `η`. Under `g = (σ, Ω, v, s, z)` these
//! transform as
//!
//! * axis: `Ωa` (the shape's polar direction),
//! * velocity: `ν′ = v + σΩν` (time-odd polar vector plus boost),
//! * spin: `η′ = σ det(Ω) Ωη` (time-odd axial vector),
//! * mass center at `t = 0`: `Ωx_c + z − sν′`,
//!
//! which is exactly the pushforward of the world tube `{(t, x_c + tν + w)}`
//! with `w` in the shape. Invariance is certified twice: the summary must be
//! fixed and density samples `ρ(e)`, `ρ(g⁻¹e)` must agree on a fixed grid.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::Matrix3;

use crate::affine::AffineIsometry;
use crate::classify::Classification;
use crate::error::{Error, Result};
use crate::galilean::{plane_reflection, Event, GalileanIsometry, Vec3};
use crate::linalg::{self, Matrix, Vector};
use crate::orthogonal::{is_member, OrthogonalMap};
use crate::quadspace::QuadraticSpace;

pub const DEFAULT_MAX_POINTS: usize = 8;
pub const SAMPLE_GRID_SIZE: usize = 512;

fn dot3(a: &Vec3<f64>, b: &Vec3<f64>) -> f64 {
    linalg::dot(a, b)
}

fn sub3(a: &Vec3<f64>, b: &Vec3<f64>) -> Vec3<f64> {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add3(a: &Vec3<f64>, b: &Vec3<f64>) -> Vec3<f64> {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale3(a: &Vec3<f64>, k: f64) -> Vec3<f64> {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn norm3(a: &Vec3<f64>) -> f64 {
    dot3(a, a).sqrt()
}

fn mul3(m: &Matrix<f64>, a: &Vec3<f64>) -> Vec3<f64> {
    let r = m.mul_vec(a);
    [r[0], r[1], r[2]]
}

/// Solid right circular cone with its mass center at the origin of its
/// local frame: the apex sits `3h/4` along the axis, the base `h/4` behind.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConeShape {
    pub half_angle: f64,
    pub height: f64,
}

impl ConeShape {
    pub fn new(half_angle: f64, height: f64) -> Result<Self> {
        if !half_angle.is_finite()
            || half_angle <= 0.0
            || half_angle >= PI / 2.0
            || !height.is_finite()
            || height <= 0.0
        {
            return Err(Error::InvalidParameter(format!(
                "cone needs 0 < half_angle < π/2 and height > 0, got ({half_angle}, {height})"
            )));
        }
        Ok(ConeShape { half_angle, height })
    }

    /// Membership of the offset `w` from the mass center, axis `a` (unit).
    pub fn contains(&self, a: &Vec3<f64>, w: &Vec3<f64>, tol: f64) -> bool {
        let h = dot3(w, a);
        let apex = 0.75 * self.height;
        if h < -0.25 * self.height - tol || h > apex + tol {
            return false;
        }
        let radial = norm3(&sub3(w, &scale3(a, h)));
        radial <= (apex - h) * self.half_angle.tan() + tol
    }

    pub fn bounding_radius(&self) -> f64 {
        let base_radius = self.height * self.half_angle.tan();
        (0.75 * self.height).max((0.0625 * self.height * self.height + base_radius * base_radius).sqrt())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RigidBodySummary {
    pub axis: Vec3<f64>,
    pub base_point: Vec3<f64>,
    pub shape: ConeShape,
    pub nu: Vec3<f64>,
    pub eta: Vec3<f64>,
}

impl RigidBodySummary {
    /// Normalizes `axis`.
    pub fn new(
        axis: Vec3<f64>,
        base_point: Vec3<f64>,
        shape: ConeShape,
        nu: Vec3<f64>,
        eta: Vec3<f64>,
    ) -> Result<Self> {
        let n = norm3(&axis);
        if !n.is_finite() || n <= 0.0 {
            return Err(Error::InvalidParameter("cone axis must be a nonzero finite vector".into()));
        }
        Ok(RigidBodySummary { axis: scale3(&axis, 1.0 / n), base_point, shape, nu, eta })
    }

    /// Cone spinning about its own axis, mass center at the origin, moving
    /// with velocity `speed · a`. The axis is orthogonal to `(1, 1, 1)`.
    pub fn demo_cone(spin: f64, speed: f64) -> Self {
        let axis = [1.0, -1.0, 0.0];
        let shape = ConeShape { half_angle: PI / 6.0, height: 2.0 };
        let n = norm3(&axis);
        let a = scale3(&axis, 1.0 / n);
        RigidBodySummary { axis: a, base_point: [0.0; 3], shape, nu: scale3(&a, speed), eta: scale3(&a, spin) }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let close = |a: &Vec3<f64>, b: &Vec3<f64>| linalg::approx_eq_vec(a, b, &tol);
        close(&self.axis, &other.axis)
            && close(&self.base_point, &other.base_point)
            && close(&self.nu, &other.nu)
            && close(&self.eta, &other.eta)
            && (self.shape.half_angle - other.shape.half_angle).abs() <= tol
            && (self.shape.height - other.shape.height).abs() <= tol
    }
}

pub fn transform_summary(g: &GalileanIsometry<f64>, obj: &RigidBodySummary) -> RigidBodySummary {
    let sigma = f64::from(g.sigma);
    let det = g.det_omega().signum();
    let nu = add3(&g.v, &scale3(&mul3(&g.omega, &obj.nu), sigma));
    let base_point = sub3(&add3(&mul3(&g.omega, &obj.base_point), &g.z), &scale3(&nu, g.s));
    RigidBodySummary {
        axis: mul3(&g.omega, &obj.axis),
        base_point,
        shape: obj.shape,
        nu,
        eta: scale3(&mul3(&g.omega, &obj.eta), sigma * det),
    }
}

/// `ρ(e) ≠ 0`: the event lies inside the moving body.
pub fn world_tube_member(obj: &RigidBodySummary, e: &Event<f64>, tol: f64) -> bool {
    let center = add3(&obj.base_point, &scale3(&obj.nu, e.t));
    obj.shape.contains(&obj.axis, &sub3(&e.x, &center), tol)
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Halton points (bases 2, 3, 5, 7) mapped to `t ∈ [−1, 1]` and a box
/// aligned with the axis around the moving mass center, 15% larger than the
/// body in every direction. About a sixth of the samples land inside.
pub fn sample_grid(obj: &RigidBodySummary, seed: u64) -> Vec<Event<f64>> {
    let a = &obj.axis;
    let (b1, b2) = orthonormal_pair(a, &[1.0, 1.0, 1.0]);
    let h = obj.shape.height;
    let margin = 0.15 * h;
    let radius = h * obj.shape.half_angle.tan() + margin;
    let (lo, hi) = (-0.25 * h - margin, 0.75 * h + margin);
    let offset = seed.wrapping_mul(SAMPLE_GRID_SIZE as u64) + 1;
    (0..SAMPLE_GRID_SIZE as u64)
        .map(|k| {
            let i = offset + k;
            let t = 2.0 * radical_inverse(i, 2) - 1.0;
            let along = lo + (hi - lo) * radical_inverse(i, 3);
            let c1 = radius * (2.0 * radical_inverse(i, 5) - 1.0);
            let c2 = radius * (2.0 * radical_inverse(i, 7) - 1.0);
            let local = add3(&add3(&scale3(a, along), &scale3(&b1, c1)), &scale3(&b2, c2));
            Event::new(t, add3(&add3(&obj.base_point, &scale3(&obj.nu, t)), &local))
        })
        .collect()
}

/// Summary fixed by `g` and `ρ(e) = ρ(g⁻¹e)` on the sample grid.
pub fn is_invariant(g: &GalileanIsometry<f64>, obj: &RigidBodySummary, tol: f64, seed: u64) -> bool {
    transform_summary(g, obj).approx_eq(obj, tol) && density_agrees(g, obj, tol, seed)
}

/// Grid check alone: `ρ(e) = ρ(g⁻¹e)` for every sample.
pub fn density_agrees(g: &GalileanIsometry<f64>, obj: &RigidBodySummary, tol: f64, seed: u64) -> bool {
    let inv = g.inverse();
    sample_grid(obj, seed).iter().all(|e| world_tube_member(obj, e, tol) == world_tube_member(obj, &inv.act(e), tol))
}

/// Which spatial parts the chirality scan tries, and whether it may solve
/// for a boost.
#[derive(Clone, Debug, PartialEq)]
pub struct FamilySpec {
    /// `m`: rotations by `2πk/m` and reflection planes at angles `πk/m`.
    pub resolution: usize,
    pub rotations: bool,
    pub reflections: bool,
    /// Also try every spatial part composed with `−I`.
    pub with_inversion: bool,
    pub allow_boosts: bool,
    /// Projected onto the plane orthogonal to the axis to fix the first
    /// reflection normal.
    pub reference_normal: Vec3<f64>,
}

impl Default for FamilySpec {
    fn default() -> Self {
        FamilySpec {
            resolution: 8,
            rotations: true,
            reflections: true,
            with_inversion: true,
            allow_boosts: false,
            reference_normal: [1.0, 1.0, 1.0],
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.rotations {
            parts.push(format!("axial rotations by 2πk/{}", self.resolution));
        }
        if self.reflections {
            parts.push(format!("reflections in {} planes containing the axis", self.resolution));
        }
        let inv = if self.with_inversion { ", each also composed with −I" } else { "" };
        let boosts = if self.allow_boosts { "boost solved" } else { "no boost" };
        write!(f, "{}{inv}; time sign ±1; {boosts}; mass center fixed", parts.join(" and "))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub index: usize,
    pub label: String,
    pub element: GalileanIsometry<f64>,
}

fn orthonormal_pair(axis: &Vec3<f64>, reference: &Vec3<f64>) -> (Vec3<f64>, Vec3<f64>) {
    let mut b1 = sub3(reference, &scale3(axis, dot3(reference, axis)));
    if norm3(&b1) < 1e-8 {
        // Reference parallel to the axis: use the coordinate axis least aligned with it.
        let k = (0..3).min_by(|&i, &j| axis[i].abs().total_cmp(&axis[j].abs())).expect("three axes");
        let mut e = [0.0; 3];
        e[k] = 1.0;
        b1 = sub3(&e, &scale3(axis, dot3(&e, axis)));
    }
    let b1 = scale3(&b1, 1.0 / norm3(&b1));
    let b2 = [axis[1] * b1[2] - axis[2] * b1[1], axis[2] * b1[0] - axis[0] * b1[2], axis[0] * b1[1] - axis[1] * b1[0]];
    (b1, b2)
}

/// Candidates in scan order: spatial parts (rotations, then reflections,
/// then both again composed with `−I`), each with `σ = +1` then `σ = −1`.
/// Spatial parts act about the mass center; with boosts allowed the
/// velocity is matched by `v = ν − σΩν`.
pub fn candidate_family(obj: &RigidBodySummary, family: &FamilySpec) -> Result<Vec<Candidate>> {
    let m = family.resolution;
    if m == 0 || !(family.rotations || family.reflections) {
        return Err(Error::EmptyFamily);
    }
    let a = &obj.axis;
    let (b1, b2) = orthonormal_pair(a, &family.reference_normal);
    let mut spatial: Vec<(String, Matrix<f64>)> = Vec::new();
    if family.rotations {
        for k in 0..m {
            let angle = 2.0 * PI * k as f64 / m as f64;
            spatial.push((format!("rotation {k}/{m} turn about axis"), crate::galilean::axis_angle(a, angle)));
        }
    }
    if family.reflections {
        for k in 0..m {
            let phi = PI * k as f64 / m as f64;
            let n = add3(&scale3(&b1, phi.cos()), &scale3(&b2, phi.sin()));
            spatial.push((format!("reflection in axial plane {k}/{m}"), plane_reflection(&n)));
        }
    }
    if family.with_inversion {
        let inverted: Vec<_> = spatial.iter().map(|(l, o)| (format!("−I ∘ {l}"), o.scale(&-1.0))).collect();
        spatial.extend(inverted);
    }

    let mut out = Vec::with_capacity(2 * spatial.len());
    for (label, omega) in spatial {
        for sigma in [1i8, -1] {
            let s = f64::from(sigma);
            let v = if family.allow_boosts { sub3(&obj.nu, &scale3(&mul3(&omega, &obj.nu), s)) } else { [0.0; 3] };
            let z = sub3(&obj.base_point, &mul3(&omega, &obj.base_point));
            let label = if sigma < 0 { format!("T ∘ {label}") } else { label.clone() };
            out.push(Candidate {
                index: out.len(),
                label,
                element: GalileanIsometry { sigma, omega: omega.clone(), v, s: 0.0, z },
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub enum ChiralityVerdict {
    /// Invariant under an indirect isometry; definitive.
    Achiral { witness: Candidate },
    /// No indirect symmetry in the family; `family` describes what was tried.
    ChiralWithinFamily { family: String, candidates: usize },
    /// No indirect symmetry in the family, but a non-identity direct one.
    DirectSymmetricOnly { witness: Candidate, family: String },
}

impl ChiralityVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ChiralityVerdict::Achiral { .. } => "achiral",
            ChiralityVerdict::ChiralWithinFamily { .. } => "chiral_within_family",
            ChiralityVerdict::DirectSymmetricOnly { .. } => "direct_symmetric_only",
        }
    }

    pub fn is_achiral(&self) -> bool {
        matches!(self, ChiralityVerdict::Achiral { .. })
    }
}

/// Scans the family in index order; the first invariant indirect candidate
/// wins.
pub fn chirality_verdict(obj: &RigidBodySummary, family: &FamilySpec, tol: f64, seed: u64) -> Result<ChiralityVerdict> {
    let candidates = candidate_family(obj, family)?;
    let total = candidates.len();
    let mut first_direct: Option<Candidate> = None;
    for c in candidates {
        if c.element.is_identity(&tol) || !is_invariant(&c.element, obj, tol, seed) {
            continue;
        }
        match c.element.classify() {
            Classification::Indirect => {
                if !is_invariant(&c.element, obj, tol, seed) {
                    return Err(Error::InternalInconsistency("achiral witness failed re-check".into()));
                }
                return Ok(ChiralityVerdict::Achiral { witness: c });
            }
            Classification::Direct => {
                first_direct.get_or_insert(c);
            }
        }
    }
    let description = family.to_string();
    Ok(match first_direct {
        Some(witness) => ChiralityVerdict::DirectSymmetricOnly { witness, family: description },
        None => ChiralityVerdict::ChiralWithinFamily { family: description, candidates: total },
    })
}

fn check_size(n: usize, max_points: usize) -> Result<()> {
    if n > max_points {
        return Err(Error::TooLarge { size: n, max: max_points });
    }
    Ok(())
}

/// All permutations `π` with `labels[π(i)] == labels[i]`, identity first.
fn label_preserving_permutations<L: PartialEq>(labels: &[&L]) -> Vec<Vec<usize>> {
    fn extend<L: PartialEq>(labels: &[&L], used: &mut Vec<bool>, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let i = current.len();
        if i == labels.len() {
            out.push(current.clone());
            return;
        }
        for j in 0..labels.len() {
            if !used[j] && labels[j] == labels[i] {
                used[j] = true;
                current.push(j);
                extend(labels, used, current, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(labels, &mut vec![false; labels.len()], &mut Vec::new(), &mut out);
    out
}

/// Symmetries of a labelled point set in an affine quadratic space.
///
/// For each label-preserving correspondence the linear part is built on the
/// span of the difference vectors by successive reflections `x ↦ r(c − e)x`,
/// which fix the images already placed, then checked on every point.
/// Correspondences that need an isotropic `c − e` are skipped.
pub fn affine_point_symmetries<L: PartialEq>(
    space: &QuadraticSpace<f64>,
    points: &[(Vector<f64>, L)],
    max_points: usize,
    tol: f64,
) -> Result<Vec<AffineIsometry<f64>>> {
    check_size(points.len(), max_points)?;
    for (p, _) in points {
        if p.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: p.len() });
        }
    }
    let mut found = vec![AffineIsometry::identity(space.clone())];
    if points.is_empty() {
        return Ok(found);
    }
    let labels: Vec<&L> = points.iter().map(|(_, l)| l).collect();
    let diffs: Vec<Vector<f64>> = points.iter().map(|(p, _)| linalg::sub(p, &points[0].0)).collect();
    let basis = if points.len() > 1 {
        Matrix::from_columns(&diffs[1..]).independent_columns(&tol).into_iter().map(|k| k + 1).collect()
    } else {
        Vec::new()
    };

    for perm in label_preserving_permutations(&labels) {
        let y0 = &points[perm[0]].0;
        let mut m = Matrix::identity(space.dim());
        let mut ok = true;
        for &k in &basis {
            let target = linalg::sub(&points[perm[k]].0, y0);
            let current = m.mul_vec(&diffs[k]);
            let u = linalg::sub(&current, &target);
            if linalg::norm_sq(&u) <= tol * tol {
                continue;
            }
            match space.reflection_matrix(&u) {
                Ok(r) if space.eval_q(&u)?.abs() > tol * linalg::norm_sq(&u) => m = &r * &m,
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok || !is_member(space, &m) {
            continue;
        }
        let t = linalg::sub(y0, &m.mul_vec(&points[0].0));
        let g = AffineIsometry::new(OrthogonalMap::new(space.clone(), m)?, t)?;
        let maps_all = points
            .iter()
            .zip(&perm)
            .all(|((p, _), &j)| g.apply(p).map(|x| linalg::approx_eq_vec(&x, &points[j].0, &tol)).unwrap_or(false));
        if maps_all && !found.iter().any(|h| h.approx_eq(&g, &tol)) {
            found.push(g);
        }
    }
    Ok(found)
}

/// Orthogonal `Ω` with `Ω a_i ≈ b_i`; the best rotation and, when the data
/// leave a direction free, its mirror image as well.
fn procrustes(a: &[Vec3<f64>], b: &[Vec3<f64>], tol: f64) -> Vec<Matrix<f64>> {
    let mut h = Matrix3::<f64>::zeros();
    for (x, y) in a.iter().zip(b) {
        h += nalgebra::Vector3::from(*y) * nalgebra::Vector3::from(*x).transpose();
    }
    let svd = h.svd(true, true);
    let (Some(u), Some(vt)) = (svd.u, svd.v_t) else {
        return Vec::new();
    };
    let to_matrix = |m: Matrix3<f64>| Matrix::from_fn(3, 3, |i, j| m[(i, j)]);
    let base = u * vt;
    let mut out = vec![to_matrix(base)];
    let scale = svd.singular_values.max().max(1.0);
    let (k, smallest) = svd.singular_values.argmin();
    if smallest <= tol * scale {
        let mut flip = Matrix3::identity();
        flip[(k, k)] = -1.0;
        out.push(to_matrix(u * flip * vt));
    }
    out
}

/// Symmetries in the Galilean group of a labelled event set.
///
/// For each correspondence and time sign, `s` comes from the first event,
/// the boost is eliminated against an event at a different time, and `Ω`
/// is fitted by orthogonal Procrustes; every candidate is verified on all
/// events. When all events are simultaneous the boost is set to zero.
pub fn galilean_point_symmetries<L: PartialEq>(
    events: &[(Event<f64>, L)],
    max_points: usize,
    tol: f64,
) -> Result<Vec<GalileanIsometry<f64>>> {
    check_size(events.len(), max_points)?;
    let mut found = vec![GalileanIsometry::identity()];
    if events.is_empty() {
        return Ok(found);
    }
    let labels: Vec<&L> = events.iter().map(|(_, l)| l).collect();
    let e0 = &events[0].0;
    let pivot = (1..events.len()).find(|&j| (events[j].0.t - e0.t).abs() > tol);

    for perm in label_preserving_permutations(&labels) {
        let y = |i: usize| &events[perm[i]].0;
        for sigma in [1i8, -1] {
            let sg = f64::from(sigma);
            let s = y(0).t - sg * e0.t;
            if !(0..events.len()).all(|i| (sg * events[i].0.t + s - y(i).t).abs() <= tol) {
                continue;
            }
            // Δy_i = Ω Δx_i + Δt_i w with w = σv.
            let dx = |i: usize| sub3(&events[i].0.x, &e0.x);
            let dy = |i: usize| sub3(&y(i).x, &y(0).x);
            let dt = |i: usize| events[i].0.t - e0.t;
            let (a, b): (Vec<Vec3<f64>>, Vec<Vec3<f64>>) = (1..events.len())
                .map(|i| match pivot {
                    Some(j) => {
                        let r = dt(i) / dt(j);
                        (sub3(&dx(i), &scale3(&dx(j), r)), sub3(&dy(i), &scale3(&dy(j), r)))
                    }
                    None => (dx(i), dy(i)),
                })
                .unzip();
            for omega in procrustes(&a, &b, tol) {
                let w = match pivot {
                    Some(j) => scale3(&sub3(&dy(j), &mul3(&omega, &dx(j))), 1.0 / dt(j)),
                    None => [0.0; 3],
                };
                let z = sub3(&sub3(&y(0).x, &mul3(&omega, &e0.x)), &scale3(&w, e0.t));
                let Ok(g) = GalileanIsometry::new(sigma, omega, scale3(&w, sg), s, z, tol.max(1e-9)) else {
                    continue;
                };
                let maps_all = (0..events.len()).all(|i| g.act(&events[i].0).approx_eq(y(i), &tol));
                if maps_all && !found.iter().any(|h| h.approx_eq(&g, &tol)) {
                    found.push(g);
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galilean::axis_angle;
    use proptest::prelude::*;

    const TOL: f64 = 1e-9;

    fn static_cone() -> RigidBodySummary {
        RigidBodySummary::demo_cone(1.5, 0.0)
    }

    #[test]
    fn transform_examples() {
        let obj = RigidBodySummary::demo_cone(2.0, 0.7);
        assert_eq!(transform_summary(&GalileanIsometry::identity(), &obj), obj);

        let t = transform_summary(&GalileanIsometry::time_reversal(), &obj);
        assert_eq!(t.nu, scale3(&obj.nu, -1.0));
        assert_eq!(t.eta, scale3(&obj.eta, -1.0));
        assert_eq!((t.axis, t.base_point), (obj.axis, obj.base_point));

        let still = static_cone();
        let n = [1.0, 1.0, 1.0];
        let g = GalileanIsometry::spatial(-1, plane_reflection(&n));
        assert!(transform_summary(&g, &still).approx_eq(&still, 1e-15));
    }

    #[test]
    fn world_tube_examples() {
        let obj = static_cone();
        let apex = scale3(&obj.axis, 0.75 * obj.shape.height);
        assert!(world_tube_member(&obj, &Event::new(0.0, apex), TOL));
        assert!(!world_tube_member(&obj, &Event::new(0.0, [100.0, 0.0, 0.0]), TOL));
        let moving = RigidBodySummary::demo_cone(1.0, 0.8);
        for t in [-3.0, 0.5, 10.0] {
            let center = scale3(&moving.axis, 0.8 * t);
            assert!(world_tube_member(&moving, &Event::new(t, center), TOL));
        }
    }

    #[test]
    fn grid_hits_inside_and_outside() {
        let obj = static_cone();
        let grid = sample_grid(&obj, 0);
        assert_eq!(grid.len(), SAMPLE_GRID_SIZE);
        let inside = grid.iter().filter(|e| world_tube_member(&obj, e, TOL)).count();
        assert!(inside > 50 && inside < 300, "{inside}");
        assert_eq!(grid, sample_grid(&obj, 0));
        assert_ne!(grid, sample_grid(&obj, 1));
    }

    #[test]
    fn invariance_examples() {
        let obj = static_cone();
        let rot = GalileanIsometry::spatial(1, axis_angle(&obj.axis, 0.9));
        assert!(is_invariant(&rot, &obj, TOL, 0));
        assert!(!is_invariant(&GalileanIsometry::time_reversal(), &obj, TOL, 0));
        let witness = GalileanIsometry::spatial(-1, plane_reflection(&[1.0, 1.0, 1.0]));
        assert!(is_invariant(&witness, &obj, TOL, 0));
        // Parity alone moves the apex to the other side.
        assert!(!density_agrees(&GalileanIsometry::parity(), &obj, TOL, 0));
    }

    #[test]
    fn static_cone_is_achiral() {
        let v = chirality_verdict(&static_cone(), &FamilySpec::default(), TOL, 0).unwrap();
        let ChiralityVerdict::Achiral { witness } = v else { panic!("{v:?}") };
        assert_eq!(witness.element.sigma, -1);
        let n = [1.0 / 3f64.sqrt(); 3];
        assert!(witness.element.omega.approx_eq(&plane_reflection(&n), &1e-12));
    }

    #[test]
    fn translating_cone_verdicts() {
        let u = 0.6;
        let obj = RigidBodySummary::demo_cone(1.5, u);
        let on = FamilySpec { allow_boosts: true, ..FamilySpec::default() };
        let ChiralityVerdict::Achiral { witness } = chirality_verdict(&obj, &on, TOL, 0).unwrap() else { panic!() };
        assert!(linalg::approx_eq_vec(&witness.element.v, &scale3(&obj.axis, 2.0 * u), &1e-12));

        let off = chirality_verdict(&obj, &FamilySpec::default(), TOL, 0).unwrap();
        assert!(!off.is_achiral());
        // Axial rotations remain genuine direct symmetries.
        assert_eq!(off.name(), "direct_symmetric_only");
        let reflections_only = FamilySpec { rotations: false, ..FamilySpec::default() };
        assert_eq!(chirality_verdict(&obj, &reflections_only, TOL, 0).unwrap().name(), "chiral_within_family");
    }

    #[test]
    fn empty_family_rejected() {
        let spec = FamilySpec { resolution: 0, ..FamilySpec::default() };
        assert_eq!(chirality_verdict(&static_cone(), &spec, TOL, 0).unwrap_err(), Error::EmptyFamily);
    }

    #[test]
    fn point_set_examples() {
        let pair = [(Event::new(1.0, [0.0; 3]), 'a'), (Event::new(-1.0, [0.0; 3]), 'a')];
        let sym = galilean_point_symmetries(&pair, DEFAULT_MAX_POINTS, TOL).unwrap();
        assert!(sym.iter().any(|g| g.approx_eq(&GalileanIsometry::time_reversal(), &TOL)));

        // Enough events that boosts cannot absorb any spatial freedom.
        let distinct = [
            (Event::new(0.0, [0.0, 0.0, 0.0]), 1),
            (Event::new(1.0, [1.0, 0.0, 0.0]), 2),
            (Event::new(2.0, [0.0, 3.0, 1.0]), 3),
            (Event::new(0.5, [2.0, -1.0, 0.0]), 4),
            (Event::new(-1.0, [0.0, 0.0, 5.0]), 5),
        ];
        let sym = galilean_point_symmetries(&distinct, DEFAULT_MAX_POINTS, TOL).unwrap();
        assert_eq!(sym.len(), 1);

        let s = QuadraticSpace::new(2, 0).unwrap();
        let triangle = vec![(vec![0.0, 0.0], 1), (vec![2.0, 0.0], 2), (vec![0.5, 3.0], 3)];
        assert_eq!(affine_point_symmetries(&s, &triangle, DEFAULT_MAX_POINTS, TOL).unwrap().len(), 1);

        let square: Vec<(Vector<f64>, ())> =
            [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]].iter().map(|p| (p.to_vec(), ())).collect();
        let sym = affine_point_symmetries(&s, &square, DEFAULT_MAX_POINTS, TOL).unwrap();
        assert_eq!(sym.len(), 8);
        for g in &sym {
            for h in &sym {
                let gh = g.compose(h).unwrap();
                assert!(sym.iter().any(|k| k.approx_eq(&gh, &1e-12)));
            }
        }

        let many: Vec<(Vector<f64>, ())> = (0..9).map(|i| (vec![i as f64, 0.0], ())).collect();
        assert_eq!(
            affine_point_symmetries(&s, &many, DEFAULT_MAX_POINTS, TOL).unwrap_err(),
            Error::TooLarge { size: 9, max: 8 }
        );
    }

    #[test]
    fn indefinite_point_set() {
        // Two events swapped by a time reflection in signature (1,1).
        let s = QuadraticSpace::new(1, 1).unwrap();
        let pts = vec![(vec![1.0, 0.0], 'x'), (vec![-1.0, 0.0], 'x')];
        let sym = affine_point_symmetries(&s, &pts, DEFAULT_MAX_POINTS, TOL).unwrap();
        assert_eq!(sym.len(), 2);
        assert_eq!(sym[1].classify().unwrap(), Classification::Indirect);
    }

    fn arb_element() -> impl Strategy<Value = GalileanIsometry<f64>> {
        (
            prop_oneof![Just(1i8), Just(-1i8)],
            prop_oneof![Just(1.0f64), Just(-1.0f64)],
            prop::array::uniform3(-1.0f64..1.0),
            0.0f64..6.3,
            prop::array::uniform3(-2.0f64..2.0),
            -2.0f64..2.0,
            prop::array::uniform3(-2.0f64..2.0),
        )
            .prop_filter("nonzero axis", |(_, _, a, ..)| norm3(a) > 1e-2)
            .prop_map(|(sigma, eps, axis, angle, v, s, z)| GalileanIsometry {
                sigma,
                omega: axis_angle(&axis, angle).scale(&eps),
                v,
                s,
                z,
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn transform_is_a_group_action(g in arb_element(), h in arb_element(), spin in -2.0f64..2.0, speed in -1.0f64..1.0) {
            let obj = RigidBodySummary::demo_cone(spin, speed);
            let lhs = transform_summary(&g.compose(&h), &obj);
            let rhs = transform_summary(&g, &transform_summary(&h, &obj));
            prop_assert!(lhs.approx_eq(&rhs, 1e-10));
        }

        #[test]
        fn transformed_world_tube_is_the_pushforward(g in arb_element(), speed in -1.0f64..1.0, seed in 0u64..4) {
            let obj = RigidBodySummary::demo_cone(1.0, speed);
            let image = transform_summary(&g, &obj);
            let inv = g.inverse();
            for e in sample_grid(&image, seed) {
                prop_assert_eq!(world_tube_member(&image, &e, TOL), world_tube_member(&obj, &inv.act(&e), TOL));
            }
        }

        #[test]
        fn summary_equality_implies_grid_agreement(k in 0usize..32, speed in -1.0f64..1.0, boosts: bool) {
            let obj = RigidBodySummary::demo_cone(1.0, speed);
            let family = FamilySpec { allow_boosts: boosts, ..FamilySpec::default() };
            let c = &candidate_family(&obj, &family).unwrap()[k];
            if transform_summary(&c.element, &obj).approx_eq(&obj, TOL) {
                prop_assert!(density_agrees(&c.element, &obj, TOL, 0));
            }
        }
    }
}
