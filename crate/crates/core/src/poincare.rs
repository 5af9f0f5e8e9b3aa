//! Minkowski spacetime: named generators in either signature convention.
//!
//! `TimeFirst` uses signature (1,3) with time on axis 0; `TimeLast` uses
//! (3,1) with time on axis 3. The two differ by a coordinate permutation
//! and an overall sign of the metric, which leaves `O(p,q)` unchanged as a
//! set of matrices up to that permutation.

use std::fmt;
use std::str::FromStr;

use crate::affine::AffineIsometry;
use crate::classify::Classification;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::orthogonal::OrthogonalMap;
use crate::quadspace::QuadraticSpace;
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Convention {
    /// Signature (1,3), time on axis 0.
    TimeFirst,
    /// Signature (3,1), time on axis 3.
    TimeLast,
}

impl Convention {
    pub fn signature(&self) -> (usize, usize) {
        match self {
            Convention::TimeFirst => (1, 3),
            Convention::TimeLast => (3, 1),
        }
    }

    pub fn from_signature(p: usize, q: usize) -> Option<Self> {
        match (p, q) {
            (1, 3) => Some(Convention::TimeFirst),
            (3, 1) => Some(Convention::TimeLast),
            _ => None,
        }
    }

    pub fn time_index(&self) -> usize {
        match self {
            Convention::TimeFirst => 0,
            Convention::TimeLast => 3,
        }
    }

    pub fn spatial_index(&self, axis: Axis) -> usize {
        let k = axis as usize;
        match self {
            Convention::TimeFirst => k + 1,
            Convention::TimeLast => k,
        }
    }

    pub fn space<S: Scalar>(&self, tol: f64) -> QuadraticSpace<S> {
        let (p, q) = self.signature();
        QuadraticSpace::with_tolerance(p, q, tol).expect("Minkowski signature is valid")
    }

    pub fn other(&self) -> Self {
        match self {
            Convention::TimeFirst => Convention::TimeLast,
            Convention::TimeLast => Convention::TimeFirst,
        }
    }

    /// Index in this convention of coordinate `i` of the other convention.
    fn index_from_other(&self, i: usize) -> usize {
        match self {
            Convention::TimeFirst => (i + 1) % 4,
            Convention::TimeLast => (i + 3) % 4,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X = 0,
    Y = 1,
    Z = 2,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::UnknownGenerator(format!("axis {other:?}"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Named generator. Boosts and rotations carry `(cosh, sinh)` and
/// `(cos, sin)` pairs so that exact rational elements are expressible.
#[derive(Clone, Debug, PartialEq)]
pub enum Generator<S> {
    Parity,
    TimeReversal,
    ParityTimeReversal,
    Boost { axis: Axis, cosh: S, sinh: S },
    Rotation { axis: Axis, cos: S, sin: S },
    Translation(Vector<S>),
}

impl Generator<f64> {
    pub fn boost(axis: Axis, rapidity: f64) -> Self {
        Generator::Boost { axis, cosh: rapidity.cosh(), sinh: rapidity.sinh() }
    }

    pub fn rotation(axis: Axis, angle: f64) -> Self {
        Generator::Rotation { axis, cos: angle.cos(), sin: angle.sin() }
    }
}

/// Parses `P`, `T`, `PT`, `boost(x, 1.3)` and `rotation(z, 0.5)`.
impl FromStr for Generator<f64> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "P" => return Ok(Generator::Parity),
            "T" => return Ok(Generator::TimeReversal),
            "PT" | "TP" => return Ok(Generator::ParityTimeReversal),
            _ => {}
        }
        let unknown = || Error::UnknownGenerator(s.to_string());
        let (name, rest) = s.split_once('(').ok_or_else(unknown)?;
        let args = rest.strip_suffix(')').ok_or_else(unknown)?;
        let (axis, value) = args.split_once(',').ok_or_else(unknown)?;
        let axis: Axis = axis.parse()?;
        let value: f64 = value.trim().parse().map_err(|_| unknown())?;
        if !value.is_finite() {
            return Err(Error::InvalidParameter(format!("non-finite parameter in {s}")));
        }
        match name.trim() {
            "boost" => Ok(Generator::boost(axis, value)),
            "rotation" => Ok(Generator::rotation(axis, value)),
            _ => Err(unknown()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoincareElement<S: Scalar> {
    convention: Convention,
    affine: AffineIsometry<S>,
}

impl<S: Scalar> PoincareElement<S> {
    pub fn new(convention: Convention, affine: AffineIsometry<S>) -> Result<Self> {
        let sig = affine.space().signature();
        if (sig.p, sig.q) != convention.signature() {
            return Err(Error::SpaceMismatch);
        }
        Ok(PoincareElement { convention, affine })
    }

    pub fn identity(convention: Convention, tol: f64) -> Self {
        PoincareElement { convention, affine: AffineIsometry::identity(convention.space(tol)) }
    }

    pub fn generator(g: &Generator<S>, convention: Convention, tol: f64) -> Result<Self> {
        let space: QuadraticSpace<S> = convention.space(tol);
        let time = convention.time_index();
        let (one, zero) = (S::one(), S::zero());
        let diag = |flip_time: bool, flip_space: bool| {
            let d: Vec<S> = (0..4)
                .map(|i| if (i == time && flip_time) || (i != time && flip_space) { -one.clone() } else { one.clone() })
                .collect();
            Matrix::from_diagonal(&d)
        };
        let linear = match g {
            Generator::Parity => diag(false, true),
            Generator::TimeReversal => diag(true, false),
            Generator::ParityTimeReversal => diag(true, true),
            Generator::Boost { axis, cosh, sinh } => {
                let unit = cosh.clone() * cosh.clone() - sinh.clone() * sinh.clone() - one.clone();
                if *cosh <= zero || !unit.is_negligible(space.tolerance()) {
                    return Err(Error::InvalidParameter(format!(
                        "boost needs cosh > 0 and cosh² − sinh² = 1, got ({cosh}, {sinh})"
                    )));
                }
                let k = convention.spatial_index(*axis);
                let mut m = Matrix::identity(4);
                m[(time, time)] = cosh.clone();
                m[(k, k)] = cosh.clone();
                m[(time, k)] = sinh.clone();
                m[(k, time)] = sinh.clone();
                m
            }
            Generator::Rotation { axis, cos, sin } => {
                let unit = cos.clone() * cos.clone() + sin.clone() * sin.clone() - one.clone();
                if !unit.is_negligible(space.tolerance()) {
                    return Err(Error::InvalidParameter(format!("rotation needs cos² + sin² = 1, got ({cos}, {sin})")));
                }
                let (a, b) = match axis {
                    Axis::X => (Axis::Y, Axis::Z),
                    Axis::Y => (Axis::Z, Axis::X),
                    Axis::Z => (Axis::X, Axis::Y),
                };
                let (i, j) = (convention.spatial_index(a), convention.spatial_index(b));
                let mut m = Matrix::identity(4);
                m[(i, i)] = cos.clone();
                m[(j, j)] = cos.clone();
                m[(i, j)] = -sin.clone();
                m[(j, i)] = sin.clone();
                m
            }
            Generator::Translation(t) => {
                let affine = AffineIsometry::translation_by(space, t.clone())?;
                return Ok(PoincareElement { convention, affine });
            }
        };
        let affine = AffineIsometry::from_linear(OrthogonalMap::new(space, linear)?);
        Ok(PoincareElement { convention, affine })
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn affine(&self) -> &AffineIsometry<S> {
        &self.affine
    }

    pub fn linear_matrix(&self) -> &Matrix<S> {
        self.affine.linear().matrix()
    }

    pub fn time_time_entry(&self) -> &S {
        let t = self.convention.time_index();
        &self.linear_matrix()[(t, t)]
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.convention != other.convention {
            return Err(Error::SpaceMismatch);
        }
        Ok(PoincareElement { convention: self.convention, affine: self.affine.compose(&other.affine)? })
    }

    pub fn inverse(&self) -> Self {
        PoincareElement { convention: self.convention, affine: self.affine.inverse() }
    }

    pub fn classify(&self) -> Result<Classification> {
        self.affine.classify()
    }

    pub fn direct_witness(&self) -> Result<Vec<PoincareElement<S>>> {
        Ok(self
            .affine
            .direct_witness()?
            .into_iter()
            .map(|affine| PoincareElement { convention: self.convention, affine })
            .collect())
    }

    /// `det > 0` and the time-time entry is positive (hence ≥ 1).
    pub fn is_proper_orthochronous(&self) -> bool {
        self.affine.linear().determinant() > S::zero() && *self.time_time_entry() > S::zero()
    }

    /// The same isometry written in the other convention.
    pub fn to_convention(&self, target: Convention) -> Self {
        if target == self.convention {
            return self.clone();
        }
        let src = self.linear_matrix();
        let mut m = Matrix::zeros(4, 4);
        let mut t = vec![S::zero(); 4];
        for i in 0..4 {
            let ti = target.index_from_other(i);
            t[ti] = self.affine.translation()[i].clone();
            for j in 0..4 {
                m[(ti, target.index_from_other(j))] = src[(i, j)].clone();
            }
        }
        let space = target.space(self.affine.space().tolerance_f64());
        let linear = OrthogonalMap::new(space, m).expect("permuted Lorentz matrix stays orthogonal");
        PoincareElement { convention: target, affine: AffineIsometry::new(linear, t).expect("dimension 4") }
    }
}
