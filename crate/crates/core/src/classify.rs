//! Direct/indirect labels and the machinery that propagates them.
//!
//! An isometry is *direct* when it is a product of squares of elements of
//! its ambient group, and *indirect* otherwise. This module holds the
//! composition rule table, a trait for groups that can label their
//! elements, semidirect and direct product combinators that lift factor
//! labels to the product, and a brute-force square-closure oracle for
//! finite groups.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Classification {
    Direct,
    Indirect,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Direct => "direct",
            Classification::Indirect => "indirect",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// What the composition rules predict for `g ∘ h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpectedClass {
    Direct,
    Indirect,
    Either,
}

impl ExpectedClass {
    /// Whether an observed label is compatible with the prediction.
    pub fn admits(&self, c: Classification) -> bool {
        match self {
            ExpectedClass::Either => true,
            ExpectedClass::Direct => c == Classification::Direct,
            ExpectedClass::Indirect => c == Classification::Indirect,
        }
    }
}

/// Composition rule table. Two indirect isometries compose to either label
/// in general; in Euclidean mode the result is always direct.
pub fn expected_class(c1: Classification, c2: Classification, euclidean_mode: bool) -> ExpectedClass {
    use Classification::*;
    match (c1, c2) {
        (Direct, Direct) => ExpectedClass::Direct,
        (Direct, Indirect) | (Indirect, Direct) => ExpectedClass::Indirect,
        (Indirect, Indirect) if euclidean_mode => ExpectedClass::Direct,
        (Indirect, Indirect) => ExpectedClass::Either,
    }
}

/// A group whose elements can be labelled direct or indirect.
pub trait ClassifiedGroup {
    type Element: Clone + fmt::Debug;

    fn compose(&self, g: &Self::Element, h: &Self::Element) -> Self::Element;
    fn inverse(&self, g: &Self::Element) -> Self::Element;
    fn identity(&self) -> Self::Element;
    /// Equality up to `tol`; exact groups ignore the tolerance.
    fn equal(&self, g: &Self::Element, h: &Self::Element, tol: f64) -> bool;
    fn classify(&self, g: &Self::Element) -> Result<Classification>;

    /// Elements whose squares compose (in order) to `g`, when the group
    /// knows how to produce them.
    fn witness(&self, _g: &Self::Element) -> Option<Result<Vec<Self::Element>>> {
        None
    }
}

/// Element `(n, h)` of `N ⋊ H`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemidirectElement<A, B> {
    pub n: A,
    pub h: B,
}

/// Outer semidirect product `N ⋊ H` with
/// `(n₁,h₁)(n₂,h₂) = (n₁ ⊙ φ_{h₁}(n₂), h₁h₂)`.
///
/// Labels lift from the factors: `(n, e)` takes the label of `n` when `n`
/// is direct, `(e, h)` always takes the label of `h`, and `(n, h)` with `n`
/// direct takes the label of `h`. An indirect `n` is not covered and is
/// reported as [`Error::UnclassifiableElement`].
pub struct SemidirectProduct<N, H, F> {
    pub normal: N,
    pub acting: H,
    phi: F,
}

impl<N, H, F> SemidirectProduct<N, H, F>
where
    N: ClassifiedGroup,
    H: ClassifiedGroup,
    F: Fn(&H::Element, &N::Element) -> N::Element,
{
    /// `phi(h, n)` must be the conjugate `h n h⁻¹` expressed in `N`.
    pub fn new(normal: N, acting: H, phi: F) -> Self {
        SemidirectProduct { normal, acting, phi }
    }

    pub fn action(&self, h: &H::Element, n: &N::Element) -> N::Element {
        (self.phi)(h, n)
    }

    pub fn embed_normal(&self, n: N::Element) -> SemidirectElement<N::Element, H::Element> {
        SemidirectElement { n, h: self.acting.identity() }
    }

    pub fn embed_acting(&self, h: H::Element) -> SemidirectElement<N::Element, H::Element> {
        SemidirectElement { n: self.normal.identity(), h }
    }

    /// Spot-check that `φ_h` is an automorphism of `N` on the given samples.
    pub fn check_action(&self, hs: &[H::Element], ns: &[N::Element], tol: f64) -> bool {
        let e = self.normal.identity();
        hs.iter().all(|h| {
            self.normal.equal(&self.action(h, &e), &e, tol)
                && ns.iter().all(|a| {
                    ns.iter().all(|b| {
                        let lhs = self.action(h, &self.normal.compose(a, b));
                        let rhs = self.normal.compose(&self.action(h, a), &self.action(h, b));
                        self.normal.equal(&lhs, &rhs, tol)
                    })
                })
        })
    }
}

impl<N, H, F> ClassifiedGroup for SemidirectProduct<N, H, F>
where
    N: ClassifiedGroup,
    H: ClassifiedGroup,
    F: Fn(&H::Element, &N::Element) -> N::Element,
{
    type Element = SemidirectElement<N::Element, H::Element>;

    fn compose(&self, g: &Self::Element, k: &Self::Element) -> Self::Element {
        SemidirectElement { n: self.normal.compose(&g.n, &self.action(&g.h, &k.n)), h: self.acting.compose(&g.h, &k.h) }
    }

    fn inverse(&self, g: &Self::Element) -> Self::Element {
        let h_inv = self.acting.inverse(&g.h);
        SemidirectElement { n: self.action(&h_inv, &self.normal.inverse(&g.n)), h: h_inv }
    }

    fn identity(&self) -> Self::Element {
        SemidirectElement { n: self.normal.identity(), h: self.acting.identity() }
    }

    fn equal(&self, g: &Self::Element, k: &Self::Element, tol: f64) -> bool {
        self.normal.equal(&g.n, &k.n, tol) && self.acting.equal(&g.h, &k.h, tol)
    }

    fn classify(&self, g: &Self::Element) -> Result<Classification> {
        match self.normal.classify(&g.n)? {
            // (n, h) = (n, e)(e, h); (n, e) is direct and (e, h) carries h's label.
            Classification::Direct => self.acting.classify(&g.h),
            Classification::Indirect => Err(Error::UnclassifiableElement),
        }
    }

    fn witness(&self, g: &Self::Element) -> Option<Result<Vec<Self::Element>>> {
        let wn = self.normal.witness(&g.n)?;
        let wh = self.acting.witness(&g.h)?;
        Some(wn.and_then(|wn| {
            let wh = wh?;
            let mut out: Vec<Self::Element> = wn.into_iter().map(|n| self.embed_normal(n)).collect();
            out.extend(wh.into_iter().map(|h| self.embed_acting(h)));
            Ok(out)
        }))
    }
}

/// Direct product `N × H` of commuting normal subgroups.
///
/// Squares in `N × H` are exactly the pairs `(n², h²)`, so products of
/// squares are the pairs of products of squares: `(n, h)` is direct iff
/// both components are. In particular indirect elements of either factor
/// stay indirect.
pub struct DirectProduct<N, H> {
    pub left: N,
    pub right: H,
}

impl<N: ClassifiedGroup, H: ClassifiedGroup> DirectProduct<N, H> {
    pub fn new(left: N, right: H) -> Self {
        DirectProduct { left, right }
    }
}

impl<N: ClassifiedGroup, H: ClassifiedGroup> ClassifiedGroup for DirectProduct<N, H> {
    type Element = SemidirectElement<N::Element, H::Element>;

    fn compose(&self, g: &Self::Element, k: &Self::Element) -> Self::Element {
        SemidirectElement { n: self.left.compose(&g.n, &k.n), h: self.right.compose(&g.h, &k.h) }
    }

    fn inverse(&self, g: &Self::Element) -> Self::Element {
        SemidirectElement { n: self.left.inverse(&g.n), h: self.right.inverse(&g.h) }
    }

    fn identity(&self) -> Self::Element {
        SemidirectElement { n: self.left.identity(), h: self.right.identity() }
    }

    fn equal(&self, g: &Self::Element, k: &Self::Element, tol: f64) -> bool {
        self.left.equal(&g.n, &k.n, tol) && self.right.equal(&g.h, &k.h, tol)
    }

    fn classify(&self, g: &Self::Element) -> Result<Classification> {
        let a = self.left.classify(&g.n)?;
        let b = self.right.classify(&g.h)?;
        Ok(if a == Classification::Direct && b == Classification::Direct {
            Classification::Direct
        } else {
            Classification::Indirect
        })
    }

    fn witness(&self, g: &Self::Element) -> Option<Result<Vec<Self::Element>>> {
        let wn = self.left.witness(&g.n)?;
        let wh = self.right.witness(&g.h)?;
        Some(wn.and_then(|wn| {
            let wh = wh?;
            let mut out: Vec<Self::Element> =
                wn.into_iter().map(|n| SemidirectElement { n, h: self.right.identity() }).collect();
            out.extend(wh.into_iter().map(|h| SemidirectElement { n: self.left.identity(), h }));
            Ok(out)
        }))
    }
}

/// Subgroup generated by the squares of a finite group.
///
/// `elements` must list the whole group; closure under `compose` is checked
/// first. The result certifies "direct" only relative to this finite group:
/// membership implies the element is direct in any larger ambient group,
/// but an element outside the result may still be a product of squares of
/// elements that are not in the list.
pub fn square_closure<E: Clone>(
    elements: &[E],
    compose: impl Fn(&E, &E) -> E,
    equal: impl Fn(&E, &E) -> bool,
) -> Result<Vec<E>> {
    let contains = |set: &[E], x: &E| set.iter().any(|y| equal(x, y));
    for a in elements {
        for b in elements {
            if !contains(elements, &compose(a, b)) {
                return Err(Error::NotClosed);
            }
        }
    }
    let mut closure: Vec<E> = Vec::new();
    for g in elements {
        let sq = compose(g, g);
        if !contains(&closure, &sq) {
            closure.push(sq);
        }
    }
    loop {
        let mut added = Vec::new();
        for a in &closure {
            for b in &closure {
                let ab = compose(a, b);
                if !contains(&closure, &ab) && !contains(&added, &ab) {
                    added.push(ab);
                }
            }
        }
        if added.is_empty() {
            return Ok(closure);
        }
        closure.extend(added);
    }
}

/// Finite-group classification: direct iff in the square closure.
pub fn finite_classification<E: Clone>(
    elements: &[E],
    compose: impl Fn(&E, &E) -> E,
    equal: impl Fn(&E, &E) -> bool + Copy,
) -> Result<Vec<Classification>> {
    let closure = square_closure(elements, compose, equal)?;
    Ok(elements
        .iter()
        .map(|g| if closure.iter().any(|c| equal(g, c)) { Classification::Direct } else { Classification::Indirect })
        .collect())
}

/// Outcome of [`parity_invariant_check`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParityReport {
    pub pairs_checked: usize,
    /// `χ(gh) ≠ χ(g) + χ(h)`
    pub homomorphism_violations: usize,
    /// `χ(g²) ≠ 0`
    pub square_violations: usize,
    /// `χ(g) ≠ 0` but `g` classified direct.
    pub soundness_violations: usize,
}

impl ParityReport {
    pub fn is_clean(&self) -> bool {
        self.homomorphism_violations == 0 && self.square_violations == 0 && self.soundness_violations == 0
    }
}

/// Audits a candidate invariant `χ : G → (Z/2)^k` on sampled pairs.
///
/// A homomorphism into an elementary abelian 2-group kills every square, so
/// `χ(g) ≠ 0` proves `g` indirect. The report counts failures of the
/// homomorphism law, of `χ(g²) = 0`, and of that soundness implication.
pub fn parity_invariant_check<G: ClassifiedGroup>(
    group: &G,
    samples: &[(G::Element, G::Element)],
    chi: impl Fn(&G::Element) -> Vec<u8>,
) -> ParityReport {
    let add = |a: &[u8], b: &[u8]| -> Vec<u8> { a.iter().zip(b).map(|(x, y)| (x + y) % 2).collect() };
    let is_zero = |a: &[u8]| a.iter().all(|x| x % 2 == 0);
    let mut report = ParityReport::default();
    for (g, h) in samples {
        report.pairs_checked += 1;
        let (cg, ch) = (chi(g), chi(h));
        if chi(&group.compose(g, h)) != add(&cg, &ch) {
            report.homomorphism_violations += 1;
        }
        for (x, cx) in [(g, &cg), (h, &ch)] {
            if !is_zero(&chi(&group.compose(x, x))) {
                report.square_violations += 1;
            }
            if !is_zero(cx) && group.classify(x).ok() == Some(Classification::Direct) {
                report.soundness_violations += 1;
            }
        }
    }
    report
}
