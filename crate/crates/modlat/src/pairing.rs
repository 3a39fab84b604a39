//! The lattice pairing `e(x, y) = d . (x + y)`.
//!
//! A [`PairingContext`] fixes a lattice and a nontrivial element `d`; the
//! interval `[d, I]` acts on the lattice by meet, and the pairing is bilinear
//! with respect to that action on every modular backend. On distributive
//! backends the pairing collapses to the publicly computable value
//! `d.x + d.y`, which is why those backends are useless for the encryption
//! scheme; [`PairingContext::leak_value`] computes the collapse for
//! comparison.

use crate::error::{Error, Result};
use crate::lattice::{Element, Lattice};
use crate::subspace::Subspace;
use rand::RngCore;
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairingContext {
    lattice: Lattice,
    d: Element,
}

/// Empirical picture of the pairing's value distribution on random inputs.
///
/// No formal nondegeneracy criterion is attached to the pairing; this report
/// describes the observed spread and flags the collapse cases instead.
#[derive(Debug, Clone)]
pub struct NondegeneracyReport {
    pub samples: u64,
    pub distinct_values: usize,
    /// How often the value was the bottom element.
    pub bottom_count: u64,
    /// How often the value was `d` itself.
    pub d_count: u64,
    /// How often the value agreed with the distributive collapse `d.x + d.y`.
    pub leak_agreement: u64,
    /// Observed values with counts, most frequent first.
    pub value_counts: Vec<(Element, u64)>,
}

impl NondegeneracyReport {
    pub fn all_bottom(&self) -> bool {
        self.samples > 0 && self.bottom_count == self.samples
    }

    pub fn all_d(&self) -> bool {
        self.samples > 0 && self.d_count == self.samples
    }

    /// Every sampled pair collapsed to the public value; the context behaves
    /// like a distributive lattice.
    pub fn distributive_degenerate(&self) -> bool {
        self.samples > 0 && self.leak_agreement == self.samples
    }
}

impl PairingContext {
    /// Requires `O < d < I`; a pairing against the bottom or top element is
    /// constant and rejected outright.
    pub fn new(lattice: Lattice, d: Element) -> Result<PairingContext> {
        if !lattice.contains(&d) {
            return Err(Error::LatticeMismatch);
        }
        if d == lattice.bottom() || d == lattice.top() {
            return Err(Error::Precondition(
                "pairing target d must satisfy O < d < I".into(),
            ));
        }
        Ok(PairingContext { lattice, d })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn d(&self) -> &Element {
        &self.d
    }

    /// `e(x, y) = d . (x + y)`; the result lies in `[O, d]`.
    pub fn pair(&self, x: &Element, y: &Element) -> Result<Element> {
        self.lattice.meet(&self.d, &self.lattice.join(x, y)?)
    }

    /// The distributive collapse `(d . x) + (d . y)`.
    pub fn leak_value(&self, x: &Element, y: &Element) -> Result<Element> {
        self.lattice
            .join(&self.lattice.meet(&self.d, x)?, &self.lattice.meet(&self.d, y)?)
    }

    /// Checks `e(a.x1, x2) = e(x1, a.x2)` for an acting element `a`, and the
    /// two-action chain `e(a.x1, b.x2) = e(x1, (a.b).x2) = e(b.x1, a.x2)`
    /// when `b` is supplied.
    ///
    /// `a` (and `b`) must lie in the acting interval `[d, I]`; the bound is a
    /// precondition rather than a `false` return because the scheme's
    /// correctness argument depends on it.
    pub fn check_bilinear(
        &self,
        x1: &Element,
        x2: &Element,
        a: &Element,
        b: Option<&Element>,
    ) -> Result<bool> {
        self.require_acting(a)?;
        let lat = &self.lattice;
        let lhs = self.pair(&lat.meet(a, x1)?, x2)?;
        let rhs = self.pair(x1, &lat.meet(a, x2)?)?;
        if lhs != rhs {
            return Ok(false);
        }
        if let Some(b) = b {
            self.require_acting(b)?;
            let ab = lat.meet(a, b)?;
            let two_action = self.pair(&lat.meet(a, x1)?, &lat.meet(b, x2)?)?;
            if two_action != self.pair(x1, &lat.meet(&ab, x2)?)? {
                return Ok(false);
            }
            if two_action != self.pair(&lat.meet(b, x1)?, &lat.meet(a, x2)?)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn require_acting(&self, a: &Element) -> Result<()> {
        if self.lattice.leq(&self.d, a)? {
            Ok(())
        } else {
            Err(Error::Precondition(
                "acting element must lie in the interval [d, I]".into(),
            ))
        }
    }

    /// Samples `sample_size` random pairs and tabulates the pairing values.
    pub fn check_nondegenerate<R: RngCore + ?Sized>(
        &self,
        sample_size: u64,
        rng: &mut R,
    ) -> Result<NondegeneracyReport> {
        let bottom = self.lattice.bottom();
        let mut counts: HashMap<Element, u64> = HashMap::new();
        let mut bottom_count = 0;
        let mut d_count = 0;
        let mut leak_agreement = 0;
        for _ in 0..sample_size {
            let x = self.lattice.random_element(rng);
            let y = self.lattice.random_element(rng);
            let v = self.pair(&x, &y)?;
            if v == bottom {
                bottom_count += 1;
            }
            if v == self.d {
                d_count += 1;
            }
            if v == self.leak_value(&x, &y)? {
                leak_agreement += 1;
            }
            *counts.entry(v).or_insert(0) += 1;
        }
        let mut value_counts: Vec<(Element, u64)> = counts.into_iter().collect();
        value_counts.sort_by(|a, b| b.1.cmp(&a.1));
        Ok(NondegeneracyReport {
            samples: sample_size,
            distinct_values: value_counts.len(),
            bottom_count,
            d_count,
            leak_agreement,
            value_counts,
        })
    }
}

/// The pairing evaluated directly on subspaces, without lattice-element
/// wrapping; this is the form the encryption scheme uses.
pub fn pair_subspaces(d: &Subspace, x: &Subspace, y: &Subspace) -> Result<Subspace> {
    d.meet(&x.join(y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::matrix::Matrix;
    use crate::rng::rng_from_seed;

    fn f2() -> FieldSpec {
        FieldSpec::new(2).unwrap()
    }

    fn space(q: u64, vecs: &[&[u64]]) -> Subspace {
        let field = FieldSpec::new(q).unwrap();
        let rows: Vec<Vec<u64>> = vecs.iter().map(|v| v.to_vec()).collect();
        Subspace::from_spanning(&Matrix::from_rows(field, &rows).unwrap())
    }

    fn ctx_f2_4() -> PairingContext {
        // d = span(e1, e2) in F_2^4.
        let lat = Lattice::subspaces(f2(), 4);
        let d = Element::Space(space(2, &[&[1, 0, 0, 0], &[0, 1, 0, 0]]));
        PairingContext::new(lat, d).unwrap()
    }

    #[test]
    fn degenerate_targets_are_rejected() {
        let lat = Lattice::subspaces(f2(), 3);
        assert!(PairingContext::new(lat.clone(), lat.bottom()).is_err());
        assert!(PairingContext::new(lat.clone(), lat.top()).is_err());
        let foreign = Element::Space(space(2, &[&[1, 0]]));
        assert!(matches!(
            PairingContext::new(lat, foreign),
            Err(Error::LatticeMismatch)
        ));
    }

    #[test]
    fn pair_constants() {
        let ctx = ctx_f2_4();
        let bottom = ctx.lattice().bottom();
        let top = ctx.lattice().top();
        assert_eq!(ctx.pair(&bottom, &bottom).unwrap(), bottom);
        // Joining with the top element saturates, so the value is d itself.
        let y = Element::Space(space(2, &[&[0, 0, 1, 0]]));
        assert_eq!(ctx.pair(&top, &y).unwrap(), *ctx.d());
    }

    #[test]
    fn pair_worked_example_in_f2_4() {
        // x = span(e3), y = span(e1+e3): join is span(e1, e3), meet with
        // d = span(e1, e2) is span(e1).
        let ctx = ctx_f2_4();
        let x = Element::Space(space(2, &[&[0, 0, 1, 0]]));
        let y = Element::Space(space(2, &[&[1, 0, 1, 0]]));
        let expected = Element::Space(space(2, &[&[1, 0, 0, 0]]));
        assert_eq!(ctx.pair(&x, &y).unwrap(), expected);
    }

    #[test]
    fn pair_is_symmetric_and_bounded_by_d() {
        let ctx = ctx_f2_4();
        let mut rng = rng_from_seed(3);
        for _ in 0..200 {
            let x = ctx.lattice().random_element(&mut rng);
            let y = ctx.lattice().random_element(&mut rng);
            let v = ctx.pair(&x, &y).unwrap();
            assert_eq!(v, ctx.pair(&y, &x).unwrap());
            assert!(ctx.lattice().leq(&v, ctx.d()).unwrap());
        }
    }

    #[test]
    fn bilinearity_precondition_is_enforced() {
        let ctx = ctx_f2_4();
        // span(e3) does not contain d, so it cannot act.
        let a = Element::Space(space(2, &[&[0, 0, 1, 0]]));
        let x = ctx.lattice().random_element(&mut rng_from_seed(1));
        assert!(matches!(
            ctx.check_bilinear(&x, &x, &a, None),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn bilinearity_holds_for_edge_and_random_actors() {
        let ctx = ctx_f2_4();
        let top = ctx.lattice().top();
        let mut rng = rng_from_seed(9);
        for _ in 0..300 {
            let x1 = ctx.lattice().random_element(&mut rng);
            let x2 = ctx.lattice().random_element(&mut rng);
            // a = I acts as the identity; a = d collapses both sides.
            assert!(ctx.check_bilinear(&x1, &x2, &top, None).unwrap());
            assert!(ctx.check_bilinear(&x1, &x2, ctx.d(), None).unwrap());
            // A random element of [d, I].
            let raw = ctx.lattice().random_element(&mut rng);
            let a = ctx.lattice().join(ctx.d(), &raw).unwrap();
            let raw_b = ctx.lattice().random_element(&mut rng);
            let b = ctx.lattice().join(ctx.d(), &raw_b).unwrap();
            assert!(ctx.check_bilinear(&x1, &x2, &a, Some(&b)).unwrap());
        }
    }

    #[test]
    fn boolean_backend_pairs_equal_leak_everywhere() {
        let lat = Lattice::boolean(4).unwrap();
        let ctx = PairingContext::new(lat, Element::Set(0b0011)).unwrap();
        for x in 0..16u64 {
            for y in 0..16u64 {
                let x = Element::Set(x);
                let y = Element::Set(y);
                assert_eq!(
                    ctx.pair(&x, &y).unwrap(),
                    ctx.leak_value(&x, &y).unwrap()
                );
            }
        }
    }

    #[test]
    fn subspace_backend_has_strict_leak_witness() {
        // In L(F_2^2) with d = span(e1+e2): pair(span(e1), span(e2)) = d
        // but the collapse value is O.
        let lat = Lattice::subspaces(f2(), 2);
        let d = Element::Space(space(2, &[&[1, 1]]));
        let ctx = PairingContext::new(lat, d).unwrap();
        let x = Element::Space(space(2, &[&[1, 0]]));
        let y = Element::Space(space(2, &[&[0, 1]]));
        assert_eq!(ctx.pair(&x, &y).unwrap(), *ctx.d());
        assert_eq!(ctx.leak_value(&x, &y).unwrap(), ctx.lattice().bottom());
        // x = y degenerates to d.x on both routes.
        let dx = ctx.lattice().meet(ctx.d(), &x).unwrap();
        assert_eq!(ctx.pair(&x, &x).unwrap(), dx);
        assert_eq!(ctx.leak_value(&x, &x).unwrap(), dx);
    }

    #[test]
    fn nondegeneracy_report_sees_spread_on_subspace_backend() {
        let lat = Lattice::subspaces(f2(), 4);
        let mut rng = rng_from_seed(12);
        let d = Element::Space(Subspace::random_of_dim(2, f2(), 4, &mut rng).unwrap());
        let ctx = PairingContext::new(lat, d).unwrap();
        let report = ctx.check_nondegenerate(2_000, &mut rng).unwrap();
        assert_eq!(report.samples, 2_000);
        assert!(report.distinct_values >= 2);
        assert!(!report.all_bottom() && !report.all_d());
    }

    #[test]
    fn chain_backend_reports_distributive_degeneracy() {
        let ctx = PairingContext::new(Lattice::chain(5).unwrap(), Element::Index(2)).unwrap();
        let mut rng = rng_from_seed(4);
        let report = ctx.check_nondegenerate(500, &mut rng).unwrap();
        assert!(report.distributive_degenerate());
    }
}
