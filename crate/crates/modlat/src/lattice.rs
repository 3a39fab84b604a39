//! Bounded lattices with interchangeable backends.
//!
//! Four element carriers share one interface: the lattice of subspaces of
//! F_q^n (modular, non-distributive for n >= 2), the Boolean lattice of
//! subsets of a small ground set, direct products of arbitrary backends, and
//! small table-driven posets used as fixtures (the pentagon, finite chains).
//!
//! Join is written `+` and meet `.` in the surrounding documentation; both
//! are total within one lattice and error across lattices.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::rng;
use crate::subspace::Subspace;
use rand::RngCore;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lattice {
    /// All subspaces of F_q^n ordered by inclusion.
    Subspaces { field: FieldSpec, ambient_dim: usize },
    /// Subsets of {0, .., ground-1} ordered by inclusion, stored as bit masks.
    Boolean { ground: usize },
    /// Componentwise order on a fixed-length tuple of component lattices.
    Product(Vec<Lattice>),
    /// Explicit finite poset with precomputed meet/join tables.
    Table(Arc<TableLattice>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Element {
    Space(Subspace),
    Set(u64),
    Tuple(Vec<Element>),
    Index(usize),
}

/// A finite lattice given by tables; constructed from an explicit order
/// relation, with meets and joins derived (and checked to exist) up front.
#[derive(Debug, PartialEq, Eq)]
pub struct TableLattice {
    name: String,
    size: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
}

impl TableLattice {
    /// Builds the tables from `leq` given as an adjacency closure (reflexive,
    /// transitive). Fails if some pair lacks a unique meet or join.
    pub fn from_order(name: &str, size: usize, leq_pairs: &[(usize, usize)]) -> Result<TableLattice> {
        let mut leq = vec![false; size * size];
        for i in 0..size {
            leq[i * size + i] = true;
        }
        for &(a, b) in leq_pairs {
            leq[a * size + b] = true;
        }
        // Transitive closure; fixture orders are tiny.
        loop {
            let mut changed = false;
            for a in 0..size {
                for b in 0..size {
                    if !leq[a * size + b] {
                        continue;
                    }
                    for c in 0..size {
                        if leq[b * size + c] && !leq[a * size + c] {
                            leq[a * size + c] = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let le = |a: usize, b: usize| leq[a * size + b];
        let mut meet = vec![0usize; size * size];
        let mut join = vec![0usize; size * size];
        for a in 0..size {
            for b in 0..size {
                let lower: Vec<usize> = (0..size).filter(|&x| le(x, a) && le(x, b)).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&x| lower.iter().all(|&y| le(y, x)));
                let upper: Vec<usize> = (0..size).filter(|&x| le(a, x) && le(b, x)).collect();
                let lub = upper
                    .iter()
                    .copied()
                    .find(|&x| upper.iter().all(|&y| le(x, y)));
                match (glb, lub) {
                    (Some(m), Some(j)) => {
                        meet[a * size + b] = m;
                        join[a * size + b] = j;
                    }
                    _ => {
                        return Err(Error::InvalidParameter {
                            what: "order table",
                            detail: format!("pair ({a},{b}) has no unique meet/join"),
                        })
                    }
                }
            }
        }
        Ok(TableLattice {
            name: name.to_string(),
            size,
            leq,
            meet,
            join,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl Lattice {
    pub fn subspaces(field: FieldSpec, ambient_dim: usize) -> Lattice {
        Lattice::Subspaces { field, ambient_dim }
    }

    pub fn boolean(ground: usize) -> Result<Lattice> {
        if ground > 63 {
            return Err(Error::InvalidParameter {
                what: "ground set",
                detail: format!("size {ground} exceeds the 63-bit mask limit"),
            });
        }
        Ok(Lattice::Boolean { ground })
    }

    pub fn product(components: Vec<Lattice>) -> Lattice {
        Lattice::Product(components)
    }

    /// The five-element pentagon: O < a < c < I and O < b < I, with b
    /// incomparable to both a and c. This is the canonical non-modular
    /// lattice and serves as the negative fixture for the modular law.
    ///
    /// Elements are indices 0=O, 1=a, 2=b, 3=c, 4=I.
    pub fn pentagon() -> Lattice {
        let table = TableLattice::from_order(
            "pentagon",
            5,
            &[(0, 1), (0, 2), (0, 3), (1, 3), (1, 4), (2, 4), (3, 4)],
        )
        .expect("pentagon order is a lattice");
        Lattice::Table(Arc::new(table))
    }

    /// A total order on `len` elements (distributive; every pairing on it
    /// degenerates).
    pub fn chain(len: usize) -> Result<Lattice> {
        if len == 0 {
            return Err(Error::InvalidParameter {
                what: "chain",
                detail: "length must be positive".into(),
            });
        }
        let pairs: Vec<(usize, usize)> = (0..len - 1).map(|i| (i, i + 1)).collect();
        Ok(Lattice::Table(Arc::new(TableLattice::from_order(
            "chain", len, &pairs,
        )?)))
    }

    pub fn bottom(&self) -> Element {
        match self {
            Lattice::Subspaces { field, ambient_dim } => {
                Element::Space(Subspace::zero(*field, *ambient_dim))
            }
            Lattice::Boolean { .. } => Element::Set(0),
            Lattice::Product(comps) => Element::Tuple(comps.iter().map(Lattice::bottom).collect()),
            Lattice::Table(_) => Element::Index(0),
        }
    }

    pub fn top(&self) -> Element {
        match self {
            Lattice::Subspaces { field, ambient_dim } => {
                Element::Space(Subspace::full(*field, *ambient_dim))
            }
            Lattice::Boolean { ground } => Element::Set(mask_of(*ground)),
            Lattice::Product(comps) => Element::Tuple(comps.iter().map(Lattice::top).collect()),
            Lattice::Table(t) => Element::Index(t.size - 1),
        }
    }

    /// Structural membership check used as the mismatched-lattice guard.
    pub fn contains(&self, e: &Element) -> bool {
        match (self, e) {
            (Lattice::Subspaces { field, ambient_dim }, Element::Space(s)) => {
                s.field() == *field && s.ambient_dim() == *ambient_dim
            }
            (Lattice::Boolean { ground }, Element::Set(mask)) => *mask <= mask_of(*ground),
            (Lattice::Product(comps), Element::Tuple(parts)) => {
                comps.len() == parts.len()
                    && comps.iter().zip(parts).all(|(l, p)| l.contains(p))
            }
            (Lattice::Table(t), Element::Index(i)) => *i < t.size,
            _ => false,
        }
    }

    fn guard(&self, e: &Element) -> Result<()> {
        if self.contains(e) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    pub fn join(&self, x: &Element, y: &Element) -> Result<Element> {
        self.guard(x)?;
        self.guard(y)?;
        match (self, x, y) {
            (Lattice::Subspaces { .. }, Element::Space(a), Element::Space(b)) => {
                Ok(Element::Space(a.join(b)?))
            }
            (Lattice::Boolean { .. }, Element::Set(a), Element::Set(b)) => Ok(Element::Set(a | b)),
            (Lattice::Product(comps), Element::Tuple(a), Element::Tuple(b)) => {
                let parts: Result<Vec<Element>> = comps
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(l, (xa, xb))| l.join(xa, xb))
                    .collect();
                Ok(Element::Tuple(parts?))
            }
            (Lattice::Table(t), Element::Index(a), Element::Index(b)) => {
                Ok(Element::Index(t.join[a * t.size + b]))
            }
            _ => unreachable!("guard admits matching variants only"),
        }
    }

    pub fn meet(&self, x: &Element, y: &Element) -> Result<Element> {
        self.guard(x)?;
        self.guard(y)?;
        match (self, x, y) {
            (Lattice::Subspaces { .. }, Element::Space(a), Element::Space(b)) => {
                Ok(Element::Space(a.meet(b)?))
            }
            (Lattice::Boolean { .. }, Element::Set(a), Element::Set(b)) => Ok(Element::Set(a & b)),
            (Lattice::Product(comps), Element::Tuple(a), Element::Tuple(b)) => {
                let parts: Result<Vec<Element>> = comps
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(l, (xa, xb))| l.meet(xa, xb))
                    .collect();
                Ok(Element::Tuple(parts?))
            }
            (Lattice::Table(t), Element::Index(a), Element::Index(b)) => {
                Ok(Element::Index(t.meet[a * t.size + b]))
            }
            _ => unreachable!("guard admits matching variants only"),
        }
    }

    pub fn leq(&self, x: &Element, y: &Element) -> Result<bool> {
        self.guard(x)?;
        self.guard(y)?;
        match (self, x, y) {
            (Lattice::Subspaces { .. }, Element::Space(a), Element::Space(b)) => a.leq(b),
            (Lattice::Boolean { .. }, Element::Set(a), Element::Set(b)) => Ok(a & b == *a),
            (Lattice::Product(comps), Element::Tuple(a), Element::Tuple(b)) => {
                for (l, (xa, xb)) in comps.iter().zip(a.iter().zip(b)) {
                    if !l.leq(xa, xb)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Lattice::Table(t), Element::Index(a), Element::Index(b)) => {
                Ok(t.leq[a * t.size + b])
            }
            _ => unreachable!("guard admits matching variants only"),
        }
    }

    /// Evaluates the modular implication `a <= c  =>  (a + b) . c = a + (b . c)`
    /// on one triple; vacuously true when `a <= c` fails.
    pub fn check_modular_triple(&self, a: &Element, b: &Element, c: &Element) -> Result<bool> {
        if !self.leq(a, c)? {
            return Ok(true);
        }
        let lhs = self.meet(&self.join(a, b)?, c)?;
        let rhs = self.join(a, &self.meet(b, c)?)?;
        Ok(lhs == rhs)
    }

    /// Evaluates both distributive laws on one triple.
    pub fn check_distributive_triple(&self, x: &Element, y: &Element, z: &Element) -> Result<bool> {
        let meet_over_join =
            self.meet(x, &self.join(y, z)?)? == self.join(&self.meet(x, y)?, &self.meet(x, z)?)?;
        let join_over_meet =
            self.join(x, &self.meet(y, z)?)? == self.meet(&self.join(x, y)?, &self.join(x, z)?)?;
        Ok(meet_over_join && join_over_meet)
    }

    /// True when `a . b = O` and `a + b = I`.
    pub fn is_complement(&self, a: &Element, b: &Element) -> Result<bool> {
        Ok(self.meet(a, b)? == self.bottom() && self.join(a, b)? == self.top())
    }

    /// A complement of `a`, where the backend has a construction for one:
    /// greedy basis extension for subspaces, the set complement for Boolean
    /// lattices, componentwise for products. Table fixtures are refused.
    pub fn complement_of(&self, a: &Element) -> Result<Element> {
        self.guard(a)?;
        match (self, a) {
            (Lattice::Subspaces { .. }, Element::Space(s)) => Ok(Element::Space(s.complement())),
            (Lattice::Boolean { ground }, Element::Set(mask)) => {
                Ok(Element::Set(!mask & mask_of(*ground)))
            }
            (Lattice::Product(comps), Element::Tuple(parts)) => {
                let out: Result<Vec<Element>> = comps
                    .iter()
                    .zip(parts)
                    .map(|(l, p)| l.complement_of(p))
                    .collect();
                Ok(Element::Tuple(out?))
            }
            (Lattice::Table(_), _) => Err(Error::UnsupportedBackend(
                "table-driven lattices carry no complement construction",
            )),
            _ => unreachable!("guard admits matching variants only"),
        }
    }

    /// One element drawn at random.
    ///
    /// Subspace backend: the span of `m` uniform vectors with `m` itself
    /// uniform in `0..=n`. Boolean: a uniform mask. Table: a uniform index.
    pub fn random_element<R: RngCore + ?Sized>(&self, rng: &mut R) -> Element {
        match self {
            Lattice::Subspaces { field, ambient_dim } => {
                let m = rng::uniform(rng, *ambient_dim as u64 + 1) as usize;
                Element::Space(Subspace::random_span(m, *field, *ambient_dim, rng))
            }
            Lattice::Boolean { ground } => {
                Element::Set(rng.next_u64() & mask_of(*ground))
            }
            Lattice::Product(comps) => {
                Element::Tuple(comps.iter().map(|l| l.random_element(rng)).collect())
            }
            Lattice::Table(t) => Element::Index(rng::uniform(rng, t.size as u64) as usize),
        }
    }

    /// The span-of-m-vectors sampling model, exposed at the lattice level.
    pub fn random_subspace<R: RngCore + ?Sized>(&self, m: usize, rng: &mut R) -> Result<Subspace> {
        match self {
            Lattice::Subspaces { field, ambient_dim } => {
                Ok(Subspace::random_span(m, *field, *ambient_dim, rng))
            }
            _ => Err(Error::UnsupportedBackend(
                "subspace sampling needs the subspace backend",
            )),
        }
    }
}

impl Element {
    /// Convenience accessor for subspace-backed elements.
    pub fn as_space(&self) -> Option<&Subspace> {
        match self {
            Element::Space(s) => Some(s),
            _ => None,
        }
    }
}

impl From<Subspace> for Element {
    fn from(s: Subspace) -> Element {
        Element::Space(s)
    }
}

fn mask_of(ground: usize) -> u64 {
    if ground == 0 {
        0
    } else {
        (1u64 << ground) - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use crate::rng::rng_from_seed;

    fn subspace_lattice(q: u64, n: usize) -> Lattice {
        Lattice::subspaces(FieldSpec::new(q).unwrap(), n)
    }

    fn line(q: u64, n: usize, v: &[u64]) -> Element {
        Element::Space(Subspace::from_spanning(
            &Matrix::from_rows(FieldSpec::new(q).unwrap(), &[v.to_vec()]).unwrap(),
        ))
    }

    #[test]
    fn bounds_are_distinct_for_nontrivial_backends() {
        for lat in [
            subspace_lattice(2, 3),
            Lattice::boolean(4).unwrap(),
            Lattice::pentagon(),
            Lattice::product(vec![Lattice::boolean(2).unwrap(), subspace_lattice(3, 2)]),
        ] {
            assert_ne!(lat.bottom(), lat.top());
            assert!(lat.leq(&lat.bottom(), &lat.top()).unwrap());
        }
    }

    #[test]
    fn boolean_ops_are_set_ops() {
        let lat = Lattice::boolean(4).unwrap();
        let a = Element::Set(0b0011);
        let b = Element::Set(0b0110);
        assert_eq!(lat.join(&a, &b).unwrap(), Element::Set(0b0111));
        assert_eq!(lat.meet(&a, &b).unwrap(), Element::Set(0b0010));
        assert!(lat.leq(&Element::Set(0b0010), &b).unwrap());
        assert!(!lat.leq(&a, &b).unwrap());
    }

    #[test]
    fn mismatched_lattices_error() {
        let lat = subspace_lattice(2, 2);
        let foreign = line(2, 3, &[1, 0, 0]);
        assert!(matches!(
            lat.join(&lat.bottom(), &foreign),
            Err(Error::LatticeMismatch)
        ));
        let bool4 = Lattice::boolean(4).unwrap();
        assert!(matches!(
            bool4.meet(&Element::Set(1), &Element::Set(0b10000)),
            Err(Error::LatticeMismatch)
        ));
    }

    #[test]
    fn modular_law_holds_on_all_triples_of_small_subspace_lattice() {
        // L(F_2^2) has 5 elements; scan all 125 triples.
        let lat = subspace_lattice(2, 2);
        let elements = vec![
            lat.bottom(),
            line(2, 2, &[1, 0]),
            line(2, 2, &[0, 1]),
            line(2, 2, &[1, 1]),
            lat.top(),
        ];
        for a in &elements {
            for b in &elements {
                for c in &elements {
                    assert!(lat.check_modular_triple(a, b, c).unwrap());
                }
            }
        }
    }

    #[test]
    fn vacuous_modular_triples_pass() {
        let lat = subspace_lattice(2, 2);
        let a = line(2, 2, &[1, 0]);
        let c = line(2, 2, &[0, 1]);
        assert!(!lat.leq(&a, &c).unwrap());
        assert!(lat
            .check_modular_triple(&a, &lat.top(), &c)
            .unwrap());
    }

    #[test]
    fn pentagon_fails_modular_law_on_its_defining_triple() {
        // With O<a<c<I, O<b<I: a <= c but (a+b).c = I.c = c while
        // a + (b.c) = a + O = a.
        let lat = Lattice::pentagon();
        let (a, b, c) = (Element::Index(1), Element::Index(2), Element::Index(3));
        assert!(!lat.check_modular_triple(&a, &b, &c).unwrap());
    }

    #[test]
    fn chain_is_distributive() {
        let lat = Lattice::chain(4).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    assert!(lat
                        .check_distributive_triple(
                            &Element::Index(i),
                            &Element::Index(j),
                            &Element::Index(k)
                        )
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn boolean_lattice_is_distributive_everywhere() {
        let lat = Lattice::boolean(3).unwrap();
        for x in 0..8u64 {
            for y in 0..8u64 {
                for z in 0..8u64 {
                    assert!(lat
                        .check_distributive_triple(
                            &Element::Set(x),
                            &Element::Set(y),
                            &Element::Set(z)
                        )
                        .unwrap());
                }
            }
        }
    }

    #[test]
    fn subspace_lattice_has_distributivity_counterexample() {
        // x=span(e1), y=span(e2), z=span(e1+e2): x.(y+z) = x but
        // x.y + x.z = O.
        let lat = subspace_lattice(2, 2);
        let x = line(2, 2, &[1, 0]);
        let y = line(2, 2, &[0, 1]);
        let z = line(2, 2, &[1, 1]);
        assert!(!lat.check_distributive_triple(&x, &y, &z).unwrap());
        // Chains inside the lattice still satisfy both laws.
        assert!(lat
            .check_distributive_triple(&lat.bottom(), &x, &lat.top())
            .unwrap());
    }

    #[test]
    fn complements_and_non_uniqueness() {
        let lat = subspace_lattice(2, 2);
        assert!(lat.is_complement(&lat.bottom(), &lat.top()).unwrap());
        let a = line(2, 2, &[1, 0]);
        let c = lat.complement_of(&a).unwrap();
        assert_eq!(c, line(2, 2, &[0, 1]));
        assert!(lat.is_complement(&a, &c).unwrap());
        // A second complement of the same element.
        let other = line(2, 2, &[1, 1]);
        assert!(lat.is_complement(&a, &other).unwrap());
        assert_ne!(c, other);
        // a . a = a, so no nontrivial element complements itself.
        assert!(!lat.is_complement(&a, &a).unwrap());
        assert!(matches!(
            Lattice::pentagon().complement_of(&Element::Index(1)),
            Err(Error::UnsupportedBackend(_))
        ));
    }

    #[test]
    fn product_ops_are_componentwise() {
        let lat = Lattice::product(vec![Lattice::boolean(2).unwrap(), subspace_lattice(2, 2)]);
        let x = Element::Tuple(vec![Element::Set(0b01), line(2, 2, &[1, 0])]);
        let y = Element::Tuple(vec![Element::Set(0b10), line(2, 2, &[0, 1])]);
        let j = lat.join(&x, &y).unwrap();
        assert_eq!(
            j,
            Element::Tuple(vec![Element::Set(0b11), lat_top_space()])
        );
        let m = lat.meet(&x, &y).unwrap();
        assert_eq!(m, lat.bottom());

        let mut rng = rng_from_seed(2);
        for _ in 0..200 {
            let a = lat.random_element(&mut rng);
            let b = lat.random_element(&mut rng);
            let c = lat.random_element(&mut rng);
            assert!(lat.check_modular_triple(&a, &b, &c).unwrap());
        }
    }

    fn lat_top_space() -> Element {
        Element::Space(Subspace::full(FieldSpec::new(2).unwrap(), 2))
    }

    #[test]
    fn absorption_and_idempotence_on_random_elements() {
        let mut rng = rng_from_seed(14);
        for lat in [
            subspace_lattice(3, 4),
            Lattice::boolean(6).unwrap(),
            Lattice::pentagon(),
        ] {
            for _ in 0..100 {
                let x = lat.random_element(&mut rng);
                let y = lat.random_element(&mut rng);
                assert_eq!(lat.join(&x, &x).unwrap(), x);
                assert_eq!(lat.meet(&x, &x).unwrap(), x);
                assert_eq!(lat.join(&x, &lat.meet(&x, &y).unwrap()).unwrap(), x);
                assert_eq!(lat.meet(&x, &lat.join(&x, &y).unwrap()).unwrap(), x);
            }
        }
    }

    #[test]
    fn random_subspace_dimension_is_bounded_by_vector_count() {
        let lat = subspace_lattice(2, 8);
        let mut rng = rng_from_seed(6);
        for m in 0..=8 {
            let s = lat.random_subspace(m, &mut rng).unwrap();
            assert!(s.dim() <= m);
        }
        assert!(lat.random_subspace(0, &mut rng).unwrap().is_zero());
        assert!(Lattice::boolean(3)
            .unwrap()
            .random_subspace(1, &mut rng)
            .is_err());
    }
}
