//! Law-level properties over randomized instances.
//!
//! Each case draws a seed and replays it through the crate's own
//! deterministic generators, so shrinking reproduces exact instances.

use modlat::analysis::gaussian_coeff;
use modlat::ibe::{self, ParamPolicy};
use modlat::rng::rng_from_seed;
use modlat::{Element, FieldSpec, Lattice, Matrix, PairingContext, Subspace};
use num::BigUint;
use proptest::prelude::*;
use rand::RngCore;

const PRIMES: [u64; 5] = [2, 3, 5, 7, 101];

fn arb_field() -> impl Strategy<Value = FieldSpec> {
    (0..PRIMES.len()).prop_map(|i| FieldSpec::new(PRIMES[i]).unwrap())
}

fn random_matrix(field: FieldSpec, rows: usize, cols: usize, seed: u64) -> Matrix {
    Matrix::random(rows, cols, field, &mut rng_from_seed(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn rref_is_idempotent_and_preserves_row_space(
        field in arb_field(),
        rows in 0usize..6,
        cols in 1usize..6,
        seed in any::<u64>(),
    ) {
        let m = random_matrix(field, rows, cols, seed);
        let reduced = m.rref();
        let again = reduced.matrix.rref();
        prop_assert_eq!(&reduced.matrix, &again.matrix);
        prop_assert_eq!(reduced.rank, again.rank);
        // Every original row solves in the reduced basis and vice versa.
        let space = Subspace::from_spanning(&m);
        for i in 0..m.rows() {
            prop_assert!(space.contains_vector(m.row(i)));
        }
        prop_assert_eq!(space.basis(), &reduced.matrix);
        // Pivots are strictly increasing.
        prop_assert!(reduced.pivots.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn kernel_dimensions_and_annihilation(
        field in arb_field(),
        rows in 0usize..5,
        cols in 1usize..6,
        seed in any::<u64>(),
    ) {
        let m = random_matrix(field, rows, cols, seed);
        let k = m.kernel();
        prop_assert_eq!(m.rank() + k.rows(), m.cols());
        if k.rows() > 0 {
            prop_assert!(m.multiply(&k.transpose()).unwrap().is_zero());
        }
    }

    #[test]
    fn stacking_never_loses_rank(
        field in arb_field(),
        rows_a in 0usize..4,
        rows_b in 0usize..4,
        cols in 1usize..5,
        seed in any::<u64>(),
    ) {
        let a = random_matrix(field, rows_a, cols, seed);
        let b = random_matrix(field, rows_b, cols, seed.wrapping_add(1));
        let stacked = a.stack(&b).unwrap();
        prop_assert!(stacked.rank() >= a.rank().max(b.rank()));
        prop_assert!(stacked.rank() <= a.rank() + b.rank());
    }
}

fn backends(field: FieldSpec, n: usize) -> Vec<Lattice> {
    vec![
        Lattice::subspaces(field, n),
        Lattice::boolean(n).unwrap(),
        Lattice::product(vec![
            Lattice::subspaces(field, n.min(3)),
            Lattice::boolean(2).unwrap(),
        ]),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lattice_laws_hold_on_random_elements(
        field in arb_field(),
        n in 2usize..5,
        seed in any::<u64>(),
    ) {
        for lat in backends(field, n) {
            let mut rng = rng_from_seed(seed);
            let x = lat.random_element(&mut rng);
            let y = lat.random_element(&mut rng);
            let z = lat.random_element(&mut rng);
            // Idempotence, commutativity, associativity, absorption.
            prop_assert_eq!(lat.join(&x, &x).unwrap(), x.clone());
            prop_assert_eq!(lat.meet(&x, &x).unwrap(), x.clone());
            prop_assert_eq!(lat.join(&x, &y).unwrap(), lat.join(&y, &x).unwrap());
            prop_assert_eq!(lat.meet(&x, &y).unwrap(), lat.meet(&y, &x).unwrap());
            prop_assert_eq!(
                lat.join(&x, &lat.join(&y, &z).unwrap()).unwrap(),
                lat.join(&lat.join(&x, &y).unwrap(), &z).unwrap()
            );
            prop_assert_eq!(
                lat.meet(&x, &lat.meet(&y, &z).unwrap()).unwrap(),
                lat.meet(&lat.meet(&x, &y).unwrap(), &z).unwrap()
            );
            prop_assert_eq!(lat.join(&x, &lat.meet(&x, &y).unwrap()).unwrap(), x.clone());
            prop_assert_eq!(lat.meet(&x, &lat.join(&x, &y).unwrap()).unwrap(), x.clone());
            // Order sandwich and bounds.
            let meet = lat.meet(&x, &y).unwrap();
            let join = lat.join(&x, &y).unwrap();
            prop_assert!(lat.leq(&meet, &x).unwrap());
            prop_assert!(lat.leq(&x, &join).unwrap());
            prop_assert!(lat.leq(&lat.bottom(), &x).unwrap());
            prop_assert!(lat.leq(&x, &lat.top()).unwrap());
            // All three backends here are modular.
            prop_assert!(lat.check_modular_triple(&x, &y, &z).unwrap());
            // leq agrees with meet.
            prop_assert_eq!(lat.leq(&x, &y).unwrap(), lat.meet(&x, &y).unwrap() == x);
        }
    }

    #[test]
    fn subspace_dimension_law(
        field in arb_field(),
        n in 1usize..6,
        m1 in 0usize..5,
        m2 in 0usize..5,
        seed in any::<u64>(),
    ) {
        let mut rng = rng_from_seed(seed);
        let x = Subspace::random_span(m1, field, n, &mut rng);
        let y = Subspace::random_span(m2, field, n, &mut rng);
        let meet = x.meet(&y).unwrap();
        let join = x.join(&y).unwrap();
        prop_assert_eq!(x.dim() + y.dim(), meet.dim() + join.dim());
    }

    #[test]
    fn product_bounds_are_componentwise(
        field in arb_field(),
        seed in any::<u64>(),
    ) {
        let comps = vec![Lattice::subspaces(field, 3), Lattice::boolean(3).unwrap()];
        let lat = Lattice::product(comps.clone());
        let bottom = lat.bottom();
        let top = lat.top();
        prop_assert_eq!(
            bottom,
            Element::Tuple(comps.iter().map(Lattice::bottom).collect::<Vec<_>>())
        );
        prop_assert_eq!(
            top,
            Element::Tuple(comps.iter().map(Lattice::top).collect::<Vec<_>>())
        );
        let mut rng = rng_from_seed(seed);
        let x = lat.random_element(&mut rng);
        prop_assert_eq!(lat.meet(&x, &lat.top()).unwrap(), x.clone());
        prop_assert_eq!(lat.join(&x, &lat.bottom()).unwrap(), x);
    }

    #[test]
    fn pairing_symmetry_bound_and_bilinearity(
        field in arb_field(),
        n in 2usize..5,
        seed in any::<u64>(),
    ) {
        let lat = Lattice::subspaces(field, n);
        let mut rng = rng_from_seed(seed);
        let d_dim = 1 + (rng.next_u64() as usize) % (n - 1).max(1);
        let d = Subspace::random_of_dim(d_dim.min(n - 1), field, n, &mut rng).unwrap();
        let ctx = PairingContext::new(lat.clone(), Element::Space(d)).unwrap();
        let x = lat.random_element(&mut rng);
        let y = lat.random_element(&mut rng);
        prop_assert_eq!(ctx.pair(&x, &y).unwrap(), ctx.pair(&y, &x).unwrap());
        prop_assert!(lat.leq(&ctx.pair(&x, &y).unwrap(), ctx.d()).unwrap());
        let a = lat.join(ctx.d(), &lat.random_element(&mut rng)).unwrap();
        let b = lat.join(ctx.d(), &lat.random_element(&mut rng)).unwrap();
        prop_assert!(ctx.check_bilinear(&x, &y, &a, Some(&b)).unwrap());
    }

    #[test]
    fn boolean_pairing_always_leaks(
        ground in 2usize..7,
        d_bits in 1u64..62,
        seed in any::<u64>(),
    ) {
        let lat = Lattice::boolean(ground).unwrap();
        let top = match lat.top() { Element::Set(m) => m, _ => unreachable!() };
        let d = d_bits & top;
        prop_assume!(d != 0 && d != top);
        let ctx = PairingContext::new(lat.clone(), Element::Set(d)).unwrap();
        let mut rng = rng_from_seed(seed);
        for _ in 0..16 {
            let x = lat.random_element(&mut rng);
            let y = lat.random_element(&mut rng);
            prop_assert_eq!(ctx.pair(&x, &y).unwrap(), ctx.leak_value(&x, &y).unwrap());
        }
    }

    #[test]
    fn serialization_roundtrip(
        field in arb_field(),
        n in 1usize..7,
        m in 0usize..7,
        seed in any::<u64>(),
    ) {
        let s = Subspace::random_span(m, field, n, &mut rng_from_seed(seed));
        let bytes = s.canonical_bytes();
        let back = Subspace::parse_canonical(std::str::from_utf8(&bytes).unwrap()).unwrap();
        prop_assert_eq!(s, back);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn protocol_roundtrip_and_ciphertext_hygiene(
        q_idx in 1usize..4, // q in {3, 5, 7}
        seed in any::<u64>(),
    ) {
        let field = FieldSpec::new(PRIMES[q_idx]).unwrap();
        let policy = ParamPolicy::geometry5(field, 40).unwrap().with_issuance_bound(64);
        let mut rng = rng_from_seed(seed);
        let Ok((params, mut msk)) = ibe::setup(&policy, &mut rng) else {
            // Degenerate draw; the retry contract already errored cleanly.
            return Ok(());
        };
        let mut message = vec![0u8; policy.message_bytes()];
        for b in &mut message {
            *b = (rng.next_u64() & 0xff) as u8;
        }
        for attempt in 0..16u32 {
            let id = format!("prop-{attempt}");
            let Ok(key) = ibe::extract(&params, &mut msk, id.as_bytes()) else { continue };
            let Ok(ct) = ibe::encrypt(&params, id.as_bytes(), &message, &mut rng) else { continue };
            prop_assert_eq!(ibe::decrypt(&params, &key, &ct).unwrap(), message.clone());
            // U stays outside the interval above d: d <= U would require
            // d <= P, which setup forbids.
            prop_assert!(!params.d().leq(ct.u()).unwrap());
            prop_assert!(ct.u().leq(params.p()).unwrap());
            break;
        }
    }

    #[test]
    fn issuance_counter_is_monotone_and_capped(
        bound in 1u64..6,
        seed in any::<u64>(),
    ) {
        let field = FieldSpec::new(5).unwrap();
        let policy = ParamPolicy::geometry5(field, 16).unwrap().with_issuance_bound(bound);
        let mut rng = rng_from_seed(seed);
        let Ok((params, mut msk)) = ibe::setup(&policy, &mut rng) else { return Ok(()) };
        let mut last = msk.issued();
        for i in 0..(bound + 4) {
            let before = msk.issued();
            let outcome = ibe::extract(&params, &mut msk, format!("id-{i}").as_bytes());
            let after = msk.issued();
            prop_assert!(after >= before);
            prop_assert!(after <= bound);
            prop_assert!(after >= last);
            last = after;
            if before == bound {
                prop_assert!(matches!(outcome, Err(modlat::Error::IssuanceExhausted(_))));
            }
        }
    }

    #[test]
    fn subspace_counts_cross_check_small_lattices(
        n in 0usize..4,
    ) {
        // Total subspace count equals the sum of per-dimension coefficients,
        // confirmed by enumerating every element of L(F_2^n).
        let field = FieldSpec::new(2).unwrap();
        let lat = Lattice::subspaces(field, n);
        let all = modlat::analysis::enumerate_lattice_elements(&lat, 10_000).unwrap();
        let expected: BigUint = (0..=n as u64).map(|k| gaussian_coeff(n as u64, k, 2)).sum();
        prop_assert_eq!(BigUint::from(all.len()), expected);
    }
}
