use fuglede_core::exhaustive::classify_set;
use fuglede_core::residue;
use fuglede_core::spectral::{chars_orthogonal, counting_vector, find_spectrum, is_spectrum};
use fuglede_core::tiling::{find_tiling_partner, is_tiling_pair};
use fuglede_core::{apply_map, FpMatrix, GroupParams, GroupVector, PointSet, SearchLimits, Subspace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GROUPS: [(u32, usize); 5] = [(2, 4), (3, 2), (5, 2), (3, 3), (2, 3)];

fn group() -> impl Strategy<Value = GroupParams> {
    prop::sample::select(GROUPS.to_vec()).prop_map(|(p, d)| GroupParams::new(p, d).unwrap())
}

fn vector(g: GroupParams) -> impl Strategy<Value = GroupVector> {
    prop::collection::vec(0..g.p(), g.d()).prop_map(move |c| GroupVector::new(g, c).unwrap())
}

fn set(g: GroupParams, max: usize) -> impl Strategy<Value = PointSet> {
    prop::collection::vec(vector(g), 1..max).prop_map(move |vs| PointSet::new(g, vs).unwrap())
}

fn group_and_set(max: usize) -> impl Strategy<Value = (GroupParams, PointSet)> {
    group().prop_flat_map(move |g| (Just(g), set(g, max)))
}

fn random_map(g: GroupParams, seed: u64) -> FpMatrix {
    FpMatrix::random_invertible(g, &mut ChaCha8Rng::seed_from_u64(seed))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dot_is_additive((a, b, x) in group().prop_flat_map(|g| (vector(g), vector(g), vector(g)))) {
        let p = a.params().p();
        let lhs = (&a + &b).dot(&x).unwrap();
        let rhs = residue::add(a.dot(&x).unwrap(), b.dot(&x).unwrap(), p);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn counting_vector_totals((g, e) in group_and_set(12), seed in any::<u64>()) {
        let zero = counting_vector(&GroupVector::zero(g), &e).unwrap();
        prop_assert_eq!(zero.counts()[0], e.len() as u64);
        prop_assert!(zero.counts()[1..].iter().all(|&c| c == 0));
        let idx = fuglede_core::index::ElementIndex::new(g, 4096).unwrap();
        let delta = idx.vector(seed as usize % idx.order());
        prop_assert_eq!(counting_vector(&delta, &e).unwrap().total(), e.len() as u64);
    }

    #[test]
    fn orthogonality_is_symmetric((g, e, a, b) in group().prop_flat_map(|g| (Just(g), set(g, 12), vector(g), vector(g)))) {
        let _ = g;
        prop_assert_eq!(chars_orthogonal(&a, &b, &e).unwrap(), chars_orthogonal(&b, &a, &e).unwrap());
    }

    #[test]
    fn spectra_and_translations((g, e, c, v) in group().prop_flat_map(|g| (Just(g), set(g, 10), vector(g), vector(g)))) {
        let limits = SearchLimits::default();
        if let Some(a) = find_spectrum(&e, &limits).unwrap() {
            prop_assert!(is_spectrum(&a, &e).unwrap());
            prop_assert!(is_spectrum(&a.translate(&c).unwrap(), &e).unwrap());
            prop_assert!(is_spectrum(&a, &e.translate(&v).unwrap()).unwrap());
            // duality, observed empirically
            prop_assert!(is_spectrum(&e, &a).unwrap());
            // size law
            let order = g.order().unwrap() as usize;
            if e.len() > 1 && e.len() != order {
                prop_assert_eq!(e.len() % g.p() as usize, 0);
            }
        } else {
            prop_assert!(find_spectrum(&e.translate(&v).unwrap(), &limits).unwrap().is_none());
        }
    }

    #[test]
    fn tiling_symmetry_and_translation((g, e, v) in group().prop_flat_map(|g| (Just(g), set(g, 10), vector(g)))) {
        let limits = SearchLimits::default();
        match find_tiling_partner(&e, &limits).unwrap() {
            Some(t) => {
                prop_assert!(is_tiling_pair(&e, &t).unwrap());
                prop_assert!(is_tiling_pair(&t, &e).unwrap());
                prop_assert_eq!((e.len() * t.len()) as u64, g.order().unwrap());
                prop_assert!(is_tiling_pair(&e.translate(&v).unwrap(), &t).unwrap());
            }
            None => prop_assert!(find_tiling_partner(&e.translate(&v).unwrap(), &limits).unwrap().is_none()),
        }
    }

    #[test]
    fn change_of_basis_preserves_status((g, e) in group_and_set(10), seed in any::<u64>()) {
        let limits = SearchLimits::default();
        let m = random_map(g, seed);
        let image = apply_map(&m, &e).unwrap();
        prop_assert_eq!(image.len(), e.len());
        let before = classify_set(&e, &limits).unwrap();
        let after = classify_set(&image, &limits).unwrap();
        prop_assert_eq!((before.spectral, before.tiling), (after.spectral, after.tiling));
        let back = apply_map(&m.inverse().unwrap(), &image).unwrap();
        prop_assert_eq!(back, e);
    }

    #[test]
    fn perp_involution((g, gens) in group().prop_flat_map(|g| (Just(g), prop::collection::vec(vector(g), 0..4)))) {
        let w = Subspace::span(g, &gens).unwrap();
        let wp = w.perp();
        prop_assert_eq!(w.dim() + wp.dim(), g.d());
        prop_assert_eq!(wp.perp(), w.clone());
        for a in wp.basis() {
            for x in w.basis() {
                prop_assert_eq!(a.dot(x).unwrap(), 0);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Cosets of subspaces are both spectral and tiling.
    #[test]
    fn subspace_cosets((g, gens, v) in group().prop_flat_map(|g| (Just(g), prop::collection::vec(vector(g), 0..3), vector(g)))) {
        let limits = SearchLimits::default();
        let w = Subspace::span(g, &gens).unwrap();
        let coset = w.elements(4096).unwrap().translate(&v).unwrap();
        let a = find_spectrum(&coset, &limits).unwrap().expect("cosets are spectral");
        prop_assert!(is_spectrum(&a, &coset).unwrap());
        prop_assert!(is_spectrum(&coset, &a).unwrap());
        let t = find_tiling_partner(&coset, &limits).unwrap().expect("cosets tile");
        prop_assert!(is_tiling_pair(&coset, &t).unwrap());
    }
}
