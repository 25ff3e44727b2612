use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tubecat::category::{load_category, BUILTIN_NAMES};
use tubecat::homspace::{hom_dim, trace};
use tubecat::tube::{tube_compose, tube_hom_dim, tube_identity};
use tubecat::{CategoryData, Label, Morphism, ObjectWord, TubeMorphism, C64};

const TOL: f64 = 1e-8;

fn word(cat: &CategoryData, idx: &[usize]) -> ObjectWord {
    ObjectWord::new(cat, idx.iter().map(|&i| Label(i % cat.rank())))
}

fn fusion_vector(cat: &CategoryData, x: &ObjectWord) -> Vec<usize> {
    let mut v = vec![0usize; cat.rank()];
    v[cat.unit().0] = 1;
    for &a in x.labels() {
        let mut next = vec![0usize; cat.rank()];
        for y in cat.labels() {
            for z in cat.labels() {
                next[z.0] += v[y.0] * cat.n(y, a, z);
            }
        }
        v = next;
    }
    v
}

fn setup() -> impl Strategy<Value = (usize, Vec<usize>, Vec<usize>, u64)> {
    (
        0..BUILTIN_NAMES.len(),
        prop::collection::vec(0usize..8, 0..=3),
        prop::collection::vec(0usize..8, 0..=3),
        any::<u64>(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hom_dims_match_fusion_counts((c, a, b, _) in setup()) {
        let cat = load_category(BUILTIN_NAMES[c]).unwrap();
        let (x, y) = (word(&cat, &a), word(&cat, &b));
        let want: usize = fusion_vector(&cat, &x).iter().zip(fusion_vector(&cat, &y)).map(|(p, q)| p * q).sum();
        prop_assert_eq!(hom_dim(&cat, &x, &y), want);
    }

    #[test]
    fn coefficients_round_trip((c, a, b, seed) in setup()) {
        let cat = load_category(BUILTIN_NAMES[c]).unwrap();
        let (x, y) = (word(&cat, &a), word(&cat, &b));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Morphism::random(&cat, &x, &y, &mut rng);
        let g = Morphism::from_coeffs(&cat, &x, &y, &f.coeffs()).unwrap();
        prop_assert_eq!(f.residual(&g).unwrap(), 0.0);
    }

    #[test]
    fn trace_is_cyclic((c, a, b, seed) in setup()) {
        let cat = load_category(BUILTIN_NAMES[c]).unwrap();
        let (x, y) = (word(&cat, &a), word(&cat, &b));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = Morphism::random(&cat, &x, &y, &mut rng);
        let g = Morphism::random(&cat, &y, &x, &mut rng);
        let lhs = trace(&cat, &f.compose(&g).unwrap()).unwrap();
        let rhs = trace(&cat, &g.compose(&f).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() <= TOL * (1.0 + lhs.norm()));
    }

    #[test]
    fn tube_composition_is_bilinear_and_unital((c, a, b, seed) in setup()) {
        let cat = load_category(BUILTIN_NAMES[c]).unwrap();
        let (x, y) = (word(&cat, &a[..a.len().min(2)]), word(&cat, &b[..b.len().min(2)]));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = TubeMorphism::random(&cat, &x, &y, &mut rng);
        let g = TubeMorphism::random(&cat, &y, &x, &mut rng);
        let h = TubeMorphism::random(&cat, &y, &x, &mut rng);
        prop_assert!(tube_compose(&cat, &tube_identity(&cat, &y), &f).unwrap().residual(&f).unwrap() <= TOL);

        let z = C64::new(0.5, -1.25);
        let gh: Vec<C64> = g.coeffs().iter().zip(h.coeffs()).map(|(p, q)| p + z * q).collect();
        let gh = TubeMorphism::from_coeffs(&cat, &y, &x, &gh).unwrap();
        let lhs = tube_compose(&cat, &gh, &f).unwrap();
        let (gf, hf) = (tube_compose(&cat, &g, &f).unwrap(), tube_compose(&cat, &h, &f).unwrap());
        let rhs: Vec<C64> = gf.coeffs().iter().zip(hf.coeffs()).map(|(p, q)| p + z * q).collect();
        let rhs = TubeMorphism::from_coeffs(&cat, &x, &x, &rhs).unwrap();
        prop_assert!(lhs.residual(&rhs).unwrap() <= TOL);
        prop_assert_eq!(f.dim(), tube_hom_dim(&cat, &x, &y));
    }
}
