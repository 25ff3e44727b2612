use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::category::{load_category, BUILTIN_NAMES};

const TOL: f64 = 1e-9;

fn word(cat: &CategoryData, s: &str) -> ObjectWord {
    ObjectWord::parse(cat, s).unwrap()
}

/// `Σ_c d(c) Tr(f_c)`, valid because the tree basis is dual under
/// composition and each simple loop evaluates to its dimension.
fn closed_trace(cat: &CategoryData, f: &Morphism) -> C64 {
    f.blocks().iter().enumerate().map(|(c, b)| cat.qdims()[c] * b.trace()).sum()
}

/// Fusion-table count of `dim Hom(A, B)` via multiplicity vectors.
fn count_hom(cat: &CategoryData, a: &ObjectWord, b: &ObjectWord) -> usize {
    let vec_of = |w: &ObjectWord| {
        let mut v = vec![0usize; cat.rank()];
        v[cat.unit().0] = 1;
        for &x in w.labels() {
            let mut nv = vec![0usize; cat.rank()];
            for y in cat.labels() {
                for c in cat.labels() {
                    nv[c.0] += v[y.0] * cat.n(y, x, c);
                }
            }
            v = nv;
        }
        v
    };
    vec_of(a).iter().zip(vec_of(b)).map(|(p, q)| p * q).sum()
}

#[test]
fn hom_dims() {
    let fib = load_category("fibonacci").unwrap();
    assert_eq!(hom_dim(&fib, &word(&fib, "tau"), &word(&fib, "tau")), 1);
    assert_eq!(hom_dim(&fib, &word(&fib, "tau,tau"), &word(&fib, "tau,tau")), 2);
    let ising = load_category("ising").unwrap();
    assert_eq!(hom_dim(&ising, &word(&ising, "sigma,sigma"), &word(&ising, "psi")), 1);
    for name in BUILTIN_NAMES {
        let cat = load_category(name).unwrap();
        let words = ObjectWord::all_up_to(&cat, 3);
        for a in &words {
            for b in &words {
                let d = hom_dim(&cat, a, b);
                assert_eq!(d, count_hom(&cat, a, b));
                assert_eq!(d, hom_dim(&cat, b, a));
            }
        }
    }
}

#[test]
fn unit_strips_out_of_words() {
    let fib = load_category("fibonacci").unwrap();
    assert_eq!(word(&fib, "1,tau,1"), word(&fib, "tau"));
    assert!(word(&fib, "").is_empty());
    assert!(ObjectWord::parse(&fib, "tau,sigma").is_err());
}

#[test]
fn composition_and_tensor_units() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let fib = load_category("fibonacci").unwrap();
    let x = word(&fib, "tau,tau");
    let y = word(&fib, "tau");
    let f = Morphism::random(&fib, &x, &y, &mut rng);
    let idx = Morphism::identity(&fib, &x);
    assert!(f.compose(&idx).unwrap().residual(&f).unwrap() < TOL);
    assert!(Morphism::identity(&fib, &y).compose(&f).unwrap().residual(&f).unwrap() < TOL);
    let id0 = Morphism::identity(&fib, &ObjectWord::unit());
    assert!(tensor(&fib, &id0, &f).residual(&f).unwrap() < TOL);
    assert!(tensor(&fib, &f, &id0).residual(&f).unwrap() < TOL);
    assert!(f.compose(&f).is_err());
}

#[test]
fn tensor_is_associative_and_satisfies_interchange() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for name in ["fibonacci", "ising", "semion"] {
        let cat = load_category(name).unwrap();
        let letters: Vec<_> = cat.labels().filter(|&l| !cat.is_unit(l)).collect();
        let pick = |rng: &mut ChaCha8Rng, n: usize| {
            ObjectWord::new(&cat, (0..n).map(|_| letters[rng.gen_range(0..letters.len())]))
        };
        for _ in 0..10 {
            let (a, b, c, d, e, g) = (pick(&mut rng, 1), pick(&mut rng, 2), pick(&mut rng, 1), pick(&mut rng, 1), pick(&mut rng, 2), pick(&mut rng, 1));
            let f1 = Morphism::random(&cat, &a, &b, &mut rng);
            let f2 = Morphism::random(&cat, &c, &d, &mut rng);
            let f3 = Morphism::random(&cat, &e, &g, &mut rng);
            let l = tensor(&cat, &tensor(&cat, &f1, &f2), &f3);
            let r = tensor(&cat, &f1, &tensor(&cat, &f2, &f3));
            assert!(l.residual(&r).unwrap() < TOL, "{name}");

            let g1 = Morphism::random(&cat, &b, &a, &mut rng);
            let g2 = Morphism::random(&cat, &d, &c, &mut rng);
            let lhs = tensor(&cat, &g1, &g2).compose(&tensor(&cat, &f1, &f2)).unwrap();
            let rhs = tensor(&cat, &g1.compose(&f1).unwrap(), &g2.compose(&f2).unwrap());
            assert!(lhs.residual(&rhs).unwrap() < TOL, "{name}");
        }
    }
}

#[test]
fn f_moves() {
    let ising = load_category("ising").unwrap();
    let w = word(&ising, "sigma,sigma,sigma");
    let m0 = f_move(&ising, &w, 0).unwrap();
    for mat in &m0.mats {
        assert!(crate::linalg::max_abs(&(mat - CMat::identity(mat.nrows(), mat.ncols()))) < TOL);
    }
    let m1 = f_move(&ising, &w, 1).unwrap();
    let h = 0.5f64.sqrt();
    let blk = &m1.mats[1];
    assert_eq!(blk.shape(), (2, 2));
    assert!((blk[(0, 0)] - C64::new(h, 0.0)).norm() < TOL);
    assert!((blk[(1, 1)] + C64::new(h, 0.0)).norm() < TOL);
    for mat in &m1.mats {
        assert_eq!(crate::linalg::rank(mat, 1e-12), mat.nrows());
    }
    assert!(matches!(f_move(&ising, &w, 2), Err(HomError::Position { .. })));
}

#[test]
fn r_moves() {
    let fib = load_category("fibonacci").unwrap();
    let tt = word(&fib, "tau,tau");
    let over = r_move(&fib, &tt, 0, Handedness::Over).unwrap();
    let under = r_move(&fib, &tt, 0, Handedness::Under).unwrap();
    let id = Morphism::identity(&fib, &tt);
    assert!(over.compose(&under).unwrap().residual(&id).unwrap() < TOL);
    assert!(under.compose(&over).unwrap().residual(&id).unwrap() < TOL);
    let pi = std::f64::consts::PI;
    assert!((over.blocks()[0][(0, 0)] - C64::from_polar(1.0, -4.0 * pi / 5.0)).norm() < TOL);
    assert!((over.blocks()[1][(0, 0)] - C64::from_polar(1.0, 3.0 * pi / 5.0)).norm() < TOL);
    assert!(r_move(&fib, &tt, 1, Handedness::Over).is_err());
}

#[test]
fn bends_and_zigzags() {
    for name in BUILTIN_NAMES {
        let cat = load_category(name).unwrap();
        for s in cat.labels() {
            let sw = ObjectWord::simple(&cat, s);
            let sd = ObjectWord::simple(&cat, cat.dual(s));
            let loop_r = cap(&cat, s).compose(&cup(&cat, s)).unwrap().as_scalar().unwrap();
            assert!((loop_r - cat.qdim(s)).norm() < TOL, "{name}");
            let loop_l = lcap(&cat, s).compose(&lcup(&cat, s)).unwrap().as_scalar().unwrap();
            assert!((loop_l - cat.qdim(s)).norm() < TOL, "{name}");
            let id_s = Morphism::identity(&cat, &sw);
            let id_sd = Morphism::identity(&cat, &sd);
            // S → S S^∨ S → S, twice.
            let z1 = embed(&cat, &sw, &lcap(&cat, s), &ObjectWord::unit())
                .compose(&embed(&cat, &ObjectWord::unit(), &cup(&cat, s), &sw))
                .unwrap();
            let z2 = embed(&cat, &ObjectWord::unit(), &cap(&cat, s), &sw)
                .compose(&embed(&cat, &sw, &lcup(&cat, s), &ObjectWord::unit()))
                .unwrap();
            assert!(z1.residual(&id_s).unwrap() < TOL, "{name}");
            assert!(z2.residual(&id_s).unwrap() < TOL, "{name}");
            // S^∨ → S^∨ S S^∨ → S^∨, twice.
            let z3 = embed(&cat, &sd, &cap(&cat, s), &ObjectWord::unit())
                .compose(&embed(&cat, &ObjectWord::unit(), &lcup(&cat, s), &sd))
                .unwrap();
            let z4 = embed(&cat, &ObjectWord::unit(), &lcap(&cat, s), &sd)
                .compose(&embed(&cat, &sd, &cup(&cat, s), &ObjectWord::unit()))
                .unwrap();
            assert!(z3.residual(&id_sd).unwrap() < TOL, "{name}");
            assert!(z4.residual(&id_sd).unwrap() < TOL, "{name}");
        }
    }
}

#[test]
fn pairing_dual_basis_and_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for name in BUILTIN_NAMES {
        let cat = load_category(name).unwrap();
        for x in ObjectWord::all_up_to(&cat, 3) {
            let id = Morphism::identity(&cat, &x);
            let mut sum = Morphism::zero(&cat, &x, &x);
            let terms = decompose_identity(&cat, &x);
            for t in &terms {
                sum = sum.add(&t.b.compose(&t.b_dual).unwrap()).unwrap();
            }
            assert!(sum.residual(&id).unwrap() < TOL, "{name} {x:?}");
            for r in cat.labels() {
                let n = terms.iter().filter(|t| t.r == r).count();
                assert_eq!(n, hom_dim(&cat, &ObjectWord::simple(&cat, r), &x));
                let p = simple_pairing_matrix(&cat, r, &x);
                if n > 0 {
                    assert!(p.determinant().norm() > 1e-8);
                }
                // Random basis: the solved dual basis still pairs to δ.
                let basis: Vec<_> = (0..n)
                    .map(|_| Morphism::random(&cat, &ObjectWord::simple(&cat, r), &x, &mut rng))
                    .collect();
                if let Ok(duals) = dual_basis(&cat, r, &x, &basis) {
                    for (k, bd) in duals.iter().enumerate() {
                        for (i, b) in basis.iter().enumerate() {
                            let z = bd.compose(b).unwrap().as_scalar().unwrap();
                            let want = if i == k { 1.0 } else { 0.0 };
                            assert!((z - C64::new(want, 0.0)).norm() < 1e-7);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let fib = load_category("fibonacci").unwrap();
    let t = word(&fib, "tau");
    assert!((trace(&fib, &Morphism::identity(&fib, &t)).unwrap() - C64::new(phi, 0.0)).norm() < TOL);
    assert!((trace(&fib, &Morphism::identity(&fib, &ObjectWord::unit())).unwrap() - C64::new(1.0, 0.0)).norm() < TOL);
    for name in BUILTIN_NAMES {
        let cat = load_category(name).unwrap();
        let words = ObjectWord::all_up_to(&cat, 2);
        for x in &words {
            let idt = trace(&cat, &Morphism::identity(&cat, x)).unwrap();
            let dx: C64 = x.labels().iter().map(|&l| cat.qdim(l)).product();
            assert!((idt - dx).norm() < TOL, "{name}");
            for y in &words {
                let f = Morphism::random(&cat, x, y, &mut rng);
                let g = Morphism::random(&cat, y, x, &mut rng);
                let gf = g.compose(&f).unwrap();
                let fg = f.compose(&g).unwrap();
                let r = trace(&cat, &gf).unwrap();
                assert!((r - closed_trace(&cat, &gf)).norm() < 1e-8, "{name}");
                assert!((r - left_trace(&cat, &gf).unwrap()).norm() < 1e-8, "{name}");
                assert!((r - trace(&cat, &fg).unwrap()).norm() < 1e-8, "{name}");
                let gram = trace_gram(&cat, x, y).unwrap();
                if gram.nrows() > 0 {
                    assert!(gram.determinant().norm() > 1e-8, "{name}");
                }
            }
        }
    }
}

#[test]
fn trace_dual_bases_pair_to_delta() {
    let ising = load_category("ising").unwrap();
    let x = word(&ising, "sigma,sigma");
    let (bs, ds) = trace_dual_bases(&ising, &x, &x).unwrap();
    assert_eq!(bs.len(), 2);
    for (p, d) in ds.iter().enumerate() {
        for (q, b) in bs.iter().enumerate() {
            let z = trace_pairing(&ising, b, d).unwrap();
            let want = if p == q { 1.0 } else { 0.0 };
            assert!((z - C64::new(want, 0.0)).norm() < TOL);
        }
    }
}

#[test]
fn coefficient_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ising = load_category("ising").unwrap();
    let x = word(&ising, "sigma,sigma");
    let y = word(&ising, "sigma,sigma,psi");
    let f = Morphism::random(&ising, &x, &y, &mut rng);
    let g = Morphism::from_coeffs(&ising, &x, &y, &f.coeffs()).unwrap();
    assert_eq!(f.residual(&g).unwrap(), 0.0);
    assert!(Morphism::from_coeffs(&ising, &x, &y, &[]).is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn braiding_is_natural(seed in any::<u64>(), name in prop::sample::select(vec!["fibonacci", "ising", "z3"])) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let cat = load_category(name).unwrap();
            let letters: Vec<_> = cat.labels().filter(|&l| !cat.is_unit(l)).collect();
            let mut pick = |n: usize| ObjectWord::new(&cat, (0..n).map(|_| letters[rng.gen_range(0..letters.len())]));
            let (a, b, c) = (pick(1), pick(1), pick(2));
            // c_{x,z} ∘ (f ⊗ id_z) = (id_z ⊗ f) ∘ c_{y,z} for f: a→c, z = b.
            let f = Morphism::random(&cat, &a, &c, &mut ChaCha8Rng::seed_from_u64(seed ^ 1));
            let ab = a.concat(&b);
            let cb = c.concat(&b);
            let cross_ab = r_move(&cat, &ab, 0, Handedness::Over).unwrap();
            // c·b has length 3: move b across both letters of c.
            let m1 = r_move(&cat, &cb, 1, Handedness::Over).unwrap();
            let cb2 = ObjectWord::new(&cat, [c.labels()[0], b.labels()[0], c.labels()[1]]);
            let m2 = r_move(&cat, &cb2, 0, Handedness::Over).unwrap();
            let cross_cb = m2.compose(&m1).unwrap();
            let lhs = cross_cb.compose(&right_extend(&cat, &f, &b)).unwrap();
            let rhs = left_whisker(&cat, &b, &f).compose(&cross_ab).unwrap();
            prop_assert!(lhs.residual(&rhs).unwrap() < 1e-8);
        }
    }
}
