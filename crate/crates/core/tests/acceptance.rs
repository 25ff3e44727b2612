//! Acceptance run: one line per criterion, non-zero exit if any fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tubecat::category::{check_axioms, load_category, BUILTIN_NAMES};
use tubecat::diagram::programs::{
    bend_bindings, left_bent_projector, left_partial_trace, right_bent_projector, right_partial_trace, ring, ring_pair,
    twisted_ring, with,
};
use tubecat::diagram::{evaluate, Bindings};
use tubecat::homspace::{cap, cup, decompose_identity, dual_basis, hom_dim, simple_basis, trace, trace_gram};
use tubecat::reps::{block_decompose_end, compose_lambdas_check, lambda_map, verify_opposite};
use tubecat::tube::{tube_algebra, tube_compose, tube_hom_dim, tube_identity};
use tubecat::verify::{run_suite, to_csv, to_text};
use tubecat::{CMat, CategoryData, Exec, Label, Morphism, ObjectWord, TubeMorphism, C64};

const TOL: f64 = 1e-8;
const VACUUM_TOL: f64 = 1e-10;
const GRAM_MIN: f64 = 1e-8;
const SEED: u64 = 2024;

struct Line {
    pass: bool,
    text: String,
}

fn line(id: usize, name: &str, worst: f64, tol: f64, extra: bool, note: String) -> Line {
    let pass = worst <= tol && extra;
    Line {
        pass,
        text: format!(
            "[{}] {id}. {name}: max residual {worst:.3e} (tol {tol:.0e}){}",
            if pass { "PASS" } else { "FAIL" },
            if note.is_empty() { String::new() } else { format!("; {note}") }
        ),
    }
}

fn cats() -> Vec<CategoryData> {
    BUILTIN_NAMES.iter().map(|n| load_category(n).unwrap()).collect()
}

fn letters(cat: &CategoryData) -> Vec<Label> {
    let v: Vec<Label> = cat.labels().filter(|&l| !cat.is_unit(l)).collect();
    if v.is_empty() {
        vec![cat.unit()]
    } else {
        v
    }
}

fn random_word(cat: &CategoryData, rng: &mut ChaCha8Rng, from: &[Label], lo: usize, hi: usize) -> ObjectWord {
    let n = rng.gen_range(lo..=hi);
    ObjectWord::new(cat, (0..n).map(|_| from[rng.gen_range(0..from.len())]))
}

fn all_labels(cat: &CategoryData) -> Vec<Label> {
    cat.labels().collect()
}

/// `d(C) = Σ d(S)²` from the raw dimensions.
fn dim_c(cat: &CategoryData) -> C64 {
    cat.qdims().iter().map(|d| d * d).sum()
}

/// `v[c] = dim Hom(c, X)` by repeated fusion.
fn fusion_vector(cat: &CategoryData, x: &[Label]) -> Vec<usize> {
    let mut v = vec![0usize; cat.rank()];
    v[cat.unit().0] = 1;
    for &a in x {
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

fn count(cat: &CategoryData, a: &[Label], b: &[Label]) -> usize {
    fusion_vector(cat, a).iter().zip(fusion_vector(cat, b)).map(|(p, q)| p * q).sum()
}

fn axioms() -> Line {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for cat in cats() {
        let rep = check_axioms(&cat);
        ok &= rep.pass;
        for e in &rep.entries {
            worst = worst.max(e.max_residual);
        }
    }
    line(1, "axioms", worst, TOL, ok, format!("{} categories", BUILTIN_NAMES.len()))
}

fn killing_ring() -> Line {
    let none = Bindings::new();
    let mut worst: f64 = 0.0;
    let mut fib_tau = f64::NAN;
    for cat in cats() {
        for r in cat.labels() {
            let rw = ObjectWord::simple(&cat, r);
            let mut sum = Morphism::zero(&cat, &rw, &rw);
            for s in cat.labels() {
                let m = evaluate(&cat, &ring(&cat, s, r).unwrap(), &none).unwrap();
                sum.add_assign_scaled(cat.qdim(s), &m).unwrap();
            }
            let want = if cat.is_unit(r) { dim_c(&cat) } else { C64::new(0.0, 0.0) };
            let got = sum.as_scalar().unwrap_or(C64::new(0.0, 0.0));
            let res = sum.residual(&Morphism::identity(&cat, &rw).scale(want)).unwrap();
            worst = worst.max(res);
            if cat.name() == "fibonacci" && !cat.is_unit(r) {
                fib_tau = got.norm();
            }
        }
    }
    line(2, "killing ring", worst, TOL, fib_tau <= TOL, format!("fibonacci tau value {fib_tau:.1e}"))
}

fn identity_and_pairing() -> Line {
    let mut worst: f64 = 0.0;
    let mut min_det = f64::INFINITY;
    for cat in cats() {
        let words = ObjectWord::all_up_to(&cat, 3);
        for x in &words {
            let mut sum = Morphism::zero(&cat, x, x);
            let mut terms = 0;
            for t in decompose_identity(&cat, x) {
                sum.add_assign_scaled(C64::new(1.0, 0.0), &t.b.compose(&t.b_dual).unwrap()).unwrap();
                terms += 1;
            }
            worst = worst.max(sum.residual(&Morphism::identity(&cat, x)).unwrap());
            // one term per simple summand, counted with multiplicity
            let expected: usize = fusion_vector(&cat, x.labels()).iter().sum();
            if terms != expected {
                worst = f64::INFINITY;
            }
        }
        for x in &words {
            for y in &words {
                let g = trace_gram(&cat, x, y).unwrap();
                if g.nrows() > 0 {
                    min_det = min_det.min(g.determinant().norm());
                }
            }
        }
    }
    line(
        3,
        "identity decomposition and trace pairing",
        worst,
        TOL,
        min_det > GRAM_MIN,
        format!("words of length <= 3, min |det Gram| {min_det:.3e}"),
    )
}

fn mixed(rng: &mut ChaCha8Rng, std: &[Morphism]) -> Vec<Morphism> {
    let n = std.len();
    let m = CMat::from_fn(n, n, |i, j| {
        C64::new(rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 }, rng.gen_range(-1.0..1.0))
    });
    (0..n)
        .map(|p| {
            let mut acc = std[0].scale(C64::new(0.0, 0.0));
            for (q, e) in std.iter().enumerate() {
                acc.add_assign_scaled(m[(p, q)], e).unwrap();
            }
            acc
        })
        .collect()
}

fn diagram_lemmas() -> Line {
    const N: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = [0.0f64; 4];
    for cat in cats() {
        let lt = letters(&cat);
        let labels = all_labels(&cat);
        let pick = |rng: &mut ChaCha8Rng| labels[rng.gen_range(0..labels.len())];
        for _ in 0..N {
            // Partial traces of twisted duals: (S' → S) is tr(j ∘ i)/d(S) δ_{SS'}.
            let x = random_word(&cat, &mut rng, &lt, 1, 2);
            let y = random_word(&cat, &mut rng, &lt, 2, 2);
            let s = pick(&mut rng);
            let s2 = if rng.gen_bool(0.5) { s } else { pick(&mut rng) };
            let (sw, s2w) = (ObjectWord::simple(&cat, s), ObjectWord::simple(&cat, s2));
            let jm = Morphism::random(&cat, &x.concat(&s2w), &y, &mut rng);
            let im = Morphism::random(&cat, &y, &x.concat(&sw), &mut rng);
            let b = with(with(bend_bindings(&cat, &x), "j", jm.clone()), "i", im.clone());
            let got = evaluate(&cat, &left_partial_trace(&cat, &b, &x, s2, &y, s).unwrap(), &b).unwrap();
            let want = if s == s2 {
                let t = trace(&cat, &jm.compose(&im).unwrap()).unwrap();
                Morphism::identity(&cat, &sw).scale(t / cat.qdim(s))
            } else {
                Morphism::zero(&cat, &s2w, &sw)
            };
            worst[0] = worst[0].max(got.residual(&want).unwrap());
            let lm = Morphism::random(&cat, &s2w.concat(&x), &y, &mut rng);
            let km = Morphism::random(&cat, &y, &sw.concat(&x), &mut rng);
            let b = with(with(bend_bindings(&cat, &x), "l", lm.clone()), "k", km.clone());
            let got = evaluate(&cat, &right_partial_trace(&cat, &b, &x, s2, &y, s).unwrap(), &b).unwrap();
            let want = if s == s2 {
                let t = trace(&cat, &lm.compose(&km).unwrap()).unwrap();
                Morphism::identity(&cat, &sw).scale(t / cat.qdim(s))
            } else {
                Morphism::zero(&cat, &s2w, &sw)
            };
            worst[0] = worst[0].max(got.residual(&want).unwrap());

            // Bent projectors weighted by d(T) resolve d(S) id.
            let x = random_word(&cat, &mut rng, &lt, 1, 2);
            let xd = x.dual(&cat);
            let s = pick(&mut rng);
            let left = rng.gen_bool(0.5);
            let sw = ObjectWord::simple(&cat, s);
            let whole = if left { sw.concat(&x) } else { x.concat(&sw) };
            let mut sum = Morphism::zero(&cat, &whole, &whole);
            for &t in &labels {
                let tw = ObjectWord::simple(&cat, t);
                let tgt = if left { tw.concat(&xd) } else { xd.concat(&tw) };
                let std = simple_basis(&cat, s, &tgt);
                if std.is_empty() {
                    continue;
                }
                let basis = mixed(&mut rng, &std);
                let duals = dual_basis(&cat, s, &tgt, &basis).unwrap();
                for (bv, bd) in basis.into_iter().zip(duals) {
                    let bind = with(with(bend_bindings(&cat, &x), "b", bv), "bd", bd);
                    let d = if left {
                        left_bent_projector(&cat, &bind, &x, s, t)
                    } else {
                        right_bent_projector(&cat, &bind, &x, s, t)
                    }
                    .unwrap();
                    sum.add_assign_scaled(cat.qdim(t), &evaluate(&cat, &d, &bind).unwrap()).unwrap();
                }
            }
            worst[1] = worst[1].max(sum.residual(&Morphism::identity(&cat, &whole).scale(cat.qdim(s))).unwrap());

            // A ring around R T kills everything except the R^∨ = T channel.
            let (r, t) = (pick(&mut rng), if rng.gen_bool(0.5) { None } else { Some(pick(&mut rng)) });
            let t = t.unwrap_or(cat.dual(r));
            let rt = ObjectWord::new(&cat, [r, t]);
            let mut sum = Morphism::zero(&cat, &rt, &rt);
            let none = Bindings::new();
            for &sl in &labels {
                let m = evaluate(&cat, &ring_pair(&cat, sl, r, t).unwrap(), &none).unwrap();
                sum.add_assign_scaled(cat.qdim(sl), &m).unwrap();
            }
            let want = if t == cat.dual(r) {
                cup(&cat, r).compose(&cap(&cat, r)).unwrap().scale(dim_c(&cat) / cat.qdim(r))
            } else {
                Morphism::zero(&cat, &rt, &rt)
            };
            worst[2] = worst[2].max(sum.residual(&want).unwrap());

            // Twisted S-loop: δ_{II'} δ_{JJ'} d(C) tr(k ∘ j) / (d(I) d(J)) id.
            let mut triples = Vec::new();
            for &i in &labels {
                for &j in &labels {
                    for &l in &labels {
                        if cat.n(i, j, l) > 0 {
                            triples.push((i, j, l));
                        }
                    }
                }
            }
            let (i, j, l) = triples[rng.gen_range(0..triples.len())];
            let same: Vec<(Label, Label)> = triples.iter().filter(|t| t.2 == l).map(|t| (t.0, t.1)).collect();
            let (i2, j2) = if rng.gen_bool(0.5) { (i, j) } else { same[rng.gen_range(0..same.len())] };
            let (ij, ij2, lw) = (ObjectWord::new(&cat, [i, j]), ObjectWord::new(&cat, [i2, j2]), ObjectWord::simple(&cat, l));
            let jm = Morphism::random(&cat, &ij, &lw, &mut rng);
            let km = Morphism::random(&cat, &lw, &ij2, &mut rng);
            let b = with(with(Bindings::new(), "j", jm.clone()), "k", km.clone());
            let mut sum = Morphism::zero(&cat, &ij, &ij2);
            for &sl in &labels {
                let d = twisted_ring(&cat, &b, sl, [i, j], l, [i2, j2]).unwrap();
                sum.add_assign_scaled(cat.qdim(sl), &evaluate(&cat, &d, &b).unwrap()).unwrap();
            }
            let want = if (i, j) == (i2, j2) {
                let t = trace(&cat, &km.compose(&jm).unwrap()).unwrap();
                Morphism::identity(&cat, &ij).scale(t * dim_c(&cat) / (cat.qdim(i) * cat.qdim(j)))
            } else {
                Morphism::zero(&cat, &ij, &ij2)
            };
            worst[3] = worst[3].max(sum.residual(&want).unwrap());
        }
    }
    let w = worst.iter().copied().fold(0.0, f64::max);
    line(
        4,
        "twisted duals, dual decomposition, ring pair, twisted S-loop",
        w,
        TOL,
        true,
        format!("{N} instances per category; {:.1e} / {:.1e} / {:.1e} / {:.1e}", worst[0], worst[1], worst[2], worst[3]),
    )
}

fn tube_category() -> Line {
    const N: usize = 50;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut worst: f64 = 0.0;
    let mut dims = Vec::new();
    let mut dims_ok = true;
    for cat in cats() {
        let labels = all_labels(&cat);
        for _ in 0..N {
            let ws: Vec<ObjectWord> = (0..4).map(|_| random_word(&cat, &mut rng, &labels, 0, 2)).collect();
            let f = TubeMorphism::random(&cat, &ws[0], &ws[1], &mut rng);
            let g = TubeMorphism::random(&cat, &ws[1], &ws[2], &mut rng);
            let h = TubeMorphism::random(&cat, &ws[2], &ws[3], &mut rng);
            worst = worst.max(tube_compose(&cat, &tube_identity(&cat, &ws[1]), &f).unwrap().residual(&f).unwrap());
            worst = worst.max(tube_compose(&cat, &f, &tube_identity(&cat, &ws[0])).unwrap().residual(&f).unwrap());
            let l = tube_compose(&cat, &tube_compose(&cat, &h, &g).unwrap(), &f).unwrap();
            let r = tube_compose(&cat, &h, &tube_compose(&cat, &g, &f).unwrap()).unwrap();
            worst = worst.max(l.residual(&r).unwrap());
        }
        let mut oracle = 0;
        for x in cat.labels() {
            for y in cat.labels() {
                for r in cat.labels() {
                    oracle += count(&cat, &[r, x], &[y, r]);
                }
            }
        }
        let ta = tube_algebra(&cat, Exec::default()).unwrap();
        let expected = match cat.name() {
            "trivial" => Some(1),
            "semion" => Some(4),
            "fibonacci" => Some(7),
            "ising" => Some(12),
            _ => None,
        };
        dims_ok &= ta.dim() == oracle && expected.is_none_or(|e| e == oracle);
        dims.push(format!("{} {}", cat.name(), ta.dim()));
    }
    line(5, "tube category", worst, TOL, dims_ok, format!("{N} triples per category; dims {}", dims.join(", ")))
}

fn dimension_identity() -> Line {
    let mut mismatches = 0usize;
    let mut pairs = 0usize;
    for cat in cats() {
        let words = ObjectWord::all_up_to(&cat, 2);
        for x in &words {
            for y in &words {
                pairs += 1;
                let by_r: usize = cat
                    .labels()
                    .map(|r| {
                        let rx: Vec<Label> = std::iter::once(r).chain(x.labels().iter().copied()).collect();
                        let yr: Vec<Label> = y.labels().iter().copied().chain(std::iter::once(r)).collect();
                        count(&cat, &rx, &yr)
                    })
                    .sum();
                let mut by_ij = 0;
                for i in cat.labels() {
                    for j in cat.labels() {
                        let ij = ObjectWord::new(&cat, [i, j]);
                        by_ij += hom_dim(&cat, &ij, y) * hom_dim(&cat, x, &ij);
                    }
                }
                if by_r != by_ij || by_r != tube_hom_dim(&cat, x, y) {
                    mismatches += 1;
                }
            }
        }
    }
    line(6, "dimension identity", mismatches as f64, 0.0, true, format!("{pairs} pairs (X, Y), {mismatches} mismatches"))
}

fn opposite() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst: f64 = 0.0;
    let mut scalar_gap: f64 = 0.0;
    for cat in cats() {
        let probes = ObjectWord::all_up_to(&cat, 2);
        let labels = all_labels(&cat);
        for &i in &labels {
            for &j in &labels {
                let ij = ObjectWord::new(&cat, [i, j]);
                let y = random_word(&cat, &mut rng, &labels, 0, 2);
                let k = Morphism::random(&cat, &y, &ij, &mut rng);
                let jm = Morphism::random(&cat, &ij, &y, &mut rng);
                let rep = verify_opposite(&cat, i, j, &k, &jm, &probes).unwrap();
                let expected = trace(&cat, &k.compose(&jm).unwrap()).unwrap();
                let fitted = C64::new(rep.scalar[0], rep.scalar[1]);
                // Nothing to fit when F_IJ vanishes on every probe.
                let live = probes.iter().any(|x| hom_dim(&cat, x, &ij) > 0);
                if live {
                    scalar_gap = scalar_gap.max((fitted - expected).norm());
                }
                worst = worst.max(rep.residual);
            }
        }
    }
    line(
        7,
        "opposite theorem",
        worst.max(scalar_gap),
        TOL,
        true,
        format!("all (I, J), probes of length <= 2; scalar gap {scalar_gap:.1e}"),
    )
}

fn idempotents() -> Line {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut worst: f64 = 0.0;
    let mut vacuum: f64 = 0.0;
    let mut blocks_ok = true;
    for cat in cats() {
        for x in ObjectWord::all_up_to(&cat, 2) {
            let d = block_decompose_end(&cat, &x, Exec::default()).unwrap();
            worst = worst.max(d.completeness_residual).max(d.matrix_unit_residual).max(d.orthogonality_residual);
            let ps: Vec<TubeMorphism> = d.blocks.iter().map(|b| b.idempotent(&cat, &x)).collect();
            for (a, p) in ps.iter().enumerate() {
                for (b, q) in ps.iter().enumerate() {
                    let pq = tube_compose(&cat, p, q).unwrap();
                    let want = if a == b { p.clone() } else { TubeMorphism::zero(&cat, &x, &x) };
                    worst = worst.max(pq.residual(&want).unwrap());
                }
            }
            let total: usize = d.blocks.iter().map(|b| b.size() * b.size()).sum();
            blocks_ok &= total == tube_hom_dim(&cat, &x, &x);
        }
        let labels = all_labels(&cat);
        for _ in 0..20 {
            let pick = |rng: &mut ChaCha8Rng| labels[rng.gen_range(0..labels.len())];
            let (i1, j1) = (pick(&mut rng), pick(&mut rng));
            let (i2, j2) = if rng.gen_bool(0.5) { (i1, j1) } else { (pick(&mut rng), pick(&mut rng)) };
            let ws: Vec<ObjectWord> = (0..3).map(|_| random_word(&cat, &mut rng, &labels, 0, 2)).collect();
            let (a, b) = (ObjectWord::new(&cat, [i1, j1]), ObjectWord::new(&cat, [i2, j2]));
            let i = Morphism::random(&cat, &ws[0], &a, &mut rng);
            let j = Morphism::random(&cat, &a, &ws[1], &mut rng);
            let k = Morphism::random(&cat, &ws[1], &b, &mut rng);
            let l = Morphism::random(&cat, &b, &ws[2], &mut rng);
            worst = worst.max(compose_lambdas_check(&cat, (i2, j2, &l, &k), (i1, j1, &j, &i)).unwrap());
        }
        let one = ObjectWord::unit();
        let id = Morphism::identity(&cat, &one);
        let u = cat.unit();
        let v = lambda_map(&cat, u, u, &id, &id).unwrap();
        for r in cat.labels() {
            let got = v.component(&cat, r).as_scalar().unwrap();
            vacuum = vacuum.max((got - cat.qdim(r) / dim_c(&cat)).norm());
        }
        vacuum = vacuum.max(tube_compose(&cat, &v, &v).unwrap().residual(&v).unwrap());
    }
    line(
        8,
        "idempotents and composition rule",
        worst,
        TOL,
        vacuum <= VACUUM_TOL && blocks_ok,
        format!("X of length <= 2; vacuum {vacuum:.1e} (tol {VACUUM_TOL:.0e})"),
    )
}

fn determinism() -> Line {
    let mut same = true;
    for name in ["fibonacci", "ising"] {
        let cat = load_category(name).unwrap();
        let a = run_suite(&cat, &[], SEED, Exec::Parallel).unwrap();
        let b = run_suite(&cat, &[], SEED, Exec::Parallel).unwrap();
        let c = run_suite(&cat, &[], SEED, Exec::Sequential).unwrap();
        let json = |r: &[tubecat::CheckReport]| serde_json::to_vec_pretty(r).unwrap();
        same &= json(&a) == json(&b) && json(&a) == json(&c);
        same &= to_csv(&a) == to_csv(&c) && to_text(&a) == to_text(&c);
        let ta = tube_algebra(&cat, Exec::Parallel).unwrap().to_json();
        same &= ta == tube_algebra(&cat, Exec::Sequential).unwrap().to_json();
    }
    line(9, "determinism", if same { 0.0 } else { 1.0 }, 0.0, same, "suite and tube algebra, both execution modes".into())
}

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: [fn() -> Line; 9] = [
        axioms,
        killing_ring,
        identity_and_pairing,
        diagram_lemmas,
        tube_category,
        dimension_identity,
        opposite,
        idempotents,
        determinism,
    ];
    let mut all = true;
    for c in criteria {
        let l = c();
        println!("{}", l.text);
        all &= l.pass;
    }
    println!("acceptance: {} in {:.1}s", if all { "all criteria pass" } else { "FAILED" }, start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
