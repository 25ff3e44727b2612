use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{Outcome, VerifyError};
use crate::category::{check_axioms, CategoryData, Label};
use crate::diagram::programs::{
    bend_bindings, left_bent_projector, left_partial_trace, right_bent_projector, right_partial_trace, ring, ring_pair,
    twisted_ring, with,
};
use crate::diagram::{evaluate, Bindings, Builder, DiagramIR};
use crate::exec::Exec;
use crate::homspace::Handedness::{self, Over, Under};
use crate::homspace::{
    cap, cup, decompose_identity, dual_basis, hom_dim, left_trace, simple_basis, trace, trace_dual_bases, Morphism,
    ObjectWord,
};
use crate::linalg::max_abs;
use crate::reps::{
    block_decompose_end, compose_lambdas_check, f_functor_apply, functor_matrix, image_rank, lambda_map,
    primitive_idempotent, verify_opposite, FunctorRep,
};
use crate::tube::{
    embed_c_morphism, tube_algebra, tube_algebra_dim, tube_compose, tube_hom_dim, tube_identity, TubeMorphism,
};
use crate::{CMat, C64};

type Res = Result<Outcome, VerifyError>;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn delta(p: usize, q: usize) -> C64 {
    c(if p == q { 1.0 } else { 0.0 })
}

fn nonunit(cat: &CategoryData) -> Vec<Label> {
    cat.labels().filter(|&l| !cat.is_unit(l)).collect()
}

fn nothing_to_check() -> Res {
    Ok(Outcome::new(0.0, "no non-unit simples"))
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, v: &[T]) -> T {
    v[rng.gen_range(0..v.len())]
}

fn word_from(cat: &CategoryData, rng: &mut ChaCha8Rng, letters: &[Label], lo: usize, hi: usize) -> ObjectWord {
    let n = rng.gen_range(lo..=hi);
    ObjectWord::new(cat, (0..n).map(|_| pick(rng, letters)))
}

fn any_word(cat: &CategoryData, rng: &mut ChaCha8Rng, hi: usize) -> ObjectWord {
    let letters: Vec<Label> = cat.labels().collect();
    word_from(cat, rng, &letters, 0, hi)
}

fn all_pairs(cat: &CategoryData) -> Vec<(Label, Label)> {
    cat.labels().flat_map(|i| cat.labels().map(move |j| (i, j))).collect()
}

/// Dyadic `k/8 + i l/8`, so products of a few of them are exact.
fn dyadic(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-8i32..=8) as f64 / 8.0, rng.gen_range(-8i32..=8) as f64 / 8.0)
}

fn random_morphism(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord, rng: &mut ChaCha8Rng) -> Morphism {
    let n = hom_dim(cat, x, y);
    let coeffs: Vec<C64> = (0..n).map(|_| dyadic(rng)).collect();
    Morphism::from_coeffs(cat, x, y, &coeffs).expect("dimension matches")
}

fn random_tube(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord, rng: &mut ChaCha8Rng) -> TubeMorphism {
    let n = tube_hom_dim(cat, x, y);
    let coeffs: Vec<C64> = (0..n).map(|_| dyadic(rng)).collect();
    TubeMorphism::from_coeffs(cat, x, y, &coeffs).expect("dimension matches")
}

/// Random linear combinations of `std` with an invertible-looking mix.
fn mixed_basis(rng: &mut ChaCha8Rng, std: &[Morphism]) -> Vec<Morphism> {
    let n = std.len();
    let mix = CMat::from_fn(n, n, |i, j| {
        C64::new(rng.gen_range(-1.0..1.0) + if i == j { 2.0 } else { 0.0 }, rng.gen_range(-1.0..1.0))
    });
    (0..n)
        .map(|p| {
            let mut m = std[0].scale(c(0.0));
            for (q, e) in std.iter().enumerate() {
                m.add_assign_scaled(mix[(p, q)], e).expect("same space");
            }
            m
        })
        .collect()
}

pub(super) fn dispatch(cat: &CategoryData, name: &str, rng: &mut ChaCha8Rng, instances: Option<usize>, exec: Exec) -> Res {
    let n = |default: usize| instances.unwrap_or(default);
    match name {
        "pentagon" | "hexagon" | "unit_coherence" | "rigidity" | "dimensions" | "sphericality" | "modularity" => {
            axiom(cat, name)
        }
        "simple_pairing" => simple_pairing(cat, rng, n(10)),
        "identity_decomposition" => identity_decomposition(cat, rng, n(5)),
        "trace_pairing" => trace_pairing_check(cat, rng, n(20)),
        "trace_cyclicity" => trace_cyclicity(cat, rng, n(20)),
        "twisted_duals" => twisted_duals(cat, rng, n(20)),
        "dual_decomposition" => dual_decomposition(cat, rng, n(20)),
        "killing_ring" => killing_ring(cat),
        "killing_ring_pair" => killing_ring_pair(cat),
        "twisted_s" => twisted_s(cat, rng, n(20)),
        "yang_baxter" => yang_baxter(cat, rng, n(20)),
        "crossing_naturality" => crossing_naturality(cat, rng, n(20)),
        "evaluator_functoriality" => evaluator_functoriality(cat, rng, n(20)),
        "tube_identity" => tube_identity_check(cat, rng, n(20)),
        "tube_associativity" => tube_associativity(cat, rng, n(20)),
        "tube_dimension" => tube_dimension(cat),
        "tube_algebra" => tube_algebra_check(cat, exec),
        "functor_laws" => functor_laws(cat, rng, n(10)),
        "naturality" => naturality(cat, rng, n(10)),
        "opposite" => opposite(cat, rng),
        "idempotents" => idempotents(cat, rng, n(5)),
        "composition_rule" => composition_rule(cat, rng, n(10)),
        "matrix_units" => blocks(cat, rng, n(2), exec, false),
        "completeness" => blocks(cat, rng, n(2), exec, true),
        other => Err(VerifyError::UnknownCheck(other.to_string())),
    }
}

fn axiom(cat: &CategoryData, name: &str) -> Res {
    let rep = check_axioms(cat);
    let parts: &[&str] = if name == "hexagon" { &["hexagon", "hexagon_inverse"] } else { &[name] };
    let mut residual: f64 = 0.0;
    let mut detail = None;
    for part in parts {
        let e = rep.get(part).expect("axiom entry exists");
        residual = residual.max(e.max_residual);
        if !e.pass && e.max_residual <= e.tolerance {
            // A side condition failed: the residual alone does not decide.
            residual = f64::INFINITY;
        }
        if e.detail.is_some() {
            detail = e.detail.clone();
        }
    }
    Ok(Outcome { residual, params: "all label tuples".into(), detail })
}

fn simple_pairing(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let letters = nonunit(cat);
    if letters.is_empty() {
        return nothing_to_check();
    }
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let x = word_from(cat, rng, &letters, 1, 3);
        for r in cat.labels() {
            let std = simple_basis(cat, r, &x);
            if std.is_empty() {
                continue;
            }
            let basis = mixed_basis(rng, &std);
            let duals = dual_basis(cat, r, &x, &basis)?;
            for (k, bd) in duals.iter().enumerate() {
                for (i, b) in basis.iter().enumerate() {
                    let z = bd.compose(b)?.as_scalar().unwrap_or_else(|| c(0.0));
                    worst = worst.max((z - delta(i, k)).norm());
                }
            }
        }
    }
    Ok(Outcome::new(worst, format!("{n} words of length 1..3, mixed bases")))
}

fn identity_decomposition(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let mut words = ObjectWord::all_up_to(cat, 2);
    let letters = nonunit(cat);
    if !letters.is_empty() {
        words.extend((0..n).map(|_| word_from(cat, rng, &letters, 3, 3)));
    }
    let mut worst: f64 = 0.0;
    for x in &words {
        let mut sum = Morphism::zero(cat, x, x);
        for t in decompose_identity(cat, x) {
            sum.add_assign_scaled(c(1.0), &t.b.compose(&t.b_dual)?)?;
        }
        worst = worst.max(sum.residual(&Morphism::identity(cat, x))?);
    }
    Ok(Outcome::new(worst, format!("all words of length <= 2 and {n} of length 3")))
}

fn trace_pairing_check(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (x, y) = (any_word(cat, rng, 2), any_word(cat, rng, 2));
        let (bs, ds) = trace_dual_bases(cat, &x, &y)?;
        for (p, d) in ds.iter().enumerate() {
            for (q, b) in bs.iter().enumerate() {
                let z = trace(cat, &d.compose(b)?)?;
                worst = worst.max((z - delta(p, q)).norm());
            }
        }
    }
    Ok(Outcome::new(worst, format!("{n} pairs of words of length <= 2")))
}

fn trace_cyclicity(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (x, y) = (any_word(cat, rng, 2), any_word(cat, rng, 2));
        let f = random_morphism(cat, &x, &y, rng);
        let g = random_morphism(cat, &y, &x, rng);
        let gf = g.compose(&f)?;
        let a = trace(cat, &gf)?;
        worst = worst.max((a - trace(cat, &f.compose(&g)?)?).norm());
        worst = worst.max((a - left_trace(cat, &gf)?).norm());
    }
    Ok(Outcome::new(worst, format!("{n} random pairs f, g")))
}

fn twisted_duals(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let letters = nonunit(cat);
    if letters.is_empty() {
        return nothing_to_check();
    }
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let x = word_from(cat, rng, &letters, 1, 2);
        let y = word_from(cat, rng, &letters, 2, 2);
        let bends = bend_bindings(cat, &x);
        let s = pick(rng, &cat.labels().collect::<Vec<_>>());
        let s2 = if rng.gen_bool(0.5) { s } else { pick(rng, &cat.labels().collect::<Vec<_>>()) };
        let (sw, s2w) = (ObjectWord::simple(cat, s), ObjectWord::simple(cat, s2));
        let want = |tr: C64| {
            if s == s2 {
                Morphism::identity(cat, &sw).scale(tr / cat.qdim(s))
            } else {
                Morphism::zero(cat, &s2w, &sw)
            }
        };
        let jm = random_morphism(cat, &x.concat(&s2w), &y, rng);
        let im = random_morphism(cat, &y, &x.concat(&sw), rng);
        let b = with(with(bends.clone(), "j", jm.clone()), "i", im.clone());
        let got = evaluate(cat, &left_partial_trace(cat, &b, &x, s2, &y, s)?, &b)?;
        let tr = if s == s2 { trace(cat, &jm.compose(&im)?)? } else { c(0.0) };
        worst = worst.max(got.residual(&want(tr))?);

        let lm = random_morphism(cat, &s2w.concat(&x), &y, rng);
        let km = random_morphism(cat, &y, &sw.concat(&x), rng);
        let b = with(with(bends, "l", lm.clone()), "k", km.clone());
        let got = evaluate(cat, &right_partial_trace(cat, &b, &x, s2, &y, s)?, &b)?;
        let tr = if s == s2 { trace(cat, &lm.compose(&km)?)? } else { c(0.0) };
        worst = worst.max(got.residual(&want(tr))?);
    }
    Ok(Outcome::new(worst, format!("{n} random (X, Y, S, S'), left and right")))
}

fn dual_decomposition(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let letters = nonunit(cat);
    if letters.is_empty() {
        return nothing_to_check();
    }
    let labels: Vec<Label> = cat.labels().collect();
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let x = word_from(cat, rng, &letters, 1, 2);
        let xd = x.dual(cat);
        let s = pick(rng, &labels);
        let left = rng.gen_bool(0.5);
        let sw = ObjectWord::simple(cat, s);
        let whole = if left { sw.concat(&x) } else { x.concat(&sw) };
        let mut sum = Morphism::zero(cat, &whole, &whole);
        for &t in &labels {
            let tw = ObjectWord::simple(cat, t);
            let tgt = if left { tw.concat(&xd) } else { xd.concat(&tw) };
            let std = simple_basis(cat, s, &tgt);
            if std.is_empty() {
                continue;
            }
            let basis = mixed_basis(rng, &std);
            let duals = dual_basis(cat, s, &tgt, &basis)?;
            for (b, bd) in basis.into_iter().zip(duals) {
                let bind = with(with(bend_bindings(cat, &x), "b", b), "bd", bd);
                let d = if left {
                    left_bent_projector(cat, &bind, &x, s, t)?
                } else {
                    right_bent_projector(cat, &bind, &x, s, t)?
                };
                sum.add_assign_scaled(cat.qdim(t), &evaluate(cat, &d, &bind)?)?;
            }
        }
        let want = Morphism::identity(cat, &whole).scale(cat.qdim(s));
        worst = worst.max(sum.residual(&want)?);
    }
    Ok(Outcome::new(worst, format!("{n} random (X, S, side), mixed bases")))
}

fn killing_ring(cat: &CategoryData) -> Res {
    let none = Bindings::new();
    let mut worst: f64 = 0.0;
    for r in cat.labels() {
        let rw = ObjectWord::simple(cat, r);
        let mut sum = Morphism::zero(cat, &rw, &rw);
        for s in cat.labels() {
            sum.add_assign_scaled(cat.qdim(s), &evaluate(cat, &ring(cat, s, r)?, &none)?)?;
        }
        let want = if cat.is_unit(r) {
            Morphism::identity(cat, &rw).scale(cat.global_dim())
        } else {
            Morphism::zero(cat, &rw, &rw)
        };
        worst = worst.max(sum.residual(&want)?);
    }
    Ok(Outcome::new(worst, "every simple R"))
}

fn killing_ring_pair(cat: &CategoryData) -> Res {
    let none = Bindings::new();
    let mut worst: f64 = 0.0;
    for r in cat.labels() {
        for t in cat.labels() {
            let rt = ObjectWord::new(cat, [r, t]);
            let mut sum = Morphism::zero(cat, &rt, &rt);
            for s in cat.labels() {
                sum.add_assign_scaled(cat.qdim(s), &evaluate(cat, &ring_pair(cat, s, r, t)?, &none)?)?;
            }
            let want = if t == cat.dual(r) {
                cup(cat, r).compose(&cap(cat, r))?.scale(cat.global_dim() / cat.qdim(r))
            } else {
                Morphism::zero(cat, &rt, &rt)
            };
            worst = worst.max(sum.residual(&want)?);
        }
    }
    Ok(Outcome::new(worst, "every pair of simples R, T"))
}

fn twisted_s(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let triples: Vec<(Label, Label, Label)> = all_pairs(cat)
        .into_iter()
        .flat_map(|(i, j)| cat.fuse(i, j).into_iter().map(move |l| (i, j, l)))
        .collect();
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (i, j, l) = pick(rng, &triples);
        let (i2, j2) = if rng.gen_bool(0.5) {
            (i, j)
        } else {
            let same_l: Vec<(Label, Label)> =
                triples.iter().filter(|t| t.2 == l).map(|&(a, b, _)| (a, b)).collect();
            pick(rng, &same_l)
        };
        let (ij, ij2, lw) = (ObjectWord::new(cat, [i, j]), ObjectWord::new(cat, [i2, j2]), ObjectWord::simple(cat, l));
        let jm = random_morphism(cat, &ij, &lw, rng);
        let km = random_morphism(cat, &lw, &ij2, rng);
        let b = with(with(Bindings::new(), "j", jm.clone()), "k", km.clone());
        let mut sum = Morphism::zero(cat, &ij, &ij2);
        for s in cat.labels() {
            let d = twisted_ring(cat, &b, s, [i, j], l, [i2, j2])?;
            sum.add_assign_scaled(cat.qdim(s), &evaluate(cat, &d, &b)?)?;
        }
        let want = if (i, j) == (i2, j2) {
            let tr = trace(cat, &km.compose(&jm)?)?;
            Morphism::identity(cat, &ij).scale(tr * cat.global_dim() / (cat.qdim(i) * cat.qdim(j)))
        } else {
            Morphism::zero(cat, &ij, &ij2)
        };
        worst = worst.max(sum.residual(&want)?);
    }
    Ok(Outcome::new(worst, format!("{n} random (I, J, L, I', J')")))
}

fn eval_built(cat: &CategoryData, b: &Bindings, input: &[Label], steps: impl Fn(&mut Builder) -> Result<(), crate::diagram::DiagramError>) -> Result<Morphism, VerifyError> {
    let mut d = Builder::new(cat, b, input);
    steps(&mut d)?;
    Ok(evaluate(cat, &d.finish()?, b)?)
}

fn yang_baxter(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let letters = nonunit(cat);
    if letters.is_empty() {
        return nothing_to_check();
    }
    let none = Bindings::new();
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let t: Vec<Label> = (0..3).map(|_| pick(rng, &letters)).collect();
        for h in [Over, Under] {
            let l = eval_built(cat, &none, &t, |d| {
                d.cross(0, h)?.cross(1, h)?.cross(0, h)?;
                Ok(())
            })?;
            let r = eval_built(cat, &none, &t, |d| {
                d.cross(1, h)?.cross(0, h)?.cross(1, h)?;
                Ok(())
            })?;
            worst = worst.max(l.residual(&r)?);
        }
        let inv = eval_built(cat, &none, &t[..2], |d| {
            d.cross(0, Over)?.cross(0, Under)?;
            Ok(())
        })?;
        worst = worst.max(inv.residual(&Morphism::identity(cat, &ObjectWord::new(cat, t[..2].iter().copied())))?);
    }
    Ok(Outcome::new(worst, format!("{n} random triples, both handednesses")))
}

fn crossing_naturality(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let letters = nonunit(cat);
    if letters.is_empty() {
        return nothing_to_check();
    }
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (a, b, z) = (pick(rng, &letters), pick(rng, &letters), pick(rng, &letters));
        let d = pick(rng, &cat.fuse(a, b));
        let f = random_morphism(cat, &ObjectWord::new(cat, [a, b]), &ObjectWord::simple(cat, d), rng);
        let bind = with(Bindings::new(), "f", f);
        for h in [Over, Under] {
            // c_{D,Z} ∘ (f ⊗ id_Z) = (id_Z ⊗ f) ∘ c_{AB,Z}
            let l = eval_built(cat, &bind, &[a, b, z], |dd| {
                dd.boxed(0, "f", &[a, b], &[d])?.cross(0, h)?;
                Ok(())
            })?;
            let r = eval_built(cat, &bind, &[a, b, z], |dd| {
                dd.cross(1, h)?.cross(0, h)?.boxed(1, "f", &[a, b], &[d])?;
                Ok(())
            })?;
            worst = worst.max(l.residual(&r)?);
        }
    }
    Ok(Outcome::new(worst, format!("{n} random boxes, both handednesses")))
}

enum Op {
    Cross(usize, Handedness),
    Box(usize, String, Vec<Label>, Vec<Label>),
    Cup(usize, Label),
    Cap(usize, Label),
}

/// Random crossings, boxes and bends on `start`; boxes are added to `bind`.
fn random_ops(cat: &CategoryData, rng: &mut ChaCha8Rng, start: &[Label], steps: usize, bind: &mut Bindings) -> (Vec<Op>, Vec<Label>) {
    let letters = nonunit(cat);
    let mut word = start.to_vec();
    let mut ops = Vec::new();
    for _ in 0..steps {
        match rng.gen_range(0..5) {
            0 if word.len() >= 2 => {
                let p = rng.gen_range(0..word.len() - 1);
                let h = if rng.gen_bool(0.5) { Over } else { Under };
                word.swap(p, p + 1);
                ops.push(Op::Cross(p, h));
            }
            1 if word.len() >= 2 => {
                let p = rng.gen_range(0..word.len() - 1);
                let inp = vec![word[p], word[p + 1]];
                let out = vec![pick(rng, &cat.fuse(inp[0], inp[1]))];
                let name = format!("f{}", bind.len());
                let m = random_morphism(cat, &ObjectWord::new(cat, inp.clone()), &ObjectWord::new(cat, out.clone()), rng);
                bind.insert(name.clone(), m);
                word.splice(p..p + 2, out.clone());
                ops.push(Op::Box(p, name, inp, out));
            }
            2 if !word.is_empty() && word.len() < 4 => {
                let p = rng.gen_range(0..word.len());
                let inp = vec![word[p]];
                let (u, v) = (pick(rng, &letters), pick(rng, &letters));
                let out = if cat.n(u, v, inp[0]) > 0 { vec![u, v] } else { inp.clone() };
                let name = format!("f{}", bind.len());
                let m = random_morphism(cat, &ObjectWord::new(cat, inp.clone()), &ObjectWord::new(cat, out.clone()), rng);
                bind.insert(name.clone(), m);
                word.splice(p..p + 1, out.clone());
                ops.push(Op::Box(p, name, inp, out));
            }
            3 if word.len() < 4 => {
                let p = rng.gen_range(0..=word.len());
                let s = pick(rng, &letters);
                word.splice(p..p, [s, cat.dual(s)]);
                ops.push(Op::Cup(p, s));
            }
            _ => {
                if let Some(p) = (0..word.len().saturating_sub(1)).find(|&p| word[p + 1] == cat.dual(word[p])) {
                    ops.push(Op::Cap(p, word[p]));
                    word.drain(p..p + 2);
                }
            }
        }
    }
    (ops, word)
}

fn replay(cat: &CategoryData, bind: &Bindings, start: &[Label], ops: &[Op]) -> Result<DiagramIR, VerifyError> {
    let mut d = Builder::new(cat, bind, start);
    for op in ops {
        match op {
            Op::Cross(p, h) => d.cross(*p, *h)?,
            Op::Box(p, name, inp, out) => d.boxed(*p, name, inp, out)?,
            Op::Cup(p, s) => d.cup(*p, *s)?,
            Op::Cap(p, s) => d.cap(*p, *s)?,
        };
    }
    Ok(d.finish()?)
}

fn evaluator_functoriality(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let letters = nonunit(cat);
    if letters.is_empty() {
        return nothing_to_check();
    }
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let start: Vec<Label> = (0..2).map(|_| pick(rng, &letters)).collect();
        let mut bind = Bindings::new();
        let (ops1, mid) = random_ops(cat, rng, &start, 5, &mut bind);
        let (ops2, _) = random_ops(cat, rng, &mid, 5, &mut bind);
        let d1 = replay(cat, &bind, &start, &ops1)?;
        let d2 = replay(cat, &bind, &mid, &ops2)?;
        let whole = d1.stack(&d2).expect("boundaries agree");
        let lhs = evaluate(cat, &whole, &bind)?;
        let rhs = evaluate(cat, &d2, &bind)?.compose(&evaluate(cat, &d1, &bind)?)?;
        worst = worst.max(lhs.residual(&rhs)?);
    }
    Ok(Outcome::new(worst, format!("{n} random stacked pairs of 5-step diagrams")))
}

fn tube_identity_check(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (x, y) = (any_word(cat, rng, 2), any_word(cat, rng, 2));
        let f = random_tube(cat, &x, &y, rng);
        worst = worst.max(tube_compose(cat, &tube_identity(cat, &y), &f)?.residual(&f)?);
        worst = worst.max(tube_compose(cat, &f, &tube_identity(cat, &x))?.residual(&f)?);
    }
    Ok(Outcome::new(worst, format!("{n} random f over words of length <= 2")))
}

fn tube_associativity(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let ws: Vec<ObjectWord> = (0..4).map(|_| any_word(cat, rng, 2)).collect();
        let f = random_tube(cat, &ws[0], &ws[1], rng);
        let g = random_tube(cat, &ws[1], &ws[2], rng);
        let h = random_tube(cat, &ws[2], &ws[3], rng);
        let l = tube_compose(cat, &tube_compose(cat, &h, &g)?, &f)?;
        let r = tube_compose(cat, &h, &tube_compose(cat, &g, &f)?)?;
        worst = worst.max(l.residual(&r)?);
    }
    Ok(Outcome::new(worst, format!("{n} random triples over words of length <= 2")))
}

/// `v[c] = dim Hom(c, X)` by repeated fusion.
fn multiplicities(cat: &CategoryData, x: &[Label]) -> Vec<usize> {
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
    multiplicities(cat, a).iter().zip(multiplicities(cat, b)).map(|(p, q)| p * q).sum()
}

/// `Σ_R dim Hom(R X, Y R)` and `Σ_{I,J} dim Hom(I J, Y) dim Hom(X, I J)` by
/// fusion counting.
pub fn tube_dim_counts(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord) -> (usize, usize) {
    let by_r = cat
        .labels()
        .map(|r| {
            let rx: Vec<Label> = std::iter::once(r).chain(x.labels().iter().copied()).collect();
            let yr: Vec<Label> = y.labels().iter().copied().chain(std::iter::once(r)).collect();
            count(cat, &rx, &yr)
        })
        .sum();
    let by_ij = all_pairs(cat)
        .into_iter()
        .map(|(i, j)| count(cat, &[i, j], y.labels()) * count(cat, x.labels(), &[i, j]))
        .sum();
    (by_r, by_ij)
}

fn tube_dimension(cat: &CategoryData) -> Res {
    let words = ObjectWord::all_up_to(cat, 2);
    let mut worst = 0usize;
    for x in &words {
        for y in &words {
            let d = tube_hom_dim(cat, x, y);
            let (by_r, by_ij) = tube_dim_counts(cat, x, y);
            worst = worst.max(d.abs_diff(by_r)).max(by_r.abs_diff(by_ij));
        }
    }
    Ok(Outcome::new(worst as f64, "all X, Y of length <= 2, integer counts"))
}

fn tube_algebra_check(cat: &CategoryData, exec: Exec) -> Res {
    let ta = tube_algebra(cat, exec)?;
    let blocks: usize = all_pairs(cat)
        .into_iter()
        .map(|(i, j)| {
            let s: usize = cat.labels().map(|x| cat.n(i, j, x)).sum();
            s * s
        })
        .sum();
    let dim_gap = ta.dim().abs_diff(tube_algebra_dim(cat)).max(ta.dim().abs_diff(blocks)) as f64;
    let worst = ta.associativity_residual().max(ta.unit_residual(cat)).max(dim_gap);
    Ok(Outcome::new(worst, format!("dimension {}", ta.dim())))
}

fn functor_laws(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let pairs = all_pairs(cat);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (i, j) = pick(rng, &pairs);
        let ij = ObjectWord::new(cat, [i, j]);
        let ws: Vec<ObjectWord> = (0..3).map(|_| any_word(cat, rng, 2)).collect();
        let f = random_tube(cat, &ws[0], &ws[1], rng);
        let g = random_tube(cat, &ws[1], &ws[2], rng);
        let lhs = functor_matrix(cat, i, j, &tube_compose(cat, &g, &f)?)?;
        let rhs = functor_matrix(cat, i, j, &f)? * functor_matrix(cat, i, j, &g)?;
        worst = worst.max(max_abs(&(lhs - rhs)));
        let id = functor_matrix(cat, i, j, &tube_identity(cat, &ws[0]))?;
        worst = worst.max(max_abs(&(&id - CMat::identity(id.nrows(), id.ncols()))));
        let h = random_morphism(cat, &ws[0], &ws[1], rng);
        let k = random_morphism(cat, &ws[1], &ij, rng);
        let got = f_functor_apply(cat, i, j, &embed_c_morphism(cat, &h), &k)?;
        worst = worst.max(got.residual(&k.compose(&h)?)?);
    }
    Ok(Outcome::new(worst, format!("{n} random (I, J, f, g)")))
}

fn naturality(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let pairs = all_pairs(cat);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (il, jl) = pick(rng, &pairs);
        let ij = ObjectWord::new(cat, [il, jl]);
        let (x, y, z) = (any_word(cat, rng, 2), any_word(cat, rng, 2), any_word(cat, rng, 2));
        let i = random_morphism(cat, &x, &ij, rng);
        let j = random_morphism(cat, &ij, &y, rng);
        let f = random_tube(cat, &z, &x, rng);
        let lhs = tube_compose(cat, &lambda_map(cat, il, jl, &j, &i)?, &f)?;
        let rhs = lambda_map(cat, il, jl, &j, &f_functor_apply(cat, il, jl, &f, &i)?)?;
        worst = worst.max(lhs.residual(&rhs)?);
    }
    Ok(Outcome::new(worst, format!("{n} random (I, J, i, j, f)")))
}

fn opposite(cat: &CategoryData, rng: &mut ChaCha8Rng) -> Res {
    let probes = ObjectWord::all_up_to(cat, 2);
    let mut worst: f64 = 0.0;
    for (i, j) in all_pairs(cat) {
        let ij = ObjectWord::new(cat, [i, j]);
        let y = any_word(cat, rng, 2);
        let k = random_morphism(cat, &y, &ij, rng);
        let jm = random_morphism(cat, &ij, &y, rng);
        let rep = verify_opposite(cat, i, j, &k, &jm, &probes)?;
        worst = worst.max(rep.residual).max(rep.scalar_error);
    }
    Ok(Outcome::new(worst, "every (I, J), probes of length <= 2"))
}

fn idempotents(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let u = cat.unit();
    let one = ObjectWord::unit();
    let id = Morphism::identity(cat, &one);
    let v = lambda_map(cat, u, u, &id, &id)?;
    let mut worst: f64 = 0.0;
    for r in cat.labels() {
        let got = v.component(cat, r).as_scalar().unwrap_or_else(|| c(0.0));
        worst = worst.max((got - cat.qdim(r) / cat.global_dim()).norm());
    }
    let pairs = all_pairs(cat);
    for _ in 0..n {
        let x = any_word(cat, rng, 2);
        let live: Vec<(Label, Label)> = pairs.iter().copied().filter(|&(i, j)| FunctorRep::new(i, j).dim(cat, &x) > 0).collect();
        let (il, jl) = pick(rng, &live);
        let ij = ObjectWord::new(cat, [il, jl]);
        let (bs, ds) = FunctorRep::new(il, jl).dual_bases(cat, &x)?;
        let p = rng.gen_range(0..bs.len());
        let e = primitive_idempotent(cat, il, jl, &bs[p], &ds[p])?;
        worst = worst.max(tube_compose(cat, &e, &e)?.residual(&e)?);
        for z in cat.labels() {
            let zw = ObjectWord::simple(cat, z);
            worst = worst.max(image_rank(cat, &e, &zw)?.abs_diff(hom_dim(cat, &zw, &ij)) as f64);
        }
    }
    Ok(Outcome::new(worst, format!("vacuum components and {n} random primitive idempotents")))
}

fn composition_rule(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize) -> Res {
    let pairs = all_pairs(cat);
    let mut worst: f64 = 0.0;
    for _ in 0..n {
        let (i1, j1) = pick(rng, &pairs);
        let (i2, j2) = if rng.gen_bool(0.5) { (i1, j1) } else { pick(rng, &pairs) };
        let (x, y, z) = (any_word(cat, rng, 2), any_word(cat, rng, 2), any_word(cat, rng, 2));
        let (ij1, ij2) = (ObjectWord::new(cat, [i1, j1]), ObjectWord::new(cat, [i2, j2]));
        let i = random_morphism(cat, &x, &ij1, rng);
        let j = random_morphism(cat, &ij1, &y, rng);
        let k = random_morphism(cat, &y, &ij2, rng);
        let l = random_morphism(cat, &ij2, &z, rng);
        worst = worst.max(compose_lambdas_check(cat, (i2, j2, &l, &k), (i1, j1, &j, &i))?);
    }
    Ok(Outcome::new(worst, format!("{n} random pairs of λ")))
}

fn blocks(cat: &CategoryData, rng: &mut ChaCha8Rng, n: usize, exec: Exec, completeness: bool) -> Res {
    let mut words = ObjectWord::all_up_to(cat, 1);
    let letters: Vec<Label> = cat.labels().collect();
    words.extend((0..n).map(|_| word_from(cat, rng, &letters, 2, 2)));
    let mut worst: f64 = 0.0;
    for x in &words {
        let d = block_decompose_end(cat, x, exec)?;
        worst = worst.max(if completeness {
            d.completeness_residual.max(d.block_dim_total().abs_diff(d.tube_dim) as f64)
        } else {
            d.matrix_unit_residual.max(d.orthogonality_residual)
        });
    }
    Ok(Outcome::new(worst, format!("all words of length <= 1 and {n} of length 2")))
}
