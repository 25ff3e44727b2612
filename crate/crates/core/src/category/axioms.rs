//! Pentagon, hexagon, unit, rigidity, dimension, sphericality and modularity
//! residuals of a loaded category.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{CategoryData, Label};
use crate::diagram::{evaluate, programs, Bindings};
use crate::homspace::{cap, cup, embed, lcap, lcup, left_trace, trace, Morphism, ObjectWord};
use crate::linalg::{one, zero};
use crate::{CMat, C64};

#[derive(Clone, Debug, Serialize)]
pub struct AxiomResidual {
    pub name: String,
    pub max_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub category: String,
    pub entries: Vec<AxiomResidual>,
    pub pass: bool,
}

impl AxiomReport {
    pub fn get(&self, name: &str) -> Option<&AxiomResidual> {
        self.entries.iter().find(|e| e.name == name)
    }
}

fn fuse(cat: &CategoryData, a: usize, b: usize) -> Vec<usize> {
    (0..cat.rank()).filter(|&c| cat.nu(a, b, c) > 0).collect()
}

fn pentagon(cat: &CategoryData) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for f in fuse(cat, a, b) {
                        for g in fuse(cat, f, c) {
                            for e in fuse(cat, g, d) {
                                for l in fuse(cat, c, d) {
                                    for k in fuse(cat, b, l) {
                                        if cat.nu(a, k, e) == 0 {
                                            continue;
                                        }
                                        for al in 0..cat.nu(a, b, f) {
                                            for be in 0..cat.nu(f, c, g) {
                                                for ga in 0..cat.nu(g, d, e) {
                                                    for de in 0..cat.nu(c, d, l) {
                                                        for ze in 0..cat.nu(b, l, k) {
                                                            for et in 0..cat.nu(a, k, e) {
                                                                let mut lhs = zero();
                                                                for ep in 0..cat.nu(f, l, e) {
                                                                    lhs += cat.f_entry([f, c, d, e], [g, be, ga], [l, de, ep])
                                                                        * cat.f_entry([a, b, l, e], [f, al, ep], [k, ze, et]);
                                                                }
                                                                let mut rhs = zero();
                                                                for h in fuse(cat, b, c) {
                                                                    for ka in 0..cat.nu(b, c, h) {
                                                                        for la in 0..cat.nu(a, h, g) {
                                                                            for mu in 0..cat.nu(h, d, k) {
                                                                                rhs += cat.f_entry([a, b, c, g], [f, al, be], [h, ka, la])
                                                                                    * cat.f_entry([a, h, d, e], [g, la, ga], [k, mu, et])
                                                                                    * cat.f_entry([b, c, d, k], [h, ka, mu], [l, de, ze]);
                                                                            }
                                                                        }
                                                                    }
                                                                }
                                                                worst = worst.max((lhs - rhs).norm());
                                                            }
                                                        }
                                                    }
                                                }
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Braiding `a` past `b ⊗ c`.
fn hexagon(cat: &CategoryData) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for e in fuse(cat, a, b) {
                        for g in fuse(cat, c, a) {
                            for al in 0..cat.nu(a, b, e) {
                                for be in 0..cat.nu(e, c, d) {
                                    for ka in 0..cat.nu(c, a, g) {
                                        for la in 0..cat.nu(b, g, d) {
                                            let mut lhs = zero();
                                            for f in fuse(cat, b, c) {
                                                for m1 in 0..cat.nu(b, c, f) {
                                                    for m2 in 0..cat.nu(a, f, d) {
                                                        let x = cat.f_entry([a, b, c, d], [e, al, be], [f, m1, m2]);
                                                        for n2 in 0..cat.nu(f, a, d) {
                                                            lhs += x
                                                                * cat.r_entry(a, f, d, m2, n2)
                                                                * cat.f_entry([b, c, a, d], [f, m1, n2], [g, ka, la]);
                                                        }
                                                    }
                                                }
                                            }
                                            let mut rhs = zero();
                                            for ap in 0..cat.nu(b, a, e) {
                                                for kp in 0..cat.nu(a, c, g) {
                                                    rhs += cat.r_entry(a, b, e, al, ap)
                                                        * cat.f_entry([b, a, c, d], [e, ap, be], [g, kp, la])
                                                        * cat.r_entry(a, c, g, kp, ka);
                                                }
                                            }
                                            worst = worst.max((lhs - rhs).norm());
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

/// Braiding `c` past `a ⊗ b`, written with inverse associators.
fn hexagon_inverse(cat: &CategoryData) -> f64 {
    let n = cat.rank();
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    for e in fuse(cat, a, b) {
                        for g in fuse(cat, c, a) {
                            for al in 0..cat.nu(a, b, e) {
                                for be in 0..cat.nu(e, c, d) {
                                    for ka in 0..cat.nu(c, a, g) {
                                        for la in 0..cat.nu(g, b, d) {
                                            let mut lhs = zero();
                                            for bp in 0..cat.nu(c, e, d) {
                                                lhs += cat.r_entry(e, c, d, be, bp)
                                                    * cat.f_inv_entry([c, a, b, d], [e, al, bp], [g, ka, la]);
                                            }
                                            let mut rhs = zero();
                                            for f in fuse(cat, b, c) {
                                                for mu in 0..cat.nu(b, c, f) {
                                                    for nu in 0..cat.nu(a, f, d) {
                                                        let x = cat.f_entry([a, b, c, d], [e, al, be], [f, mu, nu]);
                                                        for mp in 0..cat.nu(c, b, f) {
                                                            for kp in 0..cat.nu(a, c, g) {
                                                                rhs += x
                                                                    * cat.r_entry(b, c, f, mu, mp)
                                                                    * cat.f_inv_entry([a, c, b, d], [f, mp, nu], [g, kp, la])
                                                                    * cat.r_entry(a, c, g, kp, ka);
                                                            }
                                                        }
                                                    }
                                                }
                                            }
                                            worst = worst.max((lhs - rhs).norm());
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    worst
}

fn unit_coherence(cat: &CategoryData) -> f64 {
    let n = cat.rank();
    let u = cat.unit().0;
    let mut worst: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a != u && b != u && c != u {
                    continue;
                }
                for d in 0..n {
                    if let Some(blk) = cat.f_block(a, b, c, d) {
                        let id = CMat::identity(blk.mat.nrows(), blk.mat.ncols());
                        worst = worst.max(crate::linalg::max_abs(&(&blk.mat - id)));
                    }
                }
            }
            for (x, y) in [(u, a), (a, u)] {
                if let Some(r) = cat.r_matrix(x, y, a) {
                    worst = worst.max((r[(0, 0)] - one()).norm());
                }
            }
        }
    }
    worst
}

fn rigidity(cat: &CategoryData) -> f64 {
    let mut worst: f64 = 0.0;
    let e = ObjectWord::unit();
    for s in cat.labels() {
        let sw = ObjectWord::simple(cat, s);
        let sd = ObjectWord::simple(cat, cat.dual(s));
        let id_s = Morphism::identity(cat, &sw);
        let id_sd = Morphism::identity(cat, &sd);
        let z = [
            (embed(cat, &sw, &lcap(cat, s), &e).compose(&embed(cat, &e, &cup(cat, s), &sw)), &id_s),
            (embed(cat, &e, &cap(cat, s), &sw).compose(&embed(cat, &sw, &lcup(cat, s), &e)), &id_s),
            (embed(cat, &sd, &cap(cat, s), &e).compose(&embed(cat, &e, &lcup(cat, s), &sd)), &id_sd),
            (embed(cat, &e, &lcap(cat, s), &sd).compose(&embed(cat, &sd, &cup(cat, s), &e)), &id_sd),
        ];
        for (m, id) in z {
            let r = m.and_then(|m| m.residual(id)).unwrap_or(f64::INFINITY);
            worst = worst.max(r);
        }
    }
    worst
}

fn dimensions(cat: &CategoryData) -> (f64, Option<String>) {
    let d = cat.qdims();
    let mut worst: f64 = 0.0;
    for a in cat.labels() {
        worst = worst.max((cat.qdim(a) - cat.qdim(cat.dual(a))).norm());
        worst = worst.max((cat.qdim(a) - super::quantum_dimension(cat, a)).norm());
        for b in cat.labels() {
            let sum: C64 = cat.labels().map(|c| d[c.0] * cat.n(a, b, c) as f64).sum();
            worst = worst.max((d[a.0] * d[b.0] - sum).norm());
        }
    }
    let dc: C64 = d.iter().map(|x| x * x).sum();
    worst = worst.max((dc - cat.global_dim()).norm());
    let positive = d.iter().all(|x| x.im.abs() <= cat.tolerance() && x.re > 0.0);
    let mut detail = None;
    if positive {
        // Perron–Frobenius: the largest eigenvalue of N_a is d(a).
        let n = cat.rank();
        for a in cat.labels() {
            let m = DMatrix::from_fn(n, n, |b, c| cat.nu(a.0, b, c) as f64);
            let Some(schur) = nalgebra::linalg::Schur::try_new(m, 1e-14, 10_000) else {
                continue;
            };
            let pf = schur.complex_eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max);
            worst = worst.max((pf - d[a.0].re).abs());
        }
        detail = Some("Perron-Frobenius cross-check applied".into());
    }
    (worst, detail)
}

fn sphericality(cat: &CategoryData) -> f64 {
    let mut worst: f64 = 0.0;
    for s in cat.labels() {
        let b = cat.bends(s);
        worst = worst.max((b.lcup * b.lcap - cat.qdim(s)).norm());
    }
    for x in ObjectWord::all_up_to(cat, 2) {
        let n = crate::homspace::hom_dim(cat, &x, &x);
        for k in 0..n {
            let f = Morphism::basis_element(cat, &x, &x, k);
            let r = match (trace(cat, &f), left_trace(cat, &f)) {
                (Ok(a), Ok(b)) => (a - b).norm(),
                _ => f64::INFINITY,
            };
            worst = worst.max(r);
        }
    }
    worst
}

/// `S̃_{ab}`: value of the closed Hopf link of `a` and `b`.
pub fn s_matrix(cat: &CategoryData) -> CMat {
    let n = cat.rank();
    let none = Bindings::new();
    CMat::from_fn(n, n, |a, b| {
        let d = programs::hopf_link(cat, Label(a), Label(b)).expect("hopf link is well formed");
        evaluate(cat, &d, &none)
            .ok()
            .and_then(|m| m.as_scalar())
            .unwrap_or_else(zero)
    })
}

fn modularity(cat: &CategoryData) -> (f64, bool, String) {
    let s = s_matrix(cat);
    let sym = crate::linalg::max_abs(&(&s - s.transpose()));
    let u = cat.unit().0;
    let unit_row = cat
        .labels()
        .map(|a| (s[(u, a.0)] - cat.qdim(a)).norm())
        .fold(0.0, f64::max);
    let det = s.determinant().norm();
    let res = sym.max(unit_row);
    (res, det > cat.tolerance(), format!("|det S| = {det:.6e}"))
}

/// Evaluates every axiom; failures are reported, never raised.
pub fn check_axioms(cat: &CategoryData) -> AxiomReport {
    let tol = cat.tolerance();
    let entry = |name: &str, r: f64, extra: bool, detail: Option<String>| AxiomResidual {
        name: name.into(),
        max_residual: r,
        tolerance: tol,
        pass: r <= tol && extra,
        detail,
    };
    let mut entries = vec![
        entry("pentagon", pentagon(cat), true, None),
        entry("hexagon", hexagon(cat), true, None),
        entry("hexagon_inverse", hexagon_inverse(cat), true, None),
        entry("unit_coherence", unit_coherence(cat), true, None),
        entry("rigidity", rigidity(cat), true, None),
    ];
    let (dr, dd) = dimensions(cat);
    let nonzero = cat.qdims().iter().all(|d| d.norm() > tol) && cat.global_dim().norm() > tol;
    entries.push(entry("dimensions", dr, nonzero, dd));
    entries.push(entry("sphericality", sphericality(cat), true, None));
    let (mr, inv, md) = modularity(cat);
    entries.push(entry("modularity", mr, inv, Some(md)));
    let pass = entries.iter().all(|e| e.pass);
    AxiomReport { category: cat.name().to_string(), entries, pass }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::{load_category, BUILTIN_NAMES};

    /// `Σ_c N_{ab}^c d(c) R^{ab}_c R^{ba}_c` from the raw data.
    fn s_oracle(cat: &CategoryData) -> CMat {
        let n = cat.rank();
        CMat::from_fn(n, n, |a, b| {
            (0..n)
                .filter(|&c| cat.nu(a, b, c) > 0)
                .map(|c| cat.qdims()[c] * cat.r_entry(a, b, c, 0, 0) * cat.r_entry(b, a, c, 0, 0))
                .sum()
        })
    }

    #[test]
    fn builtins_pass() {
        for name in BUILTIN_NAMES.iter().chain(&["z5"]) {
            let cat = load_category(name).unwrap();
            let rep = check_axioms(&cat);
            assert!(rep.pass, "{name}: {rep:#?}");
        }
    }

    #[test]
    fn trivial_is_exact() {
        let rep = check_axioms(&load_category("trivial").unwrap());
        for e in &rep.entries {
            assert_eq!(e.max_residual, 0.0, "{}", e.name);
        }
    }

    #[test]
    fn negated_f_entry_breaks_pentagon() {
        let mut fib = load_category("fibonacci").unwrap();
        let t = fib.label("tau").unwrap().0;
        let u = fib.unit().0;
        let old = fib.f_entry([t, t, t, t], [u, 0, 0], [t, 0, 0]);
        fib.perturb_f([t, t, t, t], [u, 0, 0], [t, 0, 0], -old);
        let rep = check_axioms(&fib);
        assert!(!rep.pass);
        assert!(rep.get("pentagon").unwrap().max_residual > 0.1);
    }

    #[test]
    fn corrupted_r_breaks_hexagon() {
        let mut fib = load_category("fibonacci").unwrap();
        let t = fib.label("tau").unwrap();
        fib.perturb_r(t, t, fib.unit(), C64::new(1.0, 0.0));
        let rep = check_axioms(&fib);
        assert!(!rep.get("hexagon").unwrap().pass);
    }

    #[test]
    fn s_matrices() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let close = |m: &CMat, want: &[f64]| {
            m.iter().zip(want).all(|(z, w)| (z - C64::new(*w, 0.0)).norm() < 1e-9)
        };
        let fib = load_category("fibonacci").unwrap();
        let s = s_matrix(&fib);
        assert!(close(&s, &[1.0, phi, phi, -1.0]), "{s}");
        assert!(close(&s_matrix(&load_category("semion").unwrap()), &[1.0, 1.0, 1.0, -1.0]));
        assert!(close(&s_matrix(&load_category("trivial").unwrap()), &[1.0]));
        for name in BUILTIN_NAMES {
            let cat = load_category(name).unwrap();
            let s = s_matrix(&cat);
            assert!(crate::linalg::max_abs(&(&s - s_oracle(&cat))) < 1e-9, "{name}");
            // d(C) = Σ_a |S̃_{1a}|² for real positive dimensions.
            let u = cat.unit().0;
            let row: f64 = (0..cat.rank()).map(|a| s[(u, a)].norm_sqr()).sum();
            assert!((row - cat.global_dim().norm()).abs() < 1e-9, "{name}");
        }
    }
}
