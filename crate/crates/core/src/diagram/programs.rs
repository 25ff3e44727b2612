//! Prebuilt diagrams shared by the category checks and the verification
//! suite. Each records its over/under pattern explicitly.

use super::{Bindings, Builder, DiagramError, DiagramIR};
use crate::category::{CategoryData, Label};
use crate::homspace::{word_cap, word_cup, word_lcap, word_lcup, Handedness, Morphism, ObjectWord};

use Handedness::{Over, Under};

/// Closed Hopf link: `a` and `b` loops with the double braiding
/// `c_{b,a} ∘ c_{a,b}` between them. Its value is `S̃_{ab}`.
pub fn hopf_link(cat: &CategoryData, a: Label, b: Label) -> Result<DiagramIR, DiagramError> {
    let none = Bindings::new();
    let mut d = Builder::new(cat, &none, &[]);
    d.cup(0, a)?.cup(1, b)?.cross(0, Over)?.cross(0, Over)?.cap(1, b)?.cap(0, a)?;
    d.finish()
}

/// A loop `S` encircling a vertical strand `R`: `S^∨` passes over `R`,
/// `S` passes under it.
pub fn ring(cat: &CategoryData, s: Label, r: Label) -> Result<DiagramIR, DiagramError> {
    let none = Bindings::new();
    let mut d = Builder::new(cat, &none, &[r]);
    d.cup(0, s)?.cross(1, Over)?.cross(0, Under)?.cap(1, s)?;
    d.finish()
}

/// A loop `S` encircling two parallel strands `R T`.
pub fn ring_pair(cat: &CategoryData, s: Label, r: Label, t: Label) -> Result<DiagramIR, DiagramError> {
    let none = Bindings::new();
    let mut d = Builder::new(cat, &none, &[r, t]);
    d.cup(0, s)?
        .cross(1, Over)?
        .cross(2, Over)?
        .cross(0, Under)?
        .cross(1, Under)?
        .cap(2, s)?;
    d.finish()
}

/// `I J → L → I' J'` through boxes `j`, `k`, with an `S` loop passing over
/// `I`, under `J` above the boxes and over `I'`, under `J'` below them.
pub fn twisted_ring(
    cat: &CategoryData,
    bindings: &Bindings,
    s: Label,
    ij: [Label; 2],
    l: Label,
    ij2: [Label; 2],
) -> Result<DiagramIR, DiagramError> {
    let mut d = Builder::new(cat, bindings, &ij);
    d.cup(0, s)?
        .cross(1, Over)?
        .cross(2, Under)?
        .boxed(1, "j", &ij, &[l])?
        .boxed(1, "k", &[l], &ij2)?
        .cross(0, Over)?
        .cross(1, Under)?
        .cap(2, s)?;
    d.finish()
}

/// Bindings `cupX`, `capX`, `lcupX`, `lcapX` for a word `X`.
pub fn bend_bindings(cat: &CategoryData, x: &ObjectWord) -> Bindings {
    let mut b = Bindings::new();
    b.insert("cupX".into(), word_cup(cat, x));
    b.insert("capX".into(), word_cap(cat, x));
    b.insert("lcupX".into(), word_lcup(cat, x));
    b.insert("lcapX".into(), word_lcap(cat, x));
    b
}

fn concat(a: &[Label], b: &[Label]) -> Vec<Label> {
    a.iter().chain(b).copied().collect()
}

/// `S' → X^∨ X S' → X^∨ Y → X^∨ X S → S` through `j: X S' → Y` and
/// `i: Y → X S`, closing `X` on the left.
pub fn left_partial_trace(
    cat: &CategoryData,
    bindings: &Bindings,
    x: &ObjectWord,
    s_in: Label,
    y: &ObjectWord,
    s_out: Label,
) -> Result<DiagramIR, DiagramError> {
    let xd = x.dual(cat);
    let (xl, xdl, yl) = (x.labels(), xd.labels(), y.labels());
    let k = xdl.len();
    let mut d = Builder::new(cat, bindings, &[s_in]);
    d.boxed(0, "lcupX", &[], &concat(xdl, xl))?
        .boxed(k, "j", &concat(xl, &[s_in]), yl)?
        .boxed(k, "i", yl, &concat(xl, &[s_out]))?
        .boxed(0, "lcapX", &concat(xdl, xl), &[])?;
    d.finish()
}

/// `S' → S' X X^∨ → Y X^∨ → S X X^∨ → S` through `l: S' X → Y` and
/// `k: Y → S X`, closing `X` on the right.
pub fn right_partial_trace(
    cat: &CategoryData,
    bindings: &Bindings,
    x: &ObjectWord,
    s_in: Label,
    y: &ObjectWord,
    s_out: Label,
) -> Result<DiagramIR, DiagramError> {
    let xd = x.dual(cat);
    let (xl, xdl, yl) = (x.labels(), xd.labels(), y.labels());
    let mut d = Builder::new(cat, bindings, &[s_in]);
    d.boxed(1, "cupX", &[], &concat(xl, xdl))?
        .boxed(0, "l", &concat(&[s_in], xl), yl)?
        .boxed(0, "k", yl, &concat(&[s_out], xl))?
        .boxed(1, "capX", &concat(xl, xdl), &[])?;
    d.finish()
}

/// `X S → X X^∨ T → T → X X^∨ T → X S` through `b: S → X^∨ T` and
/// `bd: X^∨ T → S`.
pub fn right_bent_projector(
    cat: &CategoryData,
    bindings: &Bindings,
    x: &ObjectWord,
    s: Label,
    t: Label,
) -> Result<DiagramIR, DiagramError> {
    let xd = x.dual(cat);
    let (xl, xdl) = (x.labels(), xd.labels());
    let n = xl.len();
    let xdt = concat(xdl, &[t]);
    let mut d = Builder::new(cat, bindings, &concat(xl, &[s]));
    d.boxed(n, "b", &[s], &xdt)?
        .boxed(0, "capX", &concat(xl, xdl), &[])?
        .boxed(0, "cupX", &[], &concat(xl, xdl))?
        .boxed(n, "bd", &xdt, &[s])?;
    d.finish()
}

/// `S X → T X^∨ X → T → T X^∨ X → S X` through `b: S → T X^∨` and
/// `bd: T X^∨ → S`.
pub fn left_bent_projector(
    cat: &CategoryData,
    bindings: &Bindings,
    x: &ObjectWord,
    s: Label,
    t: Label,
) -> Result<DiagramIR, DiagramError> {
    let xd = x.dual(cat);
    let (xl, xdl) = (x.labels(), xd.labels());
    let txd = concat(&[t], xdl);
    let mut d = Builder::new(cat, bindings, &concat(&[s], xl));
    d.boxed(0, "b", &[s], &txd)?
        .boxed(1, "lcapX", &concat(xdl, xl), &[])?
        .boxed(1, "lcupX", &[], &concat(xdl, xl))?
        .boxed(0, "bd", &txd, &[s])?;
    d.finish()
}

/// Binds `name` to `m` and returns the extended bindings.
pub fn with(mut b: Bindings, name: &str, m: Morphism) -> Bindings {
    b.insert(name.to_string(), m);
    b
}
