//! The tube category: `Hom_TC(X, Y) = ⊕_R Hom_C(R X, Y R)`, composition by
//! stacking cylinders, and the tube algebra `End_TC(⊕_S S)`.

mod algebra;

use std::collections::BTreeMap;

use rand::Rng;
use thiserror::Error;

use crate::category::{CategoryData, Label};
use crate::diagram::{evaluate, evaluate_cylinder, Bindings, Builder, DiagramError, DiagramIR};
use crate::homspace::{dual_basis, hom_dim, simple_basis, HomError, Morphism, ObjectWord};
use crate::C64;

pub use algebra::{tube_algebra, tube_algebra_dim, BasisElement, TubeAlgebra};

#[derive(Debug, Error)]
pub enum TubeError {
    #[error("object mismatch: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// Element of `Hom_TC(source, target)`. Components are stored only for
/// labels `R` with `Hom_C(R ⊗ source, target ⊗ R) ≠ 0`.
#[derive(Clone, Debug)]
pub struct TubeMorphism {
    source: ObjectWord,
    target: ObjectWord,
    components: BTreeMap<Label, Morphism>,
}

fn with_r(cat: &CategoryData, r: Label, x: &ObjectWord, left: bool) -> ObjectWord {
    let rw = ObjectWord::simple(cat, r);
    if left {
        rw.concat(x)
    } else {
        x.concat(&rw)
    }
}

/// `dim Hom_TC(X, Y) = Σ_R dim Hom_C(R X, Y R)`.
pub fn tube_hom_dim(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord) -> usize {
    cat.labels()
        .map(|r| hom_dim(cat, &with_r(cat, r, x, true), &with_r(cat, r, y, false)))
        .sum()
}

impl TubeMorphism {
    pub fn zero(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord) -> Self {
        let mut components = BTreeMap::new();
        for r in cat.labels() {
            let m = Morphism::zero(cat, &with_r(cat, r, x, true), &with_r(cat, r, y, false));
            if m.dim() > 0 {
                components.insert(r, m);
            }
        }
        Self { source: x.clone(), target: y.clone(), components }
    }

    /// Builds a tube morphism from `(R, f_R)` pairs; missing labels are zero.
    pub fn from_components(
        cat: &CategoryData,
        x: &ObjectWord,
        y: &ObjectWord,
        comps: impl IntoIterator<Item = (Label, Morphism)>,
    ) -> Result<Self, TubeError> {
        let mut t = Self::zero(cat, x, y);
        for (r, m) in comps {
            let (src, tgt) = (with_r(cat, r, x, true), with_r(cat, r, y, false));
            if m.source() != src || m.target() != tgt {
                return Err(TubeError::Mismatch(format!(
                    "component {} is {} → {}, expected {} → {}",
                    cat.label_name(r),
                    m.source().display(cat),
                    m.target().display(cat),
                    src.display(cat),
                    tgt.display(cat)
                )));
            }
            if m.dim() > 0 {
                t.components.insert(r, m);
            }
        }
        Ok(t)
    }

    pub fn source(&self) -> &ObjectWord {
        &self.source
    }

    pub fn target(&self) -> &ObjectWord {
        &self.target
    }

    /// Stored components in label order.
    pub fn components(&self) -> impl Iterator<Item = (Label, &Morphism)> {
        self.components.iter().map(|(&r, m)| (r, m))
    }

    /// The `R` component, zero if not stored.
    pub fn component(&self, cat: &CategoryData, r: Label) -> Morphism {
        self.components.get(&r).cloned().unwrap_or_else(|| {
            Morphism::zero(cat, &with_r(cat, r, &self.source, true), &with_r(cat, r, &self.target, false))
        })
    }

    pub fn dim(&self) -> usize {
        self.components.values().map(Morphism::dim).sum()
    }

    /// Coefficients in label order, each component in [`Morphism::coeffs`]
    /// order.
    pub fn coeffs(&self) -> Vec<C64> {
        self.components.values().flat_map(Morphism::coeffs).collect()
    }

    pub fn from_coeffs(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord, coeffs: &[C64]) -> Result<Self, TubeError> {
        let mut t = Self::zero(cat, x, y);
        if coeffs.len() != t.dim() {
            return Err(TubeError::Hom(HomError::Shape(format!(
                "{} coefficients for a tube space of dimension {}",
                coeffs.len(),
                t.dim()
            ))));
        }
        let mut at = 0;
        for m in t.components.values_mut() {
            let n = m.dim();
            *m = Morphism::from_coeffs(cat, &m.source(), &m.target(), &coeffs[at..at + n])?;
            at += n;
        }
        Ok(t)
    }

    /// Basis element `k` of the [`TubeMorphism::coeffs`] ordering.
    pub fn basis_element(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord, k: usize) -> Self {
        let mut t = Self::zero(cat, x, y);
        let mut k = k;
        for m in t.components.values_mut() {
            if k < m.dim() {
                *m = Morphism::basis_element(cat, &m.source(), &m.target(), k);
                return t;
            }
            k -= m.dim();
        }
        panic!("tube basis index out of range");
    }

    pub fn random<G: Rng + ?Sized>(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord, rng: &mut G) -> Self {
        let mut t = Self::zero(cat, x, y);
        for m in t.components.values_mut() {
            *m = Morphism::random(cat, &m.source(), &m.target(), rng);
        }
        t
    }

    fn check_same(&self, other: &TubeMorphism) -> Result<(), TubeError> {
        if self.source != other.source || self.target != other.target {
            return Err(TubeError::Mismatch("tube morphisms live in different spaces".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &TubeMorphism) -> Result<TubeMorphism, TubeError> {
        let mut out = self.clone();
        out.add_assign_scaled(C64::new(1.0, 0.0), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &TubeMorphism) -> Result<TubeMorphism, TubeError> {
        let mut out = self.clone();
        out.add_assign_scaled(C64::new(-1.0, 0.0), other)?;
        Ok(out)
    }

    pub fn add_assign_scaled(&mut self, z: C64, other: &TubeMorphism) -> Result<(), TubeError> {
        self.check_same(other)?;
        for (r, m) in &other.components {
            match self.components.get_mut(r) {
                Some(a) => a.add_assign_scaled(z, m)?,
                None => {
                    self.components.insert(*r, m.scale(z));
                }
            }
        }
        Ok(())
    }

    pub fn scale(&self, z: C64) -> TubeMorphism {
        TubeMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            components: self.components.iter().map(|(&r, m)| (r, m.scale(z))).collect(),
        }
    }

    /// Max-abs entry of `self - other` over all components.
    pub fn residual(&self, other: &TubeMorphism) -> Result<f64, TubeError> {
        self.check_same(other)?;
        let mut worst: f64 = 0.0;
        for (r, m) in &self.components {
            worst = worst.max(match other.components.get(r) {
                Some(o) => m.residual(o)?,
                None => m.norm(),
            });
        }
        for (r, o) in &other.components {
            if !self.components.contains_key(r) {
                worst = worst.max(o.norm());
            }
        }
        Ok(worst)
    }

    pub fn norm(&self) -> f64 {
        self.components.values().map(Morphism::norm).fold(0.0, f64::max)
    }
}

/// The identity of `X`: unit component `id_X`.
pub fn tube_identity(cat: &CategoryData, x: &ObjectWord) -> TubeMorphism {
    embed_c_morphism(cat, &Morphism::identity(cat, x))
}

/// `f: X → Y` in `C` as the tube morphism with unit component `f`.
pub fn embed_c_morphism(cat: &CategoryData, f: &Morphism) -> TubeMorphism {
    let (x, y) = (f.source(), f.target());
    TubeMorphism::from_components(cat, &x, &y, [(cat.unit(), f.clone())]).expect("unit component has the right shape")
}

/// Reads a cylinder program; a unit glue strand leaves a plane diagram.
pub fn read_cylinder(cat: &CategoryData, d: &DiagramIR, bindings: &Bindings) -> Result<Morphism, DiagramError> {
    if d.glue.is_some() {
        evaluate_cylinder(cat, d, bindings)
    } else {
        evaluate(cat, d, bindings)
    }
}

/// Cylinder program for one `(T, S, R, b)` summand of `g ∘ f`:
/// `T X → S R X → S Y R → Z S R → Z T` through `b`, `f_R`, `g_S`, `b*`.
pub fn composition_program(
    cat: &CategoryData,
    bindings: &Bindings,
    t: Label,
    s: Label,
    r: Label,
    x: &ObjectWord,
    y: &ObjectWord,
    z: &ObjectWord,
) -> Result<DiagramIR, DiagramError> {
    let cat_of = |a: &[Label], b: &[Label]| a.iter().chain(b).copied().collect::<Vec<_>>();
    let (xl, yl, zl) = (x.labels(), y.labels(), z.labels());
    let mut d = Builder::with_glue(cat, bindings, xl, Some(t));
    d.boxed(0, "b", &[t], &[s, r])?
        .boxed(1, "f", &cat_of(&[r], xl), &cat_of(yl, &[r]))?
        .boxed(0, "g", &cat_of(&[s], yl), &cat_of(zl, &[s]))?
        .boxed(zl.len(), "bd", &[s, r], &[t])?;
    d.finish()
}

/// `g ∘ f`, with `b` over the splitting basis of each `Hom(T, S R)`.
pub fn tube_compose(cat: &CategoryData, g: &TubeMorphism, f: &TubeMorphism) -> Result<TubeMorphism, TubeError> {
    tube_compose_in_basis(cat, g, f, |t, s, r| simple_basis(cat, t, &ObjectWord::new(cat, [s, r])))
}

/// `g ∘ f` with `b` over the basis `basis(T, S, R)` of `Hom(T, S R)`.
pub fn tube_compose_in_basis<B>(cat: &CategoryData, g: &TubeMorphism, f: &TubeMorphism, basis: B) -> Result<TubeMorphism, TubeError>
where
    B: Fn(Label, Label, Label) -> Vec<Morphism>,
{
    if f.target != g.source {
        return Err(TubeError::Mismatch(format!(
            "cannot compose after a morphism into {}; expected {}",
            f.target.display(cat),
            g.source.display(cat)
        )));
    }
    let (x, y, z) = (&f.source, &f.target, &g.target);
    let mut out = TubeMorphism::zero(cat, x, z);
    for t in cat.labels() {
        let Some(acc) = out.components.get(&t).cloned() else { continue };
        let mut acc = acc;
        for (&s, gs) in &g.components {
            for (&r, fr) in &f.components {
                let sr = ObjectWord::new(cat, [s, r]);
                let bs = basis(t, s, r);
                if bs.is_empty() {
                    continue;
                }
                let duals = dual_basis(cat, t, &sr, &bs)?;
                for (b, bd) in bs.into_iter().zip(duals) {
                    let mut bind = Bindings::new();
                    bind.insert("b".into(), b);
                    bind.insert("bd".into(), bd);
                    bind.insert("f".into(), fr.clone());
                    bind.insert("g".into(), gs.clone());
                    let d = composition_program(cat, &bind, t, s, r, x, y, z)?;
                    acc.add_assign_scaled(C64::new(1.0, 0.0), &read_cylinder(cat, &d, &bind)?)?;
                }
            }
        }
        out.components.insert(t, acc);
    }
    Ok(out)
}
