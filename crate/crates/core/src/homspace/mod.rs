//! `Hom_C` spaces between tensor words of simples, in left-associated
//! splitting-tree bases.
//!
//! A splitting tree on a word `x_1 … x_n` with channel `c` is the sequence of
//! intermediate channels `y_k ∈ y_{k-1} ⊗ x_k` (`y_0` the unit, `y_n = c`)
//! together with the vertex multiplicities. A morphism `A → B` is stored as
//! one matrix per channel `c`, of shape `#trees(B, c) × #trees(A, c)`:
//! `f = Σ_c Σ_{ij} f_c[i][j] · v^B_i ∘ w^A_j` with `w^A_j ∘ v^A_i = δ_ij id_c`.

mod bends;
mod tensor;
mod trees;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use thiserror::Error;

use crate::category::{CategoryData, CategoryError, Label};
use crate::linalg::{max_abs, one, try_inverse, zero};
use crate::{CMat, C64};

pub use bends::{cap, cup, lcap, lcup, word_cap, word_cup, word_lcap, word_lcup};
pub(crate) use tensor::{elementary_braid, SplitChange};
pub use tensor::{embed, f_move, left_whisker, r_move, right_extend, tensor, FMove, Handedness};
pub use trees::{Tree, WordSpace};

#[derive(Debug, Error)]
pub enum HomError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("position {pos} out of range for a word of length {len}")]
    Position { pos: usize, len: usize },
    #[error("singular pairing: {0}")]
    Singular(String),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Tensor word of simples. Unit letters are dropped on construction, so the
/// empty word is the tensor unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectWord(Vec<Label>);

impl ObjectWord {
    pub fn new(cat: &CategoryData, labels: impl IntoIterator<Item = Label>) -> Self {
        Self(labels.into_iter().filter(|&l| !cat.is_unit(l)).collect())
    }

    pub fn unit() -> Self {
        Self(Vec::new())
    }

    pub fn simple(cat: &CategoryData, a: Label) -> Self {
        Self::new(cat, [a])
    }

    /// Comma-separated label names; the empty string is the unit.
    pub fn parse(cat: &CategoryData, text: &str) -> Result<Self, CategoryError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Self::unit());
        }
        let labels = text
            .split(',')
            .map(|s| cat.label(s.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(cat, labels))
    }

    pub fn labels(&self) -> &[Label] {
        &self.0
    }

    pub(crate) fn ids(&self) -> Vec<usize> {
        self.0.iter().map(|l| l.0).collect()
    }

    pub(crate) fn from_ids(ids: &[usize]) -> Self {
        Self(ids.iter().map(|&i| Label(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `X^∨`: reversed word of duals.
    pub fn dual(&self, cat: &CategoryData) -> Self {
        Self(self.0.iter().rev().map(|&l| cat.dual(l)).collect())
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn display(&self, cat: &CategoryData) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0.iter().map(|&l| cat.label_name(l)).collect::<Vec<_>>().join(",")
    }

    /// All words of length exactly `n` over the non-unit simples.
    pub fn all_of_length(cat: &CategoryData, n: usize) -> Vec<Self> {
        let letters: Vec<Label> = cat.labels().filter(|&l| !cat.is_unit(l)).collect();
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|w: Vec<Label>| {
                    letters.iter().map(move |&l| {
                        let mut w = w.clone();
                        w.push(l);
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(Self).collect()
    }

    /// All words of length `0..=n`, shortest first.
    pub fn all_up_to(cat: &CategoryData, n: usize) -> Vec<Self> {
        (0..=n).flat_map(|k| Self::all_of_length(cat, k)).collect()
    }
}

/// `dim Hom_C(A, B)`.
pub fn hom_dim(cat: &CategoryData, a: &ObjectWord, b: &ObjectWord) -> usize {
    let sa = WordSpace::new(cat, &a.ids());
    let sb = WordSpace::new(cat, &b.ids());
    (0..cat.rank()).map(|c| sa.count(c) * sb.count(c)).sum()
}

/// Element of `Hom_C(src, tgt)`.
#[derive(Clone)]
pub struct Morphism {
    src: Arc<WordSpace>,
    tgt: Arc<WordSpace>,
    blocks: Vec<CMat>,
}

impl fmt::Debug for Morphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Morphism")
            .field("src", &self.src.word())
            .field("tgt", &self.tgt.word())
            .field("coeffs", &self.coeffs())
            .finish()
    }
}

impl Morphism {
    pub(crate) fn from_blocks(src: Arc<WordSpace>, tgt: Arc<WordSpace>, blocks: Vec<CMat>) -> Self {
        debug_assert_eq!(blocks.len(), src.rank());
        for (c, b) in blocks.iter().enumerate() {
            debug_assert_eq!((b.nrows(), b.ncols()), (tgt.count(c), src.count(c)));
        }
        Self { src, tgt, blocks }
    }

    pub(crate) fn spaces(cat: &CategoryData, src: &ObjectWord, tgt: &ObjectWord) -> (Arc<WordSpace>, Arc<WordSpace>) {
        (WordSpace::new(cat, &src.ids()), WordSpace::new(cat, &tgt.ids()))
    }

    pub fn zero(cat: &CategoryData, src: &ObjectWord, tgt: &ObjectWord) -> Self {
        let (s, t) = Self::spaces(cat, src, tgt);
        Self::zero_between(s, t)
    }

    pub(crate) fn zero_between(src: Arc<WordSpace>, tgt: Arc<WordSpace>) -> Self {
        let blocks = (0..src.rank())
            .map(|c| CMat::from_element(tgt.count(c), src.count(c), zero()))
            .collect();
        Self { src, tgt, blocks }
    }

    pub fn identity(cat: &CategoryData, x: &ObjectWord) -> Self {
        Self::identity_on(WordSpace::new(cat, &x.ids()))
    }

    pub(crate) fn identity_on(space: Arc<WordSpace>) -> Self {
        let blocks = (0..space.rank())
            .map(|c| CMat::identity(space.count(c), space.count(c)))
            .collect();
        Self { src: space.clone(), tgt: space, blocks }
    }

    /// The scalar `z · id_1`.
    pub fn scalar(cat: &CategoryData, z: C64) -> Self {
        Self::identity(cat, &ObjectWord::unit()).scale(z)
    }

    /// Coefficients in channel order, each block row-major (target tree,
    /// source tree).
    pub fn coeffs(&self) -> Vec<C64> {
        self.blocks
            .iter()
            .flat_map(|b| (0..b.nrows()).flat_map(move |i| (0..b.ncols()).map(move |j| b[(i, j)])))
            .collect()
    }

    pub fn from_coeffs(
        cat: &CategoryData,
        src: &ObjectWord,
        tgt: &ObjectWord,
        coeffs: &[C64],
    ) -> Result<Self, HomError> {
        let mut m = Self::zero(cat, src, tgt);
        if coeffs.len() != m.dim() {
            return Err(HomError::Shape(format!(
                "{} coefficients for a space of dimension {}",
                coeffs.len(),
                m.dim()
            )));
        }
        let mut it = coeffs.iter();
        for b in &mut m.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    b[(i, j)] = *it.next().unwrap();
                }
            }
        }
        Ok(m)
    }

    /// Basis element `k` of the coefficient ordering of [`Morphism::coeffs`].
    pub fn basis_element(cat: &CategoryData, src: &ObjectWord, tgt: &ObjectWord, k: usize) -> Self {
        let mut m = Self::zero(cat, src, tgt);
        let mut k = k;
        for b in &mut m.blocks {
            let n = b.len();
            if k < n {
                let (i, j) = (k / b.ncols(), k % b.ncols());
                b[(i, j)] = one();
                return m;
            }
            k -= n;
        }
        panic!("basis index out of range");
    }

    pub fn random<R: Rng + ?Sized>(cat: &CategoryData, src: &ObjectWord, tgt: &ObjectWord, rng: &mut R) -> Self {
        let mut m = Self::zero(cat, src, tgt);
        for b in &mut m.blocks {
            for z in b.iter_mut() {
                *z = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    pub fn source(&self) -> ObjectWord {
        ObjectWord::from_ids(self.src.word())
    }

    pub fn target(&self) -> ObjectWord {
        ObjectWord::from_ids(self.tgt.word())
    }

    pub fn source_space(&self) -> &Arc<WordSpace> {
        &self.src
    }

    pub fn target_space(&self) -> &Arc<WordSpace> {
        &self.tgt
    }

    pub fn blocks(&self) -> &[CMat] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.len()).sum()
    }

    /// `self ∘ f`.
    pub fn compose(&self, f: &Morphism) -> Result<Morphism, HomError> {
        if !f.tgt.same_word(&self.src) {
            return Err(HomError::Shape(format!(
                "cannot compose {:?}→{:?} after {:?}→{:?}",
                self.src.word(),
                self.tgt.word(),
                f.src.word(),
                f.tgt.word()
            )));
        }
        let blocks = self.blocks.iter().zip(&f.blocks).map(|(g, f)| g * f).collect();
        Ok(Morphism { src: f.src.clone(), tgt: self.tgt.clone(), blocks })
    }

    fn check_same(&self, other: &Morphism) -> Result<(), HomError> {
        if self.src.same_word(&other.src) && self.tgt.same_word(&other.tgt) {
            Ok(())
        } else {
            Err(HomError::Shape(format!(
                "{:?}→{:?} vs {:?}→{:?}",
                self.src.word(),
                self.tgt.word(),
                other.src.word(),
                other.tgt.word()
            )))
        }
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism, HomError> {
        self.check_same(other)?;
        let blocks = self.blocks.iter().zip(&other.blocks).map(|(a, b)| a + b).collect();
        Ok(Morphism { src: self.src.clone(), tgt: self.tgt.clone(), blocks })
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism, HomError> {
        self.add(&other.scale(-one()))
    }

    pub fn add_assign_scaled(&mut self, z: C64, other: &Morphism) -> Result<(), HomError> {
        self.check_same(other)?;
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a += b * z;
        }
        Ok(())
    }

    pub fn scale(&self, z: C64) -> Morphism {
        Morphism {
            src: self.src.clone(),
            tgt: self.tgt.clone(),
            blocks: self.blocks.iter().map(|b| b * z).collect(),
        }
    }

    /// Max-abs entry of `self - other`.
    pub fn residual(&self, other: &Morphism) -> Result<f64, HomError> {
        self.check_same(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max))
    }

    pub fn norm(&self) -> f64 {
        self.blocks.iter().map(max_abs).fold(0.0, f64::max)
    }

    /// For endomorphisms of a simple object (or of the unit), the scalar `z`
    /// with `self = z · id`.
    pub fn as_scalar(&self) -> Option<C64> {
        if !self.src.same_word(&self.tgt) {
            return None;
        }
        let mut nonzero = self.blocks.iter().filter(|b| !b.is_empty());
        let b = nonzero.next()?;
        if nonzero.next().is_some() || b.nrows() != 1 {
            return None;
        }
        Some(b[(0, 0)])
    }
}

/// Splitting basis of `Hom(R, X)` for simple `R`: one morphism per tree on
/// `X` with channel `R`.
pub fn simple_basis(cat: &CategoryData, r: Label, x: &ObjectWord) -> Vec<Morphism> {
    let rw = ObjectWord::simple(cat, r);
    let (src, tgt) = Morphism::spaces(cat, &rw, x);
    (0..tgt.count(r.0))
        .map(|i| {
            let mut m = Morphism::zero_between(src.clone(), tgt.clone());
            m.blocks[r.0][(i, 0)] = one();
            m
        })
        .collect()
}

/// Fusion basis of `Hom(X, R)`.
pub fn simple_cobasis(cat: &CategoryData, r: Label, x: &ObjectWord) -> Vec<Morphism> {
    let rw = ObjectWord::simple(cat, r);
    let (src, tgt) = Morphism::spaces(cat, x, &rw);
    (0..src.count(r.0))
        .map(|i| {
            let mut m = Morphism::zero_between(src.clone(), tgt.clone());
            m.blocks[r.0][(0, i)] = one();
            m
        })
        .collect()
}

/// `P[g][f]` = scalar of `g ∘ f ∈ End(R)` over the cobasis `g` of `Hom(X, R)`
/// and the given morphisms `f ∈ Hom(R, X)`.
pub fn simple_pairing(cat: &CategoryData, r: Label, x: &ObjectWord, fs: &[Morphism]) -> Result<CMat, HomError> {
    let gs = simple_cobasis(cat, r, x);
    let mut p = CMat::from_element(gs.len(), fs.len(), zero());
    for (i, g) in gs.iter().enumerate() {
        for (j, f) in fs.iter().enumerate() {
            let e = g.compose(f)?;
            p[(i, j)] = e.blocks[r.0][(0, 0)];
        }
    }
    Ok(p)
}

/// The pairing matrix on the standard basis of `Hom(R, X)`.
pub fn simple_pairing_matrix(cat: &CategoryData, r: Label, x: &ObjectWord) -> CMat {
    simple_pairing(cat, r, x, &simple_basis(cat, r, x)).expect("shapes agree by construction")
}

/// `{b*}` with `b*_k ∘ b_i = δ_ki id_R`, solved from the pairing matrix.
pub fn dual_basis(cat: &CategoryData, r: Label, x: &ObjectWord, basis: &[Morphism]) -> Result<Vec<Morphism>, HomError> {
    let p = simple_pairing(cat, r, x, basis)?;
    if p.nrows() != p.ncols() {
        return Err(HomError::Shape(format!(
            "{} vectors given for a space of dimension {}",
            p.ncols(),
            p.nrows()
        )));
    }
    let pinv = try_inverse(&p).ok_or_else(|| HomError::Singular(format!("Hom({}, {:?})", r.0, x.ids())))?;
    let gs = simple_cobasis(cat, r, x);
    Ok((0..basis.len())
        .map(|k| {
            let mut m = gs.first().map(|g| g.scale(zero())).unwrap();
            for (j, g) in gs.iter().enumerate() {
                m.add_assign_scaled(pinv[(k, j)], g).unwrap();
            }
            m
        })
        .collect())
}

/// One summand `b ∘ b*` of the identity of `X`.
#[derive(Clone, Debug)]
pub struct IdentityTerm {
    pub r: Label,
    pub b: Morphism,
    pub b_dual: Morphism,
}

/// `id_X = Σ_{R, b} b ∘ b*` with `b` over the splitting basis of `Hom(R, X)`.
pub fn decompose_identity(cat: &CategoryData, x: &ObjectWord) -> Vec<IdentityTerm> {
    let mut out = Vec::new();
    for r in cat.labels() {
        let basis = simple_basis(cat, r, x);
        if basis.is_empty() {
            continue;
        }
        let duals = dual_basis(cat, r, x, &basis).expect("standard pairing is invertible");
        for (b, b_dual) in basis.into_iter().zip(duals) {
            out.push(IdentityTerm { r, b, b_dual });
        }
    }
    out
}

/// Right trace `cap_X ∘ (f ⊗ id_{X^∨}) ∘ cup_X`.
pub fn trace(cat: &CategoryData, f: &Morphism) -> Result<C64, HomError> {
    let x = f.source();
    if f.target() != x {
        return Err(HomError::Shape("trace of a non-endomorphism".into()));
    }
    let xd = x.dual(cat);
    let inner = right_extend(cat, f, &xd);
    let m = word_cap(cat, &x).compose(&inner)?.compose(&word_cup(cat, &x))?;
    Ok(m.as_scalar().unwrap_or_else(zero))
}

/// Left trace `lcap_X ∘ (id_{X^∨} ⊗ f) ∘ lcup_X`.
pub fn left_trace(cat: &CategoryData, f: &Morphism) -> Result<C64, HomError> {
    let x = f.source();
    if f.target() != x {
        return Err(HomError::Shape("trace of a non-endomorphism".into()));
    }
    let xd = x.dual(cat);
    let inner = left_whisker(cat, &xd, f);
    let m = word_lcap(cat, &x).compose(&inner)?.compose(&word_lcup(cat, &x))?;
    Ok(m.as_scalar().unwrap_or_else(zero))
}

/// `tr(g ∘ f)`.
pub fn trace_pairing(cat: &CategoryData, f: &Morphism, g: &Morphism) -> Result<C64, HomError> {
    trace(cat, &g.compose(f)?)
}

/// Gram matrix of the trace pairing between the standard bases of
/// `Hom(X, Y)` (columns) and `Hom(Y, X)` (rows).
pub fn trace_gram(cat: &CategoryData, x: &ObjectWord, y: &ObjectWord) -> Result<CMat, HomError> {
    let n = hom_dim(cat, x, y);
    let fs: Vec<_> = (0..n).map(|k| Morphism::basis_element(cat, x, y, k)).collect();
    let gs: Vec<_> = (0..n).map(|k| Morphism::basis_element(cat, y, x, k)).collect();
    let mut m = CMat::from_element(n, n, zero());
    for (i, g) in gs.iter().enumerate() {
        for (j, f) in fs.iter().enumerate() {
            m[(i, j)] = trace_pairing(cat, f, g)?;
        }
    }
    Ok(m)
}

/// Bases `{b_p}` of `Hom(X, Y)` and `{b'_p}` of `Hom(Y, X)` with
/// `tr(b'_p ∘ b_q) = δ_pq`, solved from the trace Gram matrix.
pub fn trace_dual_bases(
    cat: &CategoryData,
    x: &ObjectWord,
    y: &ObjectWord,
) -> Result<(Vec<Morphism>, Vec<Morphism>), HomError> {
    let n = hom_dim(cat, x, y);
    let fs: Vec<_> = (0..n).map(|k| Morphism::basis_element(cat, x, y, k)).collect();
    let gs: Vec<_> = (0..n).map(|k| Morphism::basis_element(cat, y, x, k)).collect();
    let gram = trace_gram(cat, x, y)?;
    let inv = try_inverse(&gram).ok_or_else(|| HomError::Singular("trace pairing".into()))?;
    // b'_p = Σ_i inv[p][i] g_i gives tr(b'_p ∘ f_q) = Σ_i inv[p][i] gram[i][q].
    let duals = (0..n)
        .map(|p| {
            let mut m = Morphism::zero(cat, y, x);
            for (i, g) in gs.iter().enumerate() {
                m.add_assign_scaled(inv[(p, i)], g).unwrap();
            }
            m
        })
        .collect();
    Ok((fs, duals))
}

#[cfg(test)]
mod tests;
