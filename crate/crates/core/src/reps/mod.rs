//! The functors `F_IJ(X) = Hom_C(X, I J)`, the maps `λ` and `μ`, primitive
//! idempotents and the block decomposition of `End_TC(X)`.

use serde::Serialize;
use thiserror::Error;

use crate::category::{CategoryData, Label};
use crate::diagram::{evaluate, Bindings, Builder, DiagramError, DiagramIR};
use crate::exec::Exec;
use crate::homspace::{hom_dim, trace, trace_dual_bases, HomError, Morphism, ObjectWord};
use crate::homspace::Handedness::{Over, Under};
use crate::linalg::{rank, tidy};
use crate::tube::{read_cylinder, tube_compose, tube_hom_dim, tube_identity, TubeError, TubeMorphism};
use crate::{CMat, C64};

#[derive(Debug, Error)]
pub enum RepError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("tr(i ∘ j) = {0}, expected 1")]
    Normalization(C64),
    #[error(transparent)]
    Tube(#[from] TubeError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

fn pair(cat: &CategoryData, i: Label, j: Label) -> ObjectWord {
    ObjectWord::new(cat, [i, j])
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// `F_IJ` with trace-dual bases cached per object on demand.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctorRep {
    pub i: Label,
    pub j: Label,
}

impl FunctorRep {
    pub fn new(i: Label, j: Label) -> Self {
        Self { i, j }
    }

    pub fn word(&self, cat: &CategoryData) -> ObjectWord {
        pair(cat, self.i, self.j)
    }

    /// `dim F_IJ(X) = dim Hom(X, I J)`.
    pub fn dim(&self, cat: &CategoryData, x: &ObjectWord) -> usize {
        hom_dim(cat, x, &self.word(cat))
    }

    /// Bases `{b_p} ⊂ Hom(X, I J)` and `{b'_p} ⊂ Hom(I J, X)` with
    /// `tr(b'_p ∘ b_q) = δ_pq`.
    pub fn dual_bases(&self, cat: &CategoryData, x: &ObjectWord) -> Result<(Vec<Morphism>, Vec<Morphism>), RepError> {
        Ok(trace_dual_bases(cat, x, &self.word(cat))?)
    }
}

/// Plane program for one `S` summand of `F_IJ(f)(g)`, `f: Z → Y` in `TC`,
/// `g: Y → I J`: `Z → S^∨ S Z → S^∨ Y S → S^∨ I J S → I J S^∨ S → I J`.
/// `S^∨` passes over `I` and under `J`.
pub fn functor_program(
    cat: &CategoryData,
    bindings: &Bindings,
    s: Label,
    z: &ObjectWord,
    y: &ObjectWord,
    i: Label,
    j: Label,
) -> Result<DiagramIR, DiagramError> {
    let (zl, yl) = (z.labels(), y.labels());
    let mut sz = vec![s];
    sz.extend_from_slice(zl);
    let mut ys = yl.to_vec();
    ys.push(s);
    let mut d = Builder::new(cat, bindings, zl);
    d.lcup(0, s)?
        .boxed(1, "f", &sz, &ys)?
        .boxed(1, "g", yl, &[i, j])?
        .cross(0, Over)?
        .cross(1, Under)?
        .lcap(2, s)?;
    d.finish()
}

/// `F_IJ(f)(g) ∈ Hom(Z, I J)` for `f ∈ Hom_TC(Z, Y)` and `g ∈ Hom(Y, I J)`.
pub fn f_functor_apply(cat: &CategoryData, i: Label, j: Label, f: &TubeMorphism, g: &Morphism) -> Result<Morphism, RepError> {
    let ij = pair(cat, i, j);
    if g.source() != *f.target() || g.target() != ij {
        return Err(RepError::Shape(format!(
            "F_IJ(f) acts on Hom({}, I J); got {} → {}",
            f.target().display(cat),
            g.source().display(cat),
            g.target().display(cat)
        )));
    }
    let (z, y) = (f.source(), f.target());
    let mut out = Morphism::zero(cat, z, &ij);
    for (s, fs) in f.components() {
        let mut b = Bindings::new();
        b.insert("f".into(), fs.clone());
        b.insert("g".into(), g.clone());
        let d = functor_program(cat, &b, s, z, y, i, j)?;
        out.add_assign_scaled(c(1.0), &evaluate(cat, &d, &b)?)?;
    }
    Ok(out)
}

/// Matrix of `F_IJ(f): F_IJ(Y) → F_IJ(Z)` on the coefficient bases.
pub fn functor_matrix(cat: &CategoryData, i: Label, j: Label, f: &TubeMorphism) -> Result<CMat, RepError> {
    let ij = pair(cat, i, j);
    let (z, y) = (f.source(), f.target());
    let n_in = hom_dim(cat, y, &ij);
    let n_out = hom_dim(cat, z, &ij);
    let mut m = CMat::from_element(n_out, n_in, c(0.0));
    for col in 0..n_in {
        let g = Morphism::basis_element(cat, y, &ij, col);
        for (row, v) in f_functor_apply(cat, i, j, f, &g)?.coeffs().into_iter().enumerate() {
            m[(row, col)] = v;
        }
    }
    Ok(m)
}

/// Cylinder program for the `S` component of `λ(j ⊗ i)`:
/// `S X → S I J → I S J → I J S → Y S`, with `S` passing over `I` and
/// under `J`.
pub fn lambda_program(
    cat: &CategoryData,
    bindings: &Bindings,
    s: Label,
    x: &ObjectWord,
    y: &ObjectWord,
    i: Label,
    j: Label,
) -> Result<DiagramIR, DiagramError> {
    let mut d = Builder::with_glue(cat, bindings, x.labels(), Some(s));
    d.boxed(1, "i", x.labels(), &[i, j])?
        .cross(0, Over)?
        .cross(1, Under)?
        .boxed(0, "j", &[i, j], y.labels())?;
    d.finish()
}

/// `λ(j ⊗ i) ∈ Hom_TC(X, Y)` for `j: I J → Y`, `i: X → I J`, with
/// `S` component weighted by `d(I) d(J) d(S) / d(C)`.
pub fn lambda_map(cat: &CategoryData, i_label: Label, j_label: Label, j: &Morphism, i: &Morphism) -> Result<TubeMorphism, RepError> {
    let ij = pair(cat, i_label, j_label);
    if i.target() != ij || j.source() != ij {
        return Err(RepError::Shape(format!(
            "λ needs i: X → I J and j: I J → Y; got i into {} and j from {}",
            i.target().display(cat),
            j.source().display(cat)
        )));
    }
    let (x, y) = (i.source(), j.target());
    let pre = cat.qdim(i_label) * cat.qdim(j_label) / cat.global_dim();
    let mut comps = Vec::new();
    for s in cat.labels() {
        let mut b = Bindings::new();
        b.insert("i".into(), i.clone());
        b.insert("j".into(), j.clone());
        let d = lambda_program(cat, &b, s, &x, &y, i_label, j_label)?;
        comps.push((s, read_cylinder(cat, &d, &b)?.scale(pre * cat.qdim(s))));
    }
    Ok(TubeMorphism::from_components(cat, &x, &y, comps)?)
}

/// `μ(k ⊗ t) = F_IJ(t)(k)` for `k: Y → I J`, `t ∈ Hom_TC(X, Y)`.
pub fn mu_action(cat: &CategoryData, i: Label, j: Label, k: &Morphism, t: &TubeMorphism) -> Result<Morphism, RepError> {
    f_functor_apply(cat, i, j, t, k)
}

/// Outcome of comparing `μ(k ⊗ λ(j ⊗ ·))` with a multiple of the identity.
#[derive(Clone, Debug, Serialize)]
pub struct OppositeReport {
    /// Best-fit scalar `c` with `μ(k ⊗ λ(j ⊗ i)) ≈ c i`.
    pub scalar: [f64; 2],
    /// `tr(j ∘ k)`.
    pub expected: [f64; 2],
    /// Max-abs of `μ(k ⊗ λ(j ⊗ i)) − c i` over probes and basis vectors.
    pub residual: f64,
    /// `|c − tr(j ∘ k)|`.
    pub scalar_error: f64,
}

/// Checks `μ(k ⊗ λ(j ⊗ i)) = tr(j ∘ k) i` for every basis vector `i` of
/// `F_IJ(X)` and every probe `X`.
pub fn verify_opposite(
    cat: &CategoryData,
    i: Label,
    j: Label,
    k: &Morphism,
    jm: &Morphism,
    probes: &[ObjectWord],
) -> Result<OppositeReport, RepError> {
    let ij = pair(cat, i, j);
    let expected = trace(cat, &jm.compose(k)?)?;
    let mut pairs = Vec::new();
    for x in probes {
        for p in 0..hom_dim(cat, x, &ij) {
            let iv = Morphism::basis_element(cat, x, &ij, p);
            let lam = lambda_map(cat, i, j, jm, &iv)?;
            let out = mu_action(cat, i, j, k, &lam)?;
            pairs.push((iv.coeffs(), out.coeffs()));
        }
    }
    let (mut num, mut den) = (c(0.0), 0.0);
    for (a, b) in &pairs {
        for (x, y) in a.iter().zip(b) {
            num += x.conj() * y;
            den += x.norm_sqr();
        }
    }
    let scalar = if den > 0.0 { num / den } else { c(0.0) };
    let mut residual: f64 = 0.0;
    for (a, b) in &pairs {
        for (x, y) in a.iter().zip(b) {
            residual = residual.max((y - scalar * x).norm());
        }
    }
    Ok(OppositeReport {
        scalar: [scalar.re, scalar.im],
        expected: [expected.re, expected.im],
        residual,
        scalar_error: if den > 0.0 { (scalar - expected).norm() } else { 0.0 },
    })
}

/// `λ(j ⊗ i)` for `tr(i ∘ j) = 1`, a primitive idempotent of `End_TC(X)`.
pub fn primitive_idempotent(
    cat: &CategoryData,
    i_label: Label,
    j_label: Label,
    i: &Morphism,
    j: &Morphism,
) -> Result<TubeMorphism, RepError> {
    let t = trace(cat, &i.compose(j)?)?;
    if (t - 1.0).norm() > cat.tolerance() {
        return Err(RepError::Normalization(t));
    }
    lambda_map(cat, i_label, j_label, j, i)
}

/// `dim span{p ∘ h : h ∈ Hom_TC(Z, X)}`.
pub fn image_rank(cat: &CategoryData, p: &TubeMorphism, z: &ObjectWord) -> Result<usize, RepError> {
    let x = p.source();
    let n = tube_hom_dim(cat, z, x);
    let cols: Vec<Vec<C64>> = (0..n)
        .map(|k| tube_compose(cat, p, &TubeMorphism::basis_element(cat, z, x, k)).map(|t| t.coeffs()))
        .collect::<Result<_, _>>()?;
    let rows = cols.first().map_or(0, Vec::len);
    let m = CMat::from_fn(rows, n, |r, k| cols[k][r]);
    Ok(rank(&m, 1e-9))
}

/// Residual of `λ(l ⊗ k) ∘ λ(j ⊗ i) = δ_{II'} δ_{JJ'} tr(k ∘ j) λ(l ⊗ i)`.
/// The first argument carries `(I', J', l, k)`, the second `(I, J, j, i)`.
pub fn compose_lambdas_check(
    cat: &CategoryData,
    outer: (Label, Label, &Morphism, &Morphism),
    inner: (Label, Label, &Morphism, &Morphism),
) -> Result<f64, RepError> {
    let (i2, j2, l, k) = outer;
    let (i1, j1, j, i) = inner;
    let lhs = tube_compose(cat, &lambda_map(cat, i2, j2, l, k)?, &lambda_map(cat, i1, j1, j, i)?)?;
    let rhs = if (i1, j1) == (i2, j2) {
        let t = trace(cat, &k.compose(j)?)?;
        lambda_map(cat, i1, j1, l, i)?.scale(t)
    } else {
        TubeMorphism::zero(cat, &i.source(), &l.target())
    };
    Ok(lhs.residual(&rhs)?)
}

/// One `(I, J)` block of `End_TC(X)`.
#[derive(Clone, Debug)]
pub struct Block {
    pub i: Label,
    pub j: Label,
    /// `e[p][q] = λ(b'_p ⊗ b_q)`.
    pub units: Vec<Vec<TubeMorphism>>,
}

impl Block {
    pub fn size(&self) -> usize {
        self.units.len()
    }

    /// `Σ_p e_pp`.
    pub fn idempotent(&self, cat: &CategoryData, x: &ObjectWord) -> TubeMorphism {
        let mut acc = TubeMorphism::zero(cat, x, x);
        for p in 0..self.size() {
            acc.add_assign_scaled(c(1.0), &self.units[p][p]).expect("same space");
        }
        acc
    }
}

/// Matrix units of `End_TC(X)` for every `(I, J)` with `F_IJ(X) ≠ 0`, and
/// the residuals of their defining relations.
#[derive(Clone, Debug)]
pub struct BlockDecomposition {
    pub object: ObjectWord,
    pub blocks: Vec<Block>,
    pub tube_dim: usize,
    /// `‖Σ e_pp − id‖`.
    pub completeness_residual: f64,
    /// Max of `‖e_pq ∘ e_rs − δ_qr e_ps‖` within blocks.
    pub matrix_unit_residual: f64,
    /// Max of `‖P_a ∘ P_b‖` over distinct block idempotents.
    pub orthogonality_residual: f64,
}

#[derive(Serialize)]
struct BlockJson {
    i: String,
    j: String,
    size: usize,
    idempotent: Vec<ComponentJson>,
}

#[derive(Serialize)]
struct ComponentJson {
    r: String,
    coeffs: Vec<[f64; 2]>,
}

#[derive(Serialize)]
struct DecompositionJson {
    object: String,
    tube_dim: usize,
    block_dim_total: usize,
    completeness_residual: f64,
    matrix_unit_residual: f64,
    orthogonality_residual: f64,
    blocks: Vec<BlockJson>,
}

impl BlockDecomposition {
    /// `Σ_{I,J} (dim F_IJ(X))²`.
    pub fn block_dim_total(&self) -> usize {
        self.blocks.iter().map(|b| b.size() * b.size()).sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.completeness_residual.max(self.matrix_unit_residual).max(self.orthogonality_residual)
    }

    pub fn to_json_value(&self, cat: &CategoryData) -> serde_json::Value {
        let blocks = self
            .blocks
            .iter()
            .map(|b| BlockJson {
                i: cat.label_name(b.i).to_string(),
                j: cat.label_name(b.j).to_string(),
                size: b.size(),
                idempotent: b
                    .idempotent(cat, &self.object)
                    .components()
                    .map(|(r, m)| ComponentJson {
                        r: cat.label_name(r).to_string(),
                        coeffs: m.coeffs().into_iter().map(tidy).collect(),
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_value(DecompositionJson {
            object: self.object.display(cat),
            tube_dim: self.tube_dim,
            block_dim_total: self.block_dim_total(),
            completeness_residual: self.completeness_residual,
            matrix_unit_residual: self.matrix_unit_residual,
            orthogonality_residual: self.orthogonality_residual,
            blocks,
        })
        .expect("serialisable")
    }
}

/// Decomposes `End_TC(X)` into matrix blocks indexed by `(I, J)`.
pub fn block_decompose_end(cat: &CategoryData, x: &ObjectWord, exec: Exec) -> Result<BlockDecomposition, RepError> {
    let reps: Vec<FunctorRep> = cat
        .labels()
        .flat_map(|i| cat.labels().map(move |j| FunctorRep::new(i, j)))
        .filter(|f| f.dim(cat, x) > 0)
        .collect();
    let built = exec.map(reps, |f| -> Result<(Block, f64), RepError> {
        let (bs, duals) = f.dual_bases(cat, x)?;
        let n = bs.len();
        let mut units = Vec::with_capacity(n);
        for dp in &duals {
            let row: Vec<TubeMorphism> =
                bs.iter().map(|bq| lambda_map(cat, f.i, f.j, dp, bq)).collect::<Result<_, _>>()?;
            units.push(row);
        }
        let mut worst: f64 = 0.0;
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let prod = tube_compose(cat, &units[p][q], &units[r][s])?;
                        let want = if q == r { units[p][s].clone() } else { TubeMorphism::zero(cat, x, x) };
                        worst = worst.max(prod.residual(&want)?);
                    }
                }
            }
        }
        Ok((Block { i: f.i, j: f.j, units }, worst))
    });
    let mut blocks = Vec::new();
    let mut matrix_unit_residual: f64 = 0.0;
    for b in built {
        let (b, r) = b?;
        matrix_unit_residual = matrix_unit_residual.max(r);
        blocks.push(b);
    }
    let idems: Vec<TubeMorphism> = blocks.iter().map(|b| b.idempotent(cat, x)).collect();
    let mut total = TubeMorphism::zero(cat, x, x);
    for p in &idems {
        total.add_assign_scaled(c(1.0), p)?;
    }
    let completeness_residual = total.residual(&tube_identity(cat, x))?;
    let pairs: Vec<(usize, usize)> = (0..idems.len())
        .flat_map(|a| (0..idems.len()).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .collect();
    let orth = exec.map(pairs, |(a, b)| tube_compose(cat, &idems[a], &idems[b]).map(|t| t.norm()));
    let mut orthogonality_residual: f64 = 0.0;
    for o in orth {
        orthogonality_residual = orthogonality_residual.max(o?);
    }
    Ok(BlockDecomposition {
        object: x.clone(),
        blocks,
        tube_dim: tube_hom_dim(cat, x, x),
        completeness_residual,
        matrix_unit_residual,
        orthogonality_residual,
    })
}
