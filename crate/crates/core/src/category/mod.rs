//! Skeletal modular tensor category data.
//!
//! Conventions (the `conventions` block of a category file must name them):
//!
//! * **F-symbols** (`splitting-tree-left-to-right`): for splitting trees
//!   `d → e ⊗ c, e → a ⊗ b` (vertices `α: e→ab`, `β: d→ec`),
//!   `|((ab)_e c)_d; α β⟩ = Σ F^{abc}_d[(e,α,β),(f,μ,ν)] |(a(bc)_f)_d; μ ν⟩`
//!   where `μ: f→bc`, `ν: d→af`.
//! * **R-symbols** (`left-over-right`): the braiding `c_{a,b}: a⊗b → b⊗a`
//!   passes the left strand over the right one and acts on splitting
//!   vertices by `c_{a,b} ∘ v^{ab}_{c,μ} = Σ_ν R^{ab}_c[μ][ν] v^{ba}_{c,ν}`.
//! * Splitting and fusion vertices are normalised so that
//!   `w^{ab}_{c,μ} ∘ v^{ab}_{c,ν} = δ_{μν} id_c`; vertices with a unit leg are
//!   identities.
//!
//! Quantum dimensions are `d(S) = p(S) / F^{S S̄ S}_S[(1,0,0),(1,0,0)]` where
//! `p(S)` is the pivotal coefficient. Cups and caps are then fixed so that
//! both zig-zag identities hold exactly and the right loop of `S` is `d(S)`.

mod axioms;
mod builtin;
mod schema;

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{try_inverse, zero};
use crate::{CMat, C64};

pub use axioms::{check_axioms, s_matrix, AxiomReport, AxiomResidual};
pub use builtin::{builtin, builtin_names, BUILTIN_NAMES};
pub use schema::{CategorySpec, Conventions, FEntry, REntry, F_CONVENTION, R_CONVENTION};

/// Index of a simple object in its category's label table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label(pub usize);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Error)]
pub enum CategoryError {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("missing {kind} entry for admissible tuple {tuple}")]
    MissingEntry { kind: &'static str, tuple: String },
    #[error("dual table is not an involution: {0}")]
    NonInvolutiveDual(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("unknown builtin category `{0}`")]
    UnknownBuiltin(String),
    #[error("conventions block does not match the engine: {0}")]
    Conventions(String),
    #[error("degenerate category data: {0}")]
    Degenerate(String),
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read category file: {0}")]
    Io(#[from] std::io::Error),
}

/// One associator block `F^{abc}_d`, indexed by left-associated trees
/// `(e, α, β)` (rows) and right-associated trees `(f, μ, ν)` (columns).
#[derive(Clone, Debug)]
pub struct FBlock {
    pub rows: Vec<[usize; 3]>,
    pub cols: Vec<[usize; 3]>,
    pub mat: CMat,
    pub inv: CMat,
}

impl FBlock {
    pub fn row_index(&self, key: [usize; 3]) -> Option<usize> {
        self.rows.binary_search(&key).ok()
    }

    pub fn col_index(&self, key: [usize; 3]) -> Option<usize> {
        self.cols.binary_search(&key).ok()
    }
}

/// Scalars of the four bends of a simple strand `S`, each multiplying the
/// normalised vertex of the relevant unit channel:
/// `cup: 1 → S S̄`, `cap: S S̄ → 1`, `lcup: 1 → S̄ S`, `lcap: S̄ S → 1`.
#[derive(Clone, Copy, Debug)]
pub struct Bends {
    pub cup: C64,
    pub cap: C64,
    pub lcup: C64,
    pub lcap: C64,
}

/// Memo of basis changes used by left whiskering; keyed by `(a, word)`.
#[derive(Default)]
pub(crate) struct WhiskerCache {
    pub(crate) map: RwLock<HashMap<(usize, Vec<usize>), Arc<crate::homspace::SplitChange>>>,
}

/// A skeletal MTC. Immutable after construction apart from the internal,
/// transparent memo of basis-change matrices.
pub struct CategoryData {
    name: String,
    labels: Vec<String>,
    unit: usize,
    dual: Vec<usize>,
    fusion: Vec<usize>,
    f: HashMap<[usize; 4], FBlock>,
    r: HashMap<[usize; 3], CMat>,
    pivotal: Vec<C64>,
    qdim: Vec<C64>,
    global_dim: C64,
    tolerance: f64,
    bends: Vec<Bends>,
    spec: CategorySpec,
    pub(crate) cache: WhiskerCache,
}

impl Clone for CategoryData {
    fn clone(&self) -> Self {
        Self {
            name: self.name.clone(),
            labels: self.labels.clone(),
            unit: self.unit,
            dual: self.dual.clone(),
            fusion: self.fusion.clone(),
            f: self.f.clone(),
            r: self.r.clone(),
            pivotal: self.pivotal.clone(),
            qdim: self.qdim.clone(),
            global_dim: self.global_dim,
            tolerance: self.tolerance,
            bends: self.bends.clone(),
            spec: self.spec.clone(),
            cache: WhiskerCache::default(),
        }
    }
}

impl fmt::Debug for CategoryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CategoryData")
            .field("name", &self.name)
            .field("labels", &self.labels)
            .field("tolerance", &self.tolerance)
            .finish_non_exhaustive()
    }
}

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Loads a category from a builtin name or a path to a JSON category file.
pub fn load_category(source: &str) -> Result<CategoryData, CategoryError> {
    if let Some(spec) = builtin(source) {
        return CategoryData::from_spec(spec);
    }
    let path = Path::new(source);
    if path.exists() {
        return CategoryData::from_json(&std::fs::read_to_string(path)?);
    }
    Err(CategoryError::UnknownBuiltin(source.to_string()))
}

impl CategoryData {
    pub fn from_json(text: &str) -> Result<Self, CategoryError> {
        let spec: CategorySpec = serde_json::from_str(text)?;
        Self::from_spec(spec)
    }

    pub fn from_spec(spec: CategorySpec) -> Result<Self, CategoryError> {
        schema::build(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.labels.len()).map(Label)
    }

    pub fn label_name(&self, a: Label) -> &str {
        &self.labels[a.0]
    }

    pub fn label(&self, name: &str) -> Result<Label, CategoryError> {
        self.labels
            .iter()
            .position(|l| l == name)
            .map(Label)
            .ok_or_else(|| CategoryError::UnknownLabel(name.to_string()))
    }

    pub fn unit(&self) -> Label {
        Label(self.unit)
    }

    pub fn is_unit(&self, a: Label) -> bool {
        a.0 == self.unit
    }

    pub fn dual(&self, a: Label) -> Label {
        Label(self.dual[a.0])
    }

    /// `N_{ab}^c = dim Hom(a⊗b, c)`.
    pub fn n(&self, a: Label, b: Label, c: Label) -> usize {
        self.nu(a.0, b.0, c.0)
    }

    pub(crate) fn nu(&self, a: usize, b: usize, c: usize) -> usize {
        let r = self.labels.len();
        self.fusion[(a * r + b) * r + c]
    }

    /// Simple channels of `a ⊗ b` (with multiplicity ignored).
    pub fn fuse(&self, a: Label, b: Label) -> Vec<Label> {
        self.labels().filter(|&c| self.n(a, b, c) > 0).collect()
    }

    pub fn f_block(&self, a: usize, b: usize, c: usize, d: usize) -> Option<&FBlock> {
        self.f.get(&[a, b, c, d])
    }

    /// Single F entry; zero for inadmissible indices.
    pub fn f_entry(&self, abcd: [usize; 4], row: [usize; 3], col: [usize; 3]) -> C64 {
        match self.f.get(&abcd) {
            Some(blk) => match (blk.row_index(row), blk.col_index(col)) {
                (Some(i), Some(j)) => blk.mat[(i, j)],
                _ => zero(),
            },
            None => zero(),
        }
    }

    /// Entry of `(F^{abc}_d)^{-1}`, indexed (right tree, left tree).
    pub fn f_inv_entry(&self, abcd: [usize; 4], col: [usize; 3], row: [usize; 3]) -> C64 {
        match self.f.get(&abcd) {
            Some(blk) => match (blk.col_index(col), blk.row_index(row)) {
                (Some(j), Some(i)) => blk.inv[(j, i)],
                _ => zero(),
            },
            None => zero(),
        }
    }

    /// `R^{ab}_c` as an `N_{ab}^c × N_{ba}^c` matrix.
    pub fn r_matrix(&self, a: usize, b: usize, c: usize) -> Option<&CMat> {
        self.r.get(&[a, b, c])
    }

    pub fn r_entry(&self, a: usize, b: usize, c: usize, mu: usize, nu: usize) -> C64 {
        self.r
            .get(&[a, b, c])
            .and_then(|m| m.get((mu, nu)).copied())
            .unwrap_or_else(zero)
    }

    pub fn pivotal(&self, a: Label) -> C64 {
        self.pivotal[a.0]
    }

    /// Cached `d(S)`.
    pub fn qdim(&self, a: Label) -> C64 {
        self.qdim[a.0]
    }

    pub fn qdims(&self) -> &[C64] {
        &self.qdim
    }

    /// `d(C) = Σ_S d(S)²`.
    pub fn global_dim(&self) -> C64 {
        self.global_dim
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn set_tolerance(&mut self, tol: f64) {
        assert!(tol > 0.0, "tolerance must be positive");
        self.tolerance = tol;
    }

    pub fn bends(&self, a: Label) -> Bends {
        self.bends[a.0]
    }

    pub fn spec(&self) -> &CategorySpec {
        &self.spec
    }

    /// Overwrites one R-symbol entry. Used to build perturbed copies of a
    /// category for negative tests; the result is no longer guaranteed to be
    /// consistent.
    pub fn perturb_r(&mut self, a: Label, b: Label, c: Label, value: C64) {
        if let Some(m) = self.r.get_mut(&[a.0, b.0, c.0]) {
            m[(0, 0)] = value;
        }
        self.cache = WhiskerCache::default();
    }

    /// Overwrites one F-symbol entry and refreshes the cached inverse.
    pub fn perturb_f(&mut self, abcd: [usize; 4], row: [usize; 3], col: [usize; 3], value: C64) {
        if let Some(blk) = self.f.get_mut(&abcd) {
            if let (Some(i), Some(j)) = (blk.row_index(row), blk.col_index(col)) {
                blk.mat[(i, j)] = value;
                if let Some(inv) = try_inverse(&blk.mat) {
                    blk.inv = inv;
                }
            }
        }
        self.cache = WhiskerCache::default();
    }
}

/// `d(S)` recomputed from the data: pivotal coefficient over the
/// `F^{S S̄ S}_S` unit-channel entry.
pub fn quantum_dimension(cat: &CategoryData, s: Label) -> C64 {
    let u = cat.unit;
    let sb = cat.dual[s.0];
    let f1 = cat.f_entry([s.0, sb, s.0, s.0], [u, 0, 0], [u, 0, 0]);
    cat.pivotal[s.0] / f1
}

pub fn global_dimension(cat: &CategoryData) -> C64 {
    cat.qdim.iter().map(|d| d * d).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: C64, b: f64) -> bool {
        (a - C64::new(b, 0.0)).norm() < 1e-10
    }

    #[test]
    fn builtin_shapes() {
        let fib = builtin("fibonacci").map(CategoryData::from_spec).unwrap().unwrap();
        assert_eq!(fib.rank(), 2);
        let tau = fib.label("tau").unwrap();
        assert_eq!(fib.fuse(tau, tau), vec![fib.unit(), tau]);

        let ising = CategoryData::from_spec(builtin("ising").unwrap()).unwrap();
        assert_eq!(ising.rank(), 3);
        let s = ising.label("sigma").unwrap();
        let psi = ising.label("psi").unwrap();
        assert_eq!(ising.fuse(s, s), vec![ising.unit(), psi]);

        let triv = CategoryData::from_spec(builtin("trivial").unwrap()).unwrap();
        assert_eq!(triv.rank(), 1);
        assert!(close(triv.f_entry([0, 0, 0, 0], [0, 0, 0], [0, 0, 0]), 1.0));
    }

    #[test]
    fn quantum_dimensions() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let fib = load_category("fibonacci").unwrap();
        assert!(close(quantum_dimension(&fib, fib.unit()), 1.0));
        assert!(close(quantum_dimension(&fib, fib.label("tau").unwrap()), phi));
        let ising = load_category("ising").unwrap();
        assert!(close(quantum_dimension(&ising, ising.label("sigma").unwrap()), 2f64.sqrt()));
        let semion = load_category("semion").unwrap();
        assert!(close(quantum_dimension(&semion, semion.label("s").unwrap()), 1.0));
    }

    #[test]
    fn global_dimensions() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(load_category("trivial").unwrap().global_dim(), 1.0));
        assert!(close(load_category("fibonacci").unwrap().global_dim(), 1.0 + phi * phi));
        assert!(close(load_category("ising").unwrap().global_dim(), 4.0));
        assert!(close(load_category("z3").unwrap().global_dim(), 3.0));
    }

    #[test]
    fn unknown_label_is_an_error() {
        let fib = load_category("fibonacci").unwrap();
        assert!(matches!(fib.label("sigma"), Err(CategoryError::UnknownLabel(_))));
        assert!(matches!(load_category("nope"), Err(CategoryError::UnknownBuiltin(_))));
    }

    #[test]
    fn duality_and_fusion_symmetry() {
        for name in BUILTIN_NAMES {
            let cat = load_category(name).unwrap();
            for a in cat.labels() {
                assert_eq!(cat.dual(cat.dual(a)), a);
                for b in cat.labels() {
                    for c in cat.labels() {
                        assert_eq!(
                            cat.n(a, b, c),
                            cat.n(cat.dual(b), cat.dual(a), cat.dual(c)),
                            "{name}"
                        );
                    }
                }
            }
        }
    }
}
