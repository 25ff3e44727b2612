use serde::Serialize;

use super::{tube_compose, tube_hom_dim, TubeError, TubeMorphism};
use crate::category::{CategoryData, Label};
use crate::exec::Exec;
use crate::homspace::ObjectWord;
use crate::linalg::tidy;
use crate::C64;

/// One basis vector of the tube algebra: tree `index` of the `R` component
/// of `Hom_TC(X, Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisElement {
    pub y: String,
    pub x: String,
    pub r: String,
    pub index: usize,
}

/// `End_TC(⊕_S S)` with structure constants `e_i ∘ e_j = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug)]
pub struct TubeAlgebra {
    pub category: String,
    pub basis: Vec<BasisElement>,
    /// `(y, x)` label pair of every basis element.
    pub blocks: Vec<(Label, Label)>,
    /// Sparse constants `(i, j, k, c)`, sorted by `(i, j, k)`.
    pub constants: Vec<(usize, usize, usize, C64)>,
    /// Offset of the first basis element of `Hom_TC(x, y)`, indexed by
    /// `y * rank + x`.
    offsets: Vec<usize>,
}

#[derive(Serialize)]
struct Constant {
    i: usize,
    j: usize,
    k: usize,
    v: [f64; 2],
}

#[derive(Serialize)]
struct Export<'a> {
    category: &'a str,
    version: &'a str,
    ordering: &'a str,
    dimension: usize,
    basis: &'a [BasisElement],
    structure_constants: Vec<Constant>,
}

/// Builds the tube algebra. Basis order is `(Y, X, R, tree)` lexicographic.
pub fn tube_algebra(cat: &CategoryData, exec: Exec) -> Result<TubeAlgebra, TubeError> {
    let n = cat.rank();
    let mut basis = Vec::new();
    let mut blocks = Vec::new();
    let mut offsets = vec![0; n * n];
    for y in cat.labels() {
        for x in cat.labels() {
            offsets[y.0 * n + x.0] = basis.len();
            let (xw, yw) = (ObjectWord::simple(cat, x), ObjectWord::simple(cat, y));
            let zero = TubeMorphism::zero(cat, &xw, &yw);
            for (r, m) in zero.components() {
                for index in 0..m.dim() {
                    basis.push(BasisElement {
                        y: cat.label_name(y).to_string(),
                        x: cat.label_name(x).to_string(),
                        r: cat.label_name(r).to_string(),
                        index,
                    });
                    blocks.push((y, x));
                }
            }
        }
    }
    let alg_offsets = offsets.clone();
    let local = |i: usize| -> usize {
        let (y, x) = blocks[i];
        i - alg_offsets[y.0 * n + x.0]
    };
    let element = |i: usize| {
        let (y, x) = blocks[i];
        TubeMorphism::basis_element(cat, &ObjectWord::simple(cat, x), &ObjectWord::simple(cat, y), local(i))
    };
    // e_i ∘ e_j is nonzero only when source(e_i) = target(e_j).
    let pairs: Vec<(usize, usize)> = (0..basis.len())
        .flat_map(|i| (0..basis.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| blocks[i].1 == blocks[j].0)
        .collect();
    let results = exec.map(pairs, |(i, j)| -> Result<Vec<(usize, usize, usize, C64)>, TubeError> {
        let prod = tube_compose(cat, &element(i), &element(j))?;
        let base = alg_offsets[blocks[i].0 .0 * n + blocks[j].1 .0];
        Ok(prod
            .coeffs()
            .into_iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > 0.0)
            .map(|(k, c)| (i, j, base + k, c))
            .collect())
    });
    let mut constants = Vec::new();
    for r in results {
        constants.extend(r?);
    }
    Ok(TubeAlgebra { category: cat.name().to_string(), basis, blocks, constants, offsets })
}

/// `Σ_{R,X,Y simple} dim Hom(R X, Y R)`.
pub fn tube_algebra_dim(cat: &CategoryData) -> usize {
    let mut d = 0;
    for x in cat.labels() {
        for y in cat.labels() {
            d += tube_hom_dim(cat, &ObjectWord::simple(cat, x), &ObjectWord::simple(cat, y));
        }
    }
    d
}

impl TubeAlgebra {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Dense `c[i][j][k]`.
    pub fn dense(&self) -> Vec<Vec<Vec<C64>>> {
        let n = self.dim();
        let mut c = vec![vec![vec![C64::new(0.0, 0.0); n]; n]; n];
        for &(i, j, k, v) in &self.constants {
            c[i][j][k] += v;
        }
        c
    }

    /// Product of two coefficient vectors.
    pub fn multiply(&self, a: &[C64], b: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for &(i, j, k, v) in &self.constants {
            out[k] += a[i] * b[j] * v;
        }
        out
    }

    /// The unit `Σ_X id_X` in coefficient form.
    pub fn unit(&self, cat: &CategoryData) -> Vec<C64> {
        let mut u = vec![C64::new(0.0, 0.0); self.dim()];
        let n = cat.rank();
        for x in cat.labels() {
            let xw = ObjectWord::simple(cat, x);
            let id = super::tube_identity(cat, &xw);
            let base = self.offsets[x.0 * n + x.0];
            for (k, c) in id.coeffs().into_iter().enumerate() {
                u[base + k] += c;
            }
        }
        u
    }

    /// Max-abs violation of `(e_i e_j) e_k = e_i (e_j e_k)` over all triples.
    pub fn associativity_residual(&self) -> f64 {
        let n = self.dim();
        let c = self.dense();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for m in 0..n {
                        let mut l = C64::new(0.0, 0.0);
                        let mut r = C64::new(0.0, 0.0);
                        for p in 0..n {
                            l += c[i][j][p] * c[p][k][m];
                            r += c[j][k][p] * c[i][p][m];
                        }
                        worst = worst.max((l - r).norm());
                    }
                }
            }
        }
        worst
    }

    /// Max-abs violation of `1 e_i = e_i 1 = e_i`.
    pub fn unit_residual(&self, cat: &CategoryData) -> f64 {
        let u = self.unit(cat);
        let mut worst: f64 = 0.0;
        for i in 0..self.dim() {
            let mut e = vec![C64::new(0.0, 0.0); self.dim()];
            e[i] = C64::new(1.0, 0.0);
            for p in [self.multiply(&u, &e), self.multiply(&e, &u)] {
                for (a, b) in p.iter().zip(&e) {
                    worst = worst.max((a - b).norm());
                }
            }
        }
        worst
    }

    /// JSON export: basis descriptors and nonzero constants as `[re, im]`.
    pub fn to_json(&self) -> String {
        let structure_constants = self
            .constants
            .iter()
            .map(|&(i, j, k, v)| Constant { i, j, k, v: tidy(v) })
            .filter(|c| c.v != [0.0, 0.0])
            .collect();
        let e = Export {
            category: &self.category,
            version: crate::VERSION,
            ordering: "(Y, X, R, tree) lexicographic; e_i o e_j = sum_k c_ijk e_k",
            dimension: self.dim(),
            basis: &self.basis,
            structure_constants,
        };
        serde_json::to_string_pretty(&e).expect("serialisable")
    }
}
