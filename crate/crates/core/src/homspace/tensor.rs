use std::sync::Arc;

use super::{HomError, Morphism, ObjectWord, Tree, WordSpace};
use crate::category::CategoryData;
use crate::linalg::{try_inverse, zero};
use crate::CMat;

/// Change from left-associated trees on `a ⊗ C` to split trees
/// `c → a ⊗ y` (vertex `λ`) followed by a tree `t` on `C` with channel `y`.
/// `mat[c]` maps left coordinates to split coordinates.
#[derive(Debug)]
pub(crate) struct SplitChange {
    pub(crate) split: Vec<Vec<(usize, usize, usize)>>,
    pub(crate) mat: Vec<CMat>,
    pub(crate) inv: Vec<CMat>,
}

pub(crate) fn split_change(cat: &CategoryData, a: usize, word: &[usize]) -> Arc<SplitChange> {
    let key = (a, word.to_vec());
    if let Some(hit) = cat.cache.map.read().unwrap().get(&key) {
        return hit.clone();
    }
    let rank = cat.rank();
    let unit = cat.unit().0;
    let result = if word.is_empty() {
        let mut split = vec![Vec::new(); rank];
        let mut mat = vec![CMat::zeros(0, 0); rank];
        split[a] = vec![(unit, 0, 0)];
        mat[a] = CMat::identity(1, 1);
        SplitChange { split, inv: mat.clone(), mat }
    } else {
        let m = word.len();
        let prev = split_change(cat, a, &word[..m - 1]);
        let cm = word[m - 1];
        let cspace = WordSpace::new(cat, word);
        let cprev = WordSpace::new(cat, &word[..m - 1]);
        let full: Vec<usize> = std::iter::once(a).chain(word.iter().copied()).collect();
        let fspace = WordSpace::new(cat, &full);
        let fprev = WordSpace::new(cat, &full[..m]);
        let mut split = Vec::with_capacity(rank);
        let mut mats = Vec::with_capacity(rank);
        let mut invs = Vec::with_capacity(rank);
        for c in 0..rank {
            let mut s = Vec::new();
            for y in 0..rank {
                for t in 0..cspace.count(y) {
                    for l in 0..cat.nu(a, y, c) {
                        s.push((y, t, l));
                    }
                }
            }
            let cols = fspace.trees(c);
            assert_eq!(s.len(), cols.len(), "split and left bases differ in size");
            let mut mat = CMat::from_element(s.len(), cols.len(), zero());
            for (j, tree) in cols.iter().enumerate() {
                let x = tree.path[m - 1];
                let nu = tree.mult[m];
                let tp = tree.prefix(m);
                let jp = fprev.index_of(&tp).unwrap();
                for (i, &(y, t, l)) in s.iter().enumerate() {
                    let ct = &cspace.trees(y)[t];
                    let ctp = ct.prefix(m - 1);
                    let yp = ctp.channel(unit);
                    let kappa = ct.mult[m - 1];
                    let tpi = cprev.index_of(&ctp).unwrap();
                    let mut acc = zero();
                    for mu in 0..cat.nu(a, yp, x) {
                        let row = match prev.split[x].binary_search(&(yp, tpi, mu)) {
                            Ok(r) => r,
                            Err(_) => continue,
                        };
                        let f = cat.f_entry([a, yp, cm, c], [x, mu, nu], [y, kappa, l]);
                        acc += prev.mat[x][(row, jp)] * f;
                    }
                    mat[(i, j)] = acc;
                }
            }
            invs.push(try_inverse(&mat).expect("associator blocks are invertible"));
            mats.push(mat);
            split.push(s);
        }
        SplitChange { split, mat: mats, inv: invs }
    };
    let result = Arc::new(result);
    cat.cache.map.write().unwrap().insert(key, result.clone());
    result
}

fn concat(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().collect()
}

/// `f ⊗ id_D`.
pub fn right_extend(cat: &CategoryData, f: &Morphism, d: &ObjectWord) -> Morphism {
    if d.is_empty() {
        return f.clone();
    }
    let dw = d.ids();
    let src = WordSpace::new(cat, &concat(f.src.word(), &dw));
    let tgt = WordSpace::new(cat, &concat(f.tgt.word(), &dw));
    let (la, lb) = (f.src.word().len(), f.tgt.word().len());
    let unit = cat.unit().0;
    let blocks = (0..cat.rank())
        .map(|c| {
            let mut m = CMat::from_element(tgt.count(c), src.count(c), zero());
            let cols: Vec<(usize, usize, &[usize], &[usize])> = src
                .trees(c)
                .iter()
                .map(|u| {
                    let p = u.prefix(la);
                    (p.channel(unit), f.src.index_of(&p).unwrap(), &u.path[la..], &u.mult[la..])
                })
                .collect();
            for (i, t) in tgt.trees(c).iter().enumerate() {
                let p = t.prefix(lb);
                let y = p.channel(unit);
                let pi = f.tgt.index_of(&p).unwrap();
                for (j, &(yu, uj, path, mult)) in cols.iter().enumerate() {
                    if yu == y && path == &t.path[lb..] && mult == &t.mult[lb..] {
                        m[(i, j)] = f.blocks[y][(pi, uj)];
                    }
                }
            }
            m
        })
        .collect();
    Morphism::from_blocks(src, tgt, blocks)
}

fn whisker_letter(cat: &CategoryData, a: usize, h: &Morphism) -> Morphism {
    let ac = split_change(cat, a, h.src.word());
    let ad = split_change(cat, a, h.tgt.word());
    let src = WordSpace::new(cat, &concat(&[a], h.src.word()));
    let tgt = WordSpace::new(cat, &concat(&[a], h.tgt.word()));
    let blocks = (0..cat.rank())
        .map(|c| {
            let (rows, cols) = (&ad.split[c], &ac.split[c]);
            if rows.is_empty() || cols.is_empty() {
                return CMat::from_element(rows.len(), cols.len(), zero());
            }
            let mut gs = CMat::from_element(rows.len(), cols.len(), zero());
            for (i, &(y2, t2, l2)) in rows.iter().enumerate() {
                for (j, &(y, t, l)) in cols.iter().enumerate() {
                    if y == y2 && l == l2 {
                        gs[(i, j)] = h.blocks[y][(t2, t)];
                    }
                }
            }
            &ad.inv[c] * gs * &ac.mat[c]
        })
        .collect();
    Morphism::from_blocks(src, tgt, blocks)
}

/// `id_P ⊗ h`.
pub fn left_whisker(cat: &CategoryData, p: &ObjectWord, h: &Morphism) -> Morphism {
    p.ids().iter().rev().fold(h.clone(), |acc, &a| whisker_letter(cat, a, &acc))
}

/// `id_P ⊗ h ⊗ id_Q`.
pub fn embed(cat: &CategoryData, p: &ObjectWord, h: &Morphism, q: &ObjectWord) -> Morphism {
    left_whisker(cat, p, &right_extend(cat, h, q))
}

/// `f ⊗ g = (f ⊗ id) ∘ (id ⊗ g)`.
pub fn tensor(cat: &CategoryData, f: &Morphism, g: &Morphism) -> Morphism {
    let left = left_whisker(cat, &f.source(), g);
    let right = right_extend(cat, f, &g.target());
    right.compose(&left).expect("interfaces agree by construction")
}

/// Crossing of two adjacent strands. `Over` passes the left strand over the
/// right one (the braiding `c_{a,b}`), `Under` is `c_{b,a}^{-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Handedness {
    Over,
    Under,
}

pub(crate) fn elementary_braid(cat: &CategoryData, x: usize, y: usize, h: Handedness) -> Morphism {
    let src = WordSpace::new(cat, &[x, y]);
    let tgt = WordSpace::new(cat, &[y, x]);
    let blocks = (0..cat.rank())
        .map(|c| {
            let n = cat.nu(x, y, c);
            if n == 0 {
                return CMat::zeros(0, 0);
            }
            match h {
                Handedness::Over => cat.r_matrix(x, y, c).unwrap().transpose(),
                Handedness::Under => {
                    let m = cat.r_matrix(y, x, c).unwrap().transpose();
                    try_inverse(&m).expect("R-matrices are invertible")
                }
            }
        })
        .collect();
    Morphism::from_blocks(src, tgt, blocks)
}

/// Crossing of letters `pos` and `pos + 1` of `word`.
pub fn r_move(cat: &CategoryData, word: &ObjectWord, pos: usize, h: Handedness) -> Result<Morphism, HomError> {
    let w = word.ids();
    if pos + 1 >= w.len() {
        return Err(HomError::Position { pos, len: w.len() });
    }
    let core = elementary_braid(cat, w[pos], w[pos + 1], h);
    Ok(embed(
        cat,
        &ObjectWord::from_ids(&w[..pos]),
        &core,
        &ObjectWord::from_ids(&w[pos + 2..]),
    ))
}

/// Re-bracketing of letters `pos, pos + 1`: per channel, `mat` expresses each
/// left-associated tree (row) in the basis (column) where those two letters
/// are fused first into `f`. Column keys store `f` at `path[pos]` and the
/// vertices `f → x_pos x_{pos+1}`, `y_{pos+1} → y_{pos-1} f` at
/// `mult[pos]`, `mult[pos + 1]`.
#[derive(Clone, Debug)]
pub struct FMove {
    pub rows: Vec<Vec<Tree>>,
    pub cols: Vec<Vec<Tree>>,
    pub mats: Vec<CMat>,
}

pub fn f_move(cat: &CategoryData, word: &ObjectWord, pos: usize) -> Result<FMove, HomError> {
    let w = word.ids();
    if pos + 1 >= w.len() {
        return Err(HomError::Position { pos, len: w.len() });
    }
    let space = WordSpace::new(cat, &w);
    let unit = cat.unit().0;
    let (b, c) = (w[pos], w[pos + 1]);
    let mut out = FMove { rows: vec![], cols: vec![], mats: vec![] };
    for ch in 0..cat.rank() {
        let rows = space.trees(ch).to_vec();
        let mut cols = Vec::new();
        for t in &rows {
            let a = if pos == 0 { unit } else { t.path[pos - 1] };
            let d = t.path[pos + 1];
            for f in 0..cat.rank() {
                for mu in 0..cat.nu(b, c, f) {
                    for nu in 0..cat.nu(a, f, d) {
                        let mut k = t.clone();
                        k.path[pos] = f;
                        k.mult[pos] = mu;
                        k.mult[pos + 1] = nu;
                        cols.push(k);
                    }
                }
            }
        }
        cols.sort();
        cols.dedup();
        let mut mat = CMat::from_element(rows.len(), cols.len(), zero());
        for (i, t) in rows.iter().enumerate() {
            let a = if pos == 0 { unit } else { t.path[pos - 1] };
            let d = t.path[pos + 1];
            for (j, k) in cols.iter().enumerate() {
                let same_rest = (0..w.len()).all(|q| q == pos || q == pos + 1 || (t.path[q] == k.path[q] && t.mult[q] == k.mult[q]))
                    && t.path[pos + 1] == k.path[pos + 1];
                if !same_rest {
                    continue;
                }
                let ka = if pos == 0 { unit } else { k.path[pos - 1] };
                if ka != a {
                    continue;
                }
                mat[(i, j)] = cat.f_entry(
                    [a, b, c, d],
                    [t.path[pos], t.mult[pos], t.mult[pos + 1]],
                    [k.path[pos], k.mult[pos], k.mult[pos + 1]],
                );
            }
        }
        out.rows.push(rows);
        out.cols.push(cols);
        out.mats.push(mat);
    }
    Ok(out)
}
