//! JSON category documents and their validation.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::{Bends, CategoryData, CategoryError, FBlock, WhiskerCache, DEFAULT_TOLERANCE};
use crate::linalg::{one, try_inverse, zero};
use crate::{CMat, C64};

pub const F_CONVENTION: &str = "splitting-tree-left-to-right";
pub const R_CONVENTION: &str = "left-over-right";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Conventions {
    #[serde(rename = "F")]
    pub f: String,
    #[serde(rename = "R")]
    pub r: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Self { f: F_CONVENTION.into(), r: R_CONVENTION.into() }
    }
}

/// `mu = [α, β, μ, ν]`; may be omitted when every multiplicity is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub e: String,
    pub f: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mu: Vec<usize>,
    pub v: [f64; 2],
}

/// `mu = [μ, ν]`; may be omitted when the multiplicity is 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct REntry {
    pub a: String,
    pub b: String,
    pub c: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub mu: Vec<usize>,
    pub v: [f64; 2],
}

/// On-disk form of a category. F entries with a unit among `a, b, c` and R
/// entries with a unit among `a, b` may be omitted; they default to the
/// identity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategorySpec {
    pub name: String,
    pub labels: Vec<String>,
    pub unit: String,
    pub dual: BTreeMap<String, String>,
    pub fusion: Vec<(String, String, String, usize)>,
    #[serde(rename = "F")]
    pub f: Vec<FEntry>,
    #[serde(rename = "R")]
    pub r: Vec<REntry>,
    #[serde(default)]
    pub pivotal: BTreeMap<String, [f64; 2]>,
    pub conventions: Conventions,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

fn schema(msg: impl Into<String>) -> CategoryError {
    CategoryError::Schema(msg.into())
}

fn c64(v: [f64; 2]) -> Result<C64, CategoryError> {
    if v.iter().all(|x| x.is_finite()) {
        Ok(C64::new(v[0], v[1]))
    } else {
        Err(schema("non-finite scalar"))
    }
}

pub(super) fn build(spec: CategorySpec) -> Result<CategoryData, CategoryError> {
    if spec.conventions.f != F_CONVENTION {
        return Err(CategoryError::Conventions(format!(
            "F is `{}`, expected `{F_CONVENTION}`",
            spec.conventions.f
        )));
    }
    if spec.conventions.r != R_CONVENTION {
        return Err(CategoryError::Conventions(format!(
            "R is `{}`, expected `{R_CONVENTION}`",
            spec.conventions.r
        )));
    }
    let n = spec.labels.len();
    if n == 0 {
        return Err(schema("no labels"));
    }
    let mut index = HashMap::new();
    for (i, l) in spec.labels.iter().enumerate() {
        if l.is_empty() || l.contains(|c: char| c.is_whitespace() || c == ',' || c == '|') {
            return Err(schema(format!("invalid label name `{l}`")));
        }
        if index.insert(l.as_str(), i).is_some() {
            return Err(schema(format!("duplicate label `{l}`")));
        }
    }
    let idx = |name: &str| -> Result<usize, CategoryError> {
        index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownLabel(name.to_string()))
    };
    let unit = idx(&spec.unit)?;
    let tolerance = spec.tolerance.unwrap_or(DEFAULT_TOLERANCE);
    if !(tolerance > 0.0) {
        return Err(schema("tolerance must be positive"));
    }

    let mut dual = vec![usize::MAX; n];
    for (a, b) in &spec.dual {
        dual[idx(a)?] = idx(b)?;
    }
    if let Some(i) = dual.iter().position(|&d| d == usize::MAX) {
        return Err(schema(format!("no dual given for `{}`", spec.labels[i])));
    }
    for a in 0..n {
        if dual[dual[a]] != a {
            return Err(CategoryError::NonInvolutiveDual(format!(
                "dual(dual({})) = {}",
                spec.labels[a], spec.labels[dual[dual[a]]]
            )));
        }
    }

    let mut fusion = vec![0usize; n * n * n];
    let mut seen = vec![false; n * n * n];
    for (a, b, c, m) in &spec.fusion {
        let k = (idx(a)? * n + idx(b)?) * n + idx(c)?;
        if seen[k] {
            return Err(schema(format!("duplicate fusion entry ({a},{b},{c})")));
        }
        seen[k] = true;
        fusion[k] = *m;
    }
    let nn = |a: usize, b: usize, c: usize| fusion[(a * n + b) * n + c];
    for a in 0..n {
        for b in 0..n {
            let d = usize::from(a == b);
            if nn(unit, a, b) != d || nn(a, unit, b) != d {
                return Err(schema(format!(
                    "unit does not fuse trivially with `{}`",
                    spec.labels[a]
                )));
            }
            if nn(a, b, unit) != usize::from(b == dual[a]) {
                return Err(schema(format!(
                    "N[{}][{}][unit] disagrees with the dual table",
                    spec.labels[a], spec.labels[b]
                )));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let left: usize = (0..n).map(|e| nn(a, b, e) * nn(e, c, d)).sum();
                    let right: usize = (0..n).map(|f| nn(b, c, f) * nn(a, f, d)).sum();
                    if left != right {
                        return Err(CategoryError::Degenerate(format!(
                            "fusion is not associative at ({},{},{};{})",
                            spec.labels[a], spec.labels[b], spec.labels[c], spec.labels[d]
                        )));
                    }
                }
            }
        }
    }

    // F entries keyed by (a,b,c,d,[e,α,β],[f,μ,ν]).
    let mut fvals: HashMap<([usize; 4], [usize; 3], [usize; 3]), C64> = HashMap::new();
    for ent in &spec.f {
        let (a, b, c, d) = (idx(&ent.a)?, idx(&ent.b)?, idx(&ent.c)?, idx(&ent.d)?);
        let (e, f) = (idx(&ent.e)?, idx(&ent.f)?);
        let m = match ent.mu.len() {
            0 => [0; 4],
            4 => [ent.mu[0], ent.mu[1], ent.mu[2], ent.mu[3]],
            k => return Err(schema(format!("F entry mu has {k} indices, expected 4"))),
        };
        let tuple = || format!("F^{{{},{},{}}}_{}[{},{}]", ent.a, ent.b, ent.c, ent.d, ent.e, ent.f);
        if m[0] >= nn(a, b, e) || m[1] >= nn(e, c, d) || m[2] >= nn(b, c, f) || m[3] >= nn(a, f, d) {
            return Err(schema(format!("F entry {} is not admissible", tuple())));
        }
        let key = ([a, b, c, d], [e, m[0], m[1]], [f, m[2], m[3]]);
        if fvals.insert(key, c64(ent.v)?).is_some() {
            return Err(schema(format!("duplicate F entry {}", tuple())));
        }
    }
    let mut fblocks = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let mut rows = Vec::new();
                    let mut cols = Vec::new();
                    for e in 0..n {
                        for al in 0..nn(a, b, e) {
                            for be in 0..nn(e, c, d) {
                                rows.push([e, al, be]);
                            }
                        }
                    }
                    for f in 0..n {
                        for mu in 0..nn(b, c, f) {
                            for nu in 0..nn(a, f, d) {
                                cols.push([f, mu, nu]);
                            }
                        }
                    }
                    if rows.is_empty() {
                        continue;
                    }
                    let unit_leg = a == unit || b == unit || c == unit;
                    let mut mat = CMat::from_element(rows.len(), cols.len(), zero());
                    for (i, r) in rows.iter().enumerate() {
                        for (j, col) in cols.iter().enumerate() {
                            let v = match fvals.get(&([a, b, c, d], *r, *col)) {
                                Some(v) => *v,
                                None if unit_leg => {
                                    if i == j {
                                        one()
                                    } else {
                                        zero()
                                    }
                                }
                                None => {
                                    return Err(CategoryError::MissingEntry {
                                        kind: "F",
                                        tuple: format!(
                                            "({},{},{};{}) e={} f={} mu={:?}",
                                            spec.labels[a],
                                            spec.labels[b],
                                            spec.labels[c],
                                            spec.labels[d],
                                            spec.labels[r[0]],
                                            spec.labels[col[0]],
                                            [r[1], r[2], col[1], col[2]]
                                        ),
                                    })
                                }
                            };
                            mat[(i, j)] = v;
                        }
                    }
                    let inv = try_inverse(&mat).ok_or_else(|| {
                        CategoryError::Degenerate(format!(
                            "F^{{{},{},{}}}_{} is singular",
                            spec.labels[a], spec.labels[b], spec.labels[c], spec.labels[d]
                        ))
                    })?;
                    fblocks.insert([a, b, c, d], FBlock { rows, cols, mat, inv });
                }
            }
        }
    }

    let mut rvals: HashMap<[usize; 5], C64> = HashMap::new();
    for ent in &spec.r {
        let (a, b, c) = (idx(&ent.a)?, idx(&ent.b)?, idx(&ent.c)?);
        let m = match ent.mu.len() {
            0 => [0; 2],
            2 => [ent.mu[0], ent.mu[1]],
            k => return Err(schema(format!("R entry mu has {k} indices, expected 2"))),
        };
        if m[0] >= nn(a, b, c) || m[1] >= nn(b, a, c) {
            return Err(schema(format!(
                "R entry R^{{{},{}}}_{} is not admissible",
                ent.a, ent.b, ent.c
            )));
        }
        if rvals.insert([a, b, c, m[0], m[1]], c64(ent.v)?).is_some() {
            return Err(schema(format!("duplicate R entry R^{{{},{}}}_{}", ent.a, ent.b, ent.c)));
        }
    }
    let mut rmats = HashMap::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let (p, q) = (nn(a, b, c), nn(b, a, c));
                if p != q {
                    return Err(CategoryError::Degenerate(format!(
                        "fusion is not commutative at ({},{};{})",
                        spec.labels[a], spec.labels[b], spec.labels[c]
                    )));
                }
                if p == 0 {
                    continue;
                }
                let mut m = CMat::from_element(p, q, zero());
                for mu in 0..p {
                    for nu in 0..q {
                        m[(mu, nu)] = match rvals.get(&[a, b, c, mu, nu]) {
                            Some(v) => *v,
                            None if a == unit || b == unit => {
                                if mu == nu {
                                    one()
                                } else {
                                    zero()
                                }
                            }
                            None => {
                                return Err(CategoryError::MissingEntry {
                                    kind: "R",
                                    tuple: format!(
                                        "({},{};{}) mu={:?}",
                                        spec.labels[a], spec.labels[b], spec.labels[c], [mu, nu]
                                    ),
                                })
                            }
                        };
                    }
                }
                rmats.insert([a, b, c], m);
            }
        }
    }

    let mut pivotal = vec![one(); n];
    for (l, v) in &spec.pivotal {
        pivotal[idx(l)?] = c64(*v)?;
    }

    let mut qdim = Vec::with_capacity(n);
    let mut bends = Vec::with_capacity(n);
    for s in 0..n {
        let blk = &fblocks[&[s, dual[s], s, s]];
        let key = [unit, 0, 0];
        let (i, j) = (blk.row_index(key).unwrap(), blk.col_index(key).unwrap());
        let f1 = blk.mat[(i, j)];
        let g1 = blk.inv[(j, i)];
        if f1.norm() <= tolerance || g1.norm() <= tolerance {
            return Err(CategoryError::Degenerate(format!(
                "F^{{S S* S}}_S has a vanishing unit-channel entry for `{}`",
                spec.labels[s]
            )));
        }
        let d = pivotal[s] / f1;
        if d.norm() <= tolerance {
            return Err(CategoryError::Degenerate(format!(
                "quantum dimension of `{}` vanishes",
                spec.labels[s]
            )));
        }
        let root = d.sqrt();
        bends.push(Bends { cup: root, cap: root, lcup: one() / (g1 * root), lcap: one() / (f1 * root) });
        qdim.push(d);
    }
    let global_dim: C64 = qdim.iter().map(|d| d * d).sum();

    Ok(CategoryData {
        name: spec.name.clone(),
        labels: spec.labels.clone(),
        unit,
        dual,
        fusion,
        f: fblocks,
        r: rmats,
        pivotal,
        qdim,
        global_dim,
        tolerance,
        bends,
        spec,
        cache: WhiskerCache::default(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::builtin;

    fn fib_json() -> serde_json::Value {
        serde_json::to_value(builtin("fibonacci").unwrap()).unwrap()
    }

    fn load(v: serde_json::Value) -> Result<CategoryData, CategoryError> {
        CategoryData::from_json(&v.to_string())
    }

    #[test]
    fn round_trips_through_json() {
        let cat = load(fib_json()).unwrap();
        assert_eq!(cat.rank(), 2);
        assert_eq!(cat.spec(), &builtin("fibonacci").unwrap());
    }

    #[test]
    fn rejects_wrong_conventions() {
        let mut v = fib_json();
        v["conventions"]["R"] = "right-over-left".into();
        assert!(matches!(load(v), Err(CategoryError::Conventions(_))));
        let mut v = fib_json();
        v.as_object_mut().unwrap().remove("conventions");
        assert!(matches!(load(v), Err(CategoryError::Json(_))));
    }

    #[test]
    fn rejects_missing_f_entry() {
        let mut v = fib_json();
        let f = v["F"].as_array_mut().unwrap();
        let pos = f
            .iter()
            .position(|e| e["a"] == "tau" && e["b"] == "tau" && e["c"] == "tau" && e["d"] == "tau")
            .unwrap();
        f.remove(pos);
        assert!(matches!(load(v), Err(CategoryError::MissingEntry { kind: "F", .. })));
    }

    #[test]
    fn rejects_missing_r_entry() {
        let mut v = fib_json();
        v["R"].as_array_mut().unwrap().pop();
        assert!(matches!(load(v), Err(CategoryError::MissingEntry { kind: "R", .. })));
    }

    #[test]
    fn rejects_non_involutive_dual() {
        let mut v = serde_json::to_value(builtin("z3").unwrap()).unwrap();
        v["dual"]["1"] = "1".into();
        let err = load(v).unwrap_err();
        assert!(matches!(err, CategoryError::NonInvolutiveDual(_)), "{err}");
    }

    #[test]
    fn rejects_schema_violations() {
        let mut v = fib_json();
        v["fusion"].as_array_mut().unwrap().push(serde_json::json!(["tau", "tau", "tau", 1]));
        assert!(matches!(load(v), Err(CategoryError::Schema(_))));

        let mut v = fib_json();
        v["unit"] = "one".into();
        assert!(matches!(load(v), Err(CategoryError::UnknownLabel(_))));

        let mut v = fib_json();
        v["extra"] = 1.into();
        assert!(matches!(load(v), Err(CategoryError::Json(_))));

        let mut v = fib_json();
        v["F"][0]["mu"] = serde_json::json!([0, 0]);
        assert!(matches!(load(v), Err(CategoryError::Schema(_))));
    }

    #[test]
    fn unit_leg_entries_default_to_identity() {
        let cat = load(fib_json()).unwrap();
        let (u, t) = (0, 1);
        let blk = cat.f_block(u, t, t, t).unwrap();
        assert_eq!(blk.mat, CMat::identity(1, 1));
        assert_eq!(cat.r_entry(u, t, t, 0, 0), one());
    }
}
