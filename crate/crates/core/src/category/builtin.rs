//! Compiled-in categories, emitted as [`CategorySpec`] documents so they go
//! through the same validation as files.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use super::schema::{CategorySpec, Conventions, FEntry, REntry};

pub const BUILTIN_NAMES: [&str; 5] = ["trivial", "semion", "fibonacci", "ising", "z3"];

/// Names accepted by [`builtin`]; `zN` works for every odd `N`.
pub fn builtin_names() -> Vec<String> {
    BUILTIN_NAMES.iter().map(|s| s.to_string()).collect()
}

pub fn builtin(name: &str) -> Option<CategorySpec> {
    match name {
        "trivial" => Some(trivial()),
        "semion" => Some(semion()),
        "fibonacci" => Some(fibonacci()),
        "ising" => Some(ising()),
        _ => {
            let n: usize = name.strip_prefix('z')?.parse().ok()?;
            (n % 2 == 1).then(|| pointed(n))
        }
    }
}

fn polar(r: f64, theta: f64) -> [f64; 2] {
    [r * theta.cos(), r * theta.sin()]
}

/// Multiplicity-free category builder. F entries with a unit leg are left to
/// the loader's identity default; every other admissible entry is emitted,
/// taking `f(a,b,c,d,e,f)` or 1.
struct Builder {
    name: String,
    labels: Vec<String>,
    dual: Vec<usize>,
    fuse: Vec<Vec<Vec<usize>>>,
}

impl Builder {
    fn new(name: &str, labels: &[&str], dual: &[usize], fuse: impl Fn(usize, usize) -> Vec<usize>) -> Self {
        let n = labels.len();
        let fuse = (0..n).map(|a| (0..n).map(|b| fuse(a, b)).collect()).collect();
        Self {
            name: name.into(),
            labels: labels.iter().map(|s| s.to_string()).collect(),
            dual: dual.to_vec(),
            fuse,
        }
    }

    fn admits(&self, a: usize, b: usize, c: usize) -> bool {
        self.fuse[a][b].contains(&c)
    }

    fn spec(
        &self,
        f: impl Fn([usize; 6]) -> Option<[f64; 2]>,
        r: impl Fn(usize, usize, usize) -> [f64; 2],
        pivotal: &[(usize, [f64; 2])],
    ) -> CategorySpec {
        let n = self.labels.len();
        let l = |i: usize| self.labels[i].clone();
        let mut fusion = Vec::new();
        for a in 0..n {
            for b in 0..n {
                for &c in &self.fuse[a][b] {
                    fusion.push((l(a), l(b), l(c), 1));
                }
            }
        }
        let mut fs = Vec::new();
        for a in 1..n {
            for b in 1..n {
                for c in 1..n {
                    for d in 0..n {
                        for e in 0..n {
                            if !self.admits(a, b, e) || !self.admits(e, c, d) {
                                continue;
                            }
                            for g in 0..n {
                                if !self.admits(b, c, g) || !self.admits(a, g, d) {
                                    continue;
                                }
                                let v = f([a, b, c, d, e, g]).unwrap_or([1.0, 0.0]);
                                fs.push(FEntry {
                                    a: l(a),
                                    b: l(b),
                                    c: l(c),
                                    d: l(d),
                                    e: l(e),
                                    f: l(g),
                                    mu: vec![],
                                    v,
                                });
                            }
                        }
                    }
                }
            }
        }
        let mut rs = Vec::new();
        for a in 1..n {
            for b in 1..n {
                for &c in &self.fuse[a][b] {
                    rs.push(REntry { a: l(a), b: l(b), c: l(c), mu: vec![], v: r(a, b, c) });
                }
            }
        }
        CategorySpec {
            name: self.name.clone(),
            labels: self.labels.clone(),
            unit: l(0),
            dual: (0..n).map(|a| (l(a), l(self.dual[a]))).collect(),
            fusion,
            f: fs,
            r: rs,
            pivotal: pivotal.iter().map(|(a, v)| (l(*a), *v)).collect::<BTreeMap<_, _>>(),
            conventions: Conventions::default(),
            tolerance: None,
        }
    }
}

fn trivial() -> CategorySpec {
    Builder::new("trivial", &["1"], &[0], |_, _| vec![0]).spec(|_| None, |_, _, _| [1.0, 0.0], &[])
}

fn semion() -> CategorySpec {
    let b = Builder::new("semion", &["1", "s"], &[0, 1], |a, b| vec![(a + b) % 2]);
    b.spec(
        |k| (k == [1, 1, 1, 1, 0, 0]).then_some([-1.0, 0.0]),
        |_, _, _| [0.0, 1.0],
        &[(1, [-1.0, 0.0])],
    )
}

fn fibonacci() -> CategorySpec {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let b = Builder::new("fibonacci", &["1", "tau"], &[0, 1], |a, b| match (a, b) {
        (1, 1) => vec![0, 1],
        _ => vec![a + b],
    });
    b.spec(
        |[a, b, c, d, e, f]| {
            if [a, b, c, d] != [1, 1, 1, 1] {
                return None;
            }
            Some(match (e, f) {
                (0, 0) => [1.0 / phi, 0.0],
                (0, 1) | (1, 0) => [phi.powf(-0.5), 0.0],
                _ => [-1.0 / phi, 0.0],
            })
        },
        |_, _, c| if c == 0 { polar(1.0, -4.0 * PI / 5.0) } else { polar(1.0, 3.0 * PI / 5.0) },
        &[],
    )
}

fn ising() -> CategorySpec {
    // 0 = 1, 1 = sigma, 2 = psi
    let b = Builder::new("ising", &["1", "sigma", "psi"], &[0, 1, 2], |a, b| match (a, b) {
        (0, x) | (x, 0) => vec![x],
        (1, 1) => vec![0, 2],
        (1, 2) | (2, 1) => vec![1],
        _ => vec![0],
    });
    let h = 0.5f64.sqrt();
    b.spec(
        |[a, b, c, d, e, f]| match ([a, b, c, d], e, f) {
            ([1, 1, 1, 1], 2, 2) => Some([-h, 0.0]),
            ([1, 1, 1, 1], _, _) => Some([h, 0.0]),
            ([2, 1, 2, 1], _, _) | ([1, 2, 1, 2], _, _) => Some([-1.0, 0.0]),
            _ => None,
        },
        |a, b, c| match (a, b, c) {
            (1, 1, 0) => polar(1.0, -PI / 8.0),
            (1, 1, 2) => polar(1.0, 3.0 * PI / 8.0),
            (1, 2, _) | (2, 1, _) => [0.0, -1.0],
            _ => [-1.0, 0.0],
        },
        &[],
    )
}

/// `Z_n` for odd `n` with trivial associator and braiding `e^{2πi ab/n}`.
fn pointed(n: usize) -> CategorySpec {
    let labels: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
    let dual: Vec<usize> = (0..n).map(|a| (n - a) % n).collect();
    let b = Builder::new(&format!("z{n}"), &refs, &dual, |a, b| vec![(a + b) % n]);
    b.spec(
        |_| None,
        |a, b, _| polar(1.0, 2.0 * PI * (a * b % n) as f64 / n as f64),
        &[],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pointed_names() {
        assert!(builtin("z5").is_some());
        assert!(builtin("z4").is_none());
        assert!(builtin("zx").is_none());
        assert_eq!(builtin("z7").unwrap().labels.len(), 7);
    }

    #[test]
    fn fibonacci_f_matrix_is_involutive() {
        let spec = builtin("fibonacci").unwrap();
        let mut m = [[0.0; 2]; 2];
        for e in spec.f.iter().filter(|e| e.d == "tau" && e.a == "tau" && e.b == "tau" && e.c == "tau") {
            let i = usize::from(e.e == "tau");
            let j = usize::from(e.f == "tau");
            m[i][j] = e.v[0];
        }
        for i in 0..2 {
            for j in 0..2 {
                let s: f64 = (0..2).map(|k| m[i][k] * m[k][j]).sum();
                assert!((s - f64::from(u8::from(i == j))).abs() < 1e-12);
            }
        }
    }
}
