use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tubecat::category::{check_axioms, load_category, s_matrix, AxiomReport};
use tubecat::diagram::{parse_diagram, Bindings};
use tubecat::homspace::hom_dim;
use tubecat::reps::block_decompose_end;
use tubecat::tube::{read_cylinder, tube_algebra, tube_hom_dim};
use tubecat::verify::{self, SuiteOptions};
use tubecat::{tidy, CategoryData, Exec, Morphism, ObjectWord, C64, VERSION};

#[derive(Parser)]
#[command(name = "tubecat", version, about = "Tube categories of modular tensor categories")]
struct Cli {
    /// Builtin category name or path to a category JSON file.
    #[arg(long, global = true)]
    cat: Option<String>,
    /// Numerical tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run batches on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the axioms and run the verification suite.
    Check {
        /// Comma-separated check names; all when omitted.
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        /// Random instances per randomised check.
        #[arg(long)]
        instances: Option<usize>,
    },
    /// dim Hom_TC(X, Y) counted over R and over (I, J).
    Tube {
        /// Comma-separated labels; "" is the unit.
        x: String,
        y: String,
    },
    /// Block decomposition of End_TC(X).
    Idempotents { x: String },
    /// Structure constants of the tube algebra.
    TubeAlgebra,
    /// Evaluate a diagram file.
    Eval {
        file: PathBuf,
        /// JSON object {name: {src, tgt, coeffs: [[re, im], ...]}}.
        #[arg(long)]
        bindings: Option<PathBuf>,
    },
    /// The unnormalised S-matrix.
    SMatrix,
}

/// A rendered report and whether everything it checked passed.
struct Report {
    body: String,
    ok: bool,
    summary: Option<String>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<bool> {
    let source = cli.cat.as_deref().ok_or_else(|| anyhow!("--cat is required"))?;
    let mut cat = load_category(source).with_context(|| format!("loading category `{source}`"))?;
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            bail!("--tol must be positive");
        }
        cat.set_tolerance(t);
    }
    let exec = if cli.sequential { Exec::Sequential } else { Exec::default() };
    let report = match &cli.cmd {
        Cmd::Check { checks, instances } => cmd_check(cli, &cat, checks, *instances, exec)?,
        Cmd::Tube { x, y } => cmd_tube(cli, &cat, x, y)?,
        Cmd::Idempotents { x } => cmd_idempotents(cli, &cat, x, exec)?,
        Cmd::TubeAlgebra => cmd_tube_algebra(cli, &cat, exec)?,
        Cmd::Eval { file, bindings } => cmd_eval(cli, &cat, file, bindings.as_deref())?,
        Cmd::SMatrix => cmd_s_matrix(cli, &cat)?,
    };
    match &cli.out {
        Some(path) => {
            fs::write(path, &report.body).with_context(|| format!("writing {}", path.display()))?;
            if let Some(s) = &report.summary {
                println!("{s}");
            }
        }
        None => print!("{}", report.body),
    }
    Ok(report.ok)
}

fn header(cli: &Cli, cat: &CategoryData) -> Value {
    json!({
        "category": cat.name(),
        "version": VERSION,
        "seed": cli.seed,
        "tolerance": cat.tolerance(),
    })
}

fn with_header(cli: &Cli, cat: &CategoryData, body: Value) -> Value {
    let mut v = header(cli, cat);
    if let (Value::Object(h), Value::Object(b)) = (&mut v, body) {
        h.extend(b);
    }
    v
}

fn text_header(cli: &Cli, cat: &CategoryData) -> String {
    format!(
        "category {}  version {}  seed {}  tolerance {:e}\n",
        cat.name(),
        VERSION,
        cli.seed,
        cat.tolerance()
    )
}

fn csv_header(cli: &Cli, cat: &CategoryData) -> String {
    format!("# category={} version={} seed={} tolerance={:e}\n", cat.name(), VERSION, cli.seed, cat.tolerance())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serialisable");
    s.push('\n');
    s
}

fn word(cat: &CategoryData, s: &str) -> Result<ObjectWord> {
    ObjectWord::parse(cat, s).with_context(|| format!("parsing object word `{s}`"))
}

fn cmd_check(cli: &Cli, cat: &CategoryData, checks: &[String], instances: Option<usize>, exec: Exec) -> Result<Report> {
    let axioms = check_axioms(cat);
    let sel: Vec<&str> = checks.iter().map(String::as_str).collect();
    let reports = verify::run_suite_with(cat, &sel, SuiteOptions { seed: cli.seed, instances, exec })?;
    let ok = axioms.pass && verify::all_pass(&reports);
    let failed: Vec<&str> = axioms
        .entries
        .iter()
        .filter(|e| !e.pass)
        .map(|e| e.name.as_str())
        .chain(reports.iter().filter(|r| !r.pass).map(|r| r.name.as_str()))
        .collect();
    let body = match cli.format {
        Format::Json => pretty(&with_header(cli, cat, json!({ "pass": ok, "axioms": axioms.entries, "checks": reports }))),
        Format::Csv => format!("{}{}", csv_header(cli, cat), verify::to_csv(&reports)),
        Format::Text => format!("{}{}\n{}", text_header(cli, cat), axiom_text(&axioms), verify::to_text(&reports)),
    };
    let summary = Some(if ok {
        format!("{}: all {} checks pass", cat.name(), axioms.entries.len() + reports.len())
    } else {
        format!("{}: failed {}", cat.name(), failed.join(", "))
    });
    if !ok && cli.out.is_none() {
        eprintln!("{}", summary.as_deref().unwrap_or_default());
    }
    Ok(Report { body, ok, summary })
}

fn axiom_text(rep: &AxiomReport) -> String {
    let mut out = String::from("axiom            residual  ok\n");
    for e in &rep.entries {
        out.push_str(&format!(
            "{:<15}  {:>9.3e}  {}{}\n",
            e.name,
            e.max_residual,
            if e.pass { "pass" } else { "FAIL" },
            e.detail.as_deref().map(|d| format!("  ({d})")).unwrap_or_default()
        ));
    }
    out
}

fn cmd_tube(cli: &Cli, cat: &CategoryData, xs: &str, ys: &str) -> Result<Report> {
    let (x, y) = (word(cat, xs)?, word(cat, ys)?);
    let by_r: Vec<(String, usize)> = cat
        .labels()
        .map(|r| {
            let rw = ObjectWord::simple(cat, r);
            (cat.label_name(r).to_string(), hom_dim(cat, &rw.concat(&x), &y.concat(&rw)))
        })
        .collect();
    let mut by_ij = Vec::new();
    for i in cat.labels() {
        for j in cat.labels() {
            let ij = ObjectWord::new(cat, [i, j]);
            let (a, b) = (hom_dim(cat, &ij, &y), hom_dim(cat, &x, &ij));
            by_ij.push((cat.label_name(i).to_string(), cat.label_name(j).to_string(), a * b));
        }
    }
    let sum_r: usize = by_r.iter().map(|t| t.1).sum();
    let sum_ij: usize = by_ij.iter().map(|t| t.2).sum();
    let dim = tube_hom_dim(cat, &x, &y);
    let ok = dim == sum_r && sum_r == sum_ij;
    let body = match cli.format {
        Format::Json => pretty(&with_header(
            cli,
            cat,
            json!({
                "x": x.display(cat),
                "y": y.display(cat),
                "tube_hom_dim": dim,
                "by_r": by_r.iter().map(|(r, d)| json!({ "r": r, "dim": d })).collect::<Vec<_>>(),
                "by_ij": by_ij.iter().map(|(i, j, d)| json!({ "i": i, "j": j, "dim": d })).collect::<Vec<_>>(),
                "sum_r": sum_r,
                "sum_ij": sum_ij,
                "equal": ok,
            }),
        )),
        Format::Csv => {
            let mut s = csv_header(cli, cat);
            s.push_str("sum,r,i,j,dim\n");
            for (r, d) in &by_r {
                s.push_str(&format!("r,{r},,,{d}\n"));
            }
            for (i, j, d) in &by_ij {
                s.push_str(&format!("ij,,{i},{j},{d}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = text_header(cli, cat);
            s.push_str(&format!("Hom_TC({}, {})\n", x.display(cat), y.display(cat)));
            for (r, d) in &by_r {
                s.push_str(&format!("  R = {r:<8} {d}\n"));
            }
            for (i, j, d) in by_ij.iter().filter(|t| t.2 > 0) {
                s.push_str(&format!("  (I, J) = ({i}, {j})  {d}\n"));
            }
            s.push_str(&format!("sum over R: {sum_r}\nsum over (I, J): {sum_ij}\n"));
            s
        }
    };
    Ok(Report { body, ok, summary: Some(format!("dim = {sum_r} = {sum_ij}")) })
}

fn cmd_idempotents(cli: &Cli, cat: &CategoryData, xs: &str, exec: Exec) -> Result<Report> {
    let x = word(cat, xs)?;
    let d = block_decompose_end(cat, &x, exec)?;
    let ok = d.max_residual() <= cat.tolerance();
    let body = match cli.format {
        Format::Json => pretty(&with_header(cli, cat, d.to_json_value(cat))),
        Format::Csv => {
            let mut s = csv_header(cli, cat);
            s.push_str("i,j,size,r,index,re,im\n");
            for b in &d.blocks {
                for (r, m) in b.idempotent(cat, &x).components() {
                    for (k, z) in m.coeffs().into_iter().enumerate() {
                        let [re, im] = tidy(z);
                        s.push_str(&format!(
                            "{},{},{},{},{k},{re:e},{im:e}\n",
                            cat.label_name(b.i),
                            cat.label_name(b.j),
                            b.size(),
                            cat.label_name(r)
                        ));
                    }
                }
            }
            s
        }
        Format::Text => {
            let mut s = text_header(cli, cat);
            s.push_str(&format!("End_TC({}): dimension {}\n", x.display(cat), d.tube_dim));
            for b in &d.blocks {
                s.push_str(&format!("  block ({}, {}) size {}\n", cat.label_name(b.i), cat.label_name(b.j), b.size()));
            }
            s.push_str(&format!(
                "completeness {:.3e}  matrix units {:.3e}  orthogonality {:.3e}\n",
                d.completeness_residual, d.matrix_unit_residual, d.orthogonality_residual
            ));
            s
        }
    };
    Ok(Report { body, ok, summary: Some(format!("{} blocks", d.blocks.len())) })
}

fn cmd_tube_algebra(cli: &Cli, cat: &CategoryData, exec: Exec) -> Result<Report> {
    let ta = tube_algebra(cat, exec)?;
    let mut v: Value = serde_json::from_str(&ta.to_json())?;
    v["seed"] = json!(cli.seed);
    v["tolerance"] = json!(cat.tolerance());
    let body = match cli.format {
        Format::Json => pretty(&v),
        Format::Csv => {
            let mut s = csv_header(cli, cat);
            s.push_str("i,j,k,re,im\n");
            for c in v["structure_constants"].as_array().into_iter().flatten() {
                s.push_str(&format!("{},{},{},{},{}\n", c["i"], c["j"], c["k"], c["v"][0], c["v"][1]));
            }
            s
        }
        Format::Text => {
            let mut s = text_header(cli, cat);
            s.push_str(&format!("tube algebra dimension {}\nbasis (Y, X, R, tree):\n", ta.dim()));
            for (n, b) in ta.basis.iter().enumerate() {
                s.push_str(&format!("  e{n} = ({}, {}, {}, {})\n", b.y, b.x, b.r, b.index));
            }
            s
        }
    };
    let dim = format!("dimension {}", ta.dim());
    if cli.out.is_none() && cli.format != Format::Text {
        eprintln!("{dim}");
    }
    Ok(Report { body, ok: true, summary: Some(dim) })
}

fn load_bindings(cat: &CategoryData, path: &std::path::Path) -> Result<Bindings> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: Value = serde_json::from_str(&text).context("parsing bindings")?;
    let obj = v.as_object().ok_or_else(|| anyhow!("bindings must be a JSON object"))?;
    let mut b = Bindings::new();
    for (name, m) in obj {
        let src = word(cat, m["src"].as_str().ok_or_else(|| anyhow!("binding `{name}` has no src"))?)?;
        let tgt = word(cat, m["tgt"].as_str().ok_or_else(|| anyhow!("binding `{name}` has no tgt"))?)?;
        let coeffs = m["coeffs"]
            .as_array()
            .ok_or_else(|| anyhow!("binding `{name}` has no coeffs"))?
            .iter()
            .map(|z| match (z[0].as_f64(), z[1].as_f64()) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(anyhow!("binding `{name}`: coefficients are [re, im] pairs")),
            })
            .collect::<Result<Vec<_>>>()?;
        let m = Morphism::from_coeffs(cat, &src, &tgt, &coeffs).with_context(|| format!("binding `{name}`"))?;
        b.insert(name.clone(), m);
    }
    Ok(b)
}

fn cmd_eval(cli: &Cli, cat: &CategoryData, file: &std::path::Path, bindings: Option<&std::path::Path>) -> Result<Report> {
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let b = match bindings {
        Some(p) => load_bindings(cat, p)?,
        None => Bindings::new(),
    };
    let d = parse_diagram(cat, &text, &b)?;
    let m = read_cylinder(cat, &d, &b)?;
    let coeffs: Vec<[f64; 2]> = m.coeffs().into_iter().map(tidy).collect();
    let scalar = m.as_scalar().map(tidy);
    let body = match cli.format {
        Format::Json => pretty(&with_header(
            cli,
            cat,
            json!({
                "source": m.source().display(cat),
                "target": m.target().display(cat),
                "glue": d.glue.map(|g| cat.label_name(g).to_string()),
                "coeffs": coeffs,
                "scalar": scalar,
            }),
        )),
        Format::Csv => {
            let mut s = csv_header(cli, cat);
            s.push_str("index,re,im\n");
            for (k, [re, im]) in coeffs.iter().enumerate() {
                s.push_str(&format!("{k},{re:e},{im:e}\n"));
            }
            s
        }
        Format::Text => {
            let mut s = text_header(cli, cat);
            s.push_str(&format!("{} -> {}\n", m.source().display(cat), m.target().display(cat)));
            for (k, [re, im]) in coeffs.iter().enumerate() {
                s.push_str(&format!("  {k}: {re:+.12e} {im:+.12e}i\n"));
            }
            s
        }
    };
    Ok(Report { body, ok: true, summary: None })
}

fn cmd_s_matrix(cli: &Cli, cat: &CategoryData) -> Result<Report> {
    let s = s_matrix(cat);
    let n = cat.rank();
    let labels: Vec<&str> = cat.labels().map(|l| cat.label_name(l)).collect();
    let rows: Vec<Vec<[f64; 2]>> = (0..n).map(|a| (0..n).map(|b| tidy(s[(a, b)])).collect()).collect();
    let body = match cli.format {
        Format::Json => pretty(&with_header(
            cli,
            cat,
            json!({
                "labels": labels,
                "qdims": cat.qdims().iter().map(|&d| tidy(d)).collect::<Vec<_>>(),
                "global_dim": tidy(cat.global_dim()),
                "s_tilde": rows,
            }),
        )),
        Format::Csv => {
            let mut out = csv_header(cli, cat);
            out.push_str("a,b,re,im\n");
            for (a, row) in rows.iter().enumerate() {
                for (b, [re, im]) in row.iter().enumerate() {
                    out.push_str(&format!("{},{},{re:e},{im:e}\n", labels[a], labels[b]));
                }
            }
            out
        }
        Format::Text => {
            let mut out = text_header(cli, cat);
            for (a, row) in rows.iter().enumerate() {
                let cells: Vec<String> = row.iter().map(|[re, im]| format!("{re:+.6}{im:+.6}i")).collect();
                out.push_str(&format!("{:<8} {}\n", labels[a], cells.join("  ")));
            }
            out
        }
    };
    Ok(Report { body, ok: true, summary: None })
}
