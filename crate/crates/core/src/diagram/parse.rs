//! Line-oriented diagram DSL.
//!
//! ```text
//! # comment
//! glue tau          # optional cylinder strand
//! in tau tau        # labels separated by spaces or commas; empty = unit
//! id tau | over     # one slice; cells: id l, box name, over, under,
//! cap tau           #   cross over|under, cup l, cap l, lcup l, lcap l
//! out               # final word; optional
//! ```
//!
//! Statements are separated by newlines or `;`.

use super::{apply_slice, Bindings, Cell, DiagramError, DiagramIR, Slice};
use crate::category::{CategoryData, Label};
use crate::homspace::{Handedness, ObjectWord};

struct Stmt<'a> {
    line: usize,
    col: usize,
    text: &'a str,
}

fn statements(text: &str) -> Vec<Stmt<'_>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        let mut start = 0;
        for part in line.split(';') {
            let lead = part.len() - part.trim_start().len();
            let t = part.trim();
            if !t.is_empty() {
                out.push(Stmt { line: i + 1, col: start + lead + 1, text: t });
            }
            start += part.len() + 1;
        }
    }
    out
}

fn lexical(s: &Stmt<'_>, msg: impl Into<String>) -> DiagramError {
    DiagramError::Lexical { line: s.line, col: s.col, msg: msg.into() }
}

fn labels(cat: &CategoryData, s: &Stmt<'_>, args: &str) -> Result<Vec<Label>, DiagramError> {
    args.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            cat.label(t)
                .map_err(|source| DiagramError::Label { line: s.line, col: s.col, source })
        })
        .collect()
}

fn check_token(s: &Stmt<'_>, t: &str) -> Result<(), DiagramError> {
    match t.chars().find(|c| !(c.is_alphanumeric() || "_-'.*^".contains(*c))) {
        Some(c) => Err(lexical(s, format!("unexpected character `{c}`"))),
        None => Ok(()),
    }
}

fn cell(cat: &CategoryData, s: &Stmt<'_>, text: &str, col: usize) -> Result<Cell, DiagramError> {
    let at = Stmt { line: s.line, col, text };
    let mut toks = text.split_whitespace();
    let head = toks.next().ok_or_else(|| lexical(&at, "empty cell"))?;
    let args: Vec<&str> = toks.collect();
    for t in &args {
        check_token(&at, t)?;
    }
    let one_label = |args: &[&str]| -> Result<Label, DiagramError> {
        match args {
            [l] => cat
                .label(l)
                .map_err(|source| DiagramError::Label { line: at.line, col: at.col, source }),
            _ => Err(lexical(&at, format!("`{head}` takes exactly one label"))),
        }
    };
    let no_args = |c: Cell| -> Result<Cell, DiagramError> {
        if args.is_empty() {
            Ok(c)
        } else {
            Err(lexical(&at, format!("`{head}` takes no arguments")))
        }
    };
    match head {
        "id" => Ok(Cell::Id(one_label(&args)?)),
        "box" => match args[..] {
            [name] => Ok(Cell::Box(name.to_string())),
            _ => Err(lexical(&at, "`box` takes exactly one name")),
        },
        "over" => no_args(Cell::Cross(Handedness::Over)),
        "under" => no_args(Cell::Cross(Handedness::Under)),
        "cross" => match args[..] {
            ["over"] => Ok(Cell::Cross(Handedness::Over)),
            ["under"] => Ok(Cell::Cross(Handedness::Under)),
            _ => Err(lexical(&at, "`cross` takes `over` or `under`")),
        },
        "cup" => Ok(Cell::Cup(one_label(&args)?)),
        "cap" => Ok(Cell::Cap(one_label(&args)?)),
        "lcup" => Ok(Cell::LCup(one_label(&args)?)),
        "lcap" => Ok(Cell::LCap(one_label(&args)?)),
        other => Err(lexical(&at, format!("unknown cell `{other}`"))),
    }
}

/// Parses and validates a diagram. Box shapes are taken from `bindings`.
pub fn parse_diagram(cat: &CategoryData, text: &str, bindings: &Bindings) -> Result<DiagramIR, DiagramError> {
    let stmts = statements(text);
    let mut glue: Option<Label> = None;
    let mut input: Option<ObjectWord> = None;
    let mut output: Option<ObjectWord> = None;
    let mut slices = Vec::new();
    let mut word: Vec<Label> = Vec::new();

    for s in &stmts {
        let (head, rest) = match s.text.split_once(char::is_whitespace) {
            Some((h, r)) => (h, r.trim()),
            None => (s.text, ""),
        };
        if output.is_some() {
            return Err(lexical(s, "nothing may follow `out`"));
        }
        match head {
            "glue" => {
                if input.is_some() || glue.is_some() {
                    return Err(lexical(s, "`glue` must come once, before `in`"));
                }
                let ls = labels(cat, s, rest)?;
                if ls.len() != 1 {
                    return Err(DiagramError::GlueComposite { line: s.line, col: s.col });
                }
                glue = Some(ls[0]);
            }
            "in" => {
                if input.is_some() {
                    return Err(lexical(s, "duplicate `in`"));
                }
                let w = ObjectWord::new(cat, labels(cat, s, rest)?);
                word = glue.into_iter().filter(|&g| !cat.is_unit(g)).collect();
                word.extend_from_slice(w.labels());
                input = Some(w);
            }
            "out" => {
                if input.is_none() {
                    return Err(lexical(s, "`out` before `in`"));
                }
                output = Some(ObjectWord::new(cat, labels(cat, s, rest)?));
            }
            _ => {
                if input.is_none() {
                    return Err(lexical(s, "slice before `in`"));
                }
                let mut cells = Vec::new();
                let mut offset = 0;
                for part in s.text.split('|') {
                    let lead = part.len() - part.trim_start().len();
                    cells.push(cell(cat, s, part.trim(), s.col + offset + lead)?);
                    offset += part.len() + 1;
                }
                let slice = Slice { cells, line: s.line };
                word = apply_slice(cat, &slice, &word, bindings)?.0;
                slices.push(slice);
            }
        }
    }
    let input = input.ok_or(DiagramError::Lexical { line: 1, col: 1, msg: "missing `in`".into() })?;
    let glue = glue.filter(|&g| !cat.is_unit(g));
    let output = match output {
        Some(o) => o,
        None => {
            let mut w = word.clone();
            if glue.is_some() && w.last() == glue.as_ref() {
                w.pop();
            }
            ObjectWord::new(cat, w)
        }
    };
    let ir = DiagramIR { boundary_in: input, boundary_out: output, slices, glue };
    ir.validate(cat, bindings)?;
    Ok(ir)
}
