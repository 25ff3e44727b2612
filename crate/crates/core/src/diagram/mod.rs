//! Slice-wise string diagrams.
//!
//! A diagram is a boundary word and a list of slices read top to bottom.
//! Each slice tiles the current word with cells; unit strands are invisible
//! and occupy no width. A diagram with a `glue` strand `R` is a cylinder:
//! its slices act on `R ⊗ X` and must end on `Y ⊗ R`, where `X`/`Y` are the
//! `in`/`out` words.

mod parse;
pub mod programs;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::category::{CategoryData, CategoryError, Label};
use crate::homspace::{cap, cup, embed, lcap, lcup, HomError, Morphism, ObjectWord};
use crate::homspace::Handedness;

pub use parse::parse_diagram;

/// Named morphisms referenced by `box` cells.
pub type Bindings = BTreeMap<String, Morphism>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cell {
    Id(Label),
    Box(String),
    Cross(Handedness),
    Cup(Label),
    Cap(Label),
    LCup(Label),
    LCap(Label),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    pub cells: Vec<Cell>,
    /// Source line of the slice, for error messages.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramIR {
    pub boundary_in: ObjectWord,
    pub boundary_out: ObjectWord,
    pub slices: Vec<Slice>,
    pub glue: Option<Label>,
}

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("{line}:{col}: lexical error: {msg}")]
    Lexical { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: width mismatch: {msg}")]
    Width { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown box `{name}`")]
    UnknownBox { line: usize, col: usize, name: String },
    #[error("{line}:{col}: glue strand must be a single simple label")]
    GlueComposite { line: usize, col: usize },
    #[error("{line}:{col}: label mismatch: {msg}")]
    LabelMismatch { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: {source}")]
    Label { line: usize, col: usize, source: CategoryError },
    #[error("box `{0}` is not bound")]
    Unbound(String),
    #[error("diagram has a glue strand; use evaluate_cylinder")]
    Glued,
    #[error("diagram has no glue strand; use evaluate")]
    NotGlued,
    #[error(transparent)]
    Hom(#[from] HomError),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Id(l) => write!(f, "id {}", l.0),
            Cell::Box(n) => write!(f, "box {n}"),
            Cell::Cross(Handedness::Over) => write!(f, "over"),
            Cell::Cross(Handedness::Under) => write!(f, "under"),
            Cell::Cup(l) => write!(f, "cup {}", l.0),
            Cell::Cap(l) => write!(f, "cap {}", l.0),
            Cell::LCup(l) => write!(f, "lcup {}", l.0),
            Cell::LCap(l) => write!(f, "lcap {}", l.0),
        }
    }
}

/// Input and output strands of a cell, unit letters removed.
fn cell_shape(
    cat: &CategoryData,
    cell: &Cell,
    word: &[Label],
    bindings: &Bindings,
) -> Result<(Vec<Label>, Vec<Label>), String> {
    let strip = |v: Vec<Label>| v.into_iter().filter(|&l| !cat.is_unit(l)).collect::<Vec<_>>();
    Ok(match cell {
        Cell::Id(l) => (strip(vec![*l]), strip(vec![*l])),
        Cell::Box(name) => {
            let m = bindings.get(name).ok_or_else(|| format!("unbound box `{name}`"))?;
            (m.source().labels().to_vec(), m.target().labels().to_vec())
        }
        Cell::Cross(_) => {
            if word.len() < 2 {
                return Err("crossing needs two strands".into());
            }
            (vec![word[0], word[1]], vec![word[1], word[0]])
        }
        Cell::Cup(l) => (vec![], strip(vec![*l, cat.dual(*l)])),
        Cell::Cap(l) => (strip(vec![*l, cat.dual(*l)]), vec![]),
        Cell::LCup(l) => (vec![], strip(vec![cat.dual(*l), *l])),
        Cell::LCap(l) => (strip(vec![cat.dual(*l), *l]), vec![]),
    })
}

/// Checks that `slice` tiles `word` and returns the word after it, with the
/// offset and shape of every cell.
#[allow(clippy::type_complexity)]
fn apply_slice(
    cat: &CategoryData,
    slice: &Slice,
    word: &[Label],
    bindings: &Bindings,
) -> Result<(Vec<Label>, Vec<(usize, Vec<Label>, Vec<Label>)>), DiagramError> {
    let mut pos = 0;
    let mut out = Vec::new();
    let mut shapes = Vec::new();
    for (k, cell) in slice.cells.iter().enumerate() {
        let col = k + 1;
        if let Cell::Box(name) = cell {
            if !bindings.contains_key(name) {
                return Err(DiagramError::UnknownBox { line: slice.line, col, name: name.clone() });
            }
        }
        let (inp, outp) = cell_shape(cat, cell, &word[pos.min(word.len())..], bindings).map_err(|msg| {
            DiagramError::Width { line: slice.line, col, msg: format!("`{cell}`: {msg}") }
        })?;
        if pos + inp.len() > word.len() {
            return Err(DiagramError::Width {
                line: slice.line,
                col,
                msg: format!("cell `{cell}` runs past the {} strands of the slice", word.len()),
            });
        }
        if word[pos..pos + inp.len()] != inp[..] {
            return Err(DiagramError::LabelMismatch {
                line: slice.line,
                col,
                msg: format!(
                    "cell `{cell}` expects {:?}, found {:?}",
                    inp.iter().map(|l| cat.label_name(*l)).collect::<Vec<_>>(),
                    word[pos..pos + inp.len()].iter().map(|l| cat.label_name(*l)).collect::<Vec<_>>()
                ),
            });
        }
        shapes.push((pos, inp.clone(), outp.clone()));
        pos += inp.len();
        out.extend(outp);
    }
    if pos != word.len() {
        return Err(DiagramError::Width {
            line: slice.line,
            col: slice.cells.len(),
            msg: format!("cells cover {pos} of {} strands", word.len()),
        });
    }
    Ok((out, shapes))
}

impl DiagramIR {
    fn start_word(&self) -> Vec<Label> {
        let mut w: Vec<Label> = self.glue.into_iter().collect();
        w.extend_from_slice(self.boundary_in.labels());
        w
    }

    fn end_word(&self) -> Vec<Label> {
        let mut w = self.boundary_out.labels().to_vec();
        w.extend(self.glue);
        w
    }

    /// Structural validation against `bindings`.
    pub fn validate(&self, cat: &CategoryData, bindings: &Bindings) -> Result<(), DiagramError> {
        let mut word: Vec<Label> = self.start_word().into_iter().filter(|&l| !cat.is_unit(l)).collect();
        for s in &self.slices {
            word = apply_slice(cat, s, &word, bindings)?.0;
        }
        let end: Vec<Label> = self.end_word().into_iter().filter(|&l| !cat.is_unit(l)).collect();
        if word != end {
            let line = self.slices.last().map_or(0, |s| s.line + 1);
            return Err(DiagramError::Width {
                line,
                col: 1,
                msg: format!("diagram ends on {word:?}, declared output is {end:?}"),
            });
        }
        Ok(())
    }

    /// `self` followed by `other`.
    pub fn stack(&self, other: &DiagramIR) -> Option<DiagramIR> {
        if self.glue.is_some() || other.glue.is_some() || self.boundary_out != other.boundary_in {
            return None;
        }
        let mut slices = self.slices.clone();
        slices.extend(other.slices.iter().cloned());
        Some(DiagramIR {
            boundary_in: self.boundary_in.clone(),
            boundary_out: other.boundary_out.clone(),
            slices,
            glue: None,
        })
    }

    /// Text form accepted by [`parse_diagram`].
    pub fn to_text(&self, cat: &CategoryData) -> String {
        let names = |w: &ObjectWord| {
            w.labels().iter().map(|&l| cat.label_name(l).to_string()).collect::<Vec<_>>().join(" ")
        };
        let mut s = String::new();
        if let Some(g) = self.glue {
            s += &format!("glue {}\n", cat.label_name(g));
        }
        s += &format!("in {}\n", names(&self.boundary_in));
        for sl in &self.slices {
            let cells: Vec<String> = sl
                .cells
                .iter()
                .map(|c| match c {
                    Cell::Id(l) => format!("id {}", cat.label_name(*l)),
                    Cell::Box(n) => format!("box {n}"),
                    Cell::Cross(Handedness::Over) => "over".into(),
                    Cell::Cross(Handedness::Under) => "under".into(),
                    Cell::Cup(l) => format!("cup {}", cat.label_name(*l)),
                    Cell::Cap(l) => format!("cap {}", cat.label_name(*l)),
                    Cell::LCup(l) => format!("lcup {}", cat.label_name(*l)),
                    Cell::LCap(l) => format!("lcap {}", cat.label_name(*l)),
                })
                .collect();
            s += &cells.join(" | ");
            s.push('\n');
        }
        s += &format!("out {}\n", names(&self.boundary_out));
        s
    }
}

fn cell_morphism(cat: &CategoryData, cell: &Cell, inp: &[Label], bindings: &Bindings) -> Result<Option<Morphism>, DiagramError> {
    Ok(Some(match cell {
        Cell::Id(_) => return Ok(None),
        Cell::Box(name) => bindings.get(name).cloned().ok_or_else(|| DiagramError::Unbound(name.clone()))?,
        Cell::Cross(h) => crate::homspace::elementary_braid(cat, inp[0].0, inp[1].0, *h),
        Cell::Cup(l) => cup(cat, *l),
        Cell::Cap(l) => cap(cat, *l),
        Cell::LCup(l) => lcup(cat, *l),
        Cell::LCap(l) => lcap(cat, *l),
    }))
}

fn run(cat: &CategoryData, d: &DiagramIR, bindings: &Bindings) -> Result<Morphism, DiagramError> {
    let start: Vec<Label> = d.start_word().into_iter().filter(|&l| !cat.is_unit(l)).collect();
    let mut word = start.clone();
    let mut acc = Morphism::identity(cat, &ObjectWord::new(cat, start));
    for s in &d.slices {
        let (next, shapes) = apply_slice(cat, s, &word, bindings)?;
        // Right to left keeps the offsets of the remaining cells valid.
        let mut cur = word.clone();
        for (cell, (pos, inp, outp)) in s.cells.iter().zip(shapes).rev() {
            if let Some(h) = cell_morphism(cat, cell, &inp, bindings)? {
                let pre = ObjectWord::new(cat, cur[..pos].iter().copied());
                let post = ObjectWord::new(cat, cur[pos + inp.len()..].iter().copied());
                acc = embed(cat, &pre, &h, &post).compose(&acc)?;
                cur.splice(pos..pos + inp.len(), outp);
            }
        }
        debug_assert_eq!(cur, next);
        word = next;
    }
    let end: Vec<Label> = d.end_word().into_iter().filter(|&l| !cat.is_unit(l)).collect();
    if word != end {
        return Err(DiagramError::Width {
            line: d.slices.last().map_or(0, |s| s.line + 1),
            col: 1,
            msg: format!("diagram ends on {word:?}, declared output is {end:?}"),
        });
    }
    Ok(acc)
}

/// Morphism `boundary_in → boundary_out` of a plane diagram.
pub fn evaluate(cat: &CategoryData, d: &DiagramIR, bindings: &Bindings) -> Result<Morphism, DiagramError> {
    if d.glue.is_some() {
        return Err(DiagramError::Glued);
    }
    run(cat, d, bindings)
}

/// Vertical reading `R ⊗ X → Y ⊗ R` of a cylinder diagram glued along `R`.
pub fn evaluate_cylinder(cat: &CategoryData, d: &DiagramIR, bindings: &Bindings) -> Result<Morphism, DiagramError> {
    if d.glue.is_none() {
        return Err(DiagramError::NotGlued);
    }
    run(cat, d, bindings)
}

/// Programmatic construction of diagrams, one cell per slice. Positions
/// index the logical strand list, which keeps unit strands; cells touching
/// only unit strands are dropped and crossings with a unit strand are
/// skipped.
pub struct Builder<'a> {
    cat: &'a CategoryData,
    bindings: &'a Bindings,
    ir: DiagramIR,
    logical: Vec<Label>,
    glue: Option<Label>,
}

impl<'a> Builder<'a> {
    pub fn new(cat: &'a CategoryData, bindings: &'a Bindings, input: &[Label]) -> Self {
        Self::with_glue(cat, bindings, input, None)
    }

    /// Cylinder builder: the logical word starts as `glue ⊗ input`.
    pub fn with_glue(cat: &'a CategoryData, bindings: &'a Bindings, input: &[Label], glue: Option<Label>) -> Self {
        let mut logical: Vec<Label> = glue.into_iter().collect();
        logical.extend_from_slice(input);
        let ir_glue = glue.filter(|&g| !cat.is_unit(g));
        Self {
            cat,
            bindings,
            ir: DiagramIR {
                boundary_in: ObjectWord::new(cat, input.iter().copied()),
                boundary_out: ObjectWord::new(cat, input.iter().copied()),
                slices: vec![],
                glue: ir_glue,
            },
            logical,
            glue,
        }
    }

    pub fn logical(&self) -> &[Label] {
        &self.logical
    }

    fn stripped_pos(&self, pos: usize) -> usize {
        self.logical[..pos].iter().filter(|&&l| !self.cat.is_unit(l)).count()
    }

    fn stripped(&self) -> Vec<Label> {
        self.logical.iter().copied().filter(|&l| !self.cat.is_unit(l)).collect()
    }

    fn emit(&mut self, pos: usize, cell: Cell, width: usize) -> Result<(), DiagramError> {
        let word = self.stripped();
        let sp = self.stripped_pos(pos);
        let mut cells: Vec<Cell> = word[..sp].iter().map(|&l| Cell::Id(l)).collect();
        cells.push(cell);
        cells.extend(word[sp + width..].iter().map(|&l| Cell::Id(l)));
        let slice = Slice { cells, line: self.ir.slices.len() + 1 };
        apply_slice(self.cat, &slice, &word, self.bindings)?;
        self.ir.slices.push(slice);
        Ok(())
    }

    fn expect(&self, pos: usize, want: &[Label]) -> Result<(), DiagramError> {
        let have = self.logical.get(pos..pos + want.len());
        if have != Some(want) {
            return Err(DiagramError::LabelMismatch {
                line: self.ir.slices.len() + 1,
                col: pos + 1,
                msg: format!("expected {want:?} at {pos}, logical word is {:?}", self.logical),
            });
        }
        Ok(())
    }

    pub fn cross(&mut self, pos: usize, h: Handedness) -> Result<&mut Self, DiagramError> {
        if pos + 2 > self.logical.len() {
            return Err(DiagramError::Width {
                line: self.ir.slices.len() + 1,
                col: pos + 1,
                msg: "crossing past the last strand".into(),
            });
        }
        let (a, b) = (self.logical[pos], self.logical[pos + 1]);
        if !self.cat.is_unit(a) && !self.cat.is_unit(b) {
            self.emit(pos, Cell::Cross(h), 2)?;
        }
        self.logical.swap(pos, pos + 1);
        Ok(self)
    }

    fn bend(&mut self, pos: usize, l: Label, create: bool, left: bool) -> Result<&mut Self, DiagramError> {
        let pair = if left { [self.cat.dual(l), l] } else { [l, self.cat.dual(l)] };
        if !create {
            self.expect(pos, &pair)?;
        } else if pos > self.logical.len() {
            return Err(DiagramError::Width {
                line: self.ir.slices.len() + 1,
                col: pos + 1,
                msg: "cup past the last strand".into(),
            });
        }
        if !self.cat.is_unit(l) {
            let cell = match (create, left) {
                (true, false) => Cell::Cup(l),
                (false, false) => Cell::Cap(l),
                (true, true) => Cell::LCup(l),
                (false, true) => Cell::LCap(l),
            };
            self.emit(pos, cell, if create { 0 } else { 2 })?;
        }
        if create {
            self.logical.splice(pos..pos, pair);
        } else {
            self.logical.drain(pos..pos + 2);
        }
        Ok(self)
    }

    /// `cup_l` inserted before logical strand `pos`.
    pub fn cup(&mut self, pos: usize, l: Label) -> Result<&mut Self, DiagramError> {
        self.bend(pos, l, true, false)
    }

    pub fn cap(&mut self, pos: usize, l: Label) -> Result<&mut Self, DiagramError> {
        self.bend(pos, l, false, false)
    }

    pub fn lcup(&mut self, pos: usize, l: Label) -> Result<&mut Self, DiagramError> {
        self.bend(pos, l, true, true)
    }

    pub fn lcap(&mut self, pos: usize, l: Label) -> Result<&mut Self, DiagramError> {
        self.bend(pos, l, false, true)
    }

    /// Box `name` replacing logical strands `pos..pos + inp.len()` (which
    /// must read `inp`) by `out`.
    pub fn boxed(&mut self, pos: usize, name: &str, inp: &[Label], out: &[Label]) -> Result<&mut Self, DiagramError> {
        self.expect(pos, inp)?;
        let m = self.bindings.get(name).ok_or_else(|| DiagramError::Unbound(name.to_string()))?;
        let strip = |w: &[Label]| ObjectWord::new(self.cat, w.iter().copied());
        if m.source() != strip(inp) || m.target() != strip(out) {
            return Err(DiagramError::LabelMismatch {
                line: self.ir.slices.len() + 1,
                col: pos + 1,
                msg: format!("box `{name}` does not have the declared shape"),
            });
        }
        let width = strip(inp).len();
        self.emit(pos, Cell::Box(name.to_string()), width)?;
        self.logical.splice(pos..pos + inp.len(), out.iter().copied());
        Ok(self)
    }

    pub fn finish(&self) -> Result<DiagramIR, DiagramError> {
        let mut ir = self.ir.clone();
        let mut w = self.logical.clone();
        if let Some(g) = self.glue {
            if w.last() != Some(&g) {
                return Err(DiagramError::LabelMismatch {
                    line: ir.slices.len() + 1,
                    col: 1,
                    msg: "cylinder does not end on its glue strand".into(),
                });
            }
            w.pop();
        }
        ir.boundary_out = ObjectWord::new(self.cat, w);
        Ok(ir)
    }
}
