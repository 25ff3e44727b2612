use super::{embed, Morphism, ObjectWord, WordSpace};
use crate::category::{CategoryData, Label};
use crate::{CMat, C64};

fn bend(cat: &CategoryData, word: &[usize], creates: bool, z: C64) -> Morphism {
    let unit = cat.unit().0;
    let empty = WordSpace::new(cat, &[]);
    let pair = WordSpace::new(cat, word);
    let (src, tgt) = if creates { (empty, pair) } else { (pair, empty) };
    let blocks = (0..cat.rank())
        .map(|c| {
            if c == unit {
                CMat::from_element(1, 1, z)
            } else {
                CMat::zeros(tgt.count(c), src.count(c))
            }
        })
        .collect();
    Morphism::from_blocks(src, tgt, blocks)
}

/// `cup_S: 1 → S ⊗ S^∨`.
pub fn cup(cat: &CategoryData, s: Label) -> Morphism {
    if cat.is_unit(s) {
        return Morphism::identity(cat, &ObjectWord::unit());
    }
    bend(cat, &[s.0, cat.dual(s).0], true, cat.bends(s).cup)
}

/// `cap_S: S ⊗ S^∨ → 1`.
pub fn cap(cat: &CategoryData, s: Label) -> Morphism {
    if cat.is_unit(s) {
        return Morphism::identity(cat, &ObjectWord::unit());
    }
    bend(cat, &[s.0, cat.dual(s).0], false, cat.bends(s).cap)
}

/// `lcup_S: 1 → S^∨ ⊗ S`.
pub fn lcup(cat: &CategoryData, s: Label) -> Morphism {
    if cat.is_unit(s) {
        return Morphism::identity(cat, &ObjectWord::unit());
    }
    bend(cat, &[cat.dual(s).0, s.0], true, cat.bends(s).lcup)
}

/// `lcap_S: S^∨ ⊗ S → 1`.
pub fn lcap(cat: &CategoryData, s: Label) -> Morphism {
    if cat.is_unit(s) {
        return Morphism::identity(cat, &ObjectWord::unit());
    }
    bend(cat, &[cat.dual(s).0, s.0], false, cat.bends(s).lcap)
}

fn split(x: &ObjectWord) -> Option<(Label, ObjectWord)> {
    let (&first, rest) = x.labels().split_first()?;
    Some((first, ObjectWord(rest.to_vec())))
}

/// `cup_X: 1 → X ⊗ X^∨`, nested outermost-first.
pub fn word_cup(cat: &CategoryData, x: &ObjectWord) -> Morphism {
    match split(x) {
        None => Morphism::identity(cat, x),
        Some((a, rest)) => {
            let inner = embed(cat, &ObjectWord(vec![a]), &word_cup(cat, &rest), &ObjectWord(vec![cat.dual(a)]));
            inner.compose(&cup(cat, a)).unwrap()
        }
    }
}

/// `cap_X: X ⊗ X^∨ → 1`.
pub fn word_cap(cat: &CategoryData, x: &ObjectWord) -> Morphism {
    match split(x) {
        None => Morphism::identity(cat, x),
        Some((a, rest)) => {
            let inner = embed(cat, &ObjectWord(vec![a]), &word_cap(cat, &rest), &ObjectWord(vec![cat.dual(a)]));
            cap(cat, a).compose(&inner).unwrap()
        }
    }
}

/// `lcup_X: 1 → X^∨ ⊗ X`.
pub fn word_lcup(cat: &CategoryData, x: &ObjectWord) -> Morphism {
    match split(x) {
        None => Morphism::identity(cat, x),
        Some((a, rest)) => {
            let inner = embed(cat, &rest.dual(cat), &lcup(cat, a), &rest);
            inner.compose(&word_lcup(cat, &rest)).unwrap()
        }
    }
}

/// `lcap_X: X^∨ ⊗ X → 1`.
pub fn word_lcap(cat: &CategoryData, x: &ObjectWord) -> Morphism {
    match split(x) {
        None => Morphism::identity(cat, x),
        Some((a, rest)) => {
            let inner = embed(cat, &rest.dual(cat), &lcap(cat, a), &rest);
            word_lcap(cat, &rest).compose(&inner).unwrap()
        }
    }
}
