//! Plane diagrams with double lines, encoded as cyclic extended Gauss codes.
//!
//! A diagram is a cyclic word of crossing passages and jump markers. Edge `i`
//! is the segment right after the symbol at position `i`; an empty code has a
//! single edge, the whole circle. Every edge carries a vector of `2g`
//! intersection numbers with a fixed dual basis of curves on `S_g`.

mod codec;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::abelian::{FgAbelianGroup, GroupElement};

pub use codec::{parse, serialize};

pub type CrossingId = u32;
pub type Mark = Vec<i64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn from_value(v: i64) -> Option<Self> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Over,
    Under,
}

impl Role {
    pub fn swap(self) -> Self {
        match self {
            Role::Over => Role::Under,
            Role::Under => Role::Over,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Passage { id: CrossingId, role: Role, sign: Sign },
    /// Crossing of the cut fiber; `Plus` means the lift level goes up by one.
    Jump(Sign),
}

impl Symbol {
    pub fn over(id: CrossingId, sign: Sign) -> Self {
        Symbol::Passage { id, role: Role::Over, sign }
    }

    pub fn under(id: CrossingId, sign: Sign) -> Self {
        Symbol::Passage { id, role: Role::Under, sign }
    }

    pub fn crossing(&self) -> Option<CrossingId> {
        match self {
            Symbol::Passage { id, .. } => Some(*id),
            Symbol::Jump(_) => None,
        }
    }

    pub fn jump(&self) -> i64 {
        match self {
            Symbol::Jump(s) => s.value(),
            Symbol::Passage { .. } => 0,
        }
    }

    pub fn is_jump(&self) -> bool {
        matches!(self, Symbol::Jump(_))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Passage { id, role, sign } => {
                let r = if *role == Role::Over { 'O' } else { 'U' };
                write!(f, "{r}{id}{}", sign.as_char())
            }
            Symbol::Jump(s) => write!(f, "J{}", s.as_char()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DiagramError {
    #[error("syntax error on line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("structure error: {0}")]
    Structure(String),
    #[error("mark error: {0}")]
    Mark(String),
    #[error("unknown crossing {0}")]
    UnknownCrossing(CrossingId),
}

/// Positions of the two passages of a crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Passages {
    pub over: usize,
    pub under: usize,
    pub sign: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossingLabel {
    pub raw: i64,
    /// `raw` in `Z / |degree|` (in `Z` for degree zero).
    pub reduced: GroupElement,
}

/// Integer class of a half-curve: `2g` surface coordinates then the winding.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HalfCurveClass {
    pub vector: Vec<i64>,
}

impl HalfCurveClass {
    pub fn winding(&self) -> i64 {
        *self.vector.last().expect("length 2g+1")
    }

    pub fn to_bigint(&self) -> Vec<BigInt> {
        self.vector.iter().map(|&x| BigInt::from(x)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Diagram {
    genus: usize,
    code: Vec<Symbol>,
    marks: Vec<Mark>,
}

impl Diagram {
    /// The unknot: no symbols, one unmarked edge.
    pub fn empty(genus: usize) -> Self {
        Self { genus, code: Vec::new(), marks: vec![vec![0; 2 * genus]] }
    }

    /// Builds and validates a diagram from sparse marks.
    pub fn new(genus: usize, code: Vec<Symbol>, marks: BTreeMap<usize, Mark>) -> Result<Self, DiagramError> {
        let edges = code.len().max(1);
        let mut dense = vec![vec![0; 2 * genus]; edges];
        for (e, m) in marks {
            if e >= edges {
                return Err(DiagramError::Mark(format!("edge {e} out of range (diagram has {edges} edges)")));
            }
            dense[e] = m;
        }
        Self::from_dense(genus, code, dense)
    }

    /// Builds and validates a diagram from one mark per edge.
    pub fn from_dense(genus: usize, code: Vec<Symbol>, marks: Vec<Mark>) -> Result<Self, DiagramError> {
        let d = Self { genus, code, marks };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(genus: usize, code: Vec<Symbol>, marks: Vec<Mark>) -> Self {
        let d = Self { genus, code, marks };
        debug_assert_eq!(d.validate(), Ok(()));
        d
    }

    pub fn validate(&self) -> Result<(), DiagramError> {
        let edges = self.edge_count();
        if self.marks.len() != edges {
            return Err(DiagramError::Mark(format!("expected {edges} edge marks, found {}", self.marks.len())));
        }
        for (e, m) in self.marks.iter().enumerate() {
            if m.len() != 2 * self.genus {
                return Err(DiagramError::Mark(format!(
                    "edge {e}: mark has {} entries, genus {} needs {}",
                    m.len(),
                    self.genus,
                    2 * self.genus
                )));
            }
        }
        let mut seen: BTreeMap<CrossingId, Vec<(Role, Sign)>> = BTreeMap::new();
        for s in &self.code {
            if let Symbol::Passage { id, role, sign } = *s {
                if id == 0 {
                    return Err(DiagramError::Structure("crossing ids must be positive".into()));
                }
                seen.entry(id).or_default().push((role, sign));
            }
        }
        for (id, uses) in seen {
            match uses.as_slice() {
                [(r1, s1), (r2, s2)] => {
                    if r1 == r2 {
                        return Err(DiagramError::Structure(format!("crossing {id} needs one over and one under passage")));
                    }
                    if s1 != s2 {
                        return Err(DiagramError::Structure(format!("crossing {id} has different signs at its passages")));
                    }
                }
                _ => {
                    return Err(DiagramError::Structure(format!(
                        "crossing {id} appears {} times, expected 2",
                        uses.len()
                    )))
                }
            }
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn code(&self) -> &[Symbol] {
        &self.code
    }

    pub fn marks(&self) -> &[Mark] {
        &self.marks
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.code.len().max(1)
    }

    pub fn mark(&self, edge: usize) -> &Mark {
        &self.marks[edge]
    }

    pub(crate) fn into_parts(self) -> (usize, Vec<Symbol>, Vec<Mark>) {
        (self.genus, self.code, self.marks)
    }

    /// Crossing ids in increasing order.
    pub fn crossings(&self) -> Vec<CrossingId> {
        self.passage_index().into_keys().collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.code.iter().filter(|s| !s.is_jump()).count() / 2
    }

    pub fn max_crossing_id(&self) -> CrossingId {
        self.code.iter().filter_map(Symbol::crossing).max().unwrap_or(0)
    }

    pub fn passage_index(&self) -> BTreeMap<CrossingId, Passages> {
        let mut over = BTreeMap::new();
        let mut under = BTreeMap::new();
        for (i, s) in self.code.iter().enumerate() {
            if let Symbol::Passage { id, role, sign } = *s {
                match role {
                    Role::Over => over.insert(id, (i, sign)),
                    Role::Under => under.insert(id, (i, sign)),
                };
            }
        }
        over.into_iter()
            .map(|(id, (o, sign))| (id, Passages { over: o, under: under[&id].0, sign }))
            .collect()
    }

    pub fn passages(&self, c: CrossingId) -> Result<Passages, DiagramError> {
        let mut over = None;
        let mut under = None;
        let mut sign = Sign::Plus;
        for (i, s) in self.code.iter().enumerate() {
            if let Symbol::Passage { id, role, sign: sg } = *s {
                if id == c {
                    sign = sg;
                    match role {
                        Role::Over => over = Some(i),
                        Role::Under => under = Some(i),
                    }
                }
            }
        }
        match (over, under) {
            (Some(over), Some(under)) => Ok(Passages { over, under, sign }),
            _ => Err(DiagramError::UnknownCrossing(c)),
        }
    }

    /// Net winding along `S^1`: the sum of the jump directions.
    pub fn degree(&self) -> i64 {
        self.code.iter().map(Symbol::jump).sum()
    }

    /// Level of every edge, with the last edge (the one entering position 0)
    /// as the base at level 0.
    pub fn arc_labels(&self) -> Vec<i64> {
        let n = self.code.len();
        if n == 0 {
            return vec![0];
        }
        let mut labels = Vec::with_capacity(n);
        let mut level = 0;
        for s in &self.code[..n - 1] {
            level += s.jump();
            labels.push(level);
        }
        labels.push(0);
        labels
    }

    /// Sum of marks over edges `from, from+1, ..., to-1` and of jumps strictly
    /// between positions `from` and `to`, walking forward cyclically.
    pub(crate) fn walk(&self, from: usize, to: usize) -> (Mark, i64) {
        let n = self.code.len();
        let mut mark = vec![0; 2 * self.genus];
        let mut winding = 0;
        let mut i = from;
        loop {
            for (a, b) in mark.iter_mut().zip(&self.marks[i]) {
                *a += b;
            }
            i = (i + 1) % n;
            if i == to {
                break;
            }
            winding += self.code[i].jump();
        }
        (mark, winding)
    }

    pub(crate) fn raw_label_at(&self, p: Passages) -> i64 {
        self.walk(p.under, p.over).1
    }

    pub(crate) fn half_curve_at(&self, p: Passages) -> HalfCurveClass {
        let (mut vector, winding) = self.walk(p.under, p.over);
        vector.push(winding);
        HalfCurveClass { vector }
    }

    /// Jump sum from just after the under passage up to the over passage.
    pub fn raw_label(&self, c: CrossingId) -> Result<i64, DiagramError> {
        Ok(self.raw_label_at(self.passages(c)?))
    }

    pub fn label_group(&self) -> Arc<FgAbelianGroup> {
        FgAbelianGroup::cyclic(self.degree().unsigned_abs())
    }

    pub fn crossing_label(&self, c: CrossingId) -> Result<CrossingLabel, DiagramError> {
        let raw = self.raw_label(c)?;
        let reduced = self.label_group().element(&[raw]).expect("rank one");
        Ok(CrossingLabel { raw, reduced })
    }

    pub fn half_curve_class(&self, c: CrossingId) -> Result<HalfCurveClass, DiagramError> {
        Ok(self.half_curve_at(self.passages(c)?))
    }

    /// The complementary half: from the over passage to the under passage.
    pub fn complementary_half_curve_class(&self, c: CrossingId) -> Result<HalfCurveClass, DiagramError> {
        let p = self.passages(c)?;
        let (mut vector, winding) = self.walk(p.over, p.under);
        vector.push(winding);
        Ok(HalfCurveClass { vector })
    }

    /// Total mark followed by the degree: the class `[K]`.
    pub fn knot_class(&self) -> Vec<i64> {
        let mut v = vec![0; 2 * self.genus];
        for m in &self.marks {
            for (a, b) in v.iter_mut().zip(m) {
                *a += b;
            }
        }
        v.push(self.degree());
        v
    }

    pub fn crossing_sign(&self, c: CrossingId) -> Result<Sign, DiagramError> {
        Ok(self.passages(c)?.sign)
    }

    /// Same diagram read from position `k` onwards.
    pub fn rotated(&self, k: usize) -> Self {
        let n = self.code.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut code = self.code.clone();
        let mut marks = self.marks.clone();
        code.rotate_left(k);
        marks.rotate_left(k);
        Self { genus: self.genus, code, marks }
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
