//! The universal winding parity group spanned by a move trace.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::abelian::{quotient, solve_hom, FgAbelianGroup, GroupElement, Hom, HomSolution};
use crate::diagram::CrossingId;
use crate::moves::{MoveKind, MoveTrace};
use crate::parity::{Parity, ParityAssignment, ParityError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Generator {
    /// `1_{K,v}` for diagram `diagram` of the trace.
    Crossing { diagram: usize, id: CrossingId },
    One,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Crossing { diagram, id } => write!(f, "1[{diagram},{id}]"),
            Generator::One => f.write_str("1"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelationKind {
    /// A surviving crossing keeps its class.
    Correspondence,
    /// The two crossings of a second move agree.
    SecondMove,
    /// Alternating sum over a third-move triangle.
    ThirdMove,
    /// `1_{K',v} + 1_{K,v} - 1` for a crossing change.
    CrossingChange,
    /// A first-move crossing is zero.
    FirstMove,
}

impl RelationKind {
    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Correspondence => "type1-correspondence",
            RelationKind::SecondMove => "type2-second-move",
            RelationKind::ThirdMove => "type3-third-move",
            RelationKind::CrossingChange => "type4-crossing-change",
            RelationKind::FirstMove => "type5-first-move",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub kind: RelationKind,
    pub step: usize,
    /// Sparse `(generator index, coefficient)` terms.
    pub terms: Vec<(usize, i64)>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at step {}", self.kind.name(), self.step)
    }
}

#[derive(Clone, Debug)]
pub struct UniversalPresentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
    pub group: Arc<FgAbelianGroup>,
    pub classes: BTreeMap<(usize, CrossingId), GroupElement>,
    pub one_class: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UniversalError {
    #[error("malformed trace: {0}")]
    MalformedTrace(String),
    #[error("coefficient group changes along the trace at diagram {0}")]
    IncompatibleGroups(usize),
    #[error(transparent)]
    Parity(#[from] ParityError),
}

pub fn build_universal(t: &MoveTrace) -> Result<UniversalPresentation, UniversalError> {
    let mut generators: Vec<Generator> = t
        .diagrams()
        .enumerate()
        .flat_map(|(i, d)| d.crossings().into_iter().map(move |id| Generator::Crossing { diagram: i, id }))
        .collect();
    generators.push(Generator::One);
    let index: BTreeMap<Generator, usize> = generators.iter().enumerate().map(|(k, g)| (*g, k)).collect();
    let gen = |diagram: usize, id: CrossingId| {
        index
            .get(&Generator::Crossing { diagram, id })
            .copied()
            .ok_or_else(|| UniversalError::MalformedTrace(format!("crossing {id} missing from diagram {diagram}")))
    };
    let one = index[&Generator::One];

    let mut relations = Vec::new();
    for (i, step) in t.steps.iter().enumerate() {
        let corr = &step.corr;
        let mut push = |kind, terms| relations.push(Relation { kind, step: i, terms });
        for (&v, &w) in &corr.surviving {
            if corr.m4_target != Some(v) {
                push(RelationKind::Correspondence, vec![(gen(i + 1, w)?, 1), (gen(i, v)?, -1)]);
            }
        }
        let kind = step.mv.kind();
        let (side, ids) = if kind.length_delta() < 0 { (i, &corr.destroyed) } else { (i + 1, &corr.created) };
        match kind {
            MoveKind::R1Add | MoveKind::R1Remove => {
                for &v in ids {
                    push(RelationKind::FirstMove, vec![(gen(side, v)?, 1)]);
                }
            }
            MoveKind::R2Add | MoveKind::R2Remove => {
                let ids: Vec<CrossingId> = ids.iter().copied().collect();
                if ids.len() != 2 {
                    return Err(UniversalError::MalformedTrace(format!("step {i}: second move without two crossings")));
                }
                push(RelationKind::SecondMove, vec![(gen(side, ids[0])?, 1), (gen(side, ids[1])?, -1)]);
            }
            MoveKind::R3 => {
                let [v1, v2, v3] = corr
                    .r3_roles
                    .ok_or_else(|| UniversalError::MalformedTrace(format!("step {i}: third move without roles")))?;
                push(RelationKind::ThirdMove, vec![(gen(i + 1, v1)?, 1), (gen(i + 1, v2)?, -1), (gen(i + 1, v3)?, 1)]);
            }
            MoveKind::M4Prime => {
                let c = corr
                    .m4_target
                    .ok_or_else(|| UniversalError::MalformedTrace(format!("step {i}: crossing change without target")))?;
                push(RelationKind::CrossingChange, vec![(gen(i + 1, c)?, 1), (gen(i, c)?, 1), (one, -1)]);
            }
            MoveKind::JcancelAdd | MoveKind::JcancelRemove | MoveKind::Jslide => {}
        }
    }
    Ok(UniversalPresentation::from_relations(generators, relations))
}

fn dense(rank: usize, terms: &[(usize, i64)]) -> Vec<BigInt> {
    let mut v = vec![BigInt::from(0); rank];
    for &(j, c) in terms {
        v[j] += c;
    }
    v
}

impl UniversalPresentation {
    /// Builds the group from explicit relations; used to test corrupted presentations.
    pub fn from_relations(generators: Vec<Generator>, relations: Vec<Relation>) -> Self {
        let rank = generators.len();
        let group = quotient(rank, relations.iter().map(|r| dense(rank, &r.terms)).collect()).expect("relations have full length");
        let mut classes = BTreeMap::new();
        let mut one_class = None;
        for (k, g) in generators.iter().enumerate() {
            let class = group.generator(k);
            match g {
                Generator::Crossing { diagram, id } => {
                    classes.insert((*diagram, *id), class);
                }
                Generator::One => one_class = Some(class),
            }
        }
        let one_class = one_class.expect("the generator 1 is always present");
        Self { generators, relations, group, classes, one_class }
    }

    pub fn report_json(&self) -> Value {
        let generators: Vec<Value> = self
            .generators
            .iter()
            .map(|g| match g {
                Generator::Crossing { diagram, id } => json!({ "diagram": diagram, "crossing": id }),
                Generator::One => json!("1"),
            })
            .collect();
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for r in &self.relations {
            *counts.entry(r.kind.name()).or_default() += 1;
        }
        let classes: Vec<Value> = self
            .classes
            .iter()
            .map(|((i, c), x)| json!({ "diagram": i, "crossing": c, "class": rep_json(x) }))
            .collect();
        json!({
            "generators": generators,
            "relations": counts,
            "group": self.group.describe(),
            "free_rank": self.group.free_rank(),
            "invariant_factors": self.group.invariant_factors().iter().map(ToString::to_string).collect::<Vec<_>>(),
            "one": rep_json(&self.one_class),
            "classes": classes,
        })
    }
}

fn rep_json(x: &GroupElement) -> Value {
    // sparse, since ranks here run into the hundreds
    let nz: BTreeMap<String, String> =
        x.rep().iter().enumerate().filter(|(_, v)| v.sign() != num_bigint::Sign::NoSign).map(|(k, v)| (k.to_string(), v.to_string())).collect();
    json!(nz)
}

#[derive(Clone, Debug)]
pub enum Factorization {
    Hom(Hom),
    /// The first relation mapped to a nonzero element.
    Inconsistent { relation: usize, name: String, image: GroupElement },
}

impl Factorization {
    pub fn hom(&self) -> Option<&Hom> {
        match self {
            Factorization::Hom(h) => Some(h),
            Factorization::Inconsistent { .. } => None,
        }
    }
}

/// The parity values on every diagram of the trace, checked to share one group.
pub fn trace_assignments(t: &MoveTrace, parity: &dyn Parity) -> Result<Vec<ParityAssignment>, UniversalError> {
    let assigned: Vec<ParityAssignment> = t.diagrams().map(|d| parity.assign(d)).collect::<Result<_, _>>()?;
    if let Some(k) = assigned.iter().position(|p| p.group != assigned[0].group) {
        return Err(UniversalError::IncompatibleGroups(k));
    }
    Ok(assigned)
}

/// Solves for `rho` with `1_{K,v} -> p(v)` and `1 -> a`.
pub fn factor(u: &UniversalPresentation, t: &MoveTrace, parity: &dyn Parity) -> Result<Factorization, UniversalError> {
    let assigned = trace_assignments(t, parity)?;
    let target = Arc::clone(&assigned[0].group);
    let images: Vec<GroupElement> = u
        .generators
        .iter()
        .map(|g| match g {
            Generator::Crossing { diagram, id } => assigned
                .get(*diagram)
                .and_then(|p| p.values.get(id))
                .cloned()
                .ok_or_else(|| UniversalError::MalformedTrace(format!("generator {g} not in trace"))),
            Generator::One => Ok(assigned[0].fixed.clone()),
        })
        .collect::<Result<_, _>>()?;
    match solve_hom(&u.group, &target, &images).expect("images match generators") {
        HomSolution::Hom(h) => Ok(Factorization::Hom(h)),
        HomSolution::Inconsistent(w) => Ok(Factorization::Inconsistent {
            relation: w.relation,
            name: u.relations[w.relation].to_string(),
            image: w.image,
        }),
    }
}
