use std::collections::BTreeMap;
use std::fmt;

use super::{homological_parity, label_parity, project_s1, Parity, ParityAssignment, ParityError, Profile};
use crate::abelian::GroupElement;
use crate::diagram::{CrossingId, Diagram};
use crate::moves::{kink_sites, MoveKind, MoveTrace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub axiom: &'static str,
    /// Step index in the trace (diagram index for per-diagram checks).
    pub step: usize,
    pub crossings: Vec<CrossingId>,
    pub expected: String,
    pub actual: String,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} violated at step {} crossings {:?}: expected {}, got {}",
            self.axiom, self.step, self.crossings, self.expected, self.actual
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    pub parity: String,
    /// Per axiom `(passed, failed)`.
    pub tallies: BTreeMap<&'static str, (usize, usize)>,
    pub counterexamples: Vec<Counterexample>,
}

impl AxiomReport {
    fn new(parity: String, axioms: &[&'static str]) -> Self {
        Self { parity, tallies: axioms.iter().map(|a| (*a, (0, 0))).collect(), counterexamples: Vec::new() }
    }

    fn record(&mut self, axiom: &'static str, ok: bool, cx: impl FnOnce() -> Counterexample) {
        let t = self.tallies.entry(axiom).or_default();
        if ok {
            t.0 += 1;
        } else {
            t.1 += 1;
            self.counterexamples.push(cx());
        }
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }

    pub fn checks(&self, axiom: &str) -> usize {
        self.tallies.get(axiom).map_or(0, |t| t.0 + t.1)
    }

    pub fn failures(&self, axiom: &str) -> usize {
        self.tallies.get(axiom).map_or(0, |t| t.1)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "parity {}", self.parity)?;
        for (a, (p, x)) in &self.tallies {
            writeln!(f, "{a} pass {p} fail {x}")?;
        }
        for c in &self.counterexamples {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

fn get(p: &ParityAssignment, c: CrossingId) -> &GroupElement {
    &p.values[&c]
}

fn cx(axiom: &'static str, step: usize, crossings: Vec<CrossingId>, expected: &GroupElement, actual: &GroupElement) -> Counterexample {
    Counterexample { axiom, step, crossings, expected: expected.to_string(), actual: actual.to_string() }
}

fn sum(a: &GroupElement, b: &GroupElement) -> GroupElement {
    a.try_add(b).expect("parity values share a group")
}

fn diff(a: &GroupElement, b: &GroupElement) -> GroupElement {
    a.try_sub(b).expect("parity values share a group")
}

/// Recomputes the parity on every diagram of `t` and checks the axioms
/// step by step.
pub fn check_axioms(t: &MoveTrace, parity: &dyn Parity) -> Result<AxiomReport, ParityError> {
    let assigned: Vec<ParityAssignment> = t.diagrams().map(|d| parity.assign(d)).collect::<Result<_, _>>()?;
    let oriented = parity.profile() == Profile::Oriented;
    let names: &[&'static str] = if oriented { &["A1", "A2", "A3"] } else { &["A1", "A2", "A3", "A4", "A5"] };
    let mut report = AxiomReport::new(parity.name(), names);
    for (i, step) in t.steps.iter().enumerate() {
        let (src, tgt) = (&assigned[i], &assigned[i + 1]);
        let corr = &step.corr;
        for (&v, &w) in &corr.surviving {
            if corr.m4_target == Some(v) && !oriented {
                continue;
            }
            let (a, b) = (get(src, v), get(tgt, w));
            report.record("A1", a == b, || cx("A1", i, vec![v], a, b));
        }
        let kind = step.mv.kind();
        match kind {
            MoveKind::R1Remove | MoveKind::R1Add => {
                let (side, ids) = if kind == MoveKind::R1Remove { (src, &corr.destroyed) } else { (tgt, &corr.created) };
                for &v in ids {
                    let x = get(side, v);
                    report.record("A2", x.is_zero(), || cx("A2", i, vec![v], &side.group.zero(), x));
                }
            }
            MoveKind::R2Remove | MoveKind::R2Add => {
                let (side, ids) = if kind == MoveKind::R2Remove { (src, &corr.destroyed) } else { (tgt, &corr.created) };
                let ids: Vec<CrossingId> = ids.iter().copied().collect();
                let (x, y) = (get(side, ids[0]), get(side, ids[1]));
                if oriented {
                    let s = sum(x, y);
                    report.record("A3", s.is_zero(), || cx("A3", i, ids.clone(), &side.group.zero(), &s));
                } else {
                    report.record("A3", x == y, || cx("A3", i, ids.clone(), x, y));
                }
            }
            MoveKind::R3 if !oriented => {
                let [v1, v2, v3] = corr.r3_roles.expect("third moves record roles");
                let s = sum(&diff(get(tgt, v1), get(tgt, v2)), get(tgt, v3));
                report.record("A4", s.is_zero(), || cx("A4", i, vec![v1, v2, v3], &tgt.group.zero(), &s));
            }
            MoveKind::M4Prime if !oriented => {
                let c = corr.m4_target.expect("crossing changes record their target");
                let expected = diff(&src.fixed, get(src, c));
                let actual = get(tgt, c);
                report.record("A5", &expected == actual, || cx("A5", i, vec![c], &expected, actual));
            }
            _ => {}
        }
    }
    Ok(report)
}

fn raw_half(d: &Diagram, c: CrossingId) -> Vec<i64> {
    d.half_curve_class(c).expect("crossing of d").vector
}

/// Whether `v` is an integer multiple of `k`.
fn multiple_of(v: &[i64], k: &[i64]) -> bool {
    match k.iter().position(|&x| x != 0) {
        None => v.iter().all(|&x| x == 0),
        Some(j) => v[j] % k[j] == 0 && v.iter().zip(k).all(|(&a, &b)| a == v[j] / k[j] * b),
    }
}

fn vec_string(v: &[i64]) -> String {
    format!("{v:?}")
}

/// The identities behind the homological theorem, in raw coordinates where
/// they hold exactly: loops of first moves bound zero, third moves have
/// alternating-sum defect in `Z[K]`, and a crossing change adds up to
/// `[K] - [* x S^1]`.
pub fn check_homological_identities(t: &MoveTrace) -> AxiomReport {
    let mut report = AxiomReport::new("homological".into(), &["M4-sum", "R1-zero", "R3-raw"]);
    for (i, d) in t.diagrams().enumerate() {
        let h = homological_parity(d);
        for (_, c) in kink_sites(d) {
            let x = get(&h, c);
            report.record("R1-zero", x.is_zero(), || cx("R1-zero", i, vec![c], &h.group.zero(), x));
        }
    }
    for (i, step) in t.steps.iter().enumerate() {
        let src = t.diagram(i);
        let tgt = &step.result;
        let k = src.knot_class();
        if let Some([v1, v2, v3]) = step.corr.r3_roles {
            for d in [src, tgt] {
                let defect: Vec<i64> = (0..k.len())
                    .map(|j| raw_half(d, v1)[j] - raw_half(d, v2)[j] + raw_half(d, v3)[j])
                    .collect();
                report.record("R3-raw", multiple_of(&defect, &k), || Counterexample {
                    axiom: "R3-raw",
                    step: i,
                    crossings: vec![v1, v2, v3],
                    expected: format!("multiple of {}", vec_string(&k)),
                    actual: vec_string(&defect),
                });
            }
        }
        if let Some(c) = step.corr.m4_target {
            let (a, b) = (raw_half(src, c), raw_half(tgt, c));
            let got: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let mut want = k.clone();
            *want.last_mut().expect("nonempty") -= 1;
            report.record("M4-sum", got == want, || Counterexample {
                axiom: "M4-sum",
                step: i,
                crossings: vec![c],
                expected: vec_string(&want),
                actual: vec_string(&got),
            });
        }
    }
    report
}

/// The `S^1` projection of the homological parity is the label parity.
pub fn kunneth_holds(d: &Diagram) -> bool {
    project_s1(&homological_parity(d)).is_ok_and(|p| p == label_parity(d))
}
