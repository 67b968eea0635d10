mod common;

use knotwind::diagram::Diagram;
use knotwind::moves::MoveTrace;
use knotwind::parity::{check_axioms, label_parity, Parity, ParityAssignment, ParityError, ParityKind};
use knotwind::universal::{build_universal, factor};

/// Label parity with one value shifted by 1 on one particular diagram.
struct Shifted {
    on: Diagram,
}

impl Parity for Shifted {
    fn name(&self) -> String {
        "shifted-label".into()
    }

    fn assign(&self, d: &Diagram) -> Result<ParityAssignment, ParityError> {
        let mut p = label_parity(d);
        if d == &self.on {
            if let Some(x) = p.values.values_mut().next() {
                *x = x.try_add(&p.group.element(&[1]).unwrap()).unwrap();
            }
        }
        Ok(p)
    }
}

#[test]
fn corrupted_parity_is_caught_at_first_affected_step() {
    let traces = common::campaign(10, 60, 30);
    // a degree other than 1 so that shifting by 1 changes the value
    let t = traces.iter().find(|t| t.start.degree().abs() != 1 && t.diagram(20).crossing_count() > 0).unwrap();
    let target = t.diagram(20).clone();
    let first = t.diagrams().position(|d| d == &target).unwrap();
    let r = check_axioms(t, &Shifted { on: target }).unwrap();
    assert!(!r.passed());
    let cx = &r.counterexamples[0];
    assert_eq!(cx.step + 1, first.max(1), "{r}");
    assert!(r.failures("A1") + r.failures("A2") + r.failures("A3") + r.failures("A4") + r.failures("A5") > 0);
}

#[test]
fn label_mod_two_on_even_degree() {
    for t in common::campaign(30, 80, 30) {
        if t.start.degree() % 2 != 0 {
            continue;
        }
        let r = check_axioms(&t, &ParityKind::LabelMod(2)).unwrap();
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn oriented_sg_parity() {
    for t in common::campaign(30, 80, 30) {
        let r = check_axioms(&t, &ParityKind::HomologicalSgOriented).unwrap();
        assert!(r.passed(), "{r}");
        assert!(!r.tallies.contains_key("A4"));
    }
}

#[test]
fn presentation_is_replay_stable_and_rho_unique() {
    for t in common::campaign(5, 50, 30) {
        let u = build_universal(&t).unwrap();
        let again = MoveTrace::from_jsonl(&t.to_jsonl()).unwrap();
        assert_eq!(again, t);
        let v = build_universal(&again).unwrap();
        assert_eq!(u.generators, v.generators);
        assert_eq!(u.relations, v.relations);
        // the groups are distinct allocations, so compare representatives
        let reps = |w: &knotwind::universal::UniversalPresentation| -> Vec<Vec<num_bigint::BigInt>> {
            w.classes.values().map(|x| x.rep().to_vec()).collect()
        };
        assert_eq!(reps(&u), reps(&v));
        assert_eq!(u.report_json(), v.report_json());
        for kind in [ParityKind::Label, ParityKind::Gauss, ParityKind::Homological] {
            let h1 = factor(&u, &t, &kind).unwrap();
            let h2 = factor(&v, &again, &kind).unwrap();
            let (h1, h2) = (h1.hom().unwrap(), h2.hom().unwrap());
            let xs = u.classes.values().chain([&u.one_class]);
            let ys = v.classes.values().chain([&v.one_class]);
            for (x, y) in xs.zip(ys) {
                assert_eq!(h1.apply(x).unwrap(), h2.apply(y).unwrap());
            }
        }
    }
}

#[test]
fn homological_s1_factors_like_label() {
    for t in common::campaign(5, 50, 30) {
        let u = build_universal(&t).unwrap();
        let a = factor(&u, &t, &ParityKind::HomologicalS1).unwrap();
        let b = factor(&u, &t, &ParityKind::Label).unwrap();
        let (a, b) = (a.hom().unwrap(), b.hom().unwrap());
        assert_eq!(a.images(), b.images());
    }
}
