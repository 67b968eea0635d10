mod common;

use knotwind::diagram::{parse, serialize, Diagram, Symbol};
use knotwind::gen::{random_diagram, GenParams};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn diagram() -> impl Strategy<Value = Diagram> {
    any::<u64>().prop_map(|s| random_diagram(&mut ChaCha8Rng::seed_from_u64(s), &GenParams::default()))
}

/// Level of the edge after each symbol, walking from an arbitrary start.
fn levels_from(d: &Diagram, start: usize) -> Vec<i64> {
    let n = d.len();
    let mut out = vec![0; n];
    let mut level = 0;
    for k in 0..n {
        let i = (start + k) % n;
        level += d.code()[i].jump();
        out[i] = level;
    }
    out
}

proptest! {
    #![proptest_config(common::config(256))]

    #[test]
    fn codec_round_trip(d in diagram()) {
        let text = serialize(&d);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn arc_label_wrap_is_degree(d in diagram()) {
        let labels = d.arc_labels();
        let n = d.len();
        let mut defect = 0;
        for i in 0..n {
            let prev = labels[(i + n - 1) % n];
            defect += prev + d.code()[i].jump() - labels[i];
        }
        prop_assert_eq!(defect, d.degree());
        if n > 0 {
            // any other base shifts every label by one constant, except across the base
            let other = levels_from(&d, 0);
            prop_assert_eq!(&other[..n - 1], &labels[..n - 1]);
        }
    }

    #[test]
    fn raw_labels_ignore_rotation(d in diagram(), k in 0usize..64) {
        let r = d.rotated(k);
        for c in d.crossings() {
            prop_assert_eq!(d.raw_label(c).unwrap(), r.raw_label(c).unwrap());
            prop_assert_eq!(d.half_curve_class(c).unwrap(), r.half_curve_class(c).unwrap());
        }
        prop_assert_eq!(d.knot_class(), r.knot_class());
    }

    #[test]
    fn half_curves(d in diagram()) {
        let k = d.knot_class();
        for c in d.crossings() {
            let h = d.half_curve_class(c).unwrap().vector;
            prop_assert_eq!(*h.last().unwrap(), d.raw_label(c).unwrap());
            let g = d.complementary_half_curve_class(c).unwrap().vector;
            let total: Vec<i64> = h.iter().zip(&g).map(|(a, b)| a + b).collect();
            prop_assert_eq!(&total, &k);
        }
    }

    #[test]
    fn labels_agree_across_passages(d in diagram()) {
        // levels change only at jumps, so the edges on both sides of a passage agree
        let labels = d.arc_labels();
        let n = d.len();
        for i in 0..n.saturating_sub(1) {
            if let Symbol::Passage { .. } = d.code()[i] {
                prop_assert_eq!(labels[(i + n - 1) % n], labels[i]);
            }
        }
    }

    #[test]
    fn raw_label_matches_level_difference(d in diagram()) {
        // b - a from levels, mod degree
        let labels = d.arc_labels();
        let deg = d.degree();
        for c in d.crossings() {
            let p = d.passages(c).unwrap();
            let diff = labels[p.over] - labels[p.under];
            let raw = d.raw_label(c).unwrap();
            if deg == 0 {
                prop_assert_eq!(diff, raw);
            } else {
                prop_assert_eq!((diff - raw).rem_euclid(deg.abs()), 0);
            }
        }
    }
}

#[test]
fn worked_examples() {
    let d = parse("genus 0\ncode O1+ J+ U1+ J-").unwrap();
    assert_eq!(d.degree(), 0);
    assert_eq!(d.raw_label(1).unwrap(), -1);
    let e = parse("genus 0\ncode O1+ J+ U1+ J+").unwrap();
    let l = e.crossing_label(1).unwrap();
    assert_eq!((l.raw, l.reduced.to_string()), (1, "1".to_string()));
    let k = parse("genus 1\ncode O1+ U1+\nmark 0 1 0\nmark 1 0 2").unwrap();
    assert_eq!(k.knot_class(), vec![1, 2, 0]);
}
