#![allow(dead_code)]

use std::collections::BTreeMap;

use knotwind::diagram::{Diagram, Sign, Symbol};
use knotwind::gen::{random_diagram, trial_seed, GenParams};
use knotwind::moves::{random_walk, MoveTrace};
use proptest::test_runner::Config;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MASTER_SEED: u64 = 20_251_019;

/// `trials` random walks of `steps` steps from generated start diagrams.
pub fn campaign(trials: u64, steps: usize, cap: usize) -> Vec<MoveTrace> {
    (0..trials)
        .map(|i| {
            let seed = trial_seed(MASTER_SEED, i);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let start = random_diagram(&mut rng, &GenParams::default());
            random_walk(&start, steps, seed, cap).expect("walks never get stuck")
        })
        .collect()
}

/// Gauss code of the closure of a braid word on `strands` strands, or `None`
/// when the closure has more than one component. Generator `i > 0` is
/// `sigma_i` (left strand over, positive), `-i` its inverse.
pub fn braid_closure(strands: usize, word: &[i32]) -> Option<Diagram> {
    let mut at: BTreeMap<(usize, usize), (u32, bool)> = BTreeMap::new();
    for (t, &g) in word.iter().enumerate() {
        let i = g.unsigned_abs() as usize - 1;
        at.insert((t, i), ((t + 1) as u32, g > 0));
    }
    let mut code = Vec::new();
    let mut pos = 0usize;
    let mut visited = vec![false; strands];
    loop {
        if visited[pos] {
            break;
        }
        visited[pos] = true;
        for t in 0..word.len() {
            let i = word[t].unsigned_abs() as usize - 1;
            if pos != i && pos != i + 1 {
                continue;
            }
            let (id, positive) = at[&(t, i)];
            let sign = if positive { Sign::Plus } else { Sign::Minus };
            let from_left = pos == i;
            // sigma_i: the strand coming from the left goes over
            let over = from_left == positive;
            code.push(if over { Symbol::over(id, sign) } else { Symbol::under(id, sign) });
            pos = if from_left { i + 1 } else { i };
        }
    }
    if visited.iter().any(|v| !v) {
        return None;
    }
    Diagram::new(0, code, BTreeMap::new()).ok()
}

pub fn random_braid_closure(rng: &mut impl Rng, max_crossings: usize) -> Diagram {
    loop {
        let strands = rng.gen_range(1..=4);
        if strands == 1 {
            return Diagram::empty(0);
        }
        let len = rng.gen_range(1..=max_crossings);
        let word: Vec<i32> = (0..len)
            .map(|_| {
                let g = rng.gen_range(1..strands) as i32;
                if rng.gen() {
                    g
                } else {
                    -g
                }
            })
            .collect();
        if let Some(d) = braid_closure(strands, &word) {
            return d;
        }
    }
}

/// Interleaving counts by brute force over all pairs of crossings.
pub fn gauss_oracle(d: &Diagram) -> BTreeMap<u32, usize> {
    let code = d.code();
    let pos = |c: u32| -> Vec<usize> { (0..code.len()).filter(|&k| code[k].crossing() == Some(c)).collect() };
    let mut out = BTreeMap::new();
    for c in d.crossings() {
        let pc = pos(c);
        let inside = |k: usize| pc[0] < k && k < pc[1];
        let n = d
            .crossings()
            .into_iter()
            .filter(|&x| x != c)
            .filter(|&x| {
                let px = pos(x);
                inside(px[0]) != inside(px[1])
            })
            .count();
        out.insert(c, n);
    }
    out
}

pub fn config(cases: u32) -> Config {
    Config { cases, failure_persistence: None, ..Config::default() }
}
