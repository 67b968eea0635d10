//! Random diagrams and per-trial seeds for test campaigns.

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{CrossingId, Diagram, Sign, Symbol};

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub max_genus: usize,
    pub max_crossings: usize,
    pub max_jumps: usize,
    /// Marks are drawn from `-mark_range..=mark_range`.
    pub mark_range: i64,
    /// Upper bound on planted third-move triangles.
    pub max_triangles: usize,
}

impl Default for GenParams {
    fn default() -> Self {
        Self { max_genus: 3, max_crossings: 12, max_jumps: 6, mark_range: 2, max_triangles: 2 }
    }
}

/// Seed of trial `i` under `master`, independent of how trials are scheduled.
pub fn trial_seed(master: u64, i: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(i);
    rng.next_u64()
}

fn sign(rng: &mut impl Rng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn pm(rng: &mut impl Rng) -> i64 {
    if rng.gen() {
        1
    } else {
        -1
    }
}

/// A random valid diagram. Symbols come in shuffled units: single passages,
/// single jumps, and adjacent passage pairs forming R3 triangles. Edges
/// inside a pair stay unmarked so planted triangles are movable.
pub fn random_diagram(rng: &mut impl Rng, p: &GenParams) -> Diagram {
    let genus = rng.gen_range(0..=p.max_genus);
    let crossings = rng.gen_range(0..=p.max_crossings);
    let triangles = rng.gen_range(0..=p.max_triangles).min(crossings / 3);
    let jumps = rng.gen_range(0..=p.max_jumps);
    let mut units: Vec<Vec<Symbol>> = Vec::new();
    let mut next: CrossingId = 1;
    for _ in 0..triangles {
        let (a, b, c) = (next, next + 1, next + 2);
        next += 3;
        let (tau, mu, beta, omega) = (pm(rng), pm(rng), pm(rng), pm(rng));
        let s = |v: i64| Sign::from_value(v).expect("unit");
        let (sa, sb, sc) = (s(tau * mu * omega), s(tau * beta * omega), s(mu * beta * omega));
        let order = |flag: i64, x: Symbol, y: Symbol| if flag > 0 { vec![x, y] } else { vec![y, x] };
        units.push(order(tau, Symbol::over(a, sa), Symbol::over(b, sb)));
        units.push(order(mu, Symbol::under(a, sa), Symbol::over(c, sc)));
        units.push(order(beta, Symbol::under(b, sb), Symbol::under(c, sc)));
    }
    while (next as usize) <= crossings {
        let sg = sign(rng);
        units.push(vec![Symbol::over(next, sg)]);
        units.push(vec![Symbol::under(next, sg)]);
        next += 1;
    }
    for _ in 0..jumps {
        units.push(vec![Symbol::Jump(sign(rng))]);
    }
    units.shuffle(rng);

    let mut code = Vec::new();
    let mut free_edges = Vec::new();
    for u in &units {
        code.extend_from_slice(u);
        free_edges.push(code.len() - 1);
    }
    let mut marks = vec![vec![0; 2 * genus]; code.len().max(1)];
    if code.is_empty() {
        free_edges.push(0);
    }
    for e in free_edges {
        if rng.gen_bool(0.4) {
            for x in marks[e].iter_mut() {
                *x = rng.gen_range(-p.mark_range..=p.mark_range);
            }
        }
    }
    Diagram::from_dense(genus, code, marks).expect("generator builds valid diagrams")
}
