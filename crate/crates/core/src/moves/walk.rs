use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{list_moves, Move, MoveError, MoveKind, MoveTrace};
use crate::diagram::{Diagram, Mark, Sign};

/// A seeded random walk of exactly `steps` moves. The kind is drawn
/// uniformly among kinds with an admissible move, then the move uniformly
/// within the kind. Above `cap` symbols only removals are admissible; when
/// nothing is admissible the moves of least growth are used.
/// Additions get random signs and small random trailing marks.
pub fn random_walk(d: &Diagram, steps: usize, seed: u64, cap: usize) -> Result<MoveTrace, MoveError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = MoveTrace::new(d.clone());
    for _ in 0..steps {
        let cur = trace.last();
        let n = cur.len() as isize;
        let all = list_moves(cur);
        let fits = |m: &&Move| n + m.kind().length_delta() <= cap as isize;
        let mut pool: Vec<&Move> = if cur.len() > cap {
            all.iter().filter(|m| m.kind().is_remove()).collect()
        } else {
            all.iter().filter(fits).collect()
        };
        if pool.is_empty() {
            // nothing shrinks or fits: take the least growth available
            let least = all.iter().map(|m| m.kind().length_delta()).min().unwrap_or(0);
            pool = all.iter().filter(|m| m.kind().length_delta() == least).collect();
        }
        let mut by_kind: BTreeMap<MoveKind, Vec<&Move>> = BTreeMap::new();
        for m in pool {
            by_kind.entry(m.kind()).or_default().push(m);
        }
        let kinds: Vec<MoveKind> = by_kind.keys().copied().collect();
        let kind = kinds.choose(&mut rng).ok_or(MoveError::Stuck)?;
        let chosen = by_kind[kind].choose(&mut rng).expect("nonempty kind");
        let g2 = 2 * cur.genus();
        let mv = randomize(chosen, g2, &mut rng);
        trace.push(mv)?;
    }
    Ok(trace)
}

fn small_mark(g2: usize, rng: &mut impl Rng) -> Mark {
    (0..g2).map(|_| rng.gen_range(-1..=1)).collect()
}

fn sign(rng: &mut impl Rng) -> Sign {
    if rng.gen() {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn randomize(m: &Move, g2: usize, rng: &mut impl Rng) -> Move {
    match m {
        Move::R1Add { pos, id, over_first, sign: s, .. } => {
            Move::R1Add { pos: *pos, id: *id, over_first: *over_first, sign: *s, trailing: small_mark(g2, rng) }
        }
        Move::R2Add { over_pos, under_pos, ids, parallel, .. } => Move::R2Add {
            over_pos: *over_pos,
            under_pos: *under_pos,
            ids: *ids,
            first_sign: sign(rng),
            parallel: *parallel,
            over_trailing: small_mark(g2, rng),
            under_trailing: small_mark(g2, rng),
        },
        Move::JcancelAdd { pos, first, .. } => Move::JcancelAdd { pos: *pos, first: *first, trailing: small_mark(g2, rng) },
        other => other.clone(),
    }
}
