//! The move calculus on double-line diagrams.
//!
//! Reidemeister moves act inside a disc away from the cut fiber, so their
//! discs carry no jumps and only zero marks. `M4prime` is the crossing change
//! along `S^1`; `Jslide` pushes a crossing through the fiber and `Jcancel`
//! creates or removes a cancelling pair of double lines on one strand.

mod splice;
mod trace;
mod walk;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diagram::{CrossingId, Diagram, DiagramError, Mark, Role, Sign, Symbol};
use splice::Placed;

pub use trace::{move_from_json, move_from_parts, MoveTrace, TraceError, TraceStep};
pub use walk::random_walk;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    R1Add,
    R1Remove,
    R2Add,
    R2Remove,
    R3,
    M4Prime,
    JcancelAdd,
    JcancelRemove,
    Jslide,
}

impl MoveKind {
    pub const ALL: [MoveKind; 9] = [
        MoveKind::R1Add,
        MoveKind::R1Remove,
        MoveKind::R2Add,
        MoveKind::R2Remove,
        MoveKind::R3,
        MoveKind::M4Prime,
        MoveKind::JcancelAdd,
        MoveKind::JcancelRemove,
        MoveKind::Jslide,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MoveKind::R1Add => "R1_add",
            MoveKind::R1Remove => "R1_remove",
            MoveKind::R2Add => "R2_add",
            MoveKind::R2Remove => "R2_remove",
            MoveKind::R3 => "R3",
            MoveKind::M4Prime => "M4prime",
            MoveKind::JcancelAdd => "Jcancel_add",
            MoveKind::JcancelRemove => "Jcancel_remove",
            MoveKind::Jslide => "Jslide",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// Change in code length.
    pub fn length_delta(self) -> isize {
        match self {
            MoveKind::R1Add | MoveKind::M4Prime | MoveKind::JcancelAdd => 2,
            MoveKind::R2Add => 4,
            MoveKind::R1Remove | MoveKind::JcancelRemove => -2,
            MoveKind::R2Remove => -4,
            MoveKind::R3 | MoveKind::Jslide => 0,
        }
    }

    pub fn is_remove(self) -> bool {
        matches!(self, MoveKind::R1Remove | MoveKind::R2Remove | MoveKind::JcancelRemove)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An elementary move. Positions of `*_remove`, `R3` refer to the source
/// code; positions of `*_add` refer to the resulting code. A pair starting at
/// `p` occupies `p` and `p + 1` (cyclically). Empty marks stand for zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Move {
    R1Add { pos: usize, id: CrossingId, over_first: bool, sign: Sign, trailing: Mark },
    R1Remove { pos: usize },
    R2Add {
        over_pos: usize,
        under_pos: usize,
        ids: [CrossingId; 2],
        first_sign: Sign,
        /// Under pair in the same order as the over pair.
        parallel: bool,
        over_trailing: Mark,
        under_trailing: Mark,
    },
    R2Remove { over_pos: usize, under_pos: usize },
    /// Starts of the three adjacent passage pairs of the triangle.
    R3 { pairs: [usize; 3] },
    M4Prime { crossing: CrossingId },
    JcancelAdd { pos: usize, first: Sign, trailing: Mark },
    JcancelRemove { pos: usize },
    /// Forward moves the jumps in front of both passages to just behind them.
    Jslide { crossing: CrossingId, forward: bool },
}

impl Move {
    pub fn kind(&self) -> MoveKind {
        match self {
            Move::R1Add { .. } => MoveKind::R1Add,
            Move::R1Remove { .. } => MoveKind::R1Remove,
            Move::R2Add { .. } => MoveKind::R2Add,
            Move::R2Remove { .. } => MoveKind::R2Remove,
            Move::R3 { .. } => MoveKind::R3,
            Move::M4Prime { .. } => MoveKind::M4Prime,
            Move::JcancelAdd { .. } => MoveKind::JcancelAdd,
            Move::JcancelRemove { .. } => MoveKind::JcancelRemove,
            Move::Jslide { .. } => MoveKind::Jslide,
        }
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rec = trace::MoveRecord::from(self);
        write!(f, "{} at {:?}", rec.kind, rec.site)
    }
}

/// How crossings of consecutive diagrams correspond.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Correspondence {
    pub surviving: BTreeMap<CrossingId, CrossingId>,
    pub created: BTreeSet<CrossingId>,
    pub destroyed: BTreeSet<CrossingId>,
    /// `(v1, v2, v3)` of a third move; `v1`, `v3` lie on the middle strand.
    pub r3_roles: Option<[CrossingId; 3]>,
    /// The crossing changed by `M4prime`; it survives under the same id.
    pub m4_target: Option<CrossingId>,
}

impl Correspondence {
    fn identity(d: &Diagram) -> Self {
        Self { surviving: d.crossings().into_iter().map(|c| (c, c)).collect(), ..Self::default() }
    }

    fn with_destroyed(d: &Diagram, gone: &[CrossingId]) -> Self {
        let mut c = Self::identity(d);
        for g in gone {
            c.surviving.remove(g);
            c.destroyed.insert(*g);
        }
        c
    }

    fn with_created(d: &Diagram, new: &[CrossingId]) -> Self {
        let mut c = Self::identity(d);
        c.created.extend(new.iter().copied());
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("{kind} not applicable: {reason}")]
    NotApplicable { kind: MoveKind, reason: String },
    #[error("no applicable move under the size cap")]
    Stuck,
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn na(kind: MoveKind, reason: impl Into<String>) -> MoveError {
    MoveError::NotApplicable { kind, reason: reason.into() }
}

fn is_zero(m: &Mark) -> bool {
    m.iter().all(|&x| x == 0)
}

fn normalize(d: &Diagram, kind: MoveKind, m: &Mark) -> Result<Mark, MoveError> {
    let g2 = 2 * d.genus();
    if m.is_empty() {
        Ok(vec![0; g2])
    } else if m.len() == g2 {
        Ok(m.clone())
    } else {
        Err(na(kind, format!("mark parameter must have {g2} entries")))
    }
}

fn passage(s: Symbol) -> Option<(CrossingId, Role, Sign)> {
    match s {
        Symbol::Passage { id, role, sign } => Some((id, role, sign)),
        Symbol::Jump(_) => None,
    }
}

fn check_pos(d: &Diagram, kind: MoveKind, p: usize) -> Result<(), MoveError> {
    if p >= d.len() {
        return Err(na(kind, format!("position {p} out of range for code of length {}", d.len())));
    }
    Ok(())
}

fn check_fresh(d: &Diagram, kind: MoveKind, ids: &[CrossingId]) -> Result<(), MoveError> {
    let existing: BTreeSet<CrossingId> = d.crossings().into_iter().collect();
    let mut seen = BTreeSet::new();
    for &id in ids {
        if id == 0 || existing.contains(&id) || !seen.insert(id) {
            return Err(na(kind, format!("crossing id {id} is not fresh")));
        }
    }
    Ok(())
}

fn place(d: &Diagram, kind: MoveKind, items: &[Placed]) -> Result<Diagram, MoveError> {
    splice::insert(d, items).ok_or_else(|| na(kind, "insertion positions overlap or are out of range"))
}

/// Swaps the symbols of the listed adjacent pairs; edge marks stay in place.
fn swap_pairs(d: &Diagram, pairs: &[(usize, usize)]) -> Diagram {
    let (genus, mut code, marks) = d.clone().into_parts();
    for &(a, b) in pairs {
        code.swap(a, b);
    }
    Diagram::from_parts_unchecked(genus, code, marks)
}

/// The triangle of a third move, with roles resolved.
struct Triangle {
    /// Crossing between the top and middle strands.
    a: CrossingId,
    /// Crossing between the top and bottom strands.
    b: CrossingId,
    /// Crossing between the middle and bottom strands.
    c: CrossingId,
}

fn r3_triangle(d: &Diagram, pairs: [usize; 3]) -> Result<Triangle, MoveError> {
    let kind = MoveKind::R3;
    let n = d.len();
    let mut positions = BTreeSet::new();
    let mut read = Vec::new();
    for p in pairs {
        check_pos(d, kind, p)?;
        let q = (p + 1) % n;
        if !positions.insert(p) || !positions.insert(q) {
            return Err(na(kind, "the three pairs overlap"));
        }
        let (x, rx, sx) = passage(d.code()[p]).ok_or_else(|| na(kind, format!("position {p} is a jump")))?;
        let (y, ry, sy) = passage(d.code()[q]).ok_or_else(|| na(kind, format!("position {q} is a jump")))?;
        if x == y {
            return Err(na(kind, format!("pair at {p} is a single crossing")));
        }
        if !is_zero(d.mark(p)) {
            return Err(na(kind, format!("edge {p} inside the move disc is marked")));
        }
        read.push([(x, rx, sx), (y, ry, sy)]);
    }
    let top = read.iter().position(|r| r[0].1 == Role::Over && r[1].1 == Role::Over);
    let bottom = read.iter().position(|r| r[0].1 == Role::Under && r[1].1 == Role::Under);
    let (Some(t), Some(bo)) = (top, bottom) else {
        return Err(na(kind, "need one over-over pair and one under-under pair"));
    };
    let m = 3 - t - bo;
    if m == t || m == bo || m > 2 {
        return Err(na(kind, "need one over-over pair and one under-under pair"));
    }
    let (tp, mp, bp) = (read[t], read[m], read[bo]);
    let ids = |r: [(CrossingId, Role, Sign); 2]| [r[0].0, r[1].0];
    let (ti, mi, bi) = (ids(tp), ids(mp), ids(bp));
    let b = *ti.iter().find(|x| bi.contains(x)).ok_or_else(|| na(kind, "top and bottom strands share no crossing"))?;
    let a = if ti[0] == b { ti[1] } else { ti[0] };
    let c = if bi[0] == b { bi[1] } else { bi[0] };
    if a == c || !mi.contains(&a) || !mi.contains(&c) {
        return Err(na(kind, "the pairs do not form a triangle"));
    }
    // orientation of each strand through the triangle
    let tau = if ti[0] == a { 1 } else { -1 };
    let mu = if mi[0] == a { 1 } else { -1 };
    let beta = if bi[0] == b { 1 } else { -1 };
    let sign = |x: CrossingId| d.crossing_sign(x).expect("present").value();
    let (sa, sb, sc) = (sign(a) * tau * mu, sign(b) * tau * beta, sign(c) * mu * beta);
    if sa != sb || sb != sc {
        return Err(na(kind, "crossing signs are inconsistent with a planar triangle"));
    }
    Ok(Triangle { a, b, c })
}

pub fn apply(d: &Diagram, m: &Move) -> Result<(Diagram, Correspondence), MoveError> {
    let kind = m.kind();
    let n = d.len();
    match m {
        Move::R1Remove { pos } => {
            check_pos(d, kind, *pos)?;
            let q = (pos + 1) % n;
            let (x, _, _) = passage(d.code()[*pos]).ok_or_else(|| na(kind, "first symbol is a jump"))?;
            let (y, _, _) = passage(d.code()[q]).ok_or_else(|| na(kind, "second symbol is a jump"))?;
            if x != y || n < 2 {
                return Err(na(kind, "the pair is not both passages of one crossing"));
            }
            if !is_zero(d.mark(*pos)) {
                return Err(na(kind, format!("loop edge {pos} is marked")));
            }
            let (r, _) = splice::remove(d, &[*pos, q]);
            Ok((r, Correspondence::with_destroyed(d, &[x])))
        }
        Move::R1Add { pos, id, over_first, sign, trailing } => {
            check_fresh(d, kind, &[*id])?;
            let total = n + 2;
            if *pos >= total {
                return Err(na(kind, format!("position {pos} out of range")));
            }
            let trailing = normalize(d, kind, trailing)?;
            let (first, second) = if *over_first {
                (Symbol::over(*id, *sign), Symbol::under(*id, *sign))
            } else {
                (Symbol::under(*id, *sign), Symbol::over(*id, *sign))
            };
            let items = [
                Placed { pos: *pos, symbol: first, mark: vec![0; 2 * d.genus()] },
                Placed { pos: (pos + 1) % total, symbol: second, mark: trailing },
            ];
            Ok((place(d, kind, &items)?, Correspondence::with_created(d, &[*id])))
        }
        Move::R2Remove { over_pos, under_pos } => {
            check_pos(d, kind, *over_pos)?;
            check_pos(d, kind, *under_pos)?;
            let (p, q) = (*over_pos, *under_pos);
            let (p1, q1) = ((p + 1) % n, (q + 1) % n);
            let read = |i: usize| passage(d.code()[i]).ok_or_else(|| na(kind, format!("position {i} is a jump")));
            let (a, ra, sa) = read(p)?;
            let (b, rb, sb) = read(p1)?;
            let (x, rx, _) = read(q)?;
            let (y, ry, _) = read(q1)?;
            if ra != Role::Over || rb != Role::Over || rx != Role::Under || ry != Role::Under {
                return Err(na(kind, "need an over-over pair and an under-under pair"));
            }
            if a == b || !((x == a && y == b) || (x == b && y == a)) {
                return Err(na(kind, "the pairs do not pass the same two crossings"));
            }
            if sa == sb {
                return Err(na(kind, "the two crossings must have opposite signs"));
            }
            if !is_zero(d.mark(p)) || !is_zero(d.mark(q)) {
                return Err(na(kind, "an edge inside the bigon is marked"));
            }
            let (r, _) = splice::remove(d, &[p, p1, q, q1]);
            Ok((r, Correspondence::with_destroyed(d, &[a, b])))
        }
        Move::R2Add { over_pos, under_pos, ids, first_sign, parallel, over_trailing, under_trailing } => {
            check_fresh(d, kind, ids)?;
            let total = n + 4;
            if *over_pos >= total || *under_pos >= total {
                return Err(na(kind, "position out of range"));
            }
            let [a, b] = *ids;
            let (sa, sb) = (*first_sign, first_sign.flip());
            let zero = vec![0; 2 * d.genus()];
            let (u1, u2) = if *parallel {
                (Symbol::under(a, sa), Symbol::under(b, sb))
            } else {
                (Symbol::under(b, sb), Symbol::under(a, sa))
            };
            let items = [
                Placed { pos: *over_pos, symbol: Symbol::over(a, sa), mark: zero.clone() },
                Placed { pos: (over_pos + 1) % total, symbol: Symbol::over(b, sb), mark: normalize(d, kind, over_trailing)? },
                Placed { pos: *under_pos, symbol: u1, mark: zero },
                Placed { pos: (under_pos + 1) % total, symbol: u2, mark: normalize(d, kind, under_trailing)? },
            ];
            Ok((place(d, kind, &items)?, Correspondence::with_created(d, ids)))
        }
        Move::R3 { pairs } => {
            let t = r3_triangle(d, *pairs)?;
            let swaps: Vec<(usize, usize)> = pairs.iter().map(|&p| (p, (p + 1) % n)).collect();
            let mut corr = Correspondence::identity(d);
            corr.r3_roles = Some([t.a, t.b, t.c]);
            Ok((swap_pairs(d, &swaps), corr))
        }
        Move::M4Prime { crossing } => {
            let ps = d.passages(*crossing).map_err(|_| na(kind, format!("no crossing {crossing}")))?;
            let (genus, mut code, marks) = d.clone().into_parts();
            for i in [ps.over, ps.under] {
                if let Symbol::Passage { role, sign, .. } = &mut code[i] {
                    *role = role.swap();
                    *sign = sign.flip();
                }
            }
            let outgoing = marks[ps.over].clone();
            let swapped = Diagram::from_parts_unchecked(genus, code, marks);
            let items = [
                Placed { pos: ps.over, symbol: Symbol::Jump(Sign::Plus), mark: vec![0; 2 * genus] },
                Placed { pos: ps.over + 2, symbol: Symbol::Jump(Sign::Minus), mark: outgoing },
            ];
            let mut corr = Correspondence::identity(d);
            corr.m4_target = Some(*crossing);
            Ok((place(&swapped, kind, &items)?, corr))
        }
        Move::JcancelRemove { pos } => {
            check_pos(d, kind, *pos)?;
            let q = (pos + 1) % n;
            match (d.code()[*pos], d.code()[q]) {
                (Symbol::Jump(x), Symbol::Jump(y)) if x != y && n >= 2 => {}
                _ => return Err(na(kind, "need two adjacent jumps of opposite direction")),
            }
            if !is_zero(d.mark(*pos)) {
                return Err(na(kind, format!("edge {pos} between the jumps is marked")));
            }
            let (r, _) = splice::remove(d, &[*pos, q]);
            Ok((r, Correspondence::identity(d)))
        }
        Move::JcancelAdd { pos, first, trailing } => {
            let total = n + 2;
            if *pos >= total {
                return Err(na(kind, format!("position {pos} out of range")));
            }
            let items = [
                Placed { pos: *pos, symbol: Symbol::Jump(*first), mark: vec![0; 2 * d.genus()] },
                Placed { pos: (pos + 1) % total, symbol: Symbol::Jump(first.flip()), mark: normalize(d, kind, trailing)? },
            ];
            Ok((place(d, kind, &items)?, Correspondence::identity(d)))
        }
        Move::Jslide { crossing, forward } => {
            let ps = d.passages(*crossing).map_err(|_| na(kind, format!("no crossing {crossing}")))?;
            let swaps = jslide_swaps(d, ps.over, ps.under, *forward).map_err(|r| na(kind, r))?;
            Ok((swap_pairs(d, &swaps), Correspondence::identity(d)))
        }
    }
}

fn jslide_swaps(d: &Diagram, over: usize, under: usize, forward: bool) -> Result<Vec<(usize, usize)>, String> {
    let n = d.len();
    let side = |p: usize| if forward { (p + n - 1) % n } else { (p + 1) % n };
    let (jo, ju) = (side(over), side(under));
    let (Symbol::Jump(x), Symbol::Jump(y)) = (d.code()[jo], d.code()[ju]) else {
        let where_ = if forward { "in front of" } else { "behind" };
        return Err(format!("need a jump {where_} both passages"));
    };
    if x != y {
        return Err("the two jumps must have the same direction".into());
    }
    // the edge between jump and passage
    let (eo, eu) = if forward { (jo, ju) } else { (over, under) };
    if !is_zero(d.mark(eo)) || !is_zero(d.mark(eu)) {
        return Err("an edge between a jump and its passage is marked".into());
    }
    Ok(vec![(jo, over), (ju, under)])
}

/// Sites of removable first-move loops with their crossings.
pub fn kink_sites(d: &Diagram) -> Vec<(usize, CrossingId)> {
    let n = d.len();
    let code = d.code();
    (0..n)
        .filter(|&p| n >= 2 && is_zero(d.mark(p)))
        .filter_map(|p| match (code[p], code[(p + 1) % n]) {
            (Symbol::Passage { id: x, .. }, Symbol::Passage { id: y, .. }) if x == y => Some((p, x)),
            _ => None,
        })
        .collect()
}

/// Every applicable move. Removal, slide and third moves are listed
/// exhaustively; additions at every site with canonical parameters (fresh
/// ids, zero trailing marks, first R2 crossing positive).
pub fn list_moves(d: &Diagram) -> Vec<Move> {
    let n = d.len();
    let mut out = Vec::new();
    let index = d.passage_index();
    let code = d.code();

    out.extend(kink_sites(d).into_iter().map(|(pos, _)| Move::R1Remove { pos }));
    for p in 0..n {
        let q = (p + 1) % n;
        if n >= 2 && is_zero(d.mark(p)) {
            if let (Symbol::Jump(x), Symbol::Jump(y)) = (code[p], code[q]) {
                if x != y {
                    out.push(Move::JcancelRemove { pos: p });
                }
            }
        }
    }

    for p in 0..n {
        let q = (p + 1) % n;
        let (Some((a, Role::Over, sa)), Some((b, Role::Over, sb))) = (passage(code[p]), passage(code[q])) else {
            continue;
        };
        if a == b || sa == sb || !is_zero(d.mark(p)) || n < 4 {
            continue;
        }
        let (ua, ub) = (index[&a].under, index[&b].under);
        let start = if ub == (ua + 1) % n {
            ua
        } else if ua == (ub + 1) % n {
            ub
        } else {
            continue;
        };
        if is_zero(d.mark(start)) {
            out.push(Move::R2Remove { over_pos: p, under_pos: start });
        }
    }

    out.extend(r3_sites(d).into_iter().map(|pairs| Move::R3 { pairs }));

    for (&c, ps) in &index {
        out.push(Move::M4Prime { crossing: c });
        for forward in [true, false] {
            if jslide_swaps(d, ps.over, ps.under, forward).is_ok() {
                out.push(Move::Jslide { crossing: c, forward });
            }
        }
    }

    let fresh = d.max_crossing_id() + 1;
    for pos in 0..n + 2 {
        for over_first in [true, false] {
            for sign in [Sign::Plus, Sign::Minus] {
                out.push(Move::R1Add { pos, id: fresh, over_first, sign, trailing: Vec::new() });
            }
        }
        for first in [Sign::Plus, Sign::Minus] {
            out.push(Move::JcancelAdd { pos, first, trailing: Vec::new() });
        }
    }
    let total = n + 4;
    for over_pos in 0..total {
        for under_pos in 0..total {
            let taken = [over_pos, (over_pos + 1) % total];
            if taken.contains(&under_pos) || taken.contains(&((under_pos + 1) % total)) {
                continue;
            }
            for parallel in [true, false] {
                out.push(Move::R2Add {
                    over_pos,
                    under_pos,
                    ids: [fresh, fresh + 1],
                    first_sign: Sign::Plus,
                    parallel,
                    over_trailing: Vec::new(),
                    under_trailing: Vec::new(),
                });
            }
        }
    }
    out
}

fn r3_sites(d: &Diagram) -> Vec<[usize; 3]> {
    let n = d.len();
    let code = d.code();
    // adjacent passage pairs of distinct crossings with an unmarked middle edge
    let mut pairs: Vec<(usize, CrossingId, Role, CrossingId, Role)> = Vec::new();
    for p in 0..n {
        let q = (p + 1) % n;
        if n < 2 || !is_zero(d.mark(p)) {
            continue;
        }
        if let (Some((x, rx, _)), Some((y, ry, _))) = (passage(code[p]), passage(code[q])) {
            if x != y {
                pairs.push((p, x, rx, y, ry));
            }
        }
    }
    let mut sites = BTreeSet::new();
    for t in pairs.iter().filter(|t| t.2 == Role::Over && t.4 == Role::Over) {
        for bo in pairs.iter().filter(|b| b.2 == Role::Under && b.4 == Role::Under) {
            for m in pairs.iter().filter(|m| m.2 != m.4) {
                let mut s = [t.0, m.0, bo.0];
                s.sort_unstable();
                if sites.contains(&s) {
                    continue;
                }
                if r3_triangle(d, s).is_ok() {
                    sites.insert(s);
                }
            }
        }
    }
    sites.into_iter().collect()
}

/// Moves that undo `m` applied to `source`, in application order. Every kind
/// inverts to a single move except `M4prime`, whose inverse is the change
/// itself followed by a slide and two cancellations of the inserted jumps.
pub fn invert(source: &Diagram, m: &Move) -> Result<Vec<Move>, MoveError> {
    let (target, _) = apply(source, m)?;
    let n = source.len();
    let code = source.code();
    let inv = match m {
        Move::R1Remove { pos } => {
            let q = (pos + 1) % n;
            let (id, role, sign) = passage(code[*pos]).expect("validated");
            vec![Move::R1Add { pos: *pos, id, over_first: role == Role::Over, sign, trailing: source.mark(q).clone() }]
        }
        Move::R1Add { pos, .. } => vec![Move::R1Remove { pos: *pos }],
        Move::R2Remove { over_pos, under_pos } => {
            let (a, _, sa) = passage(code[*over_pos]).expect("validated");
            let (x, _, _) = passage(code[*under_pos]).expect("validated");
            let (p1, q1) = ((over_pos + 1) % n, (under_pos + 1) % n);
            let (b, _, _) = passage(code[p1]).expect("validated");
            vec![Move::R2Add {
                over_pos: *over_pos,
                under_pos: *under_pos,
                ids: [a, b],
                first_sign: sa,
                parallel: x == a,
                over_trailing: source.mark(p1).clone(),
                under_trailing: source.mark(q1).clone(),
            }]
        }
        Move::R2Add { over_pos, under_pos, .. } => vec![Move::R2Remove { over_pos: *over_pos, under_pos: *under_pos }],
        Move::R3 { pairs } => vec![Move::R3 { pairs: *pairs }],
        Move::Jslide { crossing, forward } => vec![Move::Jslide { crossing: *crossing, forward: !forward }],
        Move::JcancelRemove { pos } => {
            let Symbol::Jump(first) = code[*pos] else { unreachable!("validated") };
            vec![Move::JcancelAdd { pos: *pos, first, trailing: source.mark((pos + 1) % n).clone() }]
        }
        Move::JcancelAdd { pos, .. } => vec![Move::JcancelRemove { pos: *pos }],
        Move::M4Prime { crossing } => {
            let c = *crossing;
            let mut seq = vec![Move::M4Prime { crossing: c }, Move::Jslide { crossing: c, forward: true }];
            let mut cur = target;
            for mv in &seq {
                cur = apply(&cur, mv)?.0;
            }
            // the slid jump pairs now trail each passage
            for role in [Role::Over, Role::Under] {
                let ps = cur.passages(c)?;
                let at = if role == Role::Over { ps.over } else { ps.under };
                let mv = Move::JcancelRemove { pos: (at + 1) % cur.len() };
                cur = apply(&cur, &mv)?.0;
                seq.push(mv);
            }
            seq
        }
    };
    Ok(inv)
}

/// Applies a sequence of moves, returning the final diagram.
pub fn apply_all(d: &Diagram, moves: &[Move]) -> Result<Diagram, MoveError> {
    moves.iter().try_fold(d.clone(), |cur, m| apply(&cur, m).map(|(r, _)| r))
}
