//! Removal and insertion of symbols, exact inverses of each other.
//!
//! Removing a symbol folds the mark of its outgoing edge into the nearest
//! surviving predecessor. Inserting takes positions in the *result* code:
//! survivors fill the free slots in order and the predecessor of each run of
//! inserted symbols gives up the marks assigned to the run.

use crate::diagram::{Diagram, Mark, Symbol};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Placed {
    pub pos: usize,
    pub symbol: Symbol,
    /// Mark of the edge leaving the symbol.
    pub mark: Mark,
}

fn add_into(acc: &mut Mark, m: &Mark) {
    for (a, b) in acc.iter_mut().zip(m) {
        *a += b;
    }
}

fn sub_from(acc: &mut Mark, m: &Mark) {
    for (a, b) in acc.iter_mut().zip(m) {
        *a -= b;
    }
}

pub(crate) fn remove(d: &Diagram, positions: &[usize]) -> (Diagram, Vec<Placed>) {
    let n = d.len();
    let mut gone = vec![false; n];
    for &p in positions {
        debug_assert!(p < n && !gone[p], "positions must be distinct and in range");
        gone[p] = true;
    }
    let removed: Vec<Placed> = (0..n)
        .filter(|&p| gone[p])
        .map(|p| Placed { pos: p, symbol: d.code()[p], mark: d.mark(p).clone() })
        .collect();
    let genus = d.genus();
    if gone.iter().all(|&g| g) {
        let mut circle = vec![0; 2 * genus];
        for m in d.marks() {
            add_into(&mut circle, m);
        }
        return (Diagram::from_parts_unchecked(genus, Vec::new(), vec![circle]), removed);
    }
    let mut code = Vec::with_capacity(n - removed.len());
    let mut marks: Vec<Mark> = Vec::with_capacity(n - removed.len());
    let first = gone.iter().position(|&g| !g).expect("a survivor exists");
    for p in 0..n {
        if !gone[p] {
            code.push(d.code()[p]);
            marks.push(d.mark(p).clone());
        } else if p > first {
            add_into(marks.last_mut().expect("survivor before"), d.mark(p));
        }
    }
    // removed symbols ahead of the first survivor trail the last survivor
    for p in 0..first {
        add_into(marks.last_mut().expect("a survivor exists"), d.mark(p));
    }
    (Diagram::from_parts_unchecked(genus, code, marks), removed)
}

/// Inserts `items` at their result positions. Returns `None` when the
/// positions are not distinct or out of range for the result length.
pub(crate) fn insert(d: &Diagram, items: &[Placed]) -> Option<Diagram> {
    let n = d.len();
    let total = n + items.len();
    let mut slot: Vec<Option<&Placed>> = vec![None; total];
    for it in items {
        if it.pos >= total || slot[it.pos].is_some() {
            return None;
        }
        slot[it.pos] = Some(it);
    }
    let genus = d.genus();
    if n == 0 {
        let mut rest = d.mark(0).clone();
        for it in items {
            sub_from(&mut rest, &it.mark);
        }
        let mut code = Vec::with_capacity(total);
        let mut marks = Vec::with_capacity(total);
        for s in slot.iter().flatten() {
            code.push(s.symbol);
            let mut m = s.mark.clone();
            if std::ptr::eq(*s, items.last().expect("nonempty")) {
                add_into(&mut m, &rest);
            }
            marks.push(m);
        }
        return Some(Diagram::from_parts_unchecked(genus, code, marks));
    }
    let mut code = Vec::with_capacity(total);
    let mut marks: Vec<Mark> = Vec::with_capacity(total);
    // index in `marks` of the survivor owning the current run
    let mut owner: Option<usize> = None;
    let mut leading: Vec<&Placed> = Vec::new();
    let mut next = 0;
    for s in &slot {
        match s {
            Some(it) => {
                code.push(it.symbol);
                marks.push(it.mark.clone());
                match owner {
                    Some(o) => sub_from(&mut marks[o], &it.mark),
                    None => leading.push(it),
                }
            }
            None => {
                code.push(d.code()[next]);
                marks.push(d.mark(next).clone());
                owner = Some(marks.len() - 1);
                next += 1;
            }
        }
    }
    let last = owner.expect("survivors exist");
    for it in leading {
        sub_from(&mut marks[last], &it.mark);
    }
    Some(Diagram::from_parts_unchecked(genus, code, marks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse;

    #[test]
    fn remove_then_insert_restores() {
        let d = parse("genus 1\ncode J+ O1+ U1+ J- O2- U2-\nmark 0 1 0\nmark 2 0 3\nmark 5 -1 1").unwrap();
        for set in [vec![0, 3], vec![1, 2], vec![5, 0, 4], vec![0, 1, 2, 3, 4, 5]] {
            let (r, removed) = remove(&d, &set);
            assert_eq!(r.knot_class()[..2], d.knot_class()[..2]);
            assert_eq!(insert(&r, &removed).unwrap(), d, "{set:?}");
        }
    }

    #[test]
    fn wrapped_insert() {
        let d = parse("genus 0\ncode J+ J-").unwrap();
        let items = [
            Placed { pos: 3, symbol: Symbol::over(1, crate::diagram::Sign::Plus), mark: vec![] },
            Placed { pos: 0, symbol: Symbol::under(1, crate::diagram::Sign::Plus), mark: vec![] },
        ];
        let r = insert(&d, &items).unwrap();
        assert_eq!(r.to_string(), "genus 0\ncode U1+ J+ J- O1+");
        assert!(insert(&d, &[items[0].clone(), Placed { pos: 3, ..items[1].clone() }]).is_none());
    }
}
