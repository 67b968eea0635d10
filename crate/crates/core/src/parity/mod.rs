//! Winding parities: assignments of group elements to crossings that are
//! coherent along moves, with a fixed element governing crossing changes.

mod axioms;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::abelian::{quotient, FgAbelianGroup, GroupElement};
use crate::diagram::{CrossingId, Diagram, DiagramError, Sign};

pub use axioms::{check_axioms, check_homological_identities, kunneth_holds, AxiomReport, Counterexample};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityAssignment {
    pub group: Arc<FgAbelianGroup>,
    pub fixed: GroupElement,
    pub values: BTreeMap<CrossingId, GroupElement>,
}

impl ParityAssignment {
    pub fn value(&self, c: CrossingId) -> Option<&GroupElement> {
        self.values.get(&c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParityError {
    #[error("modulus {n} does not divide degree {degree}")]
    BadModulus { n: u64, degree: i64 },
    #[error("assignment is not a homological parity")]
    NotHomological,
    #[error("oriented construction needs fixed element 0, found {0}")]
    NonzeroFixedElement(String),
    #[error("unknown parity kind {0:?}")]
    UnknownParityKind(String),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn cyclic_assignment(d: &Diagram, n: u64, fixed: i64, value: impl Fn(CrossingId) -> i64) -> ParityAssignment {
    let group = FgAbelianGroup::cyclic(n);
    let fixed = group.element(&[fixed]).expect("rank one");
    let values = d.crossings().into_iter().map(|c| (c, group.element(&[value(c)]).expect("rank one"))).collect();
    ParityAssignment { group, fixed, values }
}

fn raw(d: &Diagram, c: CrossingId) -> i64 {
    d.raw_label(c).expect("crossing of d")
}

/// Reduced crossing labels in `Z/degree`, fixed element `-1`.
pub fn label_parity(d: &Diagram) -> ParityAssignment {
    cyclic_assignment(d, d.degree().unsigned_abs(), -1, |c| raw(d, c))
}

pub fn label_parity_mod(d: &Diagram, n: u64) -> Result<ParityAssignment, ParityError> {
    let degree = d.degree();
    if n == 0 || degree % n as i64 != 0 {
        return Err(ParityError::BadModulus { n, degree });
    }
    Ok(cyclic_assignment(d, n, -1, |c| raw(d, c)))
}

/// Crossings with exactly one passage strictly between the passages of `c`.
pub fn interleaved(d: &Diagram, c: CrossingId) -> Result<Vec<CrossingId>, DiagramError> {
    let ps = d.passages(c)?;
    let (lo, hi) = (ps.over.min(ps.under), ps.over.max(ps.under));
    let mut count: BTreeMap<CrossingId, usize> = BTreeMap::new();
    for s in &d.code()[lo + 1..hi] {
        if let Some(x) = s.crossing() {
            *count.entry(x).or_default() += 1;
        }
    }
    Ok(count.into_iter().filter(|&(_, k)| k == 1).map(|(x, _)| x).collect())
}

pub fn gaussian_parity(d: &Diagram) -> ParityAssignment {
    cyclic_assignment(d, 2, 0, |c| interleaved(d, c).expect("crossing of d").len() as i64)
}

/// Classes of half-curves in `Z^{2g+1}/<[K]>`, fixed element `-[* x S^1]`.
pub fn homological_parity(d: &Diagram) -> ParityAssignment {
    let r = 2 * d.genus() + 1;
    let group = quotient(r, vec![big(&d.knot_class())]).expect("knot class has rank 2g+1");
    let mut e = vec![0; r];
    e[r - 1] = -1;
    let fixed = group.element(&e).expect("rank 2g+1");
    let values = d
        .crossings()
        .into_iter()
        .map(|c| (c, group.canonical(&d.half_curve_class(c).expect("crossing of d").to_bigint()).expect("rank")))
        .collect();
    ParityAssignment { group, fixed, values }
}

/// Rank and knot class of a homological assignment's group.
fn homological_shape(p: &ParityAssignment) -> Result<(usize, Vec<BigInt>), ParityError> {
    let rels = p.group.relations();
    let r = p.group.rank();
    if r % 2 == 0 || rels.len() != 1 {
        return Err(ParityError::NotHomological);
    }
    let mut e = vec![BigInt::from(0); r];
    e[r - 1] = BigInt::from(-1);
    if p.group.canonical(&e).ok().as_ref() != Some(&p.fixed) {
        return Err(ParityError::NotHomological);
    }
    Ok((r, rels[0].clone()))
}

fn map_assignment(
    p: &ParityAssignment,
    group: Arc<FgAbelianGroup>,
    f: impl Fn(&[BigInt]) -> Vec<BigInt>,
) -> ParityAssignment {
    let image = |x: &GroupElement| group.canonical(&f(x.rep())).expect("projection rank");
    ParityAssignment {
        fixed: image(&p.fixed),
        values: p.values.iter().map(|(c, x)| (*c, image(x))).collect(),
        group,
    }
}

/// Projection onto the `S^1` factor, landing in `Z/degree`.
pub fn project_s1(p: &ParityAssignment) -> Result<ParityAssignment, ParityError> {
    let (r, k) = homological_shape(p)?;
    let degree = u64::try_from(num_traits::Signed::abs(&k[r - 1])).map_err(|_| ParityError::NotHomological)?;
    Ok(map_assignment(p, FgAbelianGroup::cyclic(degree), |v| vec![v[r - 1].clone()]))
}

/// Projection onto the `H_1(S_g)` factor, landing in `Z^{2g}/<[K]_{S_g}>`.
pub fn project_sg(p: &ParityAssignment) -> Result<ParityAssignment, ParityError> {
    let (r, k) = homological_shape(p)?;
    let group = quotient(r - 1, vec![k[..r - 1].to_vec()]).expect("rank 2g");
    Ok(map_assignment(p, group, |v| v[..r - 1].to_vec()))
}

/// Values multiplied by the crossing signs; requires fixed element 0.
pub fn oriented_from(p: &ParityAssignment, d: &Diagram) -> Result<ParityAssignment, ParityError> {
    if !p.fixed.is_zero() {
        return Err(ParityError::NonzeroFixedElement(p.fixed.to_string()));
    }
    let mut values = BTreeMap::new();
    for (c, x) in &p.values {
        let v = match d.crossing_sign(*c)? {
            Sign::Plus => x.clone(),
            Sign::Minus => x.neg(),
        };
        values.insert(*c, v);
    }
    Ok(ParityAssignment { group: Arc::clone(&p.group), fixed: p.fixed.clone(), values })
}

pub fn is_even(d: &Diagram, c: CrossingId) -> Result<bool, DiagramError> {
    Ok(d.crossing_label(c)?.reduced.is_zero())
}

/// Which axioms a parity is held to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// A1 to A5.
    Winding,
    /// Sign-twisted values: A1 also at the changed crossing, A2, and the
    /// two crossings of a second move sum to zero.
    Oriented,
}

pub trait Parity {
    fn name(&self) -> String;
    fn assign(&self, d: &Diagram) -> Result<ParityAssignment, ParityError>;
    fn profile(&self) -> Profile {
        Profile::Winding
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityKind {
    Label,
    LabelMod(u64),
    Gauss,
    Homological,
    HomologicalS1,
    HomologicalSgOriented,
}

impl ParityKind {
    pub const BUILTIN: [ParityKind; 5] = [
        ParityKind::Label,
        ParityKind::Gauss,
        ParityKind::Homological,
        ParityKind::HomologicalS1,
        ParityKind::HomologicalSgOriented,
    ];
}

impl fmt::Display for ParityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParityKind::Label => f.write_str("label"),
            ParityKind::LabelMod(n) => write!(f, "label-mod:{n}"),
            ParityKind::Gauss => f.write_str("gauss"),
            ParityKind::Homological => f.write_str("homological"),
            ParityKind::HomologicalS1 => f.write_str("homological-s1"),
            ParityKind::HomologicalSgOriented => f.write_str("homological-sg-oriented"),
        }
    }
}

impl FromStr for ParityKind {
    type Err = ParityError;

    fn from_str(s: &str) -> Result<Self, ParityError> {
        let unknown = || ParityError::UnknownParityKind(s.to_string());
        Ok(match s {
            "label" => ParityKind::Label,
            "gauss" => ParityKind::Gauss,
            "homological" => ParityKind::Homological,
            "homological-s1" => ParityKind::HomologicalS1,
            "homological-sg-oriented" => ParityKind::HomologicalSgOriented,
            _ => {
                let n = s.strip_prefix("label-mod:").ok_or_else(unknown)?;
                ParityKind::LabelMod(n.parse().map_err(|_| unknown())?)
            }
        })
    }
}

impl Parity for ParityKind {
    fn name(&self) -> String {
        self.to_string()
    }

    fn assign(&self, d: &Diagram) -> Result<ParityAssignment, ParityError> {
        match self {
            ParityKind::Label => Ok(label_parity(d)),
            ParityKind::LabelMod(n) => label_parity_mod(d, *n),
            ParityKind::Gauss => Ok(gaussian_parity(d)),
            ParityKind::Homological => Ok(homological_parity(d)),
            ParityKind::HomologicalS1 => project_s1(&homological_parity(d)),
            ParityKind::HomologicalSgOriented => oriented_from(&project_sg(&homological_parity(d))?, d),
        }
    }

    fn profile(&self) -> Profile {
        match self {
            ParityKind::HomologicalSgOriented => Profile::Oriented,
            _ => Profile::Winding,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::parse;

    fn d(text: &str) -> Diagram {
        parse(text).unwrap()
    }

    fn vals(p: &ParityAssignment) -> Vec<String> {
        p.values.values().map(ToString::to_string).collect()
    }

    #[test]
    fn label_examples() {
        let kink = label_parity(&d("genus 0\ncode O1+ U1+"));
        assert_eq!(vals(&kink), ["0"]);
        assert_eq!(kink.fixed.to_string(), "-1");
        assert_eq!(kink.group.describe(), "Z");
        let p = label_parity(&d("genus 0\ncode O1+ J+ U1+ J+"));
        assert_eq!(vals(&p), ["1"]);
        assert_eq!(p.fixed.to_string(), "1");
        assert!(label_parity(&d("genus 0\ncode J+ J+")).values.is_empty());
    }

    #[test]
    fn label_mod() {
        let two = d("genus 0\ncode O1+ J+ U1+ J+");
        assert_eq!(vals(&label_parity_mod(&two, 2).unwrap()), ["1"]);
        let zero = d("genus 0\ncode O1+ J+ U1+ J-");
        assert_eq!(vals(&label_parity_mod(&zero, 5).unwrap()), ["4"]);
        let four = d("genus 0\ncode J+ J+ J+ J+");
        assert_eq!(label_parity_mod(&four, 3), Err(ParityError::BadModulus { n: 3, degree: 4 }));
    }

    #[test]
    fn gaussian_examples() {
        let trefoil = d("genus 0\ncode O1+ U2+ O3+ U1+ O2+ U3+");
        assert_eq!(vals(&gaussian_parity(&trefoil)), ["0", "0", "0"]);
        let virt = d("genus 0\ncode O1+ O2+ U1+ U2+");
        assert_eq!(vals(&gaussian_parity(&virt)), ["1", "1"]);
        assert_eq!(vals(&gaussian_parity(&d("genus 0\ncode O1+ U1+"))), ["0"]);
        let g = gaussian_parity(&virt);
        assert!(g.fixed.is_zero());
    }

    #[test]
    fn homological_examples() {
        let kink = homological_parity(&d("genus 2\ncode O1+ U1+\nmark 0 1 2 3 4"));
        assert!(kink.values[&1].is_zero());
        let p = homological_parity(&d("genus 0\ncode O1+ J+ U1+ J+"));
        assert_eq!(p.group.describe(), "Z_2");
        assert_eq!(vals(&p), ["1"]);
        assert_eq!(p.fixed.to_string(), "1");
        let q = homological_parity(&d("genus 1\ncode O1+ U1+ O2- U2-\nmark 0 1 0\nmark 1 0 2"));
        assert_eq!(q.group.describe(), "Z^2");
        // the half of crossing 1 runs over edges 1, 2, 3; that of crossing 2 over 3, 0, 1
        assert_eq!(q.values[&1], q.group.element(&[0, 2, 0]).unwrap());
        assert!(q.values[&2].is_zero());
    }

    #[test]
    fn projections() {
        let x = d("genus 1\ncode O1+ J+ U1+ J+ O2- U2-\nmark 1 1 1\nmark 3 0 1");
        let h = homological_parity(&x);
        assert_eq!(project_s1(&h).unwrap(), label_parity(&x));
        assert_eq!(vals(&project_s1(&h).unwrap()), ["1", "0"]);
        let sg = project_sg(&h).unwrap();
        assert!(sg.fixed.is_zero());
        let o = oriented_from(&sg, &x).unwrap();
        assert_eq!(o.values[&2], sg.values[&2].neg());
        assert!(matches!(oriented_from(&label_parity(&x), &x), Err(ParityError::NonzeroFixedElement(_))));
        assert!(project_s1(&gaussian_parity(&x)).is_err());
        let g = gaussian_parity(&x);
        assert_eq!(oriented_from(&g, &x).unwrap(), g);
    }

    #[test]
    fn evenness() {
        assert!(is_even(&d("genus 0\ncode O1+ U1+"), 1).unwrap());
        assert!(!is_even(&d("genus 0\ncode O1+ J+ U1+ J+"), 1).unwrap());
        assert!(is_even(&d("genus 0\ncode O1+ J+ J- U1+"), 1).unwrap());
    }

    #[test]
    fn kind_names_round_trip() {
        for k in ParityKind::BUILTIN.into_iter().chain([ParityKind::LabelMod(4)]) {
            assert_eq!(k.to_string().parse::<ParityKind>().unwrap(), k);
        }
        assert!("label-mod:x".parse::<ParityKind>().is_err());
        assert!("nope".parse::<ParityKind>().is_err());
    }
}
