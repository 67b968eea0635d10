use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::snf::SparseSmith;
use super::{AbelianError, IntMatrix, SmithForm};

/// `Z^rank` modulo the span of the relation vectors.
#[derive(Clone, Debug)]
pub struct FgAbelianGroup {
    rank: usize,
    relations: Vec<Vec<BigInt>>,
    smith: SparseSmith,
}

impl PartialEq for FgAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.relations == other.relations
    }
}

impl Eq for FgAbelianGroup {}

pub fn quotient(rank: usize, relations: Vec<Vec<BigInt>>) -> Result<Arc<FgAbelianGroup>, AbelianError> {
    for (k, r) in relations.iter().enumerate() {
        if r.len() != rank {
            return Err(AbelianError::DimensionMismatch { expected: rank, found: r.len(), context: format!("relation {k}") });
        }
    }
    let smith = SparseSmith::from_columns(rank, &relations);
    Ok(Arc::new(FgAbelianGroup { rank, relations, smith }))
}

impl FgAbelianGroup {
    pub fn free(rank: usize) -> Arc<Self> {
        quotient(rank, Vec::new()).expect("no relations")
    }

    /// `Z / nZ`; `n = 0` gives `Z`.
    pub fn cyclic(n: u64) -> Arc<Self> {
        let relations = if n == 0 { Vec::new() } else { vec![vec![BigInt::from(n)]] };
        quotient(1, relations).expect("rank one")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn relations(&self) -> &[Vec<BigInt>] {
        &self.relations
    }

    /// Relations as the columns of a `rank x m` matrix.
    pub fn relation_matrix(&self) -> IntMatrix {
        IntMatrix::from_columns(self.rank, &self.relations).expect("validated on construction")
    }

    pub fn snf(&self) -> SmithForm {
        self.smith.to_dense()
    }

    /// Nontrivial invariant factors `d_1 | d_2 | ...` (all greater than one).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.smith.diag.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn free_rank(&self) -> usize {
        self.rank - self.smith.diag.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank() == 0 && self.invariant_factors().is_empty()
    }

    /// Isomorphism type, e.g. `Z^2 + Z_2`, or `0`.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        match self.free_rank() {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.invariant_factors().iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            "0".to_string()
        } else {
            parts.join(" + ")
        }
    }

    fn check_len(&self, v: &[BigInt]) -> Result<(), AbelianError> {
        if v.len() != self.rank {
            return Err(AbelianError::DimensionMismatch { expected: self.rank, found: v.len(), context: "element".into() });
        }
        Ok(())
    }

    /// Canonical coset representative: move to Smith coordinates, reduce each
    /// torsion coordinate into `[0, d_i)`, move back.
    fn reduce(&self, v: &[BigInt]) -> Vec<BigInt> {
        let mut out = v.to_vec();
        for (i, d) in self.smith.diag.iter().enumerate() {
            let y = self.smith.u.row(i).iter().fold(BigInt::zero(), |acc, (j, x)| acc + x * &v[*j]);
            let delta = y.mod_floor(d) - &y;
            if delta.is_zero() {
                continue;
            }
            for (j, x) in self.smith.u_inv_t.row(i) {
                out[*j] += &delta * x;
            }
        }
        out
    }

    pub fn canonical(self: &Arc<Self>, v: &[BigInt]) -> Result<GroupElement, AbelianError> {
        self.check_len(v)?;
        Ok(GroupElement { group: Arc::clone(self), rep: self.reduce(v) })
    }

    /// Convenience for small literal vectors.
    pub fn element(self: &Arc<Self>, v: &[i64]) -> Result<GroupElement, AbelianError> {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.canonical(&v)
    }

    pub fn zero(self: &Arc<Self>) -> GroupElement {
        GroupElement { group: Arc::clone(self), rep: vec![BigInt::zero(); self.rank] }
    }

    pub fn generator(self: &Arc<Self>, i: usize) -> GroupElement {
        let mut v = vec![BigInt::zero(); self.rank];
        v[i] = BigInt::one();
        self.canonical(&v).expect("index within rank")
    }

    /// Whether `v` lies in the relation lattice.
    pub fn contains(&self, v: &[BigInt]) -> Result<bool, AbelianError> {
        self.check_len(v)?;
        Ok(self.reduce(v).iter().all(Zero::is_zero))
    }
}

#[derive(Clone, Debug)]
pub struct GroupElement {
    group: Arc<FgAbelianGroup>,
    rep: Vec<BigInt>,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.rep == other.rep
    }
}

impl Eq for GroupElement {}

fn same_group(a: &Arc<FgAbelianGroup>, b: &Arc<FgAbelianGroup>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl GroupElement {
    pub fn group(&self) -> &Arc<FgAbelianGroup> {
        &self.group
    }

    pub fn rep(&self) -> &[BigInt] {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), AbelianError> {
        if same_group(&self.group, &other.group) {
            Ok(())
        } else {
            Err(AbelianError::GroupMismatch)
        }
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self, AbelianError> {
        self.check(other)?;
        let v: Vec<BigInt> = self.rep.iter().zip(&other.rep).map(|(a, b)| a + b * sign).collect();
        self.group.canonical(&v)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, AbelianError> {
        self.combine(other, 1)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, AbelianError> {
        self.combine(other, -1)
    }

    pub fn try_eq(&self, other: &Self) -> Result<bool, AbelianError> {
        self.check(other)?;
        Ok(self.rep == other.rep)
    }

    pub fn neg(&self) -> Self {
        let v: Vec<BigInt> = self.rep.iter().map(|x| -x).collect();
        self.group.canonical(&v).expect("same rank")
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let v: Vec<BigInt> = self.rep.iter().map(|x| x * k).collect();
        self.group.canonical(&v).expect("same rank")
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.rep.len() == 1 {
            write!(f, "{}", self.rep[0])
        } else {
            let parts: Vec<String> = self.rep.iter().map(ToString::to_string).collect();
            write!(f, "({})", parts.join(", "))
        }
    }
}

/// A homomorphism given by the images of the source generators.
#[derive(Clone, Debug)]
pub struct Hom {
    source: Arc<FgAbelianGroup>,
    target: Arc<FgAbelianGroup>,
    images: Vec<GroupElement>,
}

impl Hom {
    pub fn source(&self) -> &Arc<FgAbelianGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FgAbelianGroup> {
        &self.target
    }

    pub fn images(&self) -> &[GroupElement] {
        &self.images
    }

    /// Evaluates on an arbitrary coordinate vector by linearity.
    pub fn apply_vector(&self, v: &[BigInt]) -> Result<GroupElement, AbelianError> {
        linear_image(&self.target, &self.images, v)
    }

    pub fn apply(&self, x: &GroupElement) -> Result<GroupElement, AbelianError> {
        if !same_group(&x.group, &self.source) {
            return Err(AbelianError::GroupMismatch);
        }
        self.apply_vector(&x.rep)
    }
}

fn linear_image(target: &Arc<FgAbelianGroup>, images: &[GroupElement], v: &[BigInt]) -> Result<GroupElement, AbelianError> {
    if v.len() != images.len() {
        return Err(AbelianError::DimensionMismatch { expected: images.len(), found: v.len(), context: "hom argument".into() });
    }
    let mut acc = vec![BigInt::zero(); target.rank()];
    for (c, img) in v.iter().zip(images) {
        if c.is_zero() {
            continue;
        }
        for (a, x) in acc.iter_mut().zip(&img.rep) {
            *a += c * x;
        }
    }
    target.canonical(&acc)
}

/// The first source relation whose image is not zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InconsistencyWitness {
    pub relation: usize,
    pub image: GroupElement,
}

#[derive(Clone, Debug)]
pub enum HomSolution {
    Hom(Hom),
    Inconsistent(InconsistencyWitness),
}

impl HomSolution {
    pub fn hom(self) -> Option<Hom> {
        match self {
            HomSolution::Hom(h) => Some(h),
            HomSolution::Inconsistent(_) => None,
        }
    }
}

pub fn solve_hom(
    source: &Arc<FgAbelianGroup>,
    target: &Arc<FgAbelianGroup>,
    images: &[GroupElement],
) -> Result<HomSolution, AbelianError> {
    if images.len() != source.rank() {
        return Err(AbelianError::DimensionMismatch {
            expected: source.rank(),
            found: images.len(),
            context: "generator images".into(),
        });
    }
    if images.iter().any(|x| !same_group(&x.group, target)) {
        return Err(AbelianError::GroupMismatch);
    }
    for (k, rel) in source.relations().iter().enumerate() {
        let image = linear_image(target, images, rel)?;
        if !image.is_zero() {
            return Ok(HomSolution::Inconsistent(InconsistencyWitness { relation: k, image }));
        }
    }
    Ok(HomSolution::Hom(Hom { source: Arc::clone(source), target: Arc::clone(target), images: images.to_vec() }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn z3_mod_2_0_4() {
        let g = quotient(3, vec![big(&[2, 0, 4])]).unwrap();
        assert_eq!(g.invariant_factors(), big(&[2]));
        assert_eq!(g.free_rank(), 2);
        assert_eq!(g.describe(), "Z^2 + Z_2");
        assert_eq!(g.element(&[3, 1, 5]).unwrap(), g.element(&[1, 1, 1]).unwrap());
        assert_ne!(g.element(&[1, 1, 1]).unwrap(), g.element(&[0, 1, 1]).unwrap());
        let a = g.element(&[1, 0, 2]).unwrap();
        assert!(a.try_add(&a).unwrap().is_zero());
    }

    #[test]
    fn free_and_cyclic() {
        let z = FgAbelianGroup::free(1);
        assert_eq!(z.describe(), "Z");
        assert_eq!(z.element(&[-7]).unwrap().rep(), big(&[-7]).as_slice());
        let z2 = FgAbelianGroup::cyclic(2);
        assert_eq!(z2.element(&[7]).unwrap().rep(), big(&[1]).as_slice());
        let one = z2.element(&[1]).unwrap();
        assert!(one.try_add(&one).unwrap().is_zero());
        assert_eq!(z2.element(&[-1]).unwrap(), one);
        assert_eq!(FgAbelianGroup::cyclic(5).describe(), "Z_5");
        assert_eq!(quotient(1, vec![big(&[1])]).unwrap().describe(), "0");
    }

    #[test]
    fn mismatched_groups_are_rejected() {
        let a = FgAbelianGroup::cyclic(2).element(&[1]).unwrap();
        let b = FgAbelianGroup::cyclic(3).element(&[1]).unwrap();
        assert_eq!(a.try_add(&b), Err(AbelianError::GroupMismatch));
        assert!(quotient(2, vec![big(&[1])]).is_err());
        assert!(FgAbelianGroup::free(2).element(&[1]).is_err());
    }

    #[test]
    fn structurally_equal_groups_compare_equal() {
        let a = FgAbelianGroup::cyclic(4).element(&[1]).unwrap();
        let b = FgAbelianGroup::cyclic(4).element(&[5]).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hom_from_free_group_always_exists() {
        let z = FgAbelianGroup::free(1);
        let z3 = FgAbelianGroup::cyclic(3);
        let h = solve_hom(&z, &z3, &[z3.element(&[2]).unwrap()]).unwrap().hom().unwrap();
        assert_eq!(h.apply(&z.element(&[5]).unwrap()).unwrap(), z3.element(&[1]).unwrap());
    }

    #[test]
    fn order_obstruction() {
        let z2 = FgAbelianGroup::cyclic(2);
        let z = FgAbelianGroup::free(1);
        match solve_hom(&z2, &z, &[z.element(&[1]).unwrap()]).unwrap() {
            HomSolution::Inconsistent(w) => {
                assert_eq!(w.relation, 0);
                assert_eq!(w.image, z.element(&[2]).unwrap());
            }
            HomSolution::Hom(_) => panic!("Z_2 -> Z with 1 -> 1 is not a homomorphism"),
        }
    }
}
