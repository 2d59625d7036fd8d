//! Orthogonal symmetry operations, the action of the octahedral group on
//! candidate-set designs, geometric isomorphism, and point-group detection.

mod pointgroup;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use nalgebra::{Matrix3, Vector3};

use crate::error::{Error, Result};
use crate::optimal::{CandidateSet, ExactDesign};
use crate::sphere::UnitPoint3;

pub use pointgroup::{
    detect_point_group, detect_point_group_with, label_orbits, PointGroup, PointGroupLabel,
    PointGroupOptions,
};

/// An element of O(3).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryOperation {
    matrix: Matrix3<f64>,
    proper: bool,
}

impl SymmetryOperation {
    /// Checks `QᵀQ = I` and `det Q = ±1` to 1e-12.
    pub fn new(matrix: Matrix3<f64>) -> Result<Self> {
        let defect = (matrix.transpose() * matrix - Matrix3::identity())
            .abs()
            .max();
        let det = matrix.determinant();
        if defect > 1e-12 || ((det.abs() - 1.0).abs() > 1e-12) {
            return Err(Error::InvalidDesign(format!(
                "matrix is not orthogonal (|QᵀQ - I| = {defect:e}, det = {det})"
            )));
        }
        Ok(Self {
            matrix,
            proper: det > 0.0,
        })
    }

    fn from_trusted(matrix: Matrix3<f64>) -> Self {
        let proper = matrix.determinant() > 0.0;
        Self { matrix, proper }
    }

    pub fn identity() -> Self {
        Self::from_trusted(Matrix3::identity())
    }

    pub fn inversion() -> Self {
        Self::from_trusted(-Matrix3::identity())
    }

    /// Anticlockwise rotation by `angle` about `axis` (right-hand rule).
    pub fn rotation(axis: [f64; 3], angle: f64) -> Self {
        let k = Vector3::from(axis).normalize();
        let (s, c) = angle.sin_cos();
        let cross = Matrix3::new(0.0, -k.z, k.y, k.z, 0.0, -k.x, -k.y, k.x, 0.0);
        Self::from_trusted(Matrix3::identity() * c + cross * s + k * k.transpose() * (1.0 - c))
    }

    /// Reflection through the plane with the given normal.
    pub fn reflection(normal: [f64; 3]) -> Self {
        let n = Vector3::from(normal).normalize();
        Self::from_trusted(Matrix3::identity() - n * n.transpose() * 2.0)
    }

    /// Rotation by `angle` about `axis` followed by reflection through the
    /// perpendicular plane.
    pub fn rotoreflection(axis: [f64; 3], angle: f64) -> Self {
        Self::reflection(axis).compose(&Self::rotation(axis, angle))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.matrix
    }

    pub fn is_proper(&self) -> bool {
        self.proper
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &SymmetryOperation) -> SymmetryOperation {
        Self::from_trusted(self.matrix * other.matrix)
    }

    pub fn inverse(&self) -> SymmetryOperation {
        Self::from_trusted(self.matrix.transpose())
    }

    pub fn apply(&self, x: [f64; 3]) -> [f64; 3] {
        (self.matrix * Vector3::from(x)).into()
    }

    pub fn apply_point(&self, p: &UnitPoint3) -> UnitPoint3 {
        UnitPoint3::from_vector(self.apply(p.coords())).expect("orthogonal maps preserve norm")
    }

    /// Largest entrywise difference.
    pub fn distance(&self, other: &SymmetryOperation) -> f64 {
        (self.matrix - other.matrix).abs().max()
    }

    /// Rotation angle in `[0, π]` of the proper part (`±Q`).
    pub fn angle(&self) -> f64 {
        let m = if self.proper {
            self.matrix
        } else {
            -self.matrix
        };
        ((m.trace() - 1.0) / 2.0).clamp(-1.0, 1.0).acos()
    }
}

impl fmt::Display for SymmetryOperation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.matrix;
        write!(
            f,
            "[[{}, {}, {}], [{}, {}, {}], [{}, {}, {}]]",
            m[(0, 0)],
            m[(0, 1)],
            m[(0, 2)],
            m[(1, 0)],
            m[(1, 1)],
            m[(1, 2)],
            m[(2, 0)],
            m[(2, 1)],
            m[(2, 2)]
        )
    }
}

/// The 48 signed permutation matrices, ordered by permutation
/// (lexicographic) and then by sign pattern.
pub fn octahedral_group() -> Vec<SymmetryOperation> {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut out = Vec::with_capacity(48);
    for perm in PERMS {
        for signs in 0..8u32 {
            let mut m = Matrix3::zeros();
            for (row, &col) in perm.iter().enumerate() {
                m[(row, col)] = if signs >> row & 1 == 1 { -1.0 } else { 1.0 };
            }
            out.push(SymmetryOperation::from_trusted(m));
        }
    }
    out
}

/// The 24 proper rotations of [`octahedral_group`], in the same order.
pub fn octahedral_rotations() -> Vec<SymmetryOperation> {
    octahedral_group()
        .into_iter()
        .filter(|g| g.is_proper())
        .collect()
}

/// Tolerance for re-identifying transformed candidates.
pub const CANDIDATE_TOL: f64 = 1e-9;

/// Where `g` sends each candidate index.
pub fn candidate_permutation(
    g: &SymmetryOperation,
    candidates: &CandidateSet,
) -> Result<Vec<usize>> {
    let perm = candidates
        .points()
        .iter()
        .map(|x| {
            candidates
                .index_of(g.apply(*x), CANDIDATE_TOL)
                .ok_or(Error::NotCandidatePreserving)
        })
        .collect::<Result<Vec<_>>>()?;
    if perm.iter().collect::<BTreeSet<_>>().len() != perm.len() {
        return Err(Error::NotCandidatePreserving);
    }
    Ok(perm)
}

/// `g · d` in canonical form.
pub fn apply_to_design(
    g: &SymmetryOperation,
    d: &ExactDesign,
    candidates: &CandidateSet,
) -> Result<ExactDesign> {
    let perm = candidate_permutation(g, candidates)?;
    Ok(permute_design(&perm, d))
}

fn permute_design(perm: &[usize], d: &ExactDesign) -> ExactDesign {
    ExactDesign::new(d.runs().iter().map(|&i| perm[i]).collect())
}

/// A group acting on a candidate set through precomputed index
/// permutations.
#[derive(Debug, Clone)]
pub struct CandidateAction {
    ops: Vec<SymmetryOperation>,
    perms: Vec<Vec<usize>>,
}

impl CandidateAction {
    pub fn new(ops: Vec<SymmetryOperation>, candidates: &CandidateSet) -> Result<Self> {
        let perms = ops
            .iter()
            .map(|g| candidate_permutation(g, candidates))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ops, perms })
    }

    /// `O_h` acting on the 27 ball candidates.
    pub fn octahedral_ball27() -> Self {
        Self::new(octahedral_group(), &CandidateSet::ball27()).expect("O_h preserves the cube sets")
    }

    /// The rotation subgroup `O` acting on the 27 ball candidates.
    pub fn rotations_ball27() -> Self {
        Self::new(octahedral_rotations(), &CandidateSet::ball27())
            .expect("O preserves the cube sets")
    }

    pub fn ops(&self) -> &[SymmetryOperation] {
        &self.ops
    }

    pub fn orbit(&self, d: &ExactDesign) -> BTreeSet<ExactDesign> {
        self.perms.iter().map(|p| permute_design(p, d)).collect()
    }

    /// Operations fixing `d`.
    pub fn stabilizer(&self, d: &ExactDesign) -> Vec<SymmetryOperation> {
        self.perms
            .iter()
            .zip(&self.ops)
            .filter(|(p, _)| &permute_design(p, d) == d)
            .map(|(_, g)| *g)
            .collect()
    }

    /// The first operation (in group order) taking `a` to `b`.
    pub fn isomorphism(&self, a: &ExactDesign, b: &ExactDesign) -> Option<SymmetryOperation> {
        if a.len() != b.len() {
            return None;
        }
        self.perms
            .iter()
            .zip(&self.ops)
            .find(|(p, _)| &permute_design(p, a) == b)
            .map(|(_, g)| *g)
    }

    /// Partitions distinct input designs by orbit.
    pub fn classes(&self, designs: &[ExactDesign]) -> Vec<IsomorphismClass> {
        let mut by_rep: BTreeMap<ExactDesign, (BTreeSet<ExactDesign>, usize)> = BTreeMap::new();
        let mut rep_of: BTreeMap<ExactDesign, ExactDesign> = BTreeMap::new();
        for d in designs {
            if let Some(rep) = rep_of.get(d) {
                by_rep
                    .get_mut(rep)
                    .expect("known class")
                    .0
                    .insert(d.clone());
                continue;
            }
            let orbit = self.orbit(d);
            let rep = orbit.iter().next().expect("orbit contains d").clone();
            for member in &orbit {
                rep_of.insert(member.clone(), rep.clone());
            }
            by_rep
                .entry(rep)
                .or_insert_with(|| (BTreeSet::new(), orbit.len()))
                .0
                .insert(d.clone());
        }
        let mut classes: Vec<IsomorphismClass> = by_rep
            .into_iter()
            .map(|(representative, (members, orbit_size))| IsomorphismClass {
                representative,
                members: members.into_iter().collect(),
                orbit_size,
            })
            .collect();
        classes.sort_by(|a, b| {
            b.members
                .len()
                .cmp(&a.members.len())
                .then_with(|| a.representative.cmp(&b.representative))
        });
        classes
    }
}

/// Designs, among those given, that are images of one another.
#[derive(Debug, Clone, PartialEq)]
pub struct IsomorphismClass {
    /// Smallest member of the full orbit in canonical order.
    pub representative: ExactDesign,
    /// Distinct input designs in this class, sorted.
    pub members: Vec<ExactDesign>,
    /// Size of the full orbit under the group.
    pub orbit_size: usize,
}

impl IsomorphismClass {
    /// `class k: size=<s> representative=<indices> witness-free`.
    pub fn report_line(&self, k: usize) -> String {
        format!(
            "class {k}: size={} representative={} witness-free",
            self.members.len(),
            self.representative.indices_string()
        )
    }
}

/// Whether some element of `O_h` maps `a` onto `b`; returns the witness.
pub fn is_geometrically_isomorphic(a: &ExactDesign, b: &ExactDesign) -> Option<SymmetryOperation> {
    CandidateAction::octahedral_ball27().isomorphism(a, b)
}

/// Isomorphism classes of ball-candidate designs under `O_h`. Classes are
/// ordered by decreasing member count, then by representative.
pub fn isomorphism_classes(designs: &[ExactDesign]) -> Vec<IsomorphismClass> {
    CandidateAction::octahedral_ball27().classes(designs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimal::{basis_pattern_design, reconstruct_gt_dps, DesignProblem};
    use std::f64::consts::{FRAC_PI_2, PI};

    #[test]
    fn octahedral_group_axioms() {
        let g = octahedral_group();
        assert_eq!(g.len(), 48);
        assert_eq!(g.iter().filter(|x| x.is_proper()).count(), 24);
        let find = |x: &SymmetryOperation| g.iter().position(|y| y.distance(x) < 1e-12);
        assert!(find(&SymmetryOperation::identity()).is_some());
        assert!(find(&SymmetryOperation::inversion()).is_some());
        for a in &g {
            assert!(find(&a.inverse()).is_some());
            assert!(
                a.compose(&a.inverse())
                    .distance(&SymmetryOperation::identity())
                    < 1e-15
            );
            for b in &g {
                assert!(find(&a.compose(b)).is_some());
            }
        }
        for (i, a) in g.iter().enumerate() {
            for b in &g[..i] {
                assert!(a.distance(b) > 0.5);
            }
        }
    }

    #[test]
    fn octahedral_group_preserves_candidates() {
        let c = CandidateSet::ball27();
        for g in octahedral_group() {
            let perm = candidate_permutation(&g, &c).unwrap();
            assert_eq!(perm[0], 0);
            let mut sorted = perm.clone();
            sorted.sort();
            assert_eq!(sorted, (0..27).collect::<Vec<_>>());
        }
    }

    #[test]
    fn validated_constructor() {
        assert!(SymmetryOperation::new(Matrix3::identity() * 2.0).is_err());
        let r = SymmetryOperation::rotation([0.0, 0.0, 1.0], FRAC_PI_2);
        assert!(SymmetryOperation::new(*r.matrix()).unwrap().is_proper());
        assert!(!SymmetryOperation::reflection([1.0, 1.0, 0.0]).is_proper());
    }

    #[test]
    fn quarter_turn_is_anticlockwise() {
        let r = SymmetryOperation::rotation([0.0, 0.0, 1.0], FRAC_PI_2);
        let x = r.apply([1.0, 0.0, 0.0]);
        assert!((x[0]).abs() < 1e-15 && (x[1] - 1.0).abs() < 1e-15);
        assert!((r.angle() - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn identity_action_and_rotations_of_the_reference_design() {
        let c = CandidateSet::ball27();
        let gt = reconstruct_gt_dps();
        assert_eq!(
            apply_to_design(&SymmetryOperation::identity(), &gt, &c).unwrap(),
            gt
        );

        let prob = DesignProblem::ball27();
        let quarter = SymmetryOperation::rotation([0.0, 0.0, 1.0], FRAC_PI_2);
        let turned = apply_to_design(&quarter, &gt, &c).unwrap();
        assert_ne!(turned, gt);
        assert!(
            prob.dps_criterion(&turned)
                .rel_diff(&prob.dps_criterion(&gt))
                < 1e-10
        );

        // cycling the axes is a third of a turn about [111]
        let third = SymmetryOperation::rotation([1.0, 1.0, 1.0], 2.0 * PI / 3.0);
        let x = third.apply([0.2, 0.3, 0.4]);
        assert!((x[0] - 0.4).abs() < 1e-15 && (x[1] - 0.2).abs() < 1e-15);
        let b = apply_to_design(&third, &gt, &c).unwrap();
        let cc = apply_to_design(&third, &b, &c).unwrap();
        assert!(b != gt && cc != gt && b != cc);
        assert_eq!(apply_to_design(&third, &cc, &c).unwrap(), gt);

        // a half turn about [111] leaves the cube candidates
        let half = SymmetryOperation::rotation([1.0, 1.0, 1.0], PI);
        assert!(matches!(
            apply_to_design(&half, &gt, &c),
            Err(Error::NotCandidatePreserving)
        ));
    }

    #[test]
    fn isomorphism_examples() {
        let gt = reconstruct_gt_dps();
        let w = is_geometrically_isomorphic(&gt, &gt).unwrap();
        assert!(w.distance(&SymmetryOperation::identity()) < 1e-15);

        let c = CandidateSet::ball27();
        let quarter = SymmetryOperation::rotation([0.0, 0.0, 1.0], FRAC_PI_2);
        let turned = apply_to_design(&quarter, &gt, &c).unwrap();
        let w = is_geometrically_isomorphic(&gt, &turned).unwrap();
        assert_eq!(apply_to_design(&w, &gt, &c).unwrap(), turned);

        // singleton moved to (1, 0, 0)
        let other = basis_pattern_design(1, &[0]);
        assert!(is_geometrically_isomorphic(&gt, &other).is_none());
    }

    #[test]
    fn reference_design_has_24_images() {
        let act = CandidateAction::octahedral_ball27();
        let gt = reconstruct_gt_dps();
        assert_eq!(act.orbit(&gt).len(), 24);
        assert_eq!(act.stabilizer(&gt).len(), 2);
    }

    #[test]
    fn basis_patterns_split_under_reflection() {
        let full = CandidateAction::octahedral_ball27();
        let rot = CandidateAction::rotations_ball27();
        let one: Vec<_> = (0..9).map(|k| basis_pattern_design(1, &[k])).collect();
        let sizes: Vec<usize> = one.iter().map(|d| full.orbit(d).len()).collect();
        assert_eq!(sizes.iter().filter(|&&s| s == 24).count(), 3);
        assert_eq!(sizes.iter().filter(|&&s| s == 48).count(), 6);
        assert!(one.iter().all(|d| rot.orbit(d).len() == 24));
        assert_eq!(full.classes(&one).len(), 6);
        assert_eq!(rot.classes(&one).len(), 9);
    }

    #[test]
    fn class_report_format() {
        let gt = reconstruct_gt_dps();
        let classes = isomorphism_classes(&[gt.clone(), gt.clone()]);
        assert_eq!(classes.len(), 1);
        assert_eq!(classes[0].members.len(), 1);
        assert_eq!(classes[0].orbit_size, 24);
        let line = classes[0].report_line(0);
        assert!(line.starts_with("class 0: size=1 representative=0,"));
        assert!(line.ends_with(" witness-free"));
    }
}
