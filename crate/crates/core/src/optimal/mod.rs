//! Exact designs for a quadratic response surface on the unit ball.
//!
//! Runs are drawn with replacement from a finite candidate set (by default
//! the 27 points of `S0 ∪ S1 ∪ S2 ∪ S3`) and scored by the D_S criterion,
//! which treats the intercept as a nuisance parameter, or by the (DP)_S
//! criterion, which also charges for a lack of pure-error replication.

pub mod exchange;
pub mod fdist;

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;

use crate::design::SphericalDesign;
use crate::error::{Error, Result};
use crate::sphere::UnitPoint3;
use crate::subset::{subset_coords, SubsetSet};

pub use exchange::{exchange_search, RestartRecord, SearchOutcome};
pub use fdist::{f_cdf, f_quantile};

/// Largest model supported (the full quadratic in three variables).
pub const MAX_PARAMS: usize = 10;
/// Runs in the designs of the reference problem.
pub const DEFAULT_RUNS: usize = 18;
pub const DEFAULT_ALPHA: f64 = 0.05;
/// `det(M)` at or below this times the product of `diag(M)` is singular.
pub const SINGULAR_RATIO: f64 = 1e-14;

/// Candidate points in a fixed order; a design is a multiset of indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    points: Vec<[f64; 3]>,
}

impl CandidateSet {
    /// The 27 points: 0 is the centre, 1–6 are `S1`, 7–18 `S2`, 19–26 `S3`.
    pub fn ball27() -> Self {
        Self::from_sets(&SubsetSet::ALL)
    }

    /// Concatenation of the given sets in the given order.
    pub fn from_sets(sets: &[SubsetSet]) -> Self {
        Self {
            points: sets.iter().flat_map(|s| subset_coords(*s)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> [f64; 3] {
        self.points[i]
    }

    pub fn points(&self) -> &[[f64; 3]] {
        &self.points
    }

    pub fn is_center(&self, i: usize) -> bool {
        self.points[i] == [0.0; 3]
    }

    /// Index of the candidate within `tol` (max-norm) of `x`.
    pub fn index_of(&self, x: [f64; 3], tol: f64) -> Option<usize> {
        self.points.iter().position(|p| {
            (p[0] - x[0]).abs() <= tol && (p[1] - x[1]).abs() <= tol && (p[2] - x[2]).abs() <= tol
        })
    }
}

/// Polynomial regression models in `(x1, x2, x3)`; the first term is always
/// the intercept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegressionModel {
    /// `1, x1, x2, x3, x1², x2², x3², x1x2, x1x3, x2x3`.
    FullQuadratic,
    /// `1, x1, x2, x3, x1², x2², x3²` (no interactions).
    PureQuadratic,
}

impl RegressionModel {
    pub fn params(&self) -> usize {
        match self {
            RegressionModel::FullQuadratic => 10,
            RegressionModel::PureQuadratic => 7,
        }
    }

    /// Model-matrix row `f(x)`, zero-padded to [`MAX_PARAMS`].
    pub fn row(&self, x: [f64; 3]) -> [f64; MAX_PARAMS] {
        let [a, b, c] = x;
        let mut r = [1.0, a, b, c, a * a, b * b, c * c, a * b, a * c, b * c];
        for v in &mut r[self.params()..] {
            *v = 0.0;
        }
        r
    }
}

/// A multiset of candidate indices, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactDesign {
    runs: Vec<usize>,
}

impl ExactDesign {
    pub fn new(mut runs: Vec<usize>) -> Self {
        runs.sort_unstable();
        Self { runs }
    }

    pub fn runs(&self) -> &[usize] {
        &self.runs
    }

    pub fn len(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    /// Replication of every candidate index below `n_candidates`.
    pub fn counts(&self, n_candidates: usize) -> Vec<u32> {
        let mut c = vec![0; n_candidates];
        for &r in &self.runs {
            c[r] += 1;
        }
        c
    }

    /// Number of distinct candidates used (the centre counts as one).
    pub fn distinct_support(&self) -> usize {
        self.runs.iter().collect::<BTreeSet<_>>().len()
    }

    /// Pure-error degrees of freedom: runs minus distinct support points.
    pub fn pure_error_df(&self) -> usize {
        self.runs.len() - self.distinct_support()
    }

    pub fn center_runs(&self, candidates: &CandidateSet) -> usize {
        self.runs
            .iter()
            .filter(|&&i| candidates.is_center(i))
            .count()
    }

    /// Candidates that occur exactly once.
    pub fn singletons(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.runs.iter().copied().collect();
        set.into_iter()
            .filter(|i| self.runs.iter().filter(|r| *r == i).count() == 1)
            .collect()
    }

    /// `i j k ...` as written in run logs.
    pub fn indices_string(&self) -> String {
        self.runs
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// The design as a measure: sphere points with replication plus centre
    /// runs. Points used once get orbit label 1, replicated points 0.
    pub fn to_spherical(&self, candidates: &CandidateSet) -> Result<SphericalDesign> {
        let counts = self.counts(candidates.len());
        let mut points = Vec::new();
        let mut reps = Vec::new();
        let mut labels = Vec::new();
        let mut center = 0;
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if candidates.is_center(i) {
                center += c;
                continue;
            }
            let x = candidates.point(i);
            points.push(UnitPoint3::new(x[0], x[1], x[2])?);
            reps.push(c);
            labels.push(u32::from(c == 1));
        }
        SphericalDesign::exact(points, reps, center)?.with_orbit_labels(labels)
    }

    /// Inverse of [`ExactDesign::to_spherical`]: matches every point to a
    /// candidate within 1e-9 and recovers run counts from the weights.
    pub fn from_spherical(d: &SphericalDesign, candidates: &CandidateSet) -> Result<Self> {
        let run_weight = d.weights().first().copied().ok_or(Error::EmptyDesign)?;
        let n = (1.0 / run_weight).round();
        if !(n >= 1.0) || d.weights().iter().any(|w| (w * n - 1.0).abs() > 1e-9) {
            return Err(Error::InvalidDesign(
                "not an exact design with equal run weights".into(),
            ));
        }
        let center = (d.center_weight() * n).round();
        if (d.center_weight() * n - center).abs() > 1e-9 {
            return Err(Error::InvalidDesign(
                "centre weight is not a whole number of runs".into(),
            ));
        }
        let mut runs = Vec::with_capacity(n as usize);
        if center > 0.0 {
            let c = candidates
                .index_of([0.0; 3], 0.0)
                .ok_or_else(|| Error::InvalidDesign("candidate set has no centre".into()))?;
            runs.extend(std::iter::repeat_n(c, center as usize));
        }
        for (p, &rep) in d.points().iter().zip(d.replication()) {
            let i = candidates
                .index_of(p.coords(), 1e-9)
                .ok_or_else(|| Error::InvalidDesign(format!("point {p} is not a candidate")))?;
            runs.extend(std::iter::repeat_n(i, rep as usize));
        }
        if runs.len() != n as usize {
            return Err(Error::InvalidDesign(format!(
                "weights imply {n} runs but replication gives {}",
                runs.len()
            )));
        }
        Ok(Self::new(runs))
    }
}

impl fmt::Display for ExactDesign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.indices_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriterionKind {
    Ds,
    Dps,
}

impl std::str::FromStr for CriterionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ds" => Ok(CriterionKind::Ds),
            "dps" => Ok(CriterionKind::Dps),
            _ => Err(Error::InvalidDesign(format!("unknown criterion {s:?}"))),
        }
    }
}

/// A criterion value; smaller is better, infinite when the design cannot
/// estimate the parameters of interest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriterionValue {
    pub kind: CriterionKind,
    pub value: f64,
    /// `ln(det M / M₀₀)`, the log information on the parameters of interest.
    pub log_det: f64,
    pub pure_error_df: usize,
}

impl CriterionValue {
    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    /// Relative difference, 0 when both are infinite.
    pub fn rel_diff(&self, other: &CriterionValue) -> f64 {
        if self.value == other.value {
            return 0.0;
        }
        (self.value - other.value).abs() / self.value.abs().max(other.value.abs())
    }
}

/// A candidate set, a model, a run count and the (DP)_S confidence level.
#[derive(Debug, Clone)]
pub struct DesignProblem {
    candidates: CandidateSet,
    model: RegressionModel,
    runs: usize,
    alpha: f64,
    rows: Vec<[f64; MAX_PARAMS]>,
    /// `F(p - 1, df; 1 - alpha)^(p - 1)` by pure-error df; infinite at 0.
    f_power: Vec<f64>,
}

impl DesignProblem {
    /// 18 runs from the 27 ball candidates under the full quadratic model.
    pub fn ball27() -> Self {
        Self::new(
            CandidateSet::ball27(),
            RegressionModel::FullQuadratic,
            DEFAULT_RUNS,
            DEFAULT_ALPHA,
        )
        .expect("reference problem is valid")
    }

    pub fn new(
        candidates: CandidateSet,
        model: RegressionModel,
        runs: usize,
        alpha: f64,
    ) -> Result<Self> {
        if candidates.is_empty() {
            return Err(Error::InvalidDesign("empty candidate set".into()));
        }
        if runs < model.params() {
            return Err(Error::InvalidDesign(format!(
                "{runs} runs cannot support {} parameters",
                model.params()
            )));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::FQuantile(format!("alpha {alpha} outside (0, 1)")));
        }
        let rows = candidates.points().iter().map(|x| model.row(*x)).collect();
        let interest = (model.params() - 1) as u32;
        let mut f_power = vec![f64::INFINITY];
        for df in 1..=runs as u32 {
            f_power.push(f_quantile(interest, df, 1.0 - alpha)?.powi(interest as i32));
        }
        Ok(Self {
            candidates,
            model,
            runs,
            alpha,
            rows,
            f_power,
        })
    }

    pub fn with_alpha(self, alpha: f64) -> Result<Self> {
        Self::new(self.candidates, self.model, self.runs, alpha)
    }

    pub fn candidates(&self) -> &CandidateSet {
        &self.candidates
    }

    pub fn model(&self) -> RegressionModel {
        self.model
    }

    pub fn runs(&self) -> usize {
        self.runs
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn params(&self) -> usize {
        self.model.params()
    }

    pub(crate) fn row(&self, i: usize) -> &[f64; MAX_PARAMS] {
        &self.rows[i]
    }

    pub fn check(&self, d: &ExactDesign) -> Result<()> {
        if d.len() != self.runs {
            return Err(Error::InvalidDesign(format!(
                "design has {} runs, expected {}",
                d.len(),
                self.runs
            )));
        }
        if let Some(&bad) = d.runs().iter().find(|&&i| i >= self.candidates.len()) {
            return Err(Error::BadIndex(bad));
        }
        Ok(())
    }

    /// `M = (1/n) Σ f(x_i) f(x_i)ᵀ`.
    pub fn information_matrix(&self, d: &ExactDesign) -> DMatrix<f64> {
        let p = self.params();
        let sum = self.moment_sum(d.runs());
        let n = d.len() as f64;
        DMatrix::from_fn(p, p, |i, j| sum[i][j] / n)
    }

    /// Unnormalized `Σ f fᵀ` over the runs in the given order.
    pub(crate) fn moment_sum(&self, runs: &[usize]) -> Matrix {
        let p = self.params();
        let mut s = [[0.0; MAX_PARAMS]; MAX_PARAMS];
        for &r in runs {
            add_outer(&mut s, &self.rows[r], p, 1.0);
        }
        s
    }

    pub fn criterion(&self, kind: CriterionKind, d: &ExactDesign) -> CriterionValue {
        self.check(d).expect("design does not fit the problem");
        let sum = self.moment_sum(d.runs());
        self.value_from_sum(kind, &sum, d.len(), d.distinct_support())
    }

    pub fn ds_criterion(&self, d: &ExactDesign) -> CriterionValue {
        self.criterion(CriterionKind::Ds, d)
    }

    pub fn dps_criterion(&self, d: &ExactDesign) -> CriterionValue {
        self.criterion(CriterionKind::Dps, d)
    }

    /// Scores a design from its moment sum. D_S is
    /// `(det M / M₀₀)^(-1/(p-1))`; (DP)_S is
    /// `F(p-1, df; 1-alpha)^(p-1) · (det M / M₀₀)^(-1)`.
    pub(crate) fn value_from_sum(
        &self,
        kind: CriterionKind,
        sum: &Matrix,
        n: usize,
        distinct: usize,
    ) -> CriterionValue {
        let p = self.params();
        let df = n - distinct;
        let infinite = CriterionValue {
            kind,
            value: f64::INFINITY,
            log_det: f64::NEG_INFINITY,
            pure_error_df: df,
        };
        let scale = 1.0 / n as f64;
        let mut m = [[0.0; MAX_PARAMS]; MAX_PARAMS];
        let mut diag = 1.0;
        for i in 0..p {
            for j in 0..p {
                m[i][j] = sum[i][j] * scale;
            }
            diag *= m[i][i];
        }
        let m00 = m[0][0];
        let det = determinant(&mut m, p);
        if !(det > SINGULAR_RATIO * diag) || m00 <= 0.0 {
            return infinite;
        }
        let ratio = det / m00;
        let interest = (p - 1) as f64;
        let value = match kind {
            CriterionKind::Ds => ratio.powf(-1.0 / interest),
            CriterionKind::Dps => {
                let f = self.f_power[df];
                if f.is_infinite() {
                    return infinite;
                }
                f / ratio
            }
        };
        CriterionValue {
            kind,
            value,
            log_det: ratio.ln(),
            pure_error_df: df,
        }
    }
}

pub(crate) type Matrix = [[f64; MAX_PARAMS]; MAX_PARAMS];

pub(crate) fn add_outer(s: &mut Matrix, f: &[f64; MAX_PARAMS], p: usize, sign: f64) {
    for i in 0..p {
        let fi = sign * f[i];
        for j in 0..p {
            s[i][j] += fi * f[j];
        }
    }
}

/// Determinant of the leading `p × p` block by Gaussian elimination with
/// partial pivoting. Destroys `m`.
pub(crate) fn determinant(m: &mut Matrix, p: usize) -> f64 {
    let mut det = 1.0;
    for col in 0..p {
        let pivot = (col..p)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .expect("non-empty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let d = m[col][col];
        det *= d;
        for r in col + 1..p {
            let factor = m[r][col] / d;
            if factor != 0.0 {
                for c in col..p {
                    m[r][c] -= factor * m[col][c];
                }
            }
        }
    }
    det
}

/// The nine sphere points of the basis set
/// `{(1,0,0), (1/√3, ±1/√3, -1/√3), (0, ±1/√2, 1/√2), (-1/√2, 0, ±1/√2),
/// (-1/√2, ±1/√2, 0)}`.
pub fn basis_set_points() -> [[f64; 3]; 9] {
    let h = FRAC_1_SQRT_2;
    let r = 1.0 / 3f64.sqrt();
    [
        [1.0, 0.0, 0.0],
        [r, r, -r],
        [r, -r, -r],
        [0.0, h, h],
        [0.0, -h, h],
        [-h, 0.0, h],
        [-h, 0.0, -h],
        [-h, h, 0.0],
        [-h, -h, 0.0],
    ]
}

/// Candidate indices (in [`CandidateSet::ball27`]) of the basis set, in
/// [`basis_set_points`] order.
pub fn basis_set() -> [usize; 9] {
    let c = CandidateSet::ball27();
    basis_set_points().map(|x| c.index_of(x, 1e-12).expect("basis points are candidates"))
}

/// Basis-set index of `(-1/√2, 0, 1/√2)`.
pub const GT_SINGLETON: usize = 5;

/// `center_runs` centre points plus every basis point twice, except those
/// listed in `singletons` (positions within [`basis_set`]), which occur once.
pub fn basis_pattern_design(center_runs: usize, singletons: &[usize]) -> ExactDesign {
    let b = basis_set();
    let mut runs = vec![0; center_runs];
    for (k, &idx) in b.iter().enumerate() {
        let reps = if singletons.contains(&k) { 1 } else { 2 };
        runs.extend(std::iter::repeat_n(idx, reps));
    }
    ExactDesign::new(runs)
}

/// The 18-run (DP)_S-optimal design: one centre run and the basis set
/// twice, except `(-1/√2, 0, 1/√2)`, which occurs once.
pub fn reconstruct_gt_dps() -> ExactDesign {
    basis_pattern_design(1, &[GT_SINGLETON])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_order() {
        let c = CandidateSet::ball27();
        assert_eq!(c.len(), 27);
        assert!(c.is_center(0));
        assert!((1..=6).all(|i| c.point(i).iter().filter(|v| v.abs() == 1.0).count() == 1));
        assert!((7..=18).all(|i| c.point(i).iter().filter(|v| **v == 0.0).count() == 1));
        assert!((19..=26).all(|i| c.point(i).iter().all(|v| *v != 0.0)));
    }

    #[test]
    fn model_rows() {
        let r = RegressionModel::FullQuadratic.row([1.0, 2.0, 3.0]);
        assert_eq!(r, [1.0, 1.0, 2.0, 3.0, 1.0, 4.0, 9.0, 2.0, 3.0, 6.0]);
        let r = RegressionModel::PureQuadratic.row([1.0, 2.0, 3.0]);
        assert_eq!(&r[..7], &[1.0, 1.0, 2.0, 3.0, 1.0, 4.0, 9.0]);
        assert!(r[7..].iter().all(|v| *v == 0.0));
    }

    #[test]
    fn all_center_design_is_singular() {
        let prob = DesignProblem::ball27();
        let d = ExactDesign::new(vec![0; 18]);
        let m = prob.information_matrix(&d);
        assert_eq!(m[(0, 0)], 1.0);
        assert_eq!(m.iter().filter(|v| **v != 0.0).count(), 1);
        assert!(!prob.ds_criterion(&d).is_finite());
        assert!(!prob.dps_criterion(&d).is_finite());
    }

    #[test]
    fn determinant_matches_nalgebra() {
        let prob = DesignProblem::ball27();
        let d = reconstruct_gt_dps();
        let m = prob.information_matrix(&d);
        let mut raw = [[0.0; MAX_PARAMS]; MAX_PARAMS];
        for i in 0..10 {
            for j in 0..10 {
                raw[i][j] = m[(i, j)];
            }
        }
        let ours = determinant(&mut raw, 10);
        let theirs = m.determinant();
        assert!((ours - theirs).abs() <= 1e-12 * theirs.abs());
    }

    #[test]
    fn gt_design_composition() {
        let c = CandidateSet::ball27();
        let d = reconstruct_gt_dps();
        assert_eq!(d.len(), 18);
        assert_eq!(d.distinct_support(), 10);
        assert_eq!(d.pure_error_df(), 8);
        assert_eq!(d.center_runs(&c), 1);
        let single = d.singletons();
        let h = FRAC_1_SQRT_2;
        assert_eq!(single.len(), 2, "centre and one sphere point");
        assert_eq!(c.point(single[1]), [-h, 0.0, h]);
        assert!(d.runs().iter().all(|&i| i < 27));
        let v = DesignProblem::ball27().dps_criterion(&d);
        assert!(v.is_finite());
        assert_eq!(v.pure_error_df, 8);
    }

    #[test]
    fn distinct_designs_have_no_pure_error() {
        let prob = DesignProblem::ball27();
        let d = ExactDesign::new((0..18).collect());
        assert_eq!(d.pure_error_df(), 0);
        assert!(prob.ds_criterion(&d).is_finite());
        assert!(!prob.dps_criterion(&d).is_finite());
    }

    #[test]
    fn criterion_ignores_run_order() {
        let prob = DesignProblem::ball27();
        let mut runs = reconstruct_gt_dps().runs().to_vec();
        let a = prob.dps_criterion(&ExactDesign::new(runs.clone()));
        runs.reverse();
        let b = prob.dps_criterion(&ExactDesign::new(runs));
        assert_eq!(a.value.to_bits(), b.value.to_bits());
    }

    #[test]
    fn ds_and_dps_are_consistent() {
        let prob = DesignProblem::ball27();
        let d = reconstruct_gt_dps();
        let ds = prob.ds_criterion(&d);
        let dps = prob.dps_criterion(&d);
        let f9 = f_quantile(9, 8, 0.95).unwrap().powi(9);
        assert!((dps.value - f9 * ds.value.powi(9)).abs() <= 1e-10 * dps.value);
        assert_eq!(ds.log_det, dps.log_det);
    }

    #[test]
    fn spherical_round_trip() {
        let c = CandidateSet::ball27();
        let d = reconstruct_gt_dps();
        let s = d.to_spherical(&c).unwrap();
        assert_eq!(s.len(), 9);
        assert_eq!(s.sphere_runs(), 17);
        assert!((s.center_weight() - 1.0 / 18.0).abs() < 1e-15);
        assert_eq!(s.orbit_labels().iter().filter(|&&l| l == 1).count(), 1);
        assert_eq!(ExactDesign::from_spherical(&s, &c).unwrap(), d);
    }

    #[test]
    fn problem_validation() {
        let prob = DesignProblem::ball27();
        assert!(prob.check(&ExactDesign::new(vec![0; 17])).is_err());
        assert!(matches!(
            prob.check(&ExactDesign::new(vec![27; 18])),
            Err(Error::BadIndex(27))
        ));
        assert!(DesignProblem::new(
            CandidateSet::ball27(),
            RegressionModel::FullQuadratic,
            9,
            0.05
        )
        .is_err());
        assert!(prob.clone().with_alpha(1.5).is_err());
    }
}
