//! Construction, verification, optimization, symmetry classification and
//! stereogram rendering of point designs on the unit sphere and ball.

// negated float comparisons reject NaN along with out-of-range values
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cubature;
pub mod design;
pub mod error;
pub mod harmonics;
pub mod optimal;
pub mod polyhedra;
pub mod sphere;
pub mod stereogram;
pub mod subset;
pub mod symmetry;

pub use cubature::{check_t_design, harmonic_defect, CubatureReport, MonomialExponent};
pub use design::{load_point_file, OrbitSummary, PointFormat, SphericalDesign};
pub use error::{Error, Result};
pub use optimal::{
    exchange_search, reconstruct_gt_dps, CandidateSet, CriterionKind, CriterionValue,
    DesignProblem, ExactDesign,
};
pub use sphere::{project, unproject, Direction, Hemisphere, StereoPoint, UnitPoint3};
pub use stereogram::{build_scene, render_svg, RenderOptions, StereogramScene};
pub use subset::{build_subset_design, NamedDesign, SubsetCoefficients, SubsetSet};
pub use symmetry::{
    detect_point_group, is_geometrically_isomorphic, isomorphism_classes, octahedral_group,
    PointGroup, SymmetryOperation,
};
