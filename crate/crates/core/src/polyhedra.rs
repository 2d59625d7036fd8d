//! Vertex sets of regular and semi-regular polyhedra, scaled onto S².

use crate::design::SphericalDesign;
use crate::sphere::UnitPoint3;

fn golden() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

fn normalized(v: impl IntoIterator<Item = [f64; 3]>) -> Vec<UnitPoint3> {
    v.into_iter()
        .map(|x| UnitPoint3::from_vector(x).expect("nonzero vertex"))
        .collect()
}

/// Every sign pattern of `v`, skipping sign flips of zero entries.
fn sign_variants(v: [f64; 3]) -> Vec<[f64; 3]> {
    let mut out = vec![v];
    for axis in 0..3 {
        if v[axis] == 0.0 {
            continue;
        }
        let flipped: Vec<[f64; 3]> = out
            .iter()
            .map(|p| {
                let mut q = *p;
                q[axis] = -q[axis];
                q
            })
            .collect();
        out.extend(flipped);
    }
    out
}

fn even_permutations(v: [f64; 3]) -> [[f64; 3]; 3] {
    [v, [v[1], v[2], v[0]], [v[2], v[0], v[1]]]
}

fn cyclic_signed(v: [f64; 3]) -> Vec<[f64; 3]> {
    sign_variants(v)
        .into_iter()
        .flat_map(even_permutations)
        .collect()
}

pub fn tetrahedron() -> Vec<UnitPoint3> {
    normalized([
        [1.0, 1.0, 1.0],
        [1.0, -1.0, -1.0],
        [-1.0, 1.0, -1.0],
        [-1.0, -1.0, 1.0],
    ])
}

pub fn octahedron() -> Vec<UnitPoint3> {
    normalized(cyclic_signed([1.0, 0.0, 0.0]))
}

pub fn cube() -> Vec<UnitPoint3> {
    normalized(sign_variants([1.0, 1.0, 1.0]))
}

pub fn icosahedron() -> Vec<UnitPoint3> {
    normalized(cyclic_signed([0.0, 1.0, golden()]))
}

pub fn dodecahedron() -> Vec<UnitPoint3> {
    let phi = golden();
    let mut v = sign_variants([1.0, 1.0, 1.0]);
    v.extend(cyclic_signed([0.0, 1.0 / phi, phi]));
    normalized(v)
}

/// The 60 vertices of the truncated icosahedron.
pub fn truncated_icosahedron() -> Vec<UnitPoint3> {
    let phi = golden();
    let mut v = cyclic_signed([0.0, 1.0, 3.0 * phi]);
    v.extend(cyclic_signed([1.0, 2.0 + phi, 2.0 * phi]));
    v.extend(cyclic_signed([phi, 2.0, 2.0 * phi + 1.0]));
    normalized(v)
}

/// Equal-weight design on a vertex set.
pub fn equal_design(points: Vec<UnitPoint3>) -> SphericalDesign {
    SphericalDesign::equal_weights(points).expect("polyhedron vertices are distinct")
}
