//! Reduction from spatial realizations to the unit sphere: the edge graph,
//! its induced cosine labeling, the lift of realizations, and the Segre-type
//! projective parametrization of sphere points.

use std::collections::BTreeMap;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::oct::{
    all_edges, faces, fmt_f64, is_fixed_direction, signed_length, Edge, OctLabeling, Realization,
    VertexId,
};
use crate::{Error, Result};

/// Graph on the 12 octahedron edges; two are adjacent iff they lie in a
/// common triangular face.
#[derive(Clone, Debug)]
pub struct EdgeGraph {
    vertices: [Edge; 12],
    edges: Vec<(Edge, Edge)>,
}

impl EdgeGraph {
    pub fn vertices(&self) -> &[Edge; 12] {
        &self.vertices
    }

    /// The 24 adjacent pairs, each canonically ordered.
    pub fn edges(&self) -> &[(Edge, Edge)] {
        &self.edges
    }

    pub fn are_adjacent(&self, a: Edge, b: Edge) -> bool {
        let key = canonical_pair(a, b);
        self.edges.contains(&key)
    }
}

/// Canonical ordering of an edge-graph edge.
pub fn canonical_pair(a: Edge, b: Edge) -> (Edge, Edge) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The vertex shared by two octahedron edges lying in a common face.
pub fn shared_vertex(a: Edge, b: Edge) -> Option<VertexId> {
    let (a1, a2) = a.endpoints();
    [a1, a2].into_iter().find(|&w| b.contains(w))
}

pub fn build_edge_graph() -> EdgeGraph {
    let vertices = all_edges();
    let mut edges = Vec::new();
    for face in faces() {
        let fe = [
            Edge::new(face[0], face[1]).unwrap(),
            Edge::new(face[1], face[2]).unwrap(),
            Edge::new(face[0], face[2]).unwrap(),
        ];
        for i in 0..3 {
            for j in (i + 1)..3 {
                edges.push(canonical_pair(fe[i], fe[j]));
            }
        }
    }
    edges.sort();
    edges.dedup();
    EdgeGraph { vertices, edges }
}

/// Cosine labels on the 24 edge-graph edges, corrected for the fixed
/// orientation so that each stored value equals the inner product of the two
/// lifted unit vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SphericalLabeling {
    cosines: BTreeMap<(Edge, Edge), f64>,
}

impl SphericalLabeling {
    pub fn get(&self, a: Edge, b: Edge) -> Option<f64> {
        self.cosines.get(&canonical_pair(a, b)).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(Edge, Edge), &f64)> {
        self.cosines.iter()
    }

    /// JSON object keyed by `"i-j|m-n"` canonical pair keys.
    pub fn to_json(&self) -> String {
        let entries: Vec<String> = self
            .cosines
            .iter()
            .map(|((a, b), val)| format!("\"{}|{}\": {}", a.key(), b.key(), fmt_f64(*val)))
            .collect();
        format!("{{{}}}", entries.join(", "))
    }
}

/// Sign of the lifted unit vector of `edge` relative to the vertex `from`:
/// +1 when the fixed orientation points into `from`'s opposite end... more
/// precisely, q satisfies ρ(i) − ρ(j) = ℓ_ij q, so expressed from a shared
/// vertex j the vector toward the other endpoint is sign(ℓ_ij) q.
fn sign_from(edge: Edge, shared: VertexId) -> f64 {
    let other = edge.other(shared);
    if is_fixed_direction(other, shared) {
        1.0
    } else {
        -1.0
    }
}

/// The induced cosine labeling: for edges {i,j}, {m,j} of a common face,
/// the angle cosine at j from the law of cosines, multiplied by the
/// orientation signs of the two edges.
pub fn induced_labeling(labeling: &OctLabeling) -> SphericalLabeling {
    let graph = build_edge_graph();
    let mut cosines = BTreeMap::new();
    for &(a, b) in graph.edges() {
        let j = shared_vertex(a, b).expect("adjacent edges share a vertex");
        let i = a.other(j);
        let m = b.other(j);
        let lij = labeling.get(a);
        let lmj = labeling.get(b);
        let lim = labeling.length(i, m).expect("third side of the face");
        let cos = -(lim * lim - lij * lij - lmj * lmj) / (2.0 * lij * lmj);
        cosines.insert((a, b), cos * sign_from(a, j) * sign_from(b, j));
    }
    SphericalLabeling { cosines }
}

/// Unit vectors on the sphere, one per octahedron edge.
#[derive(Clone, Debug)]
pub struct SphericalRealization {
    points: BTreeMap<Edge, Vector3<f64>>,
}

impl SphericalRealization {
    pub fn get(&self, edge: Edge) -> Vector3<f64> {
        self.points[&edge]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Edge, &Vector3<f64>)> {
        self.points.iter()
    }
}

/// Lift a compatible realization to the sphere: q_{i,j} = (ρ(i) − ρ(j)) / ℓ_ij
/// with the signed length of the fixed orientation. Translated realizations
/// lift identically.
pub fn lift_realization(
    r: &Realization,
    labeling: &OctLabeling,
    tol: f64,
) -> Result<SphericalRealization> {
    let res = r.compatibility_residual(labeling);
    if res >= tol {
        return Err(Error::Precondition(format!(
            "realization incompatible with labeling (residual {res:.3e} ≥ {tol:.3e})"
        )));
    }
    let mut points = BTreeMap::new();
    for edge in all_edges() {
        let (i, j) = edge.endpoints();
        let ell = signed_length(labeling, i, j)?.0;
        points.insert(edge, (r.point(i) - r.point(j)) / ell);
    }
    Ok(SphericalRealization { points })
}

/// Max over the 8 faces and 3 quadrilaterals of the norm of the
/// signed-length-weighted sum of lifted vectors around the cycle.
/// Zero (up to roundoff) on any lift, by telescoping.
pub fn triangle_closure_residual(sr: &SphericalRealization, labeling: &OctLabeling) -> f64 {
    let mut worst: f64 = 0.0;
    let mut cycle_residual = |cycle: &[VertexId]| {
        let mut sum = Vector3::zeros();
        for k in 0..cycle.len() {
            let i = cycle[k];
            let j = cycle[(k + 1) % cycle.len()];
            let ell = signed_length(labeling, i, j).expect("cycle edges").0;
            // ρ(i) − ρ(j) = ℓ_ij q, and the loop telescopes as Σ (ρ(i)−ρ(j))
            sum += ell * sr.get(Edge::new(i, j).unwrap());
        }
        worst = worst.max(sum.norm());
    };
    for face in faces() {
        cycle_residual(&face);
    }
    for quad in crate::oct::all_quadrilaterals() {
        cycle_residual(&quad.cycle);
    }
    worst
}

/// A marked-point pair: the left and right lift of a sphere point, as
/// homogeneous coordinate pairs on the projective line.
#[derive(Clone, Copy, Debug)]
pub struct ProjectivePointPair {
    pub left: (Complex64, Complex64),
    pub right: (Complex64, Complex64),
}

impl ProjectivePointPair {
    pub fn new(left: (Complex64, Complex64), right: (Complex64, Complex64)) -> Result<Self> {
        let zero = |p: (Complex64, Complex64)| p.0.norm() == 0.0 && p.1.norm() == 0.0;
        if zero(left) || zero(right) {
            return Err(Error::Degenerate("homogeneous pair (0:0)".into()));
        }
        Ok(ProjectivePointPair { left, right })
    }
}

/// Sphere point from a pair of lifts:
/// ( uu′, vv′, uv′+vu′ ) / (uv′ − vu′).
///
/// The image satisfies z² − 4xy = 1 exactly. Coinciding lifts correspond to
/// the plane at infinity and are rejected.
pub fn segre_point(p: &ProjectivePointPair) -> Result<[Complex64; 3]> {
    let (u, v) = p.left;
    let (up, vp) = p.right;
    let denom = u * vp - v * up;
    if denom.norm() == 0.0 {
        return Err(Error::AtInfinity);
    }
    Ok([u * up / denom, v * vp / denom, (u * vp + v * up) / denom])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oct::e;
    use approx::assert_relative_eq;
    use nalgebra::Vector3;

    #[test]
    fn edge_graph_shape() {
        let g = build_edge_graph();
        assert_eq!(g.vertices().len(), 12);
        assert_eq!(g.edges().len(), 24);
        assert!(g.are_adjacent(e(1, 3), e(3, 5)));
        assert!(!g.are_adjacent(e(1, 3), e(2, 4)));
    }

    #[test]
    fn induced_labeling_example_values() {
        let lab = OctLabeling::all_types_example();
        let sl = induced_labeling(&lab);
        assert_relative_eq!(sl.get(e(1, 3), e(3, 5)).unwrap().abs(), 0.8, epsilon = 1e-12);

        let unit = OctLabeling::from_canonical([1.0; 12]).unwrap();
        for (_, val) in induced_labeling(&unit).iter() {
            assert_relative_eq!(val.abs(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn induced_labeling_in_open_interval() {
        for lab in [
            OctLabeling::all_types_example(),
            OctLabeling::from_canonical([1.0; 12]).unwrap(),
        ] {
            for (_, val) in induced_labeling(&lab).iter() {
                assert!(val.abs() < 1.0);
            }
        }
    }

    fn unit_octahedron() -> (Realization, OctLabeling) {
        let a = 0.5_f64.sqrt();
        let r = Realization::new([
            Vector3::new(a, 0.0, 0.0),
            Vector3::new(-a, 0.0, 0.0),
            Vector3::new(0.0, a, 0.0),
            Vector3::new(0.0, -a, 0.0),
            Vector3::new(0.0, 0.0, a),
            Vector3::new(0.0, 0.0, -a),
        ])
        .unwrap();
        (r, OctLabeling::from_canonical([1.0; 12]).unwrap())
    }

    #[test]
    fn lift_is_unit_translation_invariant_and_consistent() {
        let (r, lab) = unit_octahedron();
        let lifted = lift_realization(&r, &lab, 1e-9).unwrap();
        for (_, q) in lifted.iter() {
            assert_relative_eq!(q.norm(), 1.0, epsilon = 1e-12);
        }
        let mut shifted = r.clone();
        for w in VertexId::all() {
            shifted.set_point(w, r.point(w) + Vector3::new(3.0, -1.0, 2.0));
        }
        let lifted2 = lift_realization(&shifted, &lab, 1e-9).unwrap();
        for edge in all_edges() {
            assert_relative_eq!((lifted.get(edge) - lifted2.get(edge)).norm(), 0.0, epsilon = 1e-12);
        }
        // inner products match the induced labeling
        let sl = induced_labeling(&lab);
        for &(a, b) in build_edge_graph().edges() {
            let dot = lifted.get(a).dot(&lifted.get(b));
            assert_relative_eq!(dot, sl.get(a, b).unwrap(), epsilon = 1e-9);
        }
    }

    #[test]
    fn lift_rejects_incompatible() {
        let (r, _) = unit_octahedron();
        let lab2 = OctLabeling::from_canonical([1.25; 12]).unwrap();
        assert!(lift_realization(&r, &lab2, 1e-9).is_err());
    }

    #[test]
    fn closure_residual_zero_on_lift_and_large_on_noise() {
        let (r, lab) = unit_octahedron();
        let lifted = lift_realization(&r, &lab, 1e-9).unwrap();
        assert!(triangle_closure_residual(&lifted, &lab) < 1e-9);

        let mut noisy = lifted.clone();
        for (k, edge) in all_edges().into_iter().enumerate() {
            let t = k as f64;
            noisy
                .points
                .insert(edge, Vector3::new(t.sin(), t.cos(), (0.7 * t).sin()).normalize());
        }
        assert!(triangle_closure_residual(&noisy, &lab) > 0.1);
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn segre_examples() {
        let p = ProjectivePointPair::new((c(1.0, 0.0), c(0.0, 0.0)), (c(0.0, 0.0), c(1.0, 0.0)))
            .unwrap();
        let q = segre_point(&p).unwrap();
        assert_eq!(q[0], c(0.0, 0.0));
        assert_eq!(q[1], c(0.0, 0.0));
        assert_eq!(q[2], c(1.0, 0.0));

        let p = ProjectivePointPair::new((c(1.0, 0.0), c(1.0, 0.0)), (c(1.0, 0.0), c(-1.0, 0.0)))
            .unwrap();
        let q = segre_point(&p).unwrap();
        assert_relative_eq!(q[0].re, -0.5, epsilon = 1e-15);
        assert_relative_eq!(q[1].re, 0.5, epsilon = 1e-15);
        assert_relative_eq!(q[2].norm(), 0.0, epsilon = 1e-15);

        let p = ProjectivePointPair::new((c(1.0, 0.0), c(1.0, 0.0)), (c(1.0, 0.0), c(1.0, 0.0)))
            .unwrap();
        assert!(matches!(segre_point(&p), Err(Error::AtInfinity)));
    }
}
