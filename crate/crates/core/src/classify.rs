//! Pyramid families from edge lengths, the three classical length conditions
//! for flexible octahedra, flat-realization counts of pyramids, and edge
//! multiplicity validation.

use std::collections::BTreeMap;

use nalgebra::Vector2;

use crate::bonds::{edge_parity, EdgeParity};
use crate::oct::{
    all_edges, all_quadrilaterals, pyramid_apex_cosines, Edge, OctLabeling,
    Pyramid, VertexId,
};
use crate::{Error, Result};

/// Cosine clamping threshold for angle extraction.
const COS_CLAMP: f64 = 1e-12;

/// How a matched pair of apex angles matches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairMode {
    Equal,
    Supplementary,
}

fn pair_mode(c1: f64, c2: f64, tol: f64) -> Option<PairMode> {
    if (c1 - c2).abs() < tol {
        Some(PairMode::Equal)
    } else if (c1 + c2).abs() < tol {
        Some(PairMode::Supplementary)
    } else {
        None
    }
}

/// Joint family flags of a pyramid. The families are conditions, not a
/// partition: a pyramid may satisfy several at once.
#[derive(Clone, Debug, PartialEq)]
pub struct PyramidFamily {
    pub is_deltoid: bool,
    pub is_rhomboid: bool,
    pub is_lozenge: bool,
    pub is_general: bool,
    /// Parity of the edges on the equal-pair symmetry axis, when the deltoid
    /// pairing is unambiguous.
    pub deltoid_parity: Option<EdgeParity>,
    /// Modes of the two adjacent deltoid pairs, when deltoid.
    pub deltoid_modes: Option<(PairMode, PairMode)>,
    /// Modes of the two opposite pairs, when rhomboid.
    pub rhomboid_modes: Option<(PairMode, PairMode)>,
    /// For lozenges: true when all four angles are equal.
    pub lozenge_all_equal: Option<bool>,
    /// Apex angle cosines in neighbor-cycle order.
    pub cosines: [f64; 4],
}

impl PyramidFamily {
    pub fn rhomboid_or_lozenge(&self) -> bool {
        self.is_rhomboid || self.is_lozenge
    }
}

/// Decide family flags of the pyramid at `apex` from apex-angle cosines.
pub fn classify_pyramid(labeling: &OctLabeling, apex: VertexId, tol: f64) -> Result<PyramidFamily> {
    let c = pyramid_apex_cosines(labeling, apex)?;
    let pyr = Pyramid::new(apex);

    // rhomboid: both opposite pairs equal or supplementary
    let rhomboid_modes = match (pair_mode(c[0], c[2], tol), pair_mode(c[1], c[3], tol)) {
        (Some(m1), Some(m2)) => Some((m1, m2)),
        _ => None,
    };

    // deltoid: one of the two pairings into disjoint adjacent pairs works
    let pairing_a = match (pair_mode(c[0], c[1], tol), pair_mode(c[2], c[3], tol)) {
        (Some(m1), Some(m2)) => Some((m1, m2)),
        _ => None,
    };
    let pairing_b = match (pair_mode(c[1], c[2], tol), pair_mode(c[3], c[0], tol)) {
        (Some(m1), Some(m2)) => Some((m1, m2)),
        _ => None,
    };
    let is_deltoid = pairing_a.is_some() || pairing_b.is_some();
    // pairing a: angles (w1w2, w2w3) match, so the axis runs through w2, w4;
    // pairing b: axis through w1, w3. Ambiguous pairings give no parity.
    let deltoid_parity = match (pairing_a, pairing_b) {
        (Some(_), None) => {
            Some(edge_parity(apex, Edge::new(apex, pyr.neighbors[1]).unwrap())?)
        }
        (None, Some(_)) => {
            Some(edge_parity(apex, Edge::new(apex, pyr.neighbors[0]).unwrap())?)
        }
        _ => None,
    };

    // lozenge: no right angle and cosines form {a,a,a,a} or {a,a,-a,-a}
    let no_right_angle = c.iter().all(|x| x.abs() > tol);
    let mut sorted = c;
    sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let all_equal = (sorted[3] - sorted[0]).abs() < tol;
    let two_two = (sorted[1] - sorted[0]).abs() < tol
        && (sorted[3] - sorted[2]).abs() < tol
        && (sorted[0] + sorted[3]).abs() < tol
        && !all_equal;
    let is_lozenge = no_right_angle && (all_equal || two_two);

    let is_rhomboid = rhomboid_modes.is_some();
    let is_general = !(is_deltoid || is_rhomboid || is_lozenge);
    Ok(PyramidFamily {
        is_deltoid,
        is_rhomboid,
        is_lozenge,
        is_general,
        deltoid_parity,
        deltoid_modes: pairing_a.or(pairing_b),
        rhomboid_modes,
        lozenge_all_equal: is_lozenge.then_some(all_equal),
        cosines: c,
    })
}

/// Opposite edges of every quadrilateral have equal lengths (the condition
/// for a line-symmetric flexible labeling).
#[derive(Clone, Debug)]
pub struct Type1Report {
    pub satisfied: bool,
    /// (edge, opposite edge, |length difference|) per quadrilateral pair.
    pub pair_deviations: Vec<(Edge, Edge, f64)>,
}

pub fn check_type1(labeling: &OctLabeling, tol: f64) -> Type1Report {
    let mut pair_deviations = Vec::new();
    let mut satisfied = true;
    for quad in all_quadrilaterals() {
        for (a, b) in quad.opposite_edge_pairs() {
            let dev = (labeling.get(a) - labeling.get(b)).abs();
            satisfied &= dev < tol;
            pair_deviations.push((a, b, dev));
        }
    }
    Type1Report { satisfied, pair_deviations }
}

/// Lengths invariant under the reflection fixing one diagonal pair and
/// swapping the members of the other two (plane-symmetric condition).
#[derive(Clone, Debug)]
pub struct Type2Report {
    pub satisfied: bool,
    /// Per fixed-pair choice: (pair, passes, worst deviation).
    pub choices: Vec<((VertexId, VertexId), bool, f64)>,
}

fn reflection_image(w: VertexId, fixed: (VertexId, VertexId)) -> VertexId {
    if w == fixed.0 || w == fixed.1 {
        w
    } else {
        w.partner()
    }
}

pub fn check_type2(labeling: &OctLabeling, tol: f64) -> Type2Report {
    let mut choices = Vec::new();
    for quad in all_quadrilaterals() {
        let fixed = quad.label;
        let mut worst: f64 = 0.0;
        for edge in all_edges() {
            let (i, j) = edge.endpoints();
            let image = Edge::new(reflection_image(i, fixed), reflection_image(j, fixed))
                .expect("reflection permutes edges");
            worst = worst.max((labeling.get(edge) - labeling.get(image)).abs());
        }
        choices.push((fixed, worst < tol, worst));
    }
    Type2Report { satisfied: choices.iter().any(|c| c.1), choices }
}

/// All pyramids rhomboid or lozenge, plus a two-positive/two-negative signed
/// length relation on each quadrilateral.
#[derive(Clone, Debug)]
pub struct Type3Report {
    pub satisfied: bool,
    pub pyramids_ok: bool,
    /// Witness sign vector per quadrilateral (cycle edge order), when found.
    pub etas: Vec<((VertexId, VertexId), Option<[i8; 4]>)>,
}

/// The six sign patterns with exactly two +1 and two −1.
const ETA_PATTERNS: [[i8; 4]; 6] = [
    [1, 1, -1, -1],
    [1, -1, 1, -1],
    [1, -1, -1, 1],
    [-1, 1, 1, -1],
    [-1, 1, -1, 1],
    [-1, -1, 1, 1],
];

pub fn check_type3(labeling: &OctLabeling, tol: f64) -> Type3Report {
    let pyramids_ok = VertexId::all().all(|apex| {
        classify_pyramid(labeling, apex, tol)
            .map(|f| f.rhomboid_or_lozenge())
            .unwrap_or(false)
    });
    let mut etas = Vec::new();
    let mut all_found = true;
    for quad in all_quadrilaterals() {
        let lengths: Vec<f64> = quad.edges().iter().map(|&edge| labeling.get(edge)).collect();
        let found = ETA_PATTERNS.into_iter().find(|eta| {
            let sum: f64 = eta.iter().zip(&lengths).map(|(&s, &l)| s as f64 * l).sum();
            sum.abs() < tol
        });
        all_found &= found.is_some();
        etas.push((quad.label, found));
    }
    Type3Report { satisfied: pyramids_ok && all_found, pyramids_ok, etas }
}

/// Seed construction modes the motion module understands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedMode {
    Line,
    Plane,
    Flat,
}

/// Bundled report of the three length conditions and per-pyramid families.
#[derive(Clone, Debug)]
pub struct TypeReport {
    pub type1: Type1Report,
    pub type2: Type2Report,
    pub type3: Type3Report,
    pub families: Vec<(VertexId, PyramidFamily)>,
    pub recommended_modes: Vec<SeedMode>,
    pub tol: f64,
}

impl TypeReport {
    pub fn any_satisfied(&self) -> bool {
        self.type1.satisfied || self.type2.satisfied || self.type3.satisfied
    }
}

pub fn classify_octahedron(labeling: &OctLabeling, tol: f64) -> Result<TypeReport> {
    let type1 = check_type1(labeling, tol);
    let type2 = check_type2(labeling, tol);
    let type3 = check_type3(labeling, tol);
    let mut families = Vec::new();
    for apex in VertexId::all() {
        families.push((apex, classify_pyramid(labeling, apex, tol)?));
    }
    let mut recommended_modes = Vec::new();
    if type1.satisfied {
        recommended_modes.push(SeedMode::Line);
    }
    if type2.satisfied {
        recommended_modes.push(SeedMode::Plane);
    }
    // flat realizations exist when two neighboring pyramids are rhomboids or
    // lozenges; every Type III labeling qualifies
    let rl = |w: VertexId| {
        families
            .iter()
            .find(|(a, _)| *a == w)
            .map(|(_, f)| f.rhomboid_or_lozenge())
            .unwrap_or(false)
    };
    let neighbor_pair = all_edges().into_iter().any(|edge| {
        let (i, j) = edge.endpoints();
        rl(i) && rl(j)
    });
    if type3.satisfied || neighbor_pair {
        recommended_modes.push(SeedMode::Flat);
    }
    Ok(TypeReport { type1, type2, type3, families, recommended_modes, tol })
}

/// Count planar realizations of the pyramid at `apex`: enumerate sign vectors
/// ε ∈ {±1}⁴ whose signed apex-angle sum closes modulo 2π, build the planar
/// placements, and deduplicate congruent ones (reflections included).
pub fn count_flat_pyramid_realizations(
    labeling: &OctLabeling,
    apex: VertexId,
    tol: f64,
) -> Result<usize> {
    let cos = pyramid_apex_cosines(labeling, apex)?;
    let alphas: Vec<f64> = cos.iter().map(|&c| c.clamp(-1.0 + COS_CLAMP, 1.0 - COS_CLAMP).acos()).collect();
    let pyr = Pyramid::new(apex);
    let radii: Vec<f64> = pyr
        .neighbors
        .iter()
        .map(|&w| labeling.length(apex, w).unwrap())
        .collect();
    let scale = radii.iter().cloned().fold(0.0, f64::max);

    let mut configs: Vec<[Vector2<f64>; 5]> = Vec::new();
    for mask in 0..16u32 {
        let eps: Vec<f64> = (0..4).map(|k| if mask & (1 << k) != 0 { -1.0 } else { 1.0 }).collect();
        let total: f64 = eps.iter().zip(&alphas).map(|(e, a)| e * a).sum();
        let wrapped = (total / (2.0 * std::f64::consts::PI)).round() * 2.0 * std::f64::consts::PI;
        if (total - wrapped).abs() > tol.max(1e-9) {
            continue;
        }
        let mut theta = 0.0_f64;
        let mut pts = [Vector2::zeros(); 5];
        for k in 0..4 {
            pts[k + 1] = radii[k] * Vector2::new(theta.cos(), theta.sin());
            theta += eps[k] * alphas[k];
        }
        let congruent = |a: &[Vector2<f64>; 5], b: &[Vector2<f64>; 5]| {
            (0..5).all(|i| {
                (0..5).all(|j| {
                    ((a[i] - a[j]).norm() - (b[i] - b[j]).norm()).abs() < 1e-7 * scale
                })
            })
        };
        if !configs.iter().any(|c| congruent(c, &pts)) {
            configs.push(pts);
        }
    }
    Ok(configs.len())
}

/// Multiplicity value per edge, each in {1, 2, 4}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityAssignment {
    values: BTreeMap<Edge, u8>,
}

impl MultiplicityAssignment {
    pub fn new(values: BTreeMap<Edge, u8>) -> Result<Self> {
        for edge in all_edges() {
            let val = values
                .get(&edge)
                .ok_or_else(|| Error::Precondition(format!("missing multiplicity for {edge:?}")))?;
            if ![1, 2, 4].contains(val) {
                return Err(Error::Precondition(format!("multiplicity {val} not in {{1,2,4}}")));
            }
        }
        Ok(MultiplicityAssignment { values })
    }

    /// Uniform assignment.
    pub fn constant(val: u8) -> Result<Self> {
        Self::new(all_edges().into_iter().map(|edge| (edge, val)).collect())
    }

    /// Assign per quadrilateral: (value on quad 12, on quad 34, on quad 56).
    pub fn per_quadrilateral(vals: [u8; 3]) -> Result<Self> {
        let quads = all_quadrilaterals();
        let mut map = BTreeMap::new();
        for (q, &val) in quads.iter().zip(&vals) {
            for edge in q.edges() {
                map.insert(edge, val);
            }
        }
        Self::new(map)
    }

    pub fn get(&self, edge: Edge) -> u8 {
        self.values[&edge]
    }
}

/// Check an edge-multiplicity assignment against the per-family rules:
/// opposite edges at an apex agree (hence quadrilaterals are constant),
/// adjacent edges at an apex differ by at most a factor two, general
/// pyramids use only {2,4}, deltoids use the patterns (1,2) or (2,4), and
/// rhomboids/lozenges are uniform 1 or uniform 2.
pub fn validate_multiplicities(
    families: &BTreeMap<VertexId, PyramidFamily>,
    m: &MultiplicityAssignment,
) -> bool {
    for quad in all_quadrilaterals() {
        let vals: Vec<u8> = quad.edges().iter().map(|&edge| m.get(edge)).collect();
        if vals.iter().any(|&x| x != vals[0]) {
            return false;
        }
    }
    for apex in VertexId::all() {
        let pyr = Pyramid::new(apex);
        let vals: Vec<u8> = pyr
            .neighbors
            .iter()
            .map(|&w| m.get(Edge::new(apex, w).unwrap()))
            .collect();
        if vals[0] != vals[2] || vals[1] != vals[3] {
            return false;
        }
        for k in 0..4 {
            let (a, b) = (vals[k], vals[(k + 1) % 4]);
            if a.max(b) > 2 * a.min(b) {
                return false;
            }
        }
        let Some(family) = families.get(&apex) else {
            return false;
        };
        let pair = {
            let mut p = [vals[0], vals[1]];
            p.sort_unstable();
            p
        };
        let ok_general = family.is_general && vals.iter().all(|&x| x == 2 || x == 4);
        let ok_deltoid = family.is_deltoid && (pair == [1, 2] || pair == [2, 4]);
        let ok_rl = family.rhomboid_or_lozenge() && (pair == [1, 1] || pair == [2, 2]);
        if !(ok_general || ok_deltoid || ok_rl) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bonds::{bond_by_name, length_equation, BondLetter, BondName};
    use crate::oct::{e, v};

    const TOL: f64 = 1e-9;

    #[test]
    fn example_pyramid_families() {
        let lab = OctLabeling::all_types_example();
        let f3 = classify_pyramid(&lab, v(3), TOL).unwrap();
        assert!(f3.is_lozenge);
        assert_eq!(f3.lozenge_all_equal, Some(true));

        let f1 = classify_pyramid(&lab, v(1), TOL).unwrap();
        assert!(f1.is_rhomboid && !f1.is_deltoid && !f1.is_lozenge);
        assert_eq!(f1.rhomboid_modes, Some((PairMode::Equal, PairMode::Equal)));

        let f5 = classify_pyramid(&lab, v(5), TOL).unwrap();
        assert!(f5.is_rhomboid && f5.is_deltoid);
        assert_eq!(
            f5.rhomboid_modes,
            Some((PairMode::Supplementary, PairMode::Supplementary))
        );
    }

    #[test]
    fn lozenge_implies_rhomboid_flags() {
        let lab = OctLabeling::all_types_example();
        for apex in VertexId::all() {
            let f = classify_pyramid(&lab, apex, TOL).unwrap();
            if f.is_lozenge {
                assert!(f.is_rhomboid);
            }
            assert!(f.is_deltoid || f.is_rhomboid || f.is_lozenge || f.is_general);
        }
    }

    #[test]
    fn example_type_checks() {
        let lab = OctLabeling::all_types_example();
        assert!(check_type1(&lab, TOL).satisfied);

        let t2 = check_type2(&lab, TOL);
        assert!(t2.satisfied);
        for (pair, passes, _) in &t2.choices {
            let expect = *pair == (v(1), v(2));
            assert_eq!(*passes, expect, "fixed pair {pair:?}");
        }

        let t3 = check_type3(&lab, TOL);
        assert!(t3.satisfied);
        // quadrilateral 12 carries lengths (11, 21, 11, 21) in cycle order
        let eta12 = t3.etas.iter().find(|(l, _)| *l == (v(1), v(2))).unwrap().1.unwrap();
        let lengths = [11.0, 21.0, 11.0, 21.0];
        let sum: f64 = eta12.iter().zip(&lengths).map(|(&s, &l)| s as f64 * l).sum();
        assert_eq!(sum, 0.0);
    }

    #[test]
    fn perturbed_example_fails_type1() {
        let lab = OctLabeling::all_types_example();
        let mut lengths = lab.canonical_lengths();
        lengths[crate::oct::edge_index(e(3, 5))] = 11.1;
        let lab2 = OctLabeling::from_canonical(lengths).unwrap();
        assert!(!check_type1(&lab2, TOL).satisfied);
    }

    #[test]
    fn all_equal_labeling_types() {
        let lab = OctLabeling::from_canonical([1.0; 12]).unwrap();
        assert!(check_type1(&lab, TOL).satisfied);
        let t2 = check_type2(&lab, TOL);
        assert!(t2.choices.iter().all(|c| c.1));
        for apex in VertexId::all() {
            assert!(classify_pyramid(&lab, apex, TOL).unwrap().is_lozenge);
        }
    }

    #[test]
    fn generic_labeling_fails_all_types() {
        // lengths close to 1 with incommensurable perturbations
        let mut lengths = [0.0; 12];
        for (k, slot) in lengths.iter_mut().enumerate() {
            *slot = 1.0 + 0.01 * ((k as f64 + 1.0) * 1.618).sin();
        }
        let lab = OctLabeling::from_canonical(lengths).unwrap();
        let report = classify_octahedron(&lab, TOL).unwrap();
        assert!(!report.any_satisfied());
        assert!(report.families.iter().all(|(_, f)| f.is_general));
        assert!(report.recommended_modes.is_empty());
    }

    #[test]
    fn type_checks_scale_invariant() {
        let lab = OctLabeling::all_types_example();
        let scaled = OctLabeling::from_canonical(lab.canonical_lengths().map(|x| 0.37 * x)).unwrap();
        // tolerance scales with the data here because the equalities are exact
        assert!(check_type1(&scaled, TOL).satisfied);
        assert!(check_type2(&scaled, TOL).satisfied);
        assert!(check_type3(&scaled, TOL).satisfied);
    }

    #[test]
    fn type1_forces_y_and_z_equations_to_vanish() {
        let lab = OctLabeling::all_types_example();
        assert!(check_type1(&lab, TOL).satisfied);
        for quad in all_quadrilaterals() {
            for letter in [BondLetter::Y, BondLetter::Z] {
                let bond = bond_by_name(BondName { quad: quad.label, letter }).unwrap();
                assert_eq!(length_equation(&bond).evaluate(&lab), 0.0);
            }
        }
    }

    #[test]
    fn recommended_modes_for_example() {
        let lab = OctLabeling::all_types_example();
        let report = classify_octahedron(&lab, TOL).unwrap();
        assert_eq!(
            report.recommended_modes,
            vec![SeedMode::Line, SeedMode::Plane, SeedMode::Flat]
        );
    }

    /// Pyramid with prescribed apex cosines: radii free, rim lengths from the
    /// law of cosines.
    fn pyramid_labeling(apex_cos: [f64; 4], radii: [f64; 4]) -> OctLabeling {
        // embed at apex 1 (neighbors cycle 6,3,5,4); remaining edges unit-ish
        let apex = v(1);
        let pyr = Pyramid::new(apex);
        let mut map: BTreeMap<Edge, f64> = BTreeMap::new();
        for (k, &w) in pyr.neighbors.iter().enumerate() {
            map.insert(Edge::new(apex, w).unwrap(), radii[k]);
        }
        for k in 0..4 {
            let wa = pyr.neighbors[k];
            let wb = pyr.neighbors[(k + 1) % 4];
            let (ra, rb) = (radii[k], radii[(k + 1) % 4]);
            let rim = (ra * ra + rb * rb - 2.0 * ra * rb * apex_cos[k]).sqrt();
            map.insert(Edge::new(wa, wb).unwrap(), rim);
        }
        // fill edges not touching the pyramid with a safely large value
        for edge in all_edges() {
            map.entry(edge).or_insert(3.0);
        }
        OctLabeling::new(&map).unwrap()
    }

    #[test]
    fn flat_counts_for_constructed_families() {
        // deltoid (α,α,β,β): two flat realizations
        let lab = pyramid_labeling(
            [0.42, 0.42, -0.15, -0.15],
            [1.0, 1.3, 0.9, 1.15],
        );
        assert_eq!(count_flat_pyramid_realizations(&lab, v(1), 1e-7).unwrap(), 2);

        // rhomboid (α,β,α,β): two
        let lab = pyramid_labeling([0.35, -0.2, 0.35, -0.2], [1.0, 1.2, 0.8, 1.4]);
        assert_eq!(count_flat_pyramid_realizations(&lab, v(1), 1e-7).unwrap(), 2);

        // lozenge (all equal, not right): three
        let lab = pyramid_labeling([0.3, 0.3, 0.3, 0.3], [1.0, 1.25, 0.85, 1.1]);
        assert_eq!(count_flat_pyramid_realizations(&lab, v(1), 1e-7).unwrap(), 3);

        // the example's rhomboid apex: two
        let lab = OctLabeling::all_types_example();
        assert_eq!(count_flat_pyramid_realizations(&lab, v(1), 1e-7).unwrap(), 2);
    }

    #[test]
    fn flat_count_range_and_lozenge_bound() {
        let lab = OctLabeling::all_types_example();
        for apex in VertexId::all() {
            let n = count_flat_pyramid_realizations(&lab, apex, 1e-7).unwrap();
            assert!(n <= 3);
            if n == 3 {
                assert!(classify_pyramid(&lab, apex, TOL).unwrap().is_lozenge);
            }
        }
    }

    fn all_families(lab: &OctLabeling) -> BTreeMap<VertexId, PyramidFamily> {
        VertexId::all()
            .map(|apex| (apex, classify_pyramid(lab, apex, TOL).unwrap()))
            .collect()
    }

    #[test]
    fn multiplicity_rules() {
        let lab = OctLabeling::all_types_example();
        let fams = all_families(&lab);
        // all rhomboid/lozenge families accept the uniform assignment 2
        let m = MultiplicityAssignment::constant(2).unwrap();
        assert!(validate_multiplicities(&fams, &m));

        // neighbor factor 4 is rejected: quads 12, 34 at 1, quad 56 at 4
        // gives every apex a (1,4) or (4,1) adjacency somewhere
        let m = MultiplicityAssignment::per_quadrilateral([1, 1, 4]).unwrap();
        assert!(!validate_multiplicities(&fams, &m));

        // deltoid pattern (1,2): quadrilateral 12 doubled. Build families
        // with deltoid flags at apexes 3..6 and rhomboids at 1, 2.
        let mut lengths = [0.0; 12];
        let spec: &[(u8, u8, f64)] = &[
            (1, 3, 2.0),
            (1, 4, 2.0),
            (2, 3, 2.0),
            (2, 4, 2.0),
            (1, 5, 1.5),
            (1, 6, 1.5),
            (2, 5, 1.5),
            (2, 6, 1.5),
            (3, 5, 1.1),
            (4, 6, 1.1),
            (3, 6, 1.1),
            (4, 5, 1.1),
        ];
        for &(i, j, len) in spec {
            lengths[crate::oct::edge_index(e(i, j))] = len;
        }
        let lab2 = OctLabeling::from_canonical(lengths).unwrap();
        let fams2 = all_families(&lab2);
        for apex in [3u8, 4, 5, 6] {
            assert!(fams2[&v(apex)].is_deltoid, "apex {apex}");
        }
        assert!(fams2[&v(1)].rhomboid_or_lozenge());
        assert!(fams2[&v(2)].rhomboid_or_lozenge());
        let m = MultiplicityAssignment::per_quadrilateral([2, 1, 1]).unwrap();
        assert!(validate_multiplicities(&fams2, &m));
    }
}
