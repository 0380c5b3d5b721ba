//! The octahedral graph, its fixed edge orientation, labelings, realizations
//! and the elementary geometric predicates everything else builds on.

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::Vector3;
use serde::Deserialize;

use crate::{Error, Result};

/// Strictness margin for triangle-inequality validation of labelings.
const TRIANGLE_STRICT_TOL: f64 = 1e-12;

/// A vertex of the octahedral graph, numbered `1..=6`.
///
/// The three pairs `{1,2}`, `{3,4}`, `{5,6}` are non-edges (the diagonals of
/// the octahedron); every other pair is an edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(u8);

impl VertexId {
    pub fn new(v: u8) -> Result<Self> {
        if (1..=6).contains(&v) {
            Ok(VertexId(v))
        } else {
            Err(Error::BadVertex(v))
        }
    }

    pub const fn get(self) -> u8 {
        self.0
    }

    /// Zero-based index, for array storage.
    pub const fn index(self) -> usize {
        self.0 as usize - 1
    }

    /// The vertex forming a non-edge with this one (1↔2, 3↔4, 5↔6).
    pub const fn partner(self) -> VertexId {
        VertexId(match self.0 {
            1 => 2,
            2 => 1,
            3 => 4,
            4 => 3,
            5 => 6,
            _ => 5,
        })
    }

    pub fn all() -> impl Iterator<Item = VertexId> {
        (1..=6).map(VertexId)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Convenience constructor for internal use with literal vertex numbers.
pub(crate) fn v(n: u8) -> VertexId {
    VertexId::new(n).expect("vertex literal in 1..=6")
}

/// An undirected edge of the octahedral graph, stored with endpoints sorted.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: VertexId,
    b: VertexId,
}

impl Edge {
    pub fn new(i: VertexId, j: VertexId) -> Result<Self> {
        if i == j || i.partner() == j {
            return Err(Error::NonEdge(i.get(), j.get()));
        }
        let (a, b) = if i < j { (i, j) } else { (j, i) };
        Ok(Edge { a, b })
    }

    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.a, self.b)
    }

    pub fn contains(self, w: VertexId) -> bool {
        self.a == w || self.b == w
    }

    /// The endpoint other than `w`.
    pub fn other(self, w: VertexId) -> VertexId {
        if self.a == w {
            self.b
        } else {
            self.a
        }
    }

    /// Canonical key `"i-j"` with `i < j`, used in JSON files.
    pub fn key(self) -> String {
        format!("{}-{}", self.a, self.b)
    }

    pub fn from_key(key: &str) -> Result<Self> {
        let bad = || Error::BadLabeling(format!("bad edge key {key:?}"));
        let (i, j) = key.split_once('-').ok_or_else(bad)?;
        let i: u8 = i.parse().map_err(|_| bad())?;
        let j: u8 = j.parse().map_err(|_| bad())?;
        if i >= j {
            return Err(bad());
        }
        Edge::new(VertexId::new(i)?, VertexId::new(j)?)
    }

    /// The two vertices adjacent to both endpoints; each edge lies in exactly
    /// two triangular faces, spanned by these.
    pub fn face_apexes(self) -> (VertexId, VertexId) {
        let mut out = [None, None];
        let mut n = 0;
        for w in VertexId::all() {
            if !self.contains(w) && w != self.a.partner() && w != self.b.partner() {
                out[n] = Some(w);
                n += 1;
            }
        }
        (out[0].unwrap(), out[1].unwrap())
    }
}

impl fmt::Debug for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{},{}}}", self.a, self.b)
    }
}

pub(crate) fn e(i: u8, j: u8) -> Edge {
    Edge::new(v(i), v(j)).expect("edge literal")
}

/// The 12 edges in canonical (lexicographic) order.
pub fn all_edges() -> [Edge; 12] {
    [
        e(1, 3),
        e(1, 4),
        e(1, 5),
        e(1, 6),
        e(2, 3),
        e(2, 4),
        e(2, 5),
        e(2, 6),
        e(3, 5),
        e(3, 6),
        e(4, 5),
        e(4, 6),
    ]
}

/// Canonical index of an edge in [`all_edges`] order.
pub fn edge_index(edge: Edge) -> usize {
    all_edges()
        .iter()
        .position(|&x| x == edge)
        .expect("edge is one of the 12")
}

/// The 8 triangular faces: one vertex from each diagonal pair.
pub fn faces() -> [[VertexId; 3]; 8] {
    let mut out = [[v(1), v(3), v(5)]; 8];
    let mut n = 0;
    for &a in &[1u8, 2] {
        for &b in &[3u8, 4] {
            for &c in &[5u8, 6] {
                out[n] = [v(a), v(b), v(c)];
                n += 1;
            }
        }
    }
    out
}

/// A directed edge.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedEdge {
    pub tail: VertexId,
    pub head: VertexId,
}

impl OrientedEdge {
    pub fn new(tail: VertexId, head: VertexId) -> Result<Self> {
        Edge::new(tail, head)?;
        Ok(OrientedEdge { tail, head })
    }

    pub fn undirected(self) -> Edge {
        Edge::new(self.tail, self.head).expect("underlying pair is an edge")
    }

    pub fn reversed(self) -> Self {
        OrientedEdge { tail: self.head, head: self.tail }
    }
}

impl fmt::Debug for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}→{})", self.tail, self.head)
    }
}

pub(crate) fn oe(tail: u8, head: u8) -> OrientedEdge {
    OrientedEdge::new(v(tail), v(head)).expect("oriented edge literal")
}

/// The fixed reference orientation of the 12 edges.
///
/// It is equivariant under the cyclic vertex permutation (1 4 5 2 3 6),
/// which a unit test asserts rather than trusting the transcription.
pub fn fixed_orientation() -> [OrientedEdge; 12] {
    [
        oe(1, 6),
        oe(1, 3),
        oe(4, 1),
        oe(5, 1),
        oe(6, 3),
        oe(4, 6),
        oe(6, 2),
        oe(3, 5),
        oe(3, 2),
        oe(5, 4),
        oe(2, 4),
        oe(2, 5),
    ]
}

/// True iff `tail → head` agrees with the fixed orientation.
pub fn is_fixed_direction(tail: VertexId, head: VertexId) -> bool {
    fixed_orientation()
        .iter()
        .any(|d| d.tail == tail && d.head == head)
}

/// Image of a vertex under the k-th power of the cyclic permutation
/// (1 4 5 2 3 6).
pub fn cyclic_image(w: VertexId, k: usize) -> VertexId {
    const CYCLE: [u8; 6] = [1, 4, 5, 2, 3, 6];
    let pos = CYCLE.iter().position(|&c| c == w.get()).unwrap();
    v(CYCLE[(pos + k) % 6])
}

/// A positive length for each of the 12 edges.
///
/// Construction validates positivity and the strict triangle inequality on
/// all 8 faces; degenerate faces are rejected outright since labelings with a
/// degenerate triangle admit no flexible motion.
#[derive(Clone, PartialEq)]
pub struct OctLabeling {
    lengths: [f64; 12],
}

impl fmt::Debug for OctLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut m = f.debug_map();
        for (edge, len) in all_edges().iter().zip(self.lengths.iter()) {
            m.entry(&edge.key(), len);
        }
        m.finish()
    }
}

impl OctLabeling {
    pub fn new(lengths: &BTreeMap<Edge, f64>) -> Result<Self> {
        let mut arr = [0.0; 12];
        for (k, edge) in all_edges().iter().enumerate() {
            let len = *lengths
                .get(edge)
                .ok_or_else(|| Error::BadLabeling(format!("missing edge {}", edge.key())))?;
            if !(len > 0.0) || !len.is_finite() {
                return Err(Error::BadLabeling(format!(
                    "edge {} has non-positive length {len}",
                    edge.key()
                )));
            }
            arr[k] = len;
        }
        if lengths.len() != 12 {
            return Err(Error::BadLabeling("expected exactly 12 edges".into()));
        }
        let lab = OctLabeling { lengths: arr };
        lab.check_triangles()?;
        Ok(lab)
    }

    /// Build from the 12 lengths in canonical edge order.
    pub fn from_canonical(lengths: [f64; 12]) -> Result<Self> {
        let map: BTreeMap<Edge, f64> = all_edges().iter().copied().zip(lengths).collect();
        Self::new(&map)
    }

    fn check_triangles(&self) -> Result<()> {
        for face in faces() {
            let l01 = self.length(face[0], face[1])?;
            let l12 = self.length(face[1], face[2])?;
            let l02 = self.length(face[0], face[2])?;
            for (a, b, c) in [(l01, l12, l02), (l12, l02, l01), (l02, l01, l12)] {
                if a + b <= c + TRIANGLE_STRICT_TOL {
                    return Err(Error::BadLabeling(format!(
                        "face {}{}{} violates the strict triangle inequality",
                        face[0], face[1], face[2]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn get(&self, edge: Edge) -> f64 {
        self.lengths[edge_index(edge)]
    }

    pub fn length(&self, i: VertexId, j: VertexId) -> Result<f64> {
        Ok(self.get(Edge::new(i, j)?))
    }

    pub fn mean_length(&self) -> f64 {
        self.lengths.iter().sum::<f64>() / 12.0
    }

    /// Lengths in canonical edge order.
    pub fn canonical_lengths(&self) -> [f64; 12] {
        self.lengths
    }

    /// Parse the JSON labeling file `{"lengths": {"1-3": 20.0, ...}}`.
    ///
    /// Exactly the 12 canonical edge keys must be present; unknown keys
    /// (including the diagonals "1-2", "3-4", "5-6") are rejected.
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct File {
            lengths: BTreeMap<String, f64>,
        }
        let file: File = serde_json::from_str(text)
            .map_err(|err| Error::BadLabeling(format!("json: {err}")))?;
        let mut map = BTreeMap::new();
        for (key, len) in &file.lengths {
            let edge = Edge::from_key(key)?;
            if edge.key() != *key {
                return Err(Error::BadLabeling(format!("non-canonical edge key {key:?}")));
            }
            map.insert(edge, *len);
        }
        Self::new(&map)
    }

    /// Serialize as the canonical labeling file (sorted keys, 17 significant
    /// digits).
    pub fn to_json(&self) -> String {
        let entries: Vec<String> = all_edges()
            .iter()
            .map(|edge| format!("\"{}\": {}", edge.key(), fmt_f64(self.get(*edge))))
            .collect();
        format!("{{\"lengths\": {{{}}}}}", entries.join(", "))
    }

    /// Apply the k-th power of the cyclic permutation (1 4 5 2 3 6) to all
    /// vertex indices: the new length of {σi, σj} is the old length of {i, j}.
    pub fn cyclic_relabel(&self, k: usize) -> Self {
        let mut map = BTreeMap::new();
        for edge in all_edges() {
            let (i, j) = edge.endpoints();
            let image = Edge::new(cyclic_image(i, k), cyclic_image(j, k)).unwrap();
            map.insert(image, self.get(edge));
        }
        Self::new(&map).expect("relabeled lengths stay valid")
    }

    /// The built-in flexible example with lengths 20, 13, 11, 21.
    ///
    /// Its quadrilaterals satisfy all three classical flexibility conditions
    /// at once and its motion is a closed loop with two flat realizations.
    pub fn all_types_example() -> Self {
        let mut map = BTreeMap::new();
        for (i, j, len) in [
            (1, 3, 20.0),
            (1, 4, 20.0),
            (2, 3, 20.0),
            (2, 4, 20.0),
            (1, 5, 13.0),
            (1, 6, 13.0),
            (2, 5, 13.0),
            (2, 6, 13.0),
            (3, 5, 11.0),
            (4, 6, 11.0),
            (3, 6, 21.0),
            (4, 5, 21.0),
        ] {
            map.insert(e(i, j), len);
        }
        Self::new(&map).expect("example labeling is valid")
    }
}

/// Fixed 17-significant-digit float formatting used by all emitted files.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Signed edge length: `+λ` along the fixed orientation, `−λ` against it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SignedLength(pub f64);

/// Signed length of the directed pair `tail → head`.
pub fn signed_length(labeling: &OctLabeling, tail: VertexId, head: VertexId) -> Result<SignedLength> {
    let lambda = labeling.length(tail, head)?;
    Ok(SignedLength(if is_fixed_direction(tail, head) {
        lambda
    } else {
        -lambda
    }))
}

/// Placement of the six vertices in 3-space.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    points: [Vector3<f64>; 6],
}

impl Realization {
    pub fn new(points: [Vector3<f64>; 6]) -> Result<Self> {
        for p in &points {
            if !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite()) {
                return Err(Error::Degenerate("non-finite coordinate".into()));
            }
        }
        Ok(Realization { points })
    }

    pub fn point(&self, w: VertexId) -> Vector3<f64> {
        self.points[w.index()]
    }

    pub fn set_point(&mut self, w: VertexId, p: Vector3<f64>) {
        self.points[w.index()] = p;
    }

    pub fn points(&self) -> &[Vector3<f64>; 6] {
        &self.points
    }

    /// Flat 18-vector (x1,y1,z1,...,x6,y6,z6).
    pub fn coords(&self) -> [f64; 18] {
        let mut out = [0.0; 18];
        for (k, p) in self.points.iter().enumerate() {
            out[3 * k] = p.x;
            out[3 * k + 1] = p.y;
            out[3 * k + 2] = p.z;
        }
        out
    }

    pub fn from_coords(coords: &[f64; 18]) -> Self {
        let mut points = [Vector3::zeros(); 6];
        for (k, p) in points.iter_mut().enumerate() {
            *p = Vector3::new(coords[3 * k], coords[3 * k + 1], coords[3 * k + 2]);
        }
        Realization { points }
    }

    /// Max over edges of `| ‖ρ(i)−ρ(j)‖ − λ_ij |`; zero iff compatible.
    pub fn compatibility_residual(&self, labeling: &OctLabeling) -> f64 {
        all_edges()
            .iter()
            .map(|edge| {
                let (i, j) = edge.endpoints();
                ((self.point(i) - self.point(j)).norm() - labeling.get(*edge)).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Smallest distance between two realized vertices.
    pub fn min_vertex_distance(&self) -> f64 {
        let mut best = f64::INFINITY;
        for a in 0..6 {
            for b in (a + 1)..6 {
                best = best.min((self.points[a] - self.points[b]).norm());
            }
        }
        best
    }

    pub fn cyclic_relabel(&self, k: usize) -> Self {
        let mut points = [Vector3::zeros(); 6];
        for w in VertexId::all() {
            points[cyclic_image(w, k).index()] = self.point(w);
        }
        Realization { points }
    }
}

/// Congruence test via the full 6×6 inter-point distance matrix.
///
/// Entrywise agreement within `tol` is equivalent to congruence by an
/// isometry (reflections included) for labeled point sets.
pub fn are_congruent(r1: &Realization, r2: &Realization, tol: f64) -> bool {
    for a in 0..6 {
        for b in (a + 1)..6 {
            let d1 = (r1.points[a] - r1.points[b]).norm();
            let d2 = (r2.points[a] - r2.points[b]).norm();
            if (d1 - d2).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Pyramid: a vertex and its four neighbors in the standard cyclic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pyramid {
    pub apex: VertexId,
    /// The 4-cycle of neighbors, starting from the clockwise neighbor of the
    /// apex in the reference drawing (vertex positions 1,4,5,2,3,6 at 60°
    /// steps counterclockwise on a hexagon).
    pub neighbors: [VertexId; 4],
}

impl Pyramid {
    pub fn new(apex: VertexId) -> Self {
        const HEX: [u8; 6] = [1, 4, 5, 2, 3, 6];
        let pos = HEX.iter().position(|&h| h == apex.get()).unwrap();
        let mut neighbors = [apex; 4];
        let mut n = 0;
        for step in 1..6 {
            let w = v(HEX[(pos + 6 - step) % 6]);
            if w != apex.partner() {
                neighbors[n] = w;
                n += 1;
            }
        }
        Pyramid { apex, neighbors }
    }

    /// The two pairs of cyclically opposite neighbors; each is a diagonal
    /// (non-edge) pair of the octahedral graph.
    pub fn opposite_pairs(&self) -> [(VertexId, VertexId); 2] {
        [
            (self.neighbors[0], self.neighbors[2]),
            (self.neighbors[1], self.neighbors[3]),
        ]
    }
}

/// Cosines of the four apex angles, cyclic order matching the neighbor cycle:
/// entry k is the angle between edges to neighbors k and k+1.
pub fn pyramid_apex_cosines(labeling: &OctLabeling, apex: VertexId) -> Result<[f64; 4]> {
    let pyr = Pyramid::new(apex);
    let mut out = [0.0; 4];
    for k in 0..4 {
        let wa = pyr.neighbors[k];
        let wb = pyr.neighbors[(k + 1) % 4];
        let la = labeling.length(apex, wa)?;
        let lb = labeling.length(apex, wb)?;
        let base = labeling.length(wa, wb)?;
        out[k] = (la * la + lb * lb - base * base) / (2.0 * la * lb);
        if out[k].abs() >= 1.0 {
            return Err(Error::Degenerate(format!(
                "apex angle at {apex} between {wa} and {wb} is degenerate"
            )));
        }
    }
    Ok(out)
}

/// One of the three 4-cycles on vertex sets avoiding a diagonal pair.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quadrilateral {
    /// The excluded diagonal pair, e.g. (5,6) for the quadrilateral on
    /// vertices {1,2,3,4}; quadrilaterals are named by this pair.
    pub label: (VertexId, VertexId),
    /// Its vertices in cycle order, oriented so that consecutive directed
    /// edges all agree with the fixed orientation.
    pub cycle: [VertexId; 4],
}

impl fmt::Debug for Quadrilateral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "quad{}{}", self.label.0, self.label.1)
    }
}

impl Quadrilateral {
    pub fn by_label(a: VertexId, b: VertexId) -> Result<Self> {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        all_quadrilaterals()
            .into_iter()
            .find(|q| q.label == (a, b))
            .ok_or(Error::BadVertex(a.get()))
    }

    /// Edges in cycle order.
    pub fn edges(&self) -> [Edge; 4] {
        let c = self.cycle;
        [
            Edge::new(c[0], c[1]).unwrap(),
            Edge::new(c[1], c[2]).unwrap(),
            Edge::new(c[2], c[3]).unwrap(),
            Edge::new(c[3], c[0]).unwrap(),
        ]
    }

    /// The two pairs of opposite edges.
    pub fn opposite_edge_pairs(&self) -> [(Edge, Edge); 2] {
        let e4 = self.edges();
        [(e4[0], e4[2]), (e4[1], e4[3])]
    }

    pub fn vertices(&self) -> [VertexId; 4] {
        self.cycle
    }

    pub fn label_key(&self) -> String {
        format!("{}{}", self.label.0, self.label.1)
    }
}

/// The three quadrilaterals, labeled 12, 34, 56 by their excluded pair.
/// Cycles follow the fixed orientation (each is a directed 4-cycle).
pub fn all_quadrilaterals() -> [Quadrilateral; 3] {
    [
        Quadrilateral { label: (v(1), v(2)), cycle: [v(3), v(5), v(4), v(6)] },
        Quadrilateral { label: (v(3), v(4)), cycle: [v(5), v(1), v(6), v(2)] },
        Quadrilateral { label: (v(5), v(6)), cycle: [v(1), v(3), v(2), v(4)] },
    ]
}

/// The quadrilateral containing a given edge (each edge lies in exactly one).
pub fn quadrilateral_of_edge(edge: Edge) -> Quadrilateral {
    all_quadrilaterals()
        .into_iter()
        .find(|q| q.edges().contains(&edge))
        .expect("every edge lies in one quadrilateral")
}
