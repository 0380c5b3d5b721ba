//! Red/blue edge colorings without alternating 3-edge walks, their
//! exhaustive enumeration, and the boundary-divisor partitions that biject
//! to oriented quadrilaterals.

use std::collections::BTreeSet;
use std::fmt;

use crate::bonds::{bond_name, valid_octahedral_bonds, BondName, OctahedralBond};
use crate::oct::{all_edges, Edge, OrientedEdge, Quadrilateral, VertexId};
use crate::sphere::{shared_vertex, EdgeGraph};
use crate::{Error, Result};

/// Edge count cap for the exhaustive coloring search.
pub const NAP_EDGE_LIMIT: usize = 26;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn flipped(self) -> Self {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Blue => "blue",
        }
    }
}

/// A plain undirected graph given by an edge list on vertices 0..n.
#[derive(Clone, Debug)]
pub struct Graph {
    pub vertex_count: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        Graph { vertex_count, edges }
    }

    /// Indices of edges incident to each vertex.
    fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertex_count];
        for (k, &(a, b)) in self.edges.iter().enumerate() {
            inc[a].push(k);
            inc[b].push(k);
        }
        inc
    }
}

/// An edge coloring, indexed like the graph's edge list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct NapColoring {
    pub colors: Vec<Color>,
}

impl fmt::Debug for NapColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.colors {
            write!(f, "{}", if *c == Color::Red { 'r' } else { 'b' })?;
        }
        Ok(())
    }
}

impl NapColoring {
    /// Canonical representative up to the global red↔blue swap: first edge
    /// red.
    pub fn canonical(&self) -> Self {
        if self.colors.first() == Some(&Color::Blue) {
            NapColoring { colors: self.colors.iter().map(|c| c.flipped()).collect() }
        } else {
            self.clone()
        }
    }
}

/// True iff the coloring is surjective and no walk of three consecutive
/// distinct edges alternates colors (closed walks count, which is what
/// forces triangles to be monochromatic).
pub fn is_nap_coloring(graph: &Graph, coloring: &NapColoring) -> bool {
    if coloring.colors.len() != graph.edges.len() {
        return false;
    }
    if !coloring.colors.contains(&Color::Red) || !coloring.colors.contains(&Color::Blue) {
        return false;
    }
    let inc = graph.incidence();
    for (mid, &(a, b)) in graph.edges.iter().enumerate() {
        let c = coloring.colors[mid];
        let clash = |v: usize| inc[v].iter().any(|&k| k != mid && coloring.colors[k] != c);
        if clash(a) && clash(b) {
            return false;
        }
    }
    true
}

/// All surjective colorings without alternating walks, reported up to the
/// red↔blue swap in deterministic lexicographic order.
///
/// Depth-first search over edges with early rejection: an edge whose color
/// differs from already-colored neighbors at both endpoints can never be
/// completed, which prunes the 2^|E| space to a negligible remnant.
pub fn enumerate_nap_colorings(graph: &Graph) -> Result<Vec<NapColoring>> {
    if graph.edges.len() > NAP_EDGE_LIMIT {
        return Err(Error::Capacity(graph.edges.len(), NAP_EDGE_LIMIT));
    }
    if graph.edges.is_empty() {
        return Ok(Vec::new());
    }
    let inc = graph.incidence();
    let m = graph.edges.len();
    let mut colors: Vec<Option<Color>> = vec![None; m];
    let mut out = Vec::new();

    // conflict test restricted to colored edges around `mid`
    let conflict = |colors: &[Option<Color>], mid: usize| -> bool {
        let Some(c) = colors[mid] else { return false };
        let (a, b) = graph.edges[mid];
        let clash = |v: usize| {
            inc[v]
                .iter()
                .any(|&k| k != mid && colors[k].is_some_and(|x| x != c))
        };
        clash(a) && clash(b)
    };

    fn dfs(
        graph: &Graph,
        inc: &[Vec<usize>],
        conflict: &dyn Fn(&[Option<Color>], usize) -> bool,
        colors: &mut Vec<Option<Color>>,
        next: usize,
        out: &mut Vec<NapColoring>,
    ) {
        if next == colors.len() {
            let coloring = NapColoring {
                colors: colors.iter().map(|c| c.unwrap()).collect(),
            };
            if coloring.colors.contains(&Color::Blue) {
                out.push(coloring);
            }
            return;
        }
        // the global swap is quotiented by pinning edge 0 to red
        let choices: &[Color] =
            if next == 0 { &[Color::Red] } else { &[Color::Red, Color::Blue] };
        for &c in choices {
            colors[next] = Some(c);
            let (a, b) = graph.edges[next];
            let mut ok = !conflict(colors, next);
            if ok {
                // coloring `next` can also complete a middle edge elsewhere
                for v in [a, b] {
                    for &k in &inc[v] {
                        if conflict(colors, k) {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        break;
                    }
                }
            }
            if ok {
                dfs(graph, inc, conflict, colors, next + 1, out);
            }
            colors[next] = None;
        }
    }

    dfs(graph, &inc, &conflict, &mut colors, 0, &mut out);
    out.sort();
    Ok(out)
}

/// View the 12-vertex edge graph as a plain graph, vertices in canonical
/// edge order.
pub fn edge_graph_as_graph(eg: &EdgeGraph) -> Graph {
    let index = |edge: Edge| crate::oct::edge_index(edge);
    let edges = eg.edges().iter().map(|&(a, b)| (index(a), index(b))).collect();
    Graph::new(12, edges)
}

/// The coloring of the edge graph induced by a quadrilateral: each edge of
/// the edge graph lives in one octahedron face, and every face contains
/// exactly one vertex of the quadrilateral's excluded pair; red on the side
/// of the smaller one.
pub fn induced_nap_coloring(eg: &EdgeGraph, quad: Quadrilateral) -> NapColoring {
    let (m, _n) = quad.label;
    let graph = edge_graph_as_graph(eg);
    let all = all_edges();
    let colors = graph
        .edges
        .iter()
        .map(|&(a, b)| {
            let (ea, eb) = (all[a], all[b]);
            let j = shared_vertex(ea, eb).expect("adjacent");
            let face = [j, ea.other(j), eb.other(j)];
            if face.contains(&m) {
                Color::Red
            } else {
                Color::Blue
            }
        })
        .collect();
    NapColoring { colors }
}

/// Removing the four edge-graph vertices supported on the quadrilateral's
/// vertex set leaves two components, one per excluded-pair member; the
/// monochromatic classes of the induced coloring are exactly the edges
/// touching each component.
pub fn disconnecting_set(quad: Quadrilateral) -> Vec<Edge> {
    let verts = quad.vertices();
    all_edges()
        .into_iter()
        .filter(|edge| {
            let (i, j) = edge.endpoints();
            verts.contains(&i) && verts.contains(&j)
        })
        .collect()
}

/// An ordered-pair marked point: `P(i,j)` and `P(j,i)` are the two lifts
/// attached to the octahedron edge {i,j}.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct MarkedPoint {
    pub first: VertexId,
    pub second: VertexId,
}

impl fmt::Debug for MarkedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}{}", self.first, self.second)
    }
}

impl MarkedPoint {
    pub fn new(first: VertexId, second: VertexId) -> Result<Self> {
        Edge::new(first, second)?;
        Ok(MarkedPoint { first, second })
    }

    pub fn swapped(self) -> Self {
        MarkedPoint { first: self.second, second: self.first }
    }
}

fn mp(i: VertexId, j: VertexId) -> MarkedPoint {
    MarkedPoint::new(i, j).expect("marked point over an edge")
}

/// A partition of the 24 marked points into two 12-element halves, with the
/// excluded-pair symbols split by pair member and one orientation symbol per
/// quadrilateral edge.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorPartition {
    pub i_side: BTreeSet<MarkedPoint>,
    pub j_side: BTreeSet<MarkedPoint>,
}

impl DivisorPartition {
    /// Swap the chosen symbols of all four quadrilateral edges between the
    /// halves (the conjugate divisor, whose orientation is reversed).
    pub fn conjugate(&self, quad: Quadrilateral) -> DivisorPartition {
        let quad_edges = quad.edges();
        let flip = |side: &BTreeSet<MarkedPoint>, other: &BTreeSet<MarkedPoint>| {
            side.iter()
                .map(|p| {
                    let edge = Edge::new(p.first, p.second).unwrap();
                    if quad_edges.contains(&edge) {
                        debug_assert!(other.contains(&p.swapped()));
                        p.swapped()
                    } else {
                        *p
                    }
                })
                .collect()
        };
        DivisorPartition {
            i_side: flip(&self.i_side, &self.j_side),
            j_side: flip(&self.j_side, &self.i_side),
        }
    }
}

/// The 16 divisor partitions of a quadrilateral paired with the bond
/// orientation they determine: the I-half holds all symbols involving the
/// smaller excluded vertex plus one symbol P(t,s) per quadrilateral edge,
/// and those chosen symbols read off the directed edges (t, s).
pub fn divisor_partitions_for_quadrilateral(
    quad: Quadrilateral,
) -> Vec<(DivisorPartition, OctahedralBond)> {
    let (m, n) = quad.label;
    let mut base_i = BTreeSet::new();
    let mut base_j = BTreeSet::new();
    for w in quad.vertices() {
        base_i.insert(mp(m, w));
        base_i.insert(mp(w, m));
        base_j.insert(mp(n, w));
        base_j.insert(mp(w, n));
    }

    let bonds = crate::bonds::all_orientations(quad);
    let mut out = Vec::new();
    for bond in bonds {
        let mut i_side = base_i.clone();
        let mut j_side = base_j.clone();
        for d in bond.orientation {
            i_side.insert(mp(d.tail, d.head));
            j_side.insert(mp(d.head, d.tail));
        }
        debug_assert_eq!(i_side.len(), 12);
        debug_assert_eq!(j_side.len(), 12);
        out.push((DivisorPartition { i_side, j_side }, bond));
    }
    out
}

/// Orientation read off a partition per the bijection: the directed edges
/// (t, s) with P(t,s) in the I-half.
pub fn orientation_of_partition(
    quad: Quadrilateral,
    partition: &DivisorPartition,
) -> Vec<OrientedEdge> {
    let quad_edges = quad.edges();
    let mut dirs: Vec<OrientedEdge> = partition
        .i_side
        .iter()
        .filter(|p| quad_edges.contains(&Edge::new(p.first, p.second).unwrap()))
        .map(|p| OrientedEdge::new(p.first, p.second).unwrap())
        .collect();
    dirs.sort();
    dirs
}

/// Names of the valid bonds among the 16 partitions of a quadrilateral.
pub fn valid_partition_names(quad: Quadrilateral) -> Vec<BondName> {
    valid_octahedral_bonds(quad)
        .iter()
        .map(|b| bond_name(b).expect("valid"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oct::{all_quadrilaterals, v};
    use crate::sphere::build_edge_graph;

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (2, 0)])
    }

    fn four_cycle() -> Graph {
        Graph::new(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)])
    }

    /// Brute-force oracle: test every coloring directly.
    fn brute_force(graph: &Graph) -> Vec<NapColoring> {
        let m = graph.edges.len();
        let mut out = Vec::new();
        for mask in 0..(1u32 << m) {
            let colors: Vec<Color> = (0..m)
                .map(|k| if mask & (1 << k) != 0 { Color::Blue } else { Color::Red })
                .collect();
            let coloring = NapColoring { colors };
            if is_nap_coloring(graph, &coloring) {
                let canon = coloring.canonical();
                if !out.contains(&canon) {
                    out.push(canon);
                }
            }
        }
        out.sort();
        out
    }

    #[test]
    fn triangle_has_no_nap_coloring() {
        assert!(brute_force(&triangle()).is_empty());
        assert!(enumerate_nap_colorings(&triangle()).unwrap().is_empty());
        // monochromatic fails surjectivity
        let mono = NapColoring { colors: vec![Color::Red; 3] };
        assert!(!is_nap_coloring(&triangle(), &mono));
    }

    #[test]
    fn four_cycle_matches_brute_force() {
        let oracle = brute_force(&four_cycle());
        let fast = enumerate_nap_colorings(&four_cycle()).unwrap();
        assert_eq!(fast, oracle);
        assert_eq!(fast.len(), 2);
    }

    #[test]
    fn random_small_graphs_match_brute_force() {
        // a couple of fixed small graphs with varied structure
        let graphs = [
            Graph::new(5, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]),
            Graph::new(4, vec![(0, 1), (1, 2), (2, 0), (2, 3)]),
            Graph::new(6, vec![(0, 1), (2, 3), (4, 5)]),
        ];
        for g in graphs {
            assert_eq!(enumerate_nap_colorings(&g).unwrap(), brute_force(&g), "{:?}", g.edges);
        }
    }

    #[test]
    fn capacity_guard() {
        let big = Graph::new(30, (0..27).map(|k| (k, k + 1)).collect());
        assert!(matches!(enumerate_nap_colorings(&big), Err(Error::Capacity(27, _))));
    }

    #[test]
    fn induced_colorings_are_nap_and_unique() {
        let eg = build_edge_graph();
        let graph = edge_graph_as_graph(&eg);
        let mut induced: Vec<NapColoring> = all_quadrilaterals()
            .into_iter()
            .map(|quad| induced_nap_coloring(&eg, quad).canonical())
            .collect();
        for coloring in &induced {
            assert!(is_nap_coloring(&graph, coloring));
        }
        induced.sort();
        let found = enumerate_nap_colorings(&graph).unwrap();
        assert_eq!(found, induced);
        assert_eq!(found.len(), 3);
    }

    #[test]
    fn single_swap_breaks_induced_coloring() {
        let eg = build_edge_graph();
        let graph = edge_graph_as_graph(&eg);
        let quad = all_quadrilaterals()[0];
        let base = induced_nap_coloring(&eg, quad);
        for k in 0..base.colors.len() {
            let mut colors = base.colors.clone();
            colors[k] = colors[k].flipped();
            assert!(!is_nap_coloring(&graph, &NapColoring { colors }), "swap at {k}");
        }
    }

    #[test]
    fn monochromatic_classes_match_the_disconnection() {
        let eg = build_edge_graph();
        for quad in all_quadrilaterals() {
            let removed = disconnecting_set(quad);
            assert_eq!(removed.len(), 4);
            let coloring = induced_nap_coloring(&eg, quad);
            let graph = edge_graph_as_graph(&eg);
            let all = all_edges();
            // an edge is red iff it touches a pair containing the smaller
            // excluded vertex; those pairs form one shore of the cut
            let (m, n) = quad.label;
            for (k, &(a, b)) in graph.edges.iter().enumerate() {
                let touches = |w: VertexId| all[a].contains(w) || all[b].contains(w);
                assert!(touches(m) != touches(n));
                assert_eq!(coloring.colors[k] == Color::Red, touches(m));
                // edges never connect the two shores directly
                let in_removed = |idx: usize| removed.contains(&all[idx]);
                if !in_removed(a) && !in_removed(b) {
                    let side = |idx: usize| all[idx].contains(m);
                    assert_eq!(side(a), side(b));
                }
            }
        }
    }

    #[test]
    fn divisor_partitions_counts_and_bijection() {
        let mut total = 0;
        for quad in all_quadrilaterals() {
            let parts = divisor_partitions_for_quadrilateral(quad);
            assert_eq!(parts.len(), 16);
            total += parts.len();
            for (partition, bond) in &parts {
                // the bijection reads the orientation back off the partition
                let mut dirs = bond.orientation.to_vec();
                dirs.sort();
                assert_eq!(orientation_of_partition(quad, partition), dirs);
                // conjugating all four pairs reverses the orientation
                let conj = partition.conjugate(quad);
                let mut rev = bond.reversed().orientation.to_vec();
                rev.sort();
                assert_eq!(orientation_of_partition(quad, &conj), rev);
            }
            // partitions are pairwise distinct
            for a in 0..parts.len() {
                for b in (a + 1)..parts.len() {
                    assert_ne!(parts[a].0, parts[b].0);
                }
            }
        }
        assert_eq!(total, 48);
    }

    #[test]
    fn reference_partition_maps_to_the_spanning_bond() {
        // quadrilateral on {1,2,3,4}: the partition whose chosen symbols are
        // P13, P23, P14, P24 determines the all-outward orientation, which
        // is the spanning bond X
        let quad = Quadrilateral::by_label(v(5), v(6)).unwrap();
        let parts = divisor_partitions_for_quadrilateral(quad);
        let wanted: BTreeSet<MarkedPoint> = [
            mp(v(1), v(3)),
            mp(v(2), v(3)),
            mp(v(1), v(4)),
            mp(v(2), v(4)),
        ]
        .into();
        let hit = parts
            .iter()
            .find(|(p, _)| wanted.iter().all(|s| p.i_side.contains(s)))
            .expect("reference partition exists");
        let name = bond_name(&hit.1).expect("valid bond");
        assert_eq!(name.letter, crate::bonds::BondLetter::X);
        assert!(hit.1.spans());
        // the I half also carries all eight symbols involving vertex 5
        for w in [1u8, 2, 3, 4] {
            assert!(hit.0.i_side.contains(&mp(v(5), v(w))));
            assert!(hit.0.i_side.contains(&mp(v(w), v(5))));
        }
    }
}
