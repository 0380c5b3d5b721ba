//! Octahedral and pyramidal bonds, the length equations they impose, and the
//! linear μ-number system whose exhaustive solution yields the four possible
//! per-quadrilateral profiles.

use std::collections::BTreeMap;
use std::fmt;

use crate::oct::{
    all_quadrilaterals, cyclic_image, is_fixed_direction, oe, v, Edge, OctLabeling, OrientedEdge,
    Pyramid, Quadrilateral, VertexId,
};
use crate::{Error, Result};

/// A quadrilateral together with a direction on each of its four edges.
///
/// Of the 16 orientations per quadrilateral only those with exactly two edges
/// aligned with the fixed orientation can be carried by a motion.
#[derive(Clone, Copy, PartialEq, Eq)]
pub struct OctahedralBond {
    pub quad: Quadrilateral,
    /// One directed edge per cycle position k (underlying edge c_k—c_{k+1}).
    pub orientation: [OrientedEdge; 4],
}

impl fmt::Debug for OctahedralBond {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.quad, self.orientation)
    }
}

impl OctahedralBond {
    /// Build from a bitmask: bit k set means cycle edge k is reversed
    /// relative to the fixed orientation.
    fn from_mask(quad: Quadrilateral, mask: usize) -> Self {
        let mut orientation = [oe(1, 3); 4];
        for (k, slot) in orientation.iter_mut().enumerate() {
            let tail = quad.cycle[k];
            let head = quad.cycle[(k + 1) % 4];
            let dir = OrientedEdge::new(tail, head).unwrap();
            *slot = if mask & (1 << k) != 0 { dir.reversed() } else { dir };
        }
        OctahedralBond { quad, orientation }
    }

    pub fn aligned_edges(&self) -> Vec<OrientedEdge> {
        self.orientation
            .iter()
            .copied()
            .filter(|d| is_fixed_direction(d.tail, d.head))
            .collect()
    }

    /// Valid iff exactly two of the four directed edges agree with the fixed
    /// orientation (otherwise the length relation has no positive solution).
    pub fn is_valid(&self) -> bool {
        self.aligned_edges().len() == 2
    }

    /// Full reversal of all four directions (the conjugate bond).
    pub fn reversed(&self) -> Self {
        let mut orientation = self.orientation;
        for d in &mut orientation {
            *d = d.reversed();
        }
        OctahedralBond { quad: self.quad, orientation }
    }

    /// Whether the aligned edges span all four vertices of the quadrilateral.
    pub fn spans(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        for d in self.aligned_edges() {
            seen.insert(d.tail);
            seen.insert(d.head);
        }
        seen.len() == 4
    }

    /// Whether this bond's directed edges contain both given ones.
    pub fn extends(&self, dirs: &[OrientedEdge; 2]) -> bool {
        dirs.iter().all(|d| self.orientation.contains(d))
    }

    pub fn orientation_set(&self) -> Vec<(u8, u8)> {
        let mut set: Vec<(u8, u8)> = self
            .orientation
            .iter()
            .map(|d| (d.tail.get(), d.head.get()))
            .collect();
        set.sort();
        set
    }

    /// Apply the k-th cyclic relabeling, landing on the image quadrilateral.
    pub fn cyclic_relabel(&self, k: usize) -> Self {
        let label = (
            cyclic_image(self.quad.label.0, k),
            cyclic_image(self.quad.label.1, k),
        );
        let quad = Quadrilateral::by_label(label.0, label.1).unwrap();
        let dirs: Vec<OrientedEdge> = self
            .orientation
            .iter()
            .map(|d| OrientedEdge::new(cyclic_image(d.tail, k), cyclic_image(d.head, k)).unwrap())
            .collect();
        // re-seat directions in the image quadrilateral's cycle order
        let mut orientation = [oe(1, 3); 4];
        for (pos, slot) in orientation.iter_mut().enumerate() {
            let edge = quad.edges()[pos];
            *slot = dirs
                .iter()
                .copied()
                .find(|d| d.undirected() == edge)
                .expect("relabeled bond covers the image quadrilateral");
        }
        OctahedralBond { quad, orientation }
    }
}

/// All 16 orientations of a quadrilateral.
pub fn all_orientations(quad: Quadrilateral) -> Vec<OctahedralBond> {
    (0..16).map(|mask| OctahedralBond::from_mask(quad, mask)).collect()
}

/// The 6 orientations with exactly two aligned edges; they form three
/// conjugate pairs, exactly one of which has the spanning property.
pub fn valid_octahedral_bonds(quad: Quadrilateral) -> Vec<OctahedralBond> {
    all_orientations(quad).into_iter().filter(|b| b.is_valid()).collect()
}

/// Signed linear form over the quadrilateral's unsigned edge lengths.
///
/// Term k carries +1 when the bond direction at cycle position k agrees with
/// the fixed orientation and −1 otherwise; valid bonds have two of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LengthEquation {
    /// (cycle-ordered vertex pair, coefficient)
    pub terms: [((VertexId, VertexId), i8); 4],
}

impl LengthEquation {
    pub fn evaluate(&self, labeling: &OctLabeling) -> f64 {
        self.terms
            .iter()
            .map(|&((i, j), c)| c as f64 * labeling.length(i, j).unwrap())
            .sum()
    }

    /// Canonical display with the leading coefficient made positive (a form
    /// and its negation have the same zero set).
    pub fn canonical_string(&self) -> String {
        let flip = if self.terms[0].1 < 0 { -1 } else { 1 };
        let mut out = String::new();
        for &((i, j), c) in &self.terms {
            let c = c * flip;
            out.push_str(if c > 0 { "+l" } else { "-l" });
            out.push_str(&format!("{i}{j}"));
        }
        out
    }
}

impl fmt::Display for LengthEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &((i, j), c) in &self.terms {
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", if c > 0 { "+" } else { "-" })?;
            }
            write!(f, "l{i}{j}")?;
        }
        write!(f, " = 0")
    }
}

/// The edge-length relation a bond imposes.
pub fn length_equation(bond: &OctahedralBond) -> LengthEquation {
    let mut terms = [((v(1), v(3)), 0i8); 4];
    for k in 0..4 {
        let tail = bond.quad.cycle[k];
        let head = bond.quad.cycle[(k + 1) % 4];
        let aligned = bond.orientation[k].tail == tail;
        terms[k] = ((tail, head), if aligned { 1 } else { -1 });
    }
    LengthEquation { terms }
}

/// Letter names of the six valid bonds of a quadrilateral.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum BondLetter {
    X,
    Y,
    Z,
    XBar,
    YBar,
    ZBar,
}

impl BondLetter {
    pub fn conjugate(self) -> Self {
        match self {
            BondLetter::X => BondLetter::XBar,
            BondLetter::Y => BondLetter::YBar,
            BondLetter::Z => BondLetter::ZBar,
            BondLetter::XBar => BondLetter::X,
            BondLetter::YBar => BondLetter::Y,
            BondLetter::ZBar => BondLetter::Z,
        }
    }

    /// X, Y or Z; conjugate bonds share a μ-number, so μ-variables are
    /// indexed by base letters only.
    pub fn base(self) -> Self {
        match self {
            BondLetter::XBar => BondLetter::X,
            BondLetter::YBar => BondLetter::Y,
            BondLetter::ZBar => BondLetter::Z,
            other => other,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            BondLetter::X => "X",
            BondLetter::Y => "Y",
            BondLetter::Z => "Z",
            BondLetter::XBar => "X\u{0304}",
            BondLetter::YBar => "Y\u{0304}",
            BondLetter::ZBar => "Z\u{0304}",
        }
    }
}

/// Name of a valid octahedral bond: quadrilateral label plus letter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BondName {
    pub quad: (VertexId, VertexId),
    pub letter: BondLetter,
}

impl fmt::Debug for BondName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B^{}{}_{}", self.quad.0, self.quad.1, self.letter.symbol())
    }
}

impl fmt::Display for BondName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// The 18 named valid bonds (3 quadrilaterals × 6 letters).
///
/// X, Y, Z on the quadrilateral 56 are fixed reference orientations; the
/// other quadrilaterals inherit names through the cyclic relabeling, and
/// bars are full reversals. X and X̄ are the spanning pair.
pub fn named_bonds() -> Vec<(BondName, OctahedralBond)> {
    let quad56 = Quadrilateral::by_label(v(5), v(6)).unwrap();
    let seed: [(BondLetter, [OrientedEdge; 4]); 3] = [
        (BondLetter::X, [oe(1, 3), oe(3, 2).reversed(), oe(2, 4), oe(4, 1).reversed()]),
        (BondLetter::Y, [oe(1, 3), oe(3, 2).reversed(), oe(2, 4).reversed(), oe(4, 1)]),
        (BondLetter::Z, [oe(1, 3), oe(3, 2), oe(2, 4).reversed(), oe(4, 1).reversed()]),
    ];
    let mut out = Vec::new();
    for (letter, orientation) in seed {
        let base = OctahedralBond { quad: quad56, orientation };
        for k in [0usize, 1, 2] {
            // quadrilateral orbit under relabeling: 56 → 12 → 34
            let bond = base.cyclic_relabel(k);
            let name = BondName { quad: bond.quad.label, letter };
            out.push((name, bond));
            out.push((
                BondName { quad: bond.quad.label, letter: letter.conjugate() },
                bond.reversed(),
            ));
        }
    }
    out
}

/// Name of a valid bond (None for the 10 invalid orientations).
pub fn bond_name(bond: &OctahedralBond) -> Option<BondName> {
    let set = bond.orientation_set();
    named_bonds()
        .into_iter()
        .find(|(_, b)| b.orientation_set() == set)
        .map(|(name, _)| name)
}

pub fn bond_by_name(name: BondName) -> Result<OctahedralBond> {
    named_bonds()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, b)| b)
        .ok_or_else(|| Error::Precondition(format!("unknown bond name {name}")))
}

/// A pyramid apex with a direction on two opposite incident edges (the two
/// edges do not lie in a common triangle). Eight per pyramid.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct PyramidalBond {
    pub apex: VertexId,
    /// Directed versions of {apex,u} and {apex,w}, with u, w opposite in the
    /// neighbor cycle (hence a diagonal pair of the graph).
    pub edges: [OrientedEdge; 2],
}

impl PyramidalBond {
    pub fn new(apex: VertexId, edges: [OrientedEdge; 2]) -> Result<Self> {
        let mut others = Vec::new();
        for d in &edges {
            if !(d.tail == apex || d.head == apex) {
                return Err(Error::Precondition(format!("edge {d:?} not incident to {apex}")));
            }
            others.push(if d.tail == apex { d.head } else { d.tail });
        }
        if others[0].partner() != others[1] {
            return Err(Error::Precondition(
                "the two edges must lead to opposite neighbors".into(),
            ));
        }
        Ok(PyramidalBond { apex, edges })
    }

    /// The diagonal pair of far endpoints, sorted.
    pub fn opposite_pair(&self) -> (VertexId, VertexId) {
        let mut ends: Vec<VertexId> = self
            .edges
            .iter()
            .map(|d| if d.tail == self.apex { d.head } else { d.tail })
            .collect();
        ends.sort();
        (ends[0], ends[1])
    }

    pub fn conjugate(&self) -> Self {
        PyramidalBond { apex: self.apex, edges: [self.edges[0].reversed(), self.edges[1].reversed()] }
    }

    /// True when one edge points into the apex and the other away.
    pub fn is_mixed(&self) -> bool {
        let into_apex =
            |d: &OrientedEdge| d.head == self.apex;
        into_apex(&self.edges[0]) != into_apex(&self.edges[1])
    }

    /// Canonical representative of the conjugacy class {self, conjugate}.
    pub fn class_representative(&self) -> Self {
        let conj = self.conjugate();
        let key = |b: &PyramidalBond| {
            let mut dirs: Vec<(u8, u8)> =
                b.edges.iter().map(|d| (d.tail.get(), d.head.get())).collect();
            dirs.sort();
            dirs
        };
        if key(self) <= key(&conj) {
            *self
        } else {
            conj
        }
    }

    pub fn cyclic_relabel(&self, k: usize) -> Self {
        let edges = [
            OrientedEdge::new(cyclic_image(self.edges[0].tail, k), cyclic_image(self.edges[0].head, k))
                .unwrap(),
            OrientedEdge::new(cyclic_image(self.edges[1].tail, k), cyclic_image(self.edges[1].head, k))
                .unwrap(),
        ];
        PyramidalBond { apex: cyclic_image(self.apex, k), edges }
    }
}

/// The 8 pyramidal bonds of a pyramid, in a deterministic order.
pub fn pyramidal_bonds(apex: VertexId) -> Vec<PyramidalBond> {
    let pyr = Pyramid::new(apex);
    let mut out = Vec::new();
    for (u, w) in pyr.opposite_pairs() {
        for flip_u in [false, true] {
            for flip_w in [false, true] {
                let du = OrientedEdge::new(apex, u).unwrap();
                let dw = OrientedEdge::new(apex, w).unwrap();
                let edges = [
                    if flip_u { du.reversed() } else { du },
                    if flip_w { dw.reversed() } else { dw },
                ];
                out.push(PyramidalBond { apex, edges });
            }
        }
    }
    out
}

/// The quadrilateral containing both edges of a pyramidal bond: the one
/// labeled by the remaining diagonal pair.
pub fn extension_quadrilateral(pb: &PyramidalBond) -> Quadrilateral {
    let pair = pb.opposite_pair();
    let used = [pb.apex, pb.apex.partner(), pair.0, pair.1];
    let rest: Vec<VertexId> = VertexId::all().filter(|w| !used.contains(w)).collect();
    Quadrilateral::by_label(rest[0], rest[1]).unwrap()
}

/// All valid octahedral bonds whose orientation restricted to the bond's two
/// edges matches; always one (mixed directions) or two (uniform directions).
pub fn pyramidal_bond_extensions(pb: &PyramidalBond) -> Vec<BondName> {
    let quad = extension_quadrilateral(pb);
    let mut names: Vec<BondName> = valid_octahedral_bonds(quad)
        .iter()
        .filter(|b| b.extends(&pb.edges))
        .map(|b| bond_name(b).expect("valid bonds are named"))
        .collect();
    names.sort();
    names
}

/// Even/odd marking of pyramid edges.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum EdgeParity {
    Even,
    Odd,
}

/// Parity of an edge within the pyramid of `apex`.
///
/// Base assignments for apexes 1, 4 and 6 are compiled in; the remaining
/// ones follow the propagation rule that pairs (1,2), (3,4), (5,6) agree.
pub fn edge_parity(apex: VertexId, edge: Edge) -> Result<EdgeParity> {
    if !edge.contains(apex) {
        return Err(Error::Precondition(format!("edge {edge:?} not incident to apex {apex}")));
    }
    let other = edge.other(apex);
    let (base_apex, base_other) = match apex.get() {
        1 | 4 | 6 => (apex, other),
        2 => (v(1), other),
        3 => (v(4), other),
        5 => (v(6), other),
        _ => unreachable!(),
    };
    let even: &[u8] = match base_apex.get() {
        1 => &[6, 5],
        4 => &[1, 2],
        6 => &[3, 4],
        _ => unreachable!(),
    };
    Ok(if even.contains(&base_other.get()) {
        EdgeParity::Even
    } else {
        EdgeParity::Odd
    })
}

/// Quadrilateral label sorted for use as a μ-variable index.
pub type QuadLabel = (VertexId, VertexId);

/// One linear relation: the μ-number of a pyramidal bond class equals the
/// sum of the μ-numbers of its octahedral extensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuEquation {
    pub apex: VertexId,
    /// Diagonal pair of far endpoints of the pyramidal bond class.
    pub pair: (VertexId, VertexId),
    /// False for mixed directions (one in, one out), true for uniform.
    pub uniform: bool,
    /// Right-hand side: (quadrilateral, base letter), sorted.
    pub rhs: Vec<(QuadLabel, BondLetter)>,
}

impl MuEquation {
    pub fn lhs_string(&self) -> String {
        format!(
            "mu[{}]({}{},{})",
            self.apex,
            self.pair.0,
            self.pair.1,
            if self.uniform { "uniform" } else { "mixed" }
        )
    }

    pub fn rhs_string(&self) -> String {
        self.rhs
            .iter()
            .map(|(q, l)| format!("mu_{}^{}{}", l.symbol(), q.0, q.1))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// The derived μ-system: 24 extension equations (4 conjugacy classes per
/// pyramid) whose even-apex rows duplicate their odd partners, yielding the
/// pairing identities.
#[derive(Clone, Debug)]
pub struct MuSystem {
    pub equations: Vec<MuEquation>,
}

pub fn derive_mu_system() -> MuSystem {
    let mut equations = Vec::new();
    for apex in VertexId::all() {
        let mut classes = BTreeMap::new();
        for pb in pyramidal_bonds(apex) {
            classes.insert(pb.class_representative(), ());
        }
        for pb in classes.keys() {
            let mut rhs: Vec<(QuadLabel, BondLetter)> = pyramidal_bond_extensions(pb)
                .into_iter()
                .map(|name| (name.quad, name.letter.base()))
                .collect();
            rhs.sort();
            equations.push(MuEquation {
                apex,
                pair: pb.opposite_pair(),
                uniform: !pb.is_mixed(),
                rhs,
            });
        }
    }
    equations.sort_by_key(|eq| (eq.apex, eq.pair, eq.uniform));
    MuSystem { equations }
}

impl MuSystem {
    fn eq_for(&self, apex: VertexId, pair: (VertexId, VertexId), uniform: bool) -> &MuEquation {
        self.equations
            .iter()
            .find(|eq| eq.apex == apex && eq.pair == pair && eq.uniform == uniform)
            .expect("system covers every class")
    }

    /// True iff paired apexes (1,2), (3,4), (5,6) have identical rows, which
    /// is what forces their pyramidal μ-numbers to agree.
    pub fn pairing_holds(&self) -> bool {
        self.equations.iter().all(|eq| {
            let partner = self.eq_for(eq.apex.partner(), eq.pair, eq.uniform);
            partner.rhs == eq.rhs
        })
    }

    /// Canonical text form: the 12 odd-apex extension rows followed by the
    /// 12 pairing identities.
    pub fn canonical_form(&self) -> String {
        let mut lines = Vec::new();
        for eq in &self.equations {
            if eq.apex.get() % 2 == 1 {
                lines.push(format!("{} = {}", eq.lhs_string(), eq.rhs_string()));
            }
        }
        for eq in &self.equations {
            if eq.apex.get() % 2 == 0 {
                let partner = self.eq_for(eq.apex.partner(), eq.pair, eq.uniform);
                lines.push(format!("{} = {}", eq.lhs_string(), partner.lhs_string()));
            }
        }
        lines.join("\n")
    }

    /// For each apex, the diagonal pair whose mixed class extends to a single
    /// Z-type bond; the other pair's mixed class extends to a Y-type bond.
    pub fn z_pair(&self, apex: VertexId) -> (VertexId, VertexId) {
        let pyr = Pyramid::new(apex);
        for (a, b) in pyr.opposite_pairs() {
            let pair = if a < b { (a, b) } else { (b, a) };
            let eq = self.eq_for(apex, pair, false);
            if eq.rhs.len() == 1 && eq.rhs[0].1 == BondLetter::Z {
                return pair;
            }
        }
        panic!("one pair per apex has the Z-type mixed extension");
    }
}

/// An assignment of μ ∈ {0,1} to the nine octahedral base variables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuAssignment {
    /// values[quad index][letter index X,Y,Z]
    pub values: [[u8; 3]; 3],
}

impl MuAssignment {
    pub fn get(&self, quad: QuadLabel, letter: BondLetter) -> u8 {
        let qi = quad_index(quad);
        let li = match letter.base() {
            BondLetter::X => 0,
            BondLetter::Y => 1,
            BondLetter::Z => 2,
            _ => unreachable!(),
        };
        self.values[qi][li]
    }

    /// μ^{quad} = 2 (μ_X + μ_Y + μ_Z).
    pub fn quad_profile(&self, quad: QuadLabel) -> u8 {
        2 * self.values[quad_index(quad)].iter().sum::<u8>()
    }

    /// Profile ordered by quadrilateral label (12, 34, 56).
    pub fn profile(&self) -> [u8; 3] {
        let quads = all_quadrilaterals();
        [
            self.quad_profile(quads[0].label),
            self.quad_profile(quads[1].label),
            self.quad_profile(quads[2].label),
        ]
    }
}

pub fn quad_index(quad: QuadLabel) -> usize {
    all_quadrilaterals()
        .iter()
        .position(|q| q.label == quad)
        .expect("one of the three quadrilaterals")
}

/// Result of the exhaustive μ-search.
#[derive(Clone, Debug)]
pub struct MuSolutions {
    pub assignments: Vec<MuAssignment>,
    /// Distinct profiles up to permutation (stored sorted descending).
    pub profiles: Vec<[u8; 3]>,
}

/// Exhaustive search over octahedral μ ∈ {0,1}^9 for assignments whose
/// induced pyramidal values form an admissible presence pattern: every value
/// in {0,1} and, for each apex and each diagonal pair, the mixed/uniform
/// class values not both zero.
///
/// The {0,1} bound is also verified to clip nothing: searching {0,1,2}^9
/// yields the same feasible set.
pub fn solve_mu_system(system: &MuSystem) -> MuSolutions {
    let feasible = search(system, 1);
    let widened = search(system, 2);
    assert_eq!(feasible, widened, "μ bound {{0,1}} must not clip solutions");

    let mut profiles: Vec<[u8; 3]> = feasible
        .iter()
        .map(|a| {
            let mut p = a.profile();
            p.sort_unstable_by(|x, y| y.cmp(x));
            p
        })
        .collect();
    profiles.sort();
    profiles.dedup();
    MuSolutions { assignments: feasible, profiles }
}

/// Flat index of a μ-variable in a 9-vector: 3 × quad + letter.
fn var_index(quad: QuadLabel, letter: BondLetter) -> usize {
    let li = match letter.base() {
        BondLetter::X => 0,
        BondLetter::Y => 1,
        BondLetter::Z => 2,
        _ => unreachable!(),
    };
    3 * quad_index(quad) + li
}

fn search(system: &MuSystem, max_val: u8) -> Vec<MuAssignment> {
    // compact the class equations into (mixed terms, uniform terms) per
    // (apex, pair): feasibility needs both values in {0,1}, not both zero
    let mut pairs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for apex in VertexId::all() {
        for (a, b) in Pyramid::new(apex).opposite_pairs() {
            let pair = if a < b { (a, b) } else { (b, a) };
            let terms = |uniform: bool| -> Vec<usize> {
                system
                    .eq_for(apex, pair, uniform)
                    .rhs
                    .iter()
                    .map(|&(q, l)| var_index(q, l))
                    .collect()
            };
            pairs.push((terms(false), terms(true)));
        }
    }

    let n = (max_val + 1) as usize;
    let total = n.pow(9);
    let mut out = Vec::new();
    let mut vars = [0u8; 9];
    for code in 0..total {
        let mut c = code;
        for slot in &mut vars {
            *slot = (c % n) as u8;
            c /= n;
        }
        let feasible = pairs.iter().all(|(mixed, uniform)| {
            let m: u8 = mixed.iter().map(|&k| vars[k]).sum();
            let u: u8 = uniform.iter().map(|&k| vars[k]).sum();
            m <= 1 && u <= 1 && m + u > 0
        });
        if feasible {
            let mut values = [[0u8; 3]; 3];
            for q in 0..3 {
                for l in 0..3 {
                    values[q][l] = vars[3 * q + l];
                }
            }
            out.push(MuAssignment { values });
        }
    }
    out
}

fn is_feasible(system: &MuSystem, assignment: &MuAssignment) -> bool {
    for apex in VertexId::all() {
        for (a, b) in Pyramid::new(apex).opposite_pairs() {
            let pair = if a < b { (a, b) } else { (b, a) };
            let value = |uniform: bool| -> u8 {
                system
                    .eq_for(apex, pair, uniform)
                    .rhs
                    .iter()
                    .map(|&(q, l)| assignment.get(q, l))
                    .sum()
            };
            let (mixed, uniform) = (value(false), value(true));
            if mixed > 1 || uniform > 1 || mixed + uniform == 0 {
                return false;
            }
        }
    }
    true
}

/// Family of a pyramid read off from its bond presence pattern
/// (d = the Z-type pair's classes, a = the other pair's).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BondFamily {
    General,
    OddDeltoid { antipodal: bool },
    EvenDeltoid { antipodal: bool },
    /// Bond patterns cannot tell rhomboids from lozenges.
    RhomboidOrLozenge { variant: u8 },
}

pub fn family_for_pattern(
    d_mixed: u8,
    d_uniform: u8,
    a_mixed: u8,
    a_uniform: u8,
) -> Option<BondFamily> {
    match (d_mixed, d_uniform, a_mixed, a_uniform) {
        (1, 1, 1, 1) => Some(BondFamily::General),
        (1, 1, 1, 0) => Some(BondFamily::OddDeltoid { antipodal: false }),
        (1, 1, 0, 1) => Some(BondFamily::OddDeltoid { antipodal: true }),
        (1, 0, 1, 1) => Some(BondFamily::EvenDeltoid { antipodal: false }),
        (0, 1, 1, 1) => Some(BondFamily::EvenDeltoid { antipodal: true }),
        (1, 0, 1, 0) => Some(BondFamily::RhomboidOrLozenge { variant: 1 }),
        (0, 1, 1, 0) => Some(BondFamily::RhomboidOrLozenge { variant: 2 }),
        (1, 0, 0, 1) => Some(BondFamily::RhomboidOrLozenge { variant: 3 }),
        (0, 1, 0, 1) => Some(BondFamily::RhomboidOrLozenge { variant: 4 }),
        _ => None,
    }
}

/// Families of the six pyramids under a feasible assignment.
pub fn families_of_assignment(system: &MuSystem, assignment: &MuAssignment) -> Vec<(VertexId, BondFamily)> {
    let mut out = Vec::new();
    for apex in VertexId::all() {
        let zp = system.z_pair(apex);
        let pyr = Pyramid::new(apex);
        let other = pyr
            .opposite_pairs()
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .find(|&p| p != zp)
            .unwrap();
        let val = |pair, uniform| -> u8 {
            system
                .eq_for(apex, pair, uniform)
                .rhs
                .iter()
                .map(|&(q, l)| assignment.get(q, l))
                .sum()
        };
        let fam = family_for_pattern(val(zp, false), val(zp, true), val(other, false), val(other, true))
            .expect("feasible assignments have admissible patterns");
        out.push((apex, fam));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oct::e;

    fn quad(a: u8, b: u8) -> Quadrilateral {
        Quadrilateral::by_label(v(a), v(b)).unwrap()
    }

    #[test]
    fn sixteen_orientations_six_valid_three_pairs_one_spanning() {
        for q in all_quadrilaterals() {
            let all = all_orientations(q);
            assert_eq!(all.len(), 16);
            let valid = valid_octahedral_bonds(q);
            assert_eq!(valid.len(), 6);
            for b in &valid {
                assert!(valid.iter().any(|c| c.orientation_set() == b.reversed().orientation_set()));
            }
            let spanning: Vec<_> = valid.iter().filter(|b| b.spans()).collect();
            assert_eq!(spanning.len(), 2);
            assert_eq!(
                spanning[0].orientation_set(),
                spanning[1].reversed().orientation_set()
            );
        }
    }

    #[test]
    fn named_bonds_cover_valid_bonds_and_satisfy_pair_rules() {
        let names = named_bonds();
        assert_eq!(names.len(), 18);
        for q in all_quadrilaterals() {
            for b in valid_octahedral_bonds(q) {
                assert!(bond_name(&b).is_some());
            }
        }
        // X and X̄ are the spanning pair on each quadrilateral
        for q in all_quadrilaterals() {
            for (name, bond) in &names {
                if name.quad == q.label {
                    let is_x = name.letter.base() == BondLetter::X;
                    assert_eq!(bond.spans(), is_x, "{name}");
                }
            }
        }
        // conjugate names are full reversals
        for (name, bond) in &names {
            let conj = bond_by_name(BondName { quad: name.quad, letter: name.letter.conjugate() })
                .unwrap();
            assert_eq!(conj.orientation_set(), bond.reversed().orientation_set());
        }
    }

    #[test]
    fn reference_bond_orientations() {
        let x = bond_by_name(BondName { quad: (v(5), v(6)), letter: BondLetter::X }).unwrap();
        assert_eq!(x.orientation_set(), vec![(1, 3), (1, 4), (2, 3), (2, 4)]);
        let y = bond_by_name(BondName { quad: (v(5), v(6)), letter: BondLetter::Y }).unwrap();
        assert_eq!(y.orientation_set(), vec![(1, 3), (2, 3), (4, 1), (4, 2)]);
        let z = bond_by_name(BondName { quad: (v(5), v(6)), letter: BondLetter::Z }).unwrap();
        assert_eq!(z.orientation_set(), vec![(1, 3), (1, 4), (3, 2), (4, 2)]);
    }

    #[test]
    fn length_equations_of_y_and_z() {
        let lab = OctLabeling::all_types_example();
        let y = bond_by_name(BondName { quad: (v(5), v(6)), letter: BondLetter::Y }).unwrap();
        let z = bond_by_name(BondName { quad: (v(5), v(6)), letter: BondLetter::Z }).unwrap();
        let ey = length_equation(&y);
        let ez = length_equation(&z);
        let forms: std::collections::BTreeSet<String> =
            [ey.canonical_string(), ez.canonical_string()].into();
        assert_eq!(
            forms,
            ["+l13-l32-l24+l41".to_string(), "+l13+l32-l24-l41".to_string()].into()
        );
        assert_eq!(ey.evaluate(&lab), 0.0);
        assert_eq!(ez.evaluate(&lab), 0.0);
        // conjugate bond negates the form, keeping the zero set
        let ybar = bond_by_name(BondName { quad: (v(5), v(6)), letter: BondLetter::YBar }).unwrap();
        assert_eq!(length_equation(&ybar).canonical_string(), ey.canonical_string());
        let coeffs: Vec<i8> = length_equation(&ybar).terms.iter().map(|t| t.1).collect();
        let neg: Vec<i8> = ey.terms.iter().map(|t| -t.1).collect();
        assert_eq!(coeffs, neg);
    }

    #[test]
    fn valid_bonds_have_two_plus_two_signs() {
        for q in all_quadrilaterals() {
            for b in valid_octahedral_bonds(q) {
                let eq = length_equation(&b);
                let plus = eq.terms.iter().filter(|t| t.1 > 0).count();
                assert_eq!(plus, 2);
            }
        }
    }

    #[test]
    fn pyramidal_bond_counts_and_conjugates() {
        for apex in VertexId::all() {
            let bonds = pyramidal_bonds(apex);
            assert_eq!(bonds.len(), 8);
            let classes: std::collections::BTreeSet<_> =
                bonds.iter().map(|b| b.class_representative()).collect();
            assert_eq!(classes.len(), 4);
        }
    }

    #[test]
    fn worked_extension_examples() {
        // mixed bond on pyramid 1 over the pair {3,4}: unique Ȳ extension
        let pb = PyramidalBond::new(v(1), [oe(3, 1), oe(1, 4)]).unwrap();
        let ext = pyramidal_bond_extensions(&pb);
        assert_eq!(ext, vec![BondName { quad: (v(5), v(6)), letter: BondLetter::YBar }]);

        // uniform bond: two extensions X and Z
        let pb = PyramidalBond::new(v(1), [oe(1, 3), oe(1, 4)]).unwrap();
        let ext = pyramidal_bond_extensions(&pb);
        assert_eq!(
            ext,
            vec![
                BondName { quad: (v(5), v(6)), letter: BondLetter::X },
                BondName { quad: (v(5), v(6)), letter: BondLetter::Z },
            ]
        );

        // conjugate bond extends to the conjugate names
        let conj = pb.conjugate();
        let ext = pyramidal_bond_extensions(&conj);
        assert_eq!(
            ext,
            vec![
                BondName { quad: (v(5), v(6)), letter: BondLetter::XBar },
                BondName { quad: (v(5), v(6)), letter: BondLetter::ZBar },
            ]
        );
    }

    #[test]
    fn extension_counts_by_direction_kind() {
        for apex in VertexId::all() {
            for pb in pyramidal_bonds(apex) {
                let n = pyramidal_bond_extensions(&pb).len();
                assert_eq!(n, if pb.is_mixed() { 1 } else { 2 });
            }
        }
    }

    #[test]
    fn parity_table_matches_base_and_propagation() {
        use EdgeParity::*;
        for (apex, other, parity) in [
            (1, 6, Even),
            (1, 5, Even),
            (1, 3, Odd),
            (1, 4, Odd),
            (4, 1, Even),
            (4, 2, Even),
            (4, 6, Odd),
            (4, 5, Odd),
            (6, 3, Even),
            (6, 4, Even),
            (6, 1, Odd),
            (6, 2, Odd),
            (2, 6, Even),
            (2, 3, Odd),
            (3, 1, Even),
            (3, 5, Odd),
            (5, 3, Even),
            (5, 1, Odd),
        ] {
            assert_eq!(edge_parity(v(apex), e(apex, other)).unwrap(), parity, "{apex}-{other}");
        }
    }

    #[test]
    fn parity_table_is_cyclic_equivariant() {
        for apex in VertexId::all() {
            for w in Pyramid::new(apex).neighbors {
                let p0 = edge_parity(apex, Edge::new(apex, w).unwrap()).unwrap();
                let p1 = edge_parity(
                    cyclic_image(apex, 1),
                    Edge::new(cyclic_image(apex, 1), cyclic_image(w, 1)).unwrap(),
                )
                .unwrap();
                assert_eq!(p0, p1);
            }
        }
    }

    #[test]
    fn mu_system_shape_and_pairing() {
        let sys = derive_mu_system();
        assert_eq!(sys.equations.len(), 24);
        assert!(sys.pairing_holds());
        let odd_rows = sys.equations.iter().filter(|eq| eq.apex.get() % 2 == 1).count();
        assert_eq!(odd_rows, 12);
    }

    #[test]
    fn mu_system_contains_reference_rows() {
        let sys = derive_mu_system();
        // mixed class over the pair {5,6} on pyramid 1 → μ_Z^{34}
        let eq = sys.eq_for(v(1), (v(5), v(6)), false);
        assert_eq!(eq.rhs, vec![((v(3), v(4)), BondLetter::Z)]);
        // uniform class over the same pair → μ_X^{34} + μ_Y^{34}
        let eq = sys.eq_for(v(1), (v(5), v(6)), true);
        assert_eq!(
            eq.rhs,
            vec![((v(3), v(4)), BondLetter::X), ((v(3), v(4)), BondLetter::Y)]
        );
    }

    #[test]
    fn mu_system_is_cyclic_invariant() {
        let sys = derive_mu_system();
        // relabeling every class equation must land on another equation
        for eq in &sys.equations {
            let apex = cyclic_image(eq.apex, 1);
            let mut pair = (cyclic_image(eq.pair.0, 1), cyclic_image(eq.pair.1, 1));
            if pair.0 > pair.1 {
                pair = (pair.1, pair.0);
            }
            let image = sys.eq_for(apex, pair, eq.uniform);
            let mut mapped: Vec<(QuadLabel, BondLetter)> = eq
                .rhs
                .iter()
                .map(|&((a, b), l)| {
                    let (ma, mb) = (cyclic_image(a, 1), cyclic_image(b, 1));
                    (if ma < mb { (ma, mb) } else { (mb, ma) }, l)
                })
                .collect();
            mapped.sort();
            assert_eq!(image.rhs, mapped);
        }
    }

    #[test]
    fn solver_profiles_and_forced_fiber() {
        let sys = derive_mu_system();
        let sols = solve_mu_system(&sys);
        assert_eq!(sols.assignments.len(), 64);
        assert_eq!(
            sols.profiles,
            vec![[2, 2, 2], [4, 2, 2], [4, 4, 2], [4, 4, 4]]
        );
        for a in &sols.assignments {
            for quad in all_quadrilaterals() {
                assert!(matches!(a.quad_profile(quad.label), 2 | 4));
            }
            if a.profile() == [4, 4, 4] {
                for q in 0..3 {
                    assert_eq!(a.values[q], [0, 1, 1]);
                }
            }
        }
        // all-zero infeasible
        assert!(!is_feasible(&sys, &MuAssignment { values: [[0; 3]; 3] }));
    }

    #[test]
    fn z_pair_assignments() {
        let sys = derive_mu_system();
        assert_eq!(sys.z_pair(v(1)), (v(5), v(6)));
        assert_eq!(sys.z_pair(v(3)), (v(1), v(2)));
        assert_eq!(sys.z_pair(v(5)), (v(3), v(4)));
    }

    #[test]
    fn bond_relabel_roundtrip() {
        let q56 = quad(5, 6);
        for b in valid_octahedral_bonds(q56) {
            let back = b.cyclic_relabel(1).cyclic_relabel(5);
            assert_eq!(back.orientation_set(), b.orientation_set());
        }
    }
}
