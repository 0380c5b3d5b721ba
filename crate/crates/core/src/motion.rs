//! Numerical certification of flexibility: rigidity-matrix rank analysis,
//! symmetric seed construction, arclength continuation, flat-realization
//! detection and the mirror reduction for non-simple pyramids.

use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::{check_type1, check_type2, classify_octahedron, SeedMode};
use crate::oct::{all_edges, Edge, OctLabeling, Realization, VertexId};
use crate::{Error, Result, DEFAULT_TOL};

/// Default continuation step: h = 0.01 × mean edge length.
pub const DEFAULT_STEP_FACTOR: f64 = 0.01;
/// Newton corrector iteration cap.
const CORRECTOR_MAX_ITERS: usize = 25;
/// Step halving floor: give up below h / 1024.
const MIN_STEP_DIV: f64 = 1024.0;
/// Singular-value threshold (relative) for rank decisions along traces.
const RANK_SVD_TOL: f64 = 1e-6;
/// Relative plane-RMS below which a realization counts as flat.
pub const FLAT_RMS_FACTOR: f64 = 1e-6;
/// Seed solves must reach this compatibility residual.
const SEED_RESIDUAL: f64 = 1e-10;
/// Newton restarts before giving up on a seed.
const SEED_RESTARTS: usize = 120;

/// First-order rigidity matrix: 12×18, one row per edge holding the gradient
/// of ‖ρ(i)−ρ(j)‖²; nonzeros only in the columns of i and j.
pub fn rigidity_matrix(r: &Realization) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(12, 18);
    for (row, edge) in all_edges().into_iter().enumerate() {
        let (i, j) = edge.endpoints();
        let d = 2.0 * (r.point(i) - r.point(j));
        for k in 0..3 {
            m[(row, 3 * i.index() + k)] = d[k];
            m[(row, 3 * j.index() + k)] = -d[k];
        }
    }
    m
}

/// Rank analysis of a realization.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// 18 − 6 − rank: ≥ 1 indicates an infinitesimal flex.
    pub flex_dim: usize,
    /// Set when two realized vertices (nearly) coincide; the rank is still
    /// meaningful but the 6-dimensional isometry count may not be.
    pub degenerate: bool,
}

/// Rank of the rigidity matrix via singular values, thresholded at
/// `tol × σ_max`.
pub fn rigidity_rank(r: &Realization, labeling: &OctLabeling, tol: f64) -> Result<RankReport> {
    let scale = labeling.mean_length();
    let residual = r.compatibility_residual(labeling);
    if residual > 1e-6 * scale {
        return Err(Error::Precondition(format!(
            "realization incompatible with labeling (residual {residual:.3e})"
        )));
    }
    let degenerate = r.min_vertex_distance() < 1e-9 * scale;
    let svals = rigidity_matrix(r).svd(false, false).singular_values;
    let cut = tol * svals[0];
    let rank = svals.iter().filter(|&&s| s > cut).count();
    Ok(RankReport { rank, flex_dim: 18usize.saturating_sub(6 + rank), degenerate })
}

/// Seed construction request.
#[derive(Clone, Copy, Debug)]
pub struct SeedSpec {
    pub mode: SeedMode,
    /// Plane mode: the diagonal pair kept on the mirror plane. Defaults to
    /// the first pair the length conditions accept.
    pub fixed_pair: Option<(VertexId, VertexId)>,
    /// Randomization seed for Newton restarts.
    pub rng_seed: u64,
}

impl SeedSpec {
    pub fn new(mode: SeedMode) -> Self {
        SeedSpec { mode, fixed_pair: None, rng_seed: 0 }
    }
}

/// Linear symmetry ansatz: the full 18 coordinates depend linearly on a
/// reduced unknown vector.
struct Ansatz {
    /// 18×n matrix mapping unknowns to coordinates.
    map: DMatrix<f64>,
}

impl Ansatz {
    fn realize(&self, u: &DVector<f64>) -> Realization {
        let x = &self.map * u;
        let mut coords = [0.0; 18];
        coords.copy_from_slice(x.as_slice());
        Realization::from_coords(&coords)
    }

    fn line() -> Self {
        // ρ(2k) is the half-turn image (about the z-axis) of ρ(2k−1)
        let mut map = DMatrix::zeros(18, 9);
        let half_turn = [-1.0, -1.0, 1.0];
        for pair in 0..3 {
            for k in 0..3 {
                map[(3 * (2 * pair) + k, 3 * pair + k)] = 1.0;
                map[(3 * (2 * pair + 1) + k, 3 * pair + k)] = half_turn[k];
            }
        }
        Ansatz { map }
    }

    fn plane(fixed: (VertexId, VertexId)) -> Self {
        // fixed pair in the plane z = 0; the other two pairs mirror-paired
        let mut map = DMatrix::zeros(18, 10);
        let mut col = 0;
        for w in [fixed.0, fixed.1] {
            for k in 0..2 {
                map[(3 * w.index() + k, col)] = 1.0;
                col += 1;
            }
        }
        for w in VertexId::all() {
            if w == fixed.0 || w == fixed.1 || w.get() % 2 == 0 {
                continue;
            }
            let mirror = [1.0, 1.0, -1.0];
            for k in 0..3 {
                map[(3 * w.index() + k, col + k)] = 1.0;
                map[(3 * w.partner().index() + k, col + k)] = mirror[k];
            }
            col += 3;
        }
        debug_assert_eq!(col, 10);
        Ansatz { map }
    }

    fn flat() -> Self {
        // all six points in the plane z = 0
        let mut map = DMatrix::zeros(18, 12);
        for w in 0..6 {
            for k in 0..2 {
                map[(3 * w + k, 2 * w + k)] = 1.0;
            }
        }
        Ansatz { map }
    }
}

/// Scaled edge residuals (d² − λ²)/(2λ) ≈ distance error, and their Jacobian
/// with respect to the 18 coordinates.
fn edge_residuals(r: &Realization, labeling: &OctLabeling) -> DVector<f64> {
    let mut out = DVector::zeros(12);
    for (row, edge) in all_edges().into_iter().enumerate() {
        let (i, j) = edge.endpoints();
        let lambda = labeling.get(edge);
        let d = r.point(i) - r.point(j);
        out[row] = (d.norm_squared() - lambda * lambda) / (2.0 * lambda);
    }
    out
}

fn edge_jacobian(r: &Realization, labeling: &OctLabeling) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(12, 18);
    for (row, edge) in all_edges().into_iter().enumerate() {
        let (i, j) = edge.endpoints();
        let d = (r.point(i) - r.point(j)) / labeling.get(edge);
        for k in 0..3 {
            m[(row, 3 * i.index() + k)] = d[k];
            m[(row, 3 * j.index() + k)] = -d[k];
        }
    }
    m
}

/// Damped Gauss-Newton on the symmetry-reduced system.
fn solve_ansatz(
    labeling: &OctLabeling,
    ansatz: &Ansatz,
    rng: &mut ChaCha8Rng,
    scale: f64,
) -> Option<Realization> {
    let n = ansatz.map.ncols();
    let mut u = DVector::from_fn(n, |_, _| rng.random_range(-1.2..1.2) * scale);
    let target = 1e-13 * scale;
    for _ in 0..250 {
        let r = ansatz.realize(&u);
        let f = edge_residuals(&r, labeling);
        let worst = f.amax();
        if worst < target {
            return Some(r);
        }
        let j = edge_jacobian(&r, labeling) * &ansatz.map;
        let svd = j.svd(true, true);
        let Ok(step) = svd.solve(&(-&f), 1e-12 * scale) else {
            return None;
        };
        let mut t = 1.0;
        loop {
            let cand = &u + t * &step;
            let fc = edge_residuals(&ansatz.realize(&cand), labeling).amax();
            if fc < worst || t < 1e-8 {
                u = cand;
                break;
            }
            t *= 0.5;
        }
    }
    let r = ansatz.realize(&u);
    (edge_residuals(&r, labeling).amax() < target).then_some(r)
}

/// Construct a compatible realization with the symmetry of the requested
/// mode. Solutions with (nearly) coincident vertices are rejected and the
/// Newton solve restarted, since they are useless as trace seeds.
pub fn seed_realization(labeling: &OctLabeling, spec: &SeedSpec) -> Result<Realization> {
    let scale = labeling.mean_length();
    let ansatz = match spec.mode {
        SeedMode::Line => {
            if !check_type1(labeling, DEFAULT_TOL).satisfied {
                return Err(Error::Precondition(
                    "line mode requires equal opposite edges in every quadrilateral".into(),
                ));
            }
            Ansatz::line()
        }
        SeedMode::Plane => {
            let report = check_type2(labeling, DEFAULT_TOL);
            let pair = match spec.fixed_pair {
                Some(p) => {
                    let ok = report.choices.iter().any(|(q, passes, _)| *q == p && *passes);
                    if !ok {
                        return Err(Error::Precondition(format!(
                            "plane mode not available for fixed pair {}{}",
                            p.0, p.1
                        )));
                    }
                    p
                }
                None => report
                    .choices
                    .iter()
                    .find(|(_, passes, _)| *passes)
                    .map(|(q, _, _)| *q)
                    .ok_or_else(|| {
                        Error::Precondition("plane mode requires the reflection equalities".into())
                    })?,
            };
            Ansatz::plane(pair)
        }
        SeedMode::Flat => {
            let report = classify_octahedron(labeling, DEFAULT_TOL)?;
            if !report.recommended_modes.contains(&SeedMode::Flat) {
                return Err(Error::Precondition(
                    "flat mode requires two neighboring rhomboid or lozenge pyramids".into(),
                ));
            }
            Ansatz::flat()
        }
    };

    let mut rng = ChaCha8Rng::seed_from_u64(spec.rng_seed);
    for _ in 0..SEED_RESTARTS {
        let Some(r) = solve_ansatz(labeling, &ansatz, &mut rng, scale) else {
            continue;
        };
        if r.min_vertex_distance() > 1e-3 * scale && r.compatibility_residual(labeling) < SEED_RESIDUAL
        {
            return Ok(r);
        }
    }
    Err(Error::NoSeed(format!("{:?} mode Newton did not converge", spec.mode)))
}

/// Pin a realization into the canonical frame: vertex 1 at the origin,
/// vertex 3 on the positive x-axis, vertex 5 in the upper half of the
/// xy-plane. This quotients out the six isometry freedoms.
pub fn pin_to_frame(r: &Realization) -> Result<Realization> {
    let p1 = r.point(VertexId::new(1)?);
    let p3 = r.point(VertexId::new(3)?) - p1;
    let p5 = r.point(VertexId::new(5)?) - p1;
    let e1 = p3
        .try_normalize(1e-12)
        .ok_or_else(|| Error::Degenerate("vertices 1 and 3 coincide".into()))?;
    let w = p5 - p5.dot(&e1) * e1;
    let e2 = w
        .try_normalize(1e-12)
        .ok_or_else(|| Error::Degenerate("vertices 1, 3, 5 collinear".into()))?;
    let e3 = e1.cross(&e2);
    let basis = Matrix3::from_rows(&[e1.transpose(), e2.transpose(), e3.transpose()]);
    let mut out = r.clone();
    for w in VertexId::all() {
        out.set_point(w, basis * (r.point(w) - p1));
    }
    Ok(out)
}

/// Pinned system: 12 scaled edge residuals plus 6 pin rows
/// (x1, y1, z1, y3, z3, z5). Rank 17 of 18 along a one-parameter motion.
struct PinnedSystem {
    labeling: OctLabeling,
}

const PIN_COLS: [usize; 6] = [0, 1, 2, 7, 8, 14];

impl PinnedSystem {
    fn residuals(&self, x: &DVector<f64>) -> DVector<f64> {
        let r = realization_of(x);
        let f = edge_residuals(&r, &self.labeling);
        let mut out = DVector::zeros(18);
        out.rows_mut(0, 12).copy_from(&f);
        for (k, &c) in PIN_COLS.iter().enumerate() {
            out[12 + k] = x[c];
        }
        out
    }

    fn jacobian(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let r = realization_of(x);
        let je = edge_jacobian(&r, &self.labeling);
        let mut m = DMatrix::zeros(18, 18);
        m.rows_mut(0, 12).copy_from(&je);
        for (k, &c) in PIN_COLS.iter().enumerate() {
            m[(12 + k, c)] = 1.0;
        }
        m
    }

    /// Unit tangent: the right singular vector of the smallest singular
    /// value, with a deterministic sign (largest component positive), or
    /// oriented to continue `prev`.
    fn tangent(&self, x: &DVector<f64>, prev: Option<&DVector<f64>>) -> DVector<f64> {
        let svd = self.jacobian(x).svd(false, true);
        let vt = svd.v_t.expect("requested");
        let mut imin = 0;
        for k in 0..svd.singular_values.len() {
            if svd.singular_values[k] < svd.singular_values[imin] {
                imin = k;
            }
        }
        let mut t: DVector<f64> = vt.row(imin).transpose();
        match prev {
            Some(p) => {
                if t.dot(p) < 0.0 {
                    t = -t;
                }
            }
            None => {
                let mut imax = 0;
                for k in 0..t.len() {
                    if t[k].abs() > t[imax].abs() {
                        imax = k;
                    }
                }
                if t[imax] < 0.0 {
                    t = -t;
                }
            }
        }
        t
    }

    /// Newton corrector constrained orthogonal to the tangent direction.
    fn correct(&self, xpred: &DVector<f64>, tangent: &DVector<f64>, target: f64) -> Option<DVector<f64>> {
        let mut x = xpred.clone();
        for _ in 0..CORRECTOR_MAX_ITERS {
            let f = self.residuals(&x);
            if f.amax() < target {
                return Some(x);
            }
            let j = self.jacobian(&x);
            let mut a = DMatrix::zeros(19, 18);
            a.rows_mut(0, 18).copy_from(&j);
            a.row_mut(18).copy_from(&tangent.transpose());
            let mut b = DVector::zeros(19);
            b.rows_mut(0, 18).copy_from(&(-&f));
            let svd = a.svd(true, true);
            let step = svd.solve(&b, 1e-13 * self.labeling.mean_length()).ok()?;
            x += step;
        }
        (self.residuals(&x).amax() < target).then_some(x)
    }
}

fn realization_of(x: &DVector<f64>) -> Realization {
    let mut coords = [0.0; 18];
    coords.copy_from_slice(x.as_slice());
    Realization::from_coords(&coords)
}

fn vector_of(r: &Realization) -> DVector<f64> {
    DVector::from_column_slice(&r.coords())
}

/// Why a trace ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceStatus {
    /// Returned to the seed configuration after a full loop.
    ClosedLoop,
    /// Step budget exhausted.
    MaxSteps,
    /// Corrector kept failing even at the minimum step size.
    CorrectorFailure,
}

#[derive(Clone, Debug)]
pub struct TrajectorySample {
    pub step: usize,
    /// Accumulated arclength in pinned coordinates.
    pub s: f64,
    pub realization: Realization,
    pub residual: f64,
    pub flex_dim: usize,
    pub flat: bool,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub labeling: OctLabeling,
    pub samples: Vec<TrajectorySample>,
    pub status: TraceStatus,
    pub step_size: f64,
}

/// RMS distance of the six points to their best-fit plane.
pub fn plane_rms(r: &Realization) -> f64 {
    let centroid: Vector3<f64> = r.points().iter().sum::<Vector3<f64>>() / 6.0;
    let mut m = DMatrix::zeros(6, 3);
    for (k, p) in r.points().iter().enumerate() {
        let d = p - centroid;
        for c in 0..3 {
            m[(k, c)] = d[c];
        }
    }
    let svals = m.svd(false, false).singular_values;
    svals[svals.len() - 1] / 6.0_f64.sqrt()
}

/// Trace the motion through `seed` by tangent-predictor/Newton-corrector
/// arclength continuation in the pinned frame.
///
/// Samples stop early on loop closure (pinned coordinates back at the seed
/// after arclength > 10 h) or when the corrector fails below h/1024.
/// Rerunning with identical inputs reproduces the trajectory bitwise.
pub fn trace_motion(
    labeling: &OctLabeling,
    seed: &Realization,
    steps: usize,
    h: f64,
    tol: f64,
) -> Result<Trajectory> {
    let scale = labeling.mean_length();
    let h = if h > 0.0 { h } else { DEFAULT_STEP_FACTOR * scale };
    let corr_target = (tol * 1e-3).min(1e-12 * scale).max(1e-15 * scale);

    let rank = rigidity_rank(seed, labeling, RANK_SVD_TOL)?;
    if rank.flex_dim == 0 {
        return Err(Error::RigidSeed { rank: rank.rank });
    }

    let system = PinnedSystem { labeling: labeling.clone() };
    let pinned = pin_to_frame(seed)?;
    let mut x = vector_of(&pinned);
    let t0 = system.tangent(&x, None);
    // settle exactly onto the pinned solution manifold
    x = system
        .correct(&x, &t0, corr_target)
        .ok_or_else(|| Error::NoSeed("seed does not satisfy the pinned system".into()))?;
    let x0 = x.clone();

    let mut samples = Vec::with_capacity(steps + 1);
    let mut push_sample = |step: usize, s: f64, x: &DVector<f64>| -> Result<()> {
        let realization = realization_of(x);
        let residual = realization.compatibility_residual(labeling);
        let flex_dim = rigidity_rank(&realization, labeling, RANK_SVD_TOL)?.flex_dim;
        let flat = plane_rms(&realization) < FLAT_RMS_FACTOR * scale;
        samples.push(TrajectorySample { step, s, realization, residual, flex_dim, flat });
        Ok(())
    };
    push_sample(0, 0.0, &x)?;

    let mut tangent = system.tangent(&x, None);
    let mut s = 0.0;
    let mut status = TraceStatus::MaxSteps;
    for step in 1..=steps {
        let mut sub = h;
        let next = loop {
            let pred = &x + sub * &tangent;
            if let Some(corr) = system.correct(&pred, &tangent, corr_target) {
                break Some(corr);
            }
            sub *= 0.5;
            if sub < h / MIN_STEP_DIV {
                break None;
            }
        };
        let Some(xn) = next else {
            status = TraceStatus::CorrectorFailure;
            break;
        };
        s += (&xn - &x).norm();
        tangent = system.tangent(&xn, Some(&tangent));
        x = xn;
        push_sample(step, s, &x)?;
        if s > 10.0 * h && (&x - &x0).norm() < 0.75 * h {
            status = TraceStatus::ClosedLoop;
            break;
        }
    }
    Ok(Trajectory { labeling: labeling.clone(), samples, status, step_size: h })
}

/// A refined flat realization on a trajectory.
#[derive(Clone, Debug)]
pub struct FlatPoint {
    /// Arclength parameter along the trajectory.
    pub parameter: f64,
    pub realization: Realization,
    /// Absolute plane RMS at the refined point.
    pub plane_rms: f64,
}

/// Locate the flat realizations along a trajectory: local minima of the
/// plane RMS are refined by bracketed interval shrinking (with Newton
/// re-projection onto the motion at every probe) and kept when the refined
/// RMS falls below `rel_tol × mean edge length`.
pub fn detect_flat(traj: &Trajectory, rel_tol: f64) -> Vec<FlatPoint> {
    let scale = traj.labeling.mean_length();
    let system = PinnedSystem { labeling: traj.labeling.clone() };
    let corr_target = 1e-12 * scale;
    let n = traj.samples.len();
    if n < 3 {
        return Vec::new();
    }
    let rms: Vec<f64> = traj.samples.iter().map(|smp| plane_rms(&smp.realization)).collect();
    let closed = traj.status == TraceStatus::ClosedLoop;

    let mut found: Vec<FlatPoint> = Vec::new();
    let coarse_cut = 0.05 * scale;
    for i in 0..n {
        let (prev, next) = if closed {
            ((i + n - 1) % n, (i + 1) % n)
        } else {
            if i == 0 || i == n - 1 {
                continue;
            }
            (i - 1, i + 1)
        };
        if !(rms[i] <= rms[prev] && rms[i] <= rms[next] && rms[i] < coarse_cut) {
            continue;
        }
        let x_start = vector_of(&traj.samples[i].realization);
        let refined = refine_minimum(&system, &x_start, traj.step_size, corr_target);
        let Some((offset, x_best)) = refined else { continue };
        let realization = realization_of(&x_best);
        let rms_best = plane_rms(&realization);
        if rms_best < rel_tol * scale {
            let parameter = traj.samples[i].s + offset;
            // two sample-level minima can bracket one true flat point
            let dup = found.iter().any(|fp| {
                are_realizations_close(&fp.realization, &realization, 0.5 * traj.step_size)
            });
            if !dup {
                found.push(FlatPoint { parameter, realization, plane_rms: rms_best });
            }
        }
    }
    found.sort_by(|a, b| a.parameter.partial_cmp(&b.parameter).unwrap());
    found
}

fn are_realizations_close(a: &Realization, b: &Realization, tol: f64) -> bool {
    let (ca, cb) = (a.coords(), b.coords());
    ca.iter().zip(cb.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt() < tol
}

/// Shrink a bracket of width ±d around the current minimum, re-projecting
/// each probe onto the motion, until the probe spacing is negligible.
fn refine_minimum(
    system: &PinnedSystem,
    x_start: &DVector<f64>,
    step: f64,
    corr_target: f64,
) -> Option<(f64, DVector<f64>)> {
    let mut x_best = x_start.clone();
    let mut f_best = plane_rms(&realization_of(&x_best));
    let mut offset = 0.0;
    let mut d = step;
    let floor = step * 1e-12;
    while d > floor {
        let t = system.tangent(&x_best, None);
        let mut improved = false;
        for sign in [-1.0, 1.0] {
            let pred = &x_best + sign * d * &t;
            let Some(cand) = system.correct(&pred, &t, corr_target) else { continue };
            let f = plane_rms(&realization_of(&cand));
            if f < f_best {
                f_best = f;
                // the tangent sign convention is local; track offsets by the
                // actual displacement direction
                offset += sign * d;
                x_best = cand;
                improved = true;
            }
        }
        if !improved {
            d *= 0.5;
        }
    }
    Some((offset, x_best))
}

/// Dihedral angle in [0, π] between the two triangular faces at `edge`.
pub fn dihedral_angle(r: &Realization, edge: Edge) -> Result<f64> {
    let (i, j) = edge.endpoints();
    let (k, l) = edge.face_apexes();
    let axis = (r.point(j) - r.point(i))
        .try_normalize(1e-12)
        .ok_or_else(|| Error::Degenerate("edge endpoints coincide".into()))?;
    let leg = |w: VertexId| -> Result<Vector3<f64>> {
        let raw = r.point(w) - r.point(i);
        let perp = raw - raw.dot(&axis) * axis;
        perp.try_normalize(1e-12)
            .ok_or_else(|| Error::Degenerate(format!("face at {w} is degenerate")))
    };
    let a = leg(k)?;
    let b = leg(l)?;
    Ok(a.dot(&b).clamp(-1.0, 1.0).acos())
}

/// Distance of every dihedral angle to the nearer of 0 and π; flat
/// realizations give 0 everywhere.
pub fn max_dihedral_deviation_from_flat(r: &Realization) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for edge in all_edges() {
        let ang = dihedral_angle(r, edge)?;
        worst = worst.max(ang.min(std::f64::consts::PI - ang));
    }
    Ok(worst)
}

/// Replace the partner of `apex` by the mirror image of `apex` across the
/// plane spanned by the other four vertices, which must be coplanar within
/// `tol` (RMS distance to their best-fit plane).
pub fn reduce_mirror_vertex(r: &Realization, apex: VertexId, tol: f64) -> Result<Realization> {
    let partner = apex.partner();
    let base: Vec<VertexId> = VertexId::all().filter(|&w| w != apex && w != partner).collect();
    let centroid = base.iter().map(|&w| r.point(w)).sum::<Vector3<f64>>() / 4.0;
    let mut m = DMatrix::zeros(4, 3);
    for (row, &w) in base.iter().enumerate() {
        let d = r.point(w) - centroid;
        for c in 0..3 {
            m[(row, c)] = d[c];
        }
    }
    let svd = m.clone().svd(false, true);
    let svals = &svd.singular_values;
    let rms = svals[svals.len() - 1] / 2.0;
    if rms > tol {
        return Err(Error::Precondition(format!(
            "base vertices not coplanar (plane RMS {rms:.3e} > {tol:.3e})"
        )));
    }
    let vt = svd.v_t.expect("requested");
    let normal = Vector3::new(vt[(2, 0)], vt[(2, 1)], vt[(2, 2)]);
    let p = r.point(apex);
    let mirrored = p - 2.0 * (p - centroid).dot(&normal) * normal;
    let mut out = r.clone();
    out.set_point(partner, mirrored);
    Ok(out)
}

/// Serialize a trajectory to CSV with the columns
/// `step,s,x1,y1,z1,…,x6,y6,z6,residual,flexdim,flat`.
pub fn trajectory_to_csv(traj: &Trajectory) -> String {
    use crate::oct::fmt_f64;
    let mut out = String::from("step,s");
    for w in 1..=6 {
        out.push_str(&format!(",x{w},y{w},z{w}"));
    }
    out.push_str(",residual,flexdim,flat\n");
    for smp in &traj.samples {
        out.push_str(&format!("{},{}", smp.step, fmt_f64(smp.s)));
        for c in smp.realization.coords() {
            out.push(',');
            out.push_str(&fmt_f64(c));
        }
        out.push_str(&format!(
            ",{},{},{}\n",
            fmt_f64(smp.residual),
            smp.flex_dim,
            u8::from(smp.flat)
        ));
    }
    out
}

/// Parse a trajectory CSV. The labeling is recovered from the first sample's
/// edge lengths (samples satisfy it to corrector precision), so refinement
/// can re-project onto the motion without the original input file.
pub fn trajectory_from_csv(text: &str) -> Result<Trajectory> {
    let bad = |msg: &str| Error::Precondition(format!("trajectory csv: {msg}"));
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| bad("empty file"))?;
    if !header.starts_with("step,s,x1") {
        return Err(bad("unexpected header"));
    }
    let mut samples = Vec::new();
    for line in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 23 {
            return Err(bad("expected 23 columns"));
        }
        let step: usize = fields[0].parse().map_err(|_| bad("step"))?;
        let s: f64 = fields[1].parse().map_err(|_| bad("s"))?;
        let mut coords = [0.0; 18];
        for (k, slot) in coords.iter_mut().enumerate() {
            *slot = fields[2 + k].parse().map_err(|_| bad("coordinate"))?;
        }
        let residual: f64 = fields[20].parse().map_err(|_| bad("residual"))?;
        let flex_dim: usize = fields[21].parse().map_err(|_| bad("flexdim"))?;
        let flat = fields[22].trim() == "1";
        samples.push(TrajectorySample {
            step,
            s,
            realization: Realization::from_coords(&coords),
            residual,
            flex_dim,
            flat,
        });
    }
    if samples.len() < 2 {
        return Err(bad("need at least two samples"));
    }
    let first = &samples[0].realization;
    let mut measured = std::collections::BTreeMap::new();
    for edge in all_edges() {
        let (i, j) = edge.endpoints();
        measured.insert(edge, (first.point(i) - first.point(j)).norm());
    }
    let labeling = OctLabeling::new(&measured)?;
    // loop closure is re-detected from the data
    let h = (vector_of(&samples[1].realization) - vector_of(&samples[0].realization)).norm();
    let last = vector_of(&samples[samples.len() - 1].realization);
    let status = if samples[samples.len() - 1].s > 10.0 * h
        && (last - vector_of(first)).norm() < 0.75 * h
    {
        TraceStatus::ClosedLoop
    } else {
        TraceStatus::MaxSteps
    };
    Ok(Trajectory { labeling, samples, status, step_size: h })
}
