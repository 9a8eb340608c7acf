//! Nodewise verification of the inequality machinery: Kato's inequality, the
//! carre-du-champ decomposition chain for `Q = |u|^2 - 1`, and the Liouville
//! certificate that nonnegative subsolutions of `A f + f^r <= 0` vanish.
//!
//! Everything here runs against the quadrature operator, whose nonnegative
//! weights make the inequalities provable nodewise; the checks confirm the
//! implementation delivers what the structure promises and report where it
//! does not.

use crate::error::{FracError, Result};
use crate::field::{Field, KahanSum};
use crate::ginzburg_landau::{solve_steady, GLConfig, GLTrace};
use crate::grid::{Grid, Topology};
use crate::operator::params::FracParams;
use crate::operator::quadrature::{ExteriorData, OperatorMatrix};
use crate::potential::cutoff_potential;
use crate::report::PropertyReport;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub const KATO_TOLERANCE: f64 = 1e-12;

fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn require_zero_exterior(a: &OperatorMatrix) -> Result<()> {
    if !a.has_zero_exterior() {
        return Err(FracError::InvalidConfig(
            "this check needs zero exterior data so the transformed field has a consistent exterior".into(),
        ));
    }
    Ok(())
}

/// Kato's inequality `A|f| <= sgn(f) Af` at every node, `sgn(0) = 0`.
pub fn kato_check(f: &Field, a: &OperatorMatrix) -> Result<PropertyReport> {
    require_zero_exterior(a)?;
    if f.grid() != a.grid() || f.components() != 1 {
        return Err(FracError::GridMismatch);
    }
    let af = a.apply_values(f.values(), |g| g);
    let abs_vals: Vec<f64> = f.values().iter().map(|v| v.abs()).collect();
    let a_abs = a.apply_values(&abs_vals, |g| g.abs());
    let mut worst = f64::NEG_INFINITY;
    let mut node_at = 0;
    for i in 0..f.grid().node_count() {
        let excess = a_abs[i] - sgn(f.values()[i]) * af[i];
        if excess > worst {
            worst = excess;
            node_at = i;
        }
    }
    Ok(PropertyReport::new(
        "kato",
        worst,
        if worst > KATO_TOLERANCE { Some(node_at) } else { None },
        KATO_TOLERANCE,
        format!("nodes={} alpha={}", f.grid().node_count(), a.alpha()),
    ))
}

/// Positive-part variant `A f_+ <= sgn(f_+) A f`.
pub fn positive_part_check(f: &Field, a: &OperatorMatrix) -> Result<PropertyReport> {
    require_zero_exterior(a)?;
    if f.grid() != a.grid() || f.components() != 1 {
        return Err(FracError::GridMismatch);
    }
    let af = a.apply_values(f.values(), |g| g);
    let pos_vals: Vec<f64> = f.values().iter().map(|v| v.max(0.0)).collect();
    let a_pos = a.apply_values(&pos_vals, |g| g.max(0.0));
    let mut worst = f64::NEG_INFINITY;
    let mut node_at = 0;
    for i in 0..f.grid().node_count() {
        let excess = a_pos[i] - sgn(pos_vals[i]) * af[i];
        if excess > worst {
            worst = excess;
            node_at = i;
        }
    }
    Ok(PropertyReport::new(
        "positive_part",
        worst,
        if worst > KATO_TOLERANCE { Some(node_at) } else { None },
        KATO_TOLERANCE,
        format!("nodes={} alpha={}", f.grid().node_count(), a.alpha()),
    ))
}

/// Periodic field continued off the box: exterior lattice points wrap to grid
/// nodes exactly, the far value is the component mean.
fn periodic_closure(grid: &Grid, lane: Vec<f64>) -> impl Fn(&[f64]) -> f64 + Send + Sync {
    let n = grid.points_per_axis() as i64;
    let half = grid.half_extent();
    let h = grid.spacing();
    let dim = grid.dim();
    move |p: &[f64]| {
        let mut idx = [0usize; 2];
        for a in 0..dim {
            let j = ((p[a] + half) / h).round() as i64;
            idx[a] = j.rem_euclid(n) as usize;
        }
        match dim {
            1 => lane[idx[0]],
            _ => lane[idx[0] * n as usize + idx[1]],
        }
    }
}

fn mean(values: &[f64]) -> f64 {
    let mut acc = KahanSum::default();
    for v in values {
        acc.add(*v);
    }
    acc.value() / values.len() as f64
}

struct ChainPieces {
    a_q2: Vec<f64>,
    a_q: Vec<f64>,
    a_qplus: Vec<f64>,
    a_u: Vec<Vec<f64>>,
    gamma: Vec<f64>,
    q2: Vec<f64>,
    lanes: Vec<Vec<f64>>,
}

/// Raw nodewise maxima of the decomposition chain, before any verdict.
#[derive(Clone, Copy, Debug)]
pub struct QChainQuantities {
    /// `max |A(|u|^2) - 2 u . A u + Gamma(u)|`, an exact weight-level identity.
    pub identity_worst: f64,
    pub identity_node: usize,
    /// `max (A Q + 2 Q^2 + 2 Q)`.
    pub decay_worst: f64,
    pub decay_node: usize,
    /// `max (A Q_+ + 2 Q_+^2)`.
    pub plus_worst: f64,
    pub plus_node: usize,
    /// `min Gamma(u)`; nonnegative by construction.
    pub gamma_min: f64,
    /// Equation residual measured in the quadrature operator itself.
    pub rho_quad: f64,
    pub sup_q2: f64,
}

/// Shared evaluation: `sq_matrix` must see `sq_map(cell value) = |g|^2` on
/// its exterior cells, `lane_matrices[c]` the component values themselves.
fn chain_pieces(
    lanes: Vec<Vec<f64>>,
    lane_matrices: &[&OperatorMatrix],
    sq_matrix: &OperatorMatrix,
    sq_map: impl Fn(f64) -> f64 + Sync + Copy,
) -> ChainPieces {
    let n = lanes[0].len();
    let comps = lanes.len();
    let mut q2 = vec![0.0; n];
    for lane in &lanes {
        for i in 0..n {
            q2[i] += lane[i] * lane[i];
        }
    }
    let a_q2 = sq_matrix.apply_values(&q2, sq_map);
    let qvals: Vec<f64> = q2.iter().map(|v| v - 1.0).collect();
    let a_q = sq_matrix.apply_values(&qvals, move |t| sq_map(t) - 1.0);
    let qplus: Vec<f64> = qvals.iter().map(|v| v.max(0.0)).collect();
    let a_qplus = sq_matrix.apply_values(&qplus, move |t| (sq_map(t) - 1.0).max(0.0));
    let mut a_u = Vec::with_capacity(comps);
    let mut gamma = vec![0.0; n];
    for (c, lane) in lanes.iter().enumerate() {
        a_u.push(lane_matrices[c].apply_values(lane, |g| g));
        let field = Field::from_values(lane_matrices[c].grid().clone(), 1, lane.clone())
            .expect("lane values are finite");
        let g = lane_matrices[c].carre_du_champ(&field).expect("matching grid");
        for i in 0..n {
            gamma[i] += g.values()[i];
        }
    }
    ChainPieces { a_q2, a_q, a_qplus, a_u, gamma, q2, lanes }
}

fn chain_quantities(pieces: &ChainPieces) -> QChainQuantities {
    let n = pieces.q2.len();
    let comps = pieces.lanes.len();

    // identity: A(|u|^2) = 2 u . A u - Gamma(u), exact at the weight level
    let sup_q2 = pieces.q2.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut identity_worst = 0.0f64;
    let mut identity_node = 0;
    for i in 0..n {
        let mut dot = 0.0;
        for c in 0..comps {
            dot += 2.0 * pieces.lanes[c][i] * pieces.a_u[c][i];
        }
        let defect = (pieces.a_q2[i] - dot + pieces.gamma[i]).abs();
        if defect > identity_worst {
            identity_worst = defect;
            identity_node = i;
        }
    }

    // residual of the equation in the quadrature operator itself
    let mut rho_quad = 0.0f64;
    for i in 0..n {
        let mut dot = 0.0;
        for c in 0..comps {
            let f = pieces.lanes[c][i] * (1.0 - pieces.q2[i]);
            dot += 2.0 * pieces.lanes[c][i] * (pieces.a_u[c][i] - f);
        }
        rho_quad = rho_quad.max(dot.abs());
    }

    let mut decay_worst = f64::NEG_INFINITY;
    let mut decay_node = 0;
    let mut plus_worst = f64::NEG_INFINITY;
    let mut plus_node = 0;
    for i in 0..n {
        let q = pieces.q2[i] - 1.0;
        let v2 = pieces.a_q[i] + 2.0 * q * q + 2.0 * q;
        if v2 > decay_worst {
            decay_worst = v2;
            decay_node = i;
        }
        let qp = q.max(0.0);
        let v3 = pieces.a_qplus[i] + 2.0 * qp * qp;
        if v3 > plus_worst {
            plus_worst = v3;
            plus_node = i;
        }
    }
    let gamma_min = pieces.gamma.iter().fold(f64::INFINITY, |m, v| m.min(*v));

    QChainQuantities {
        identity_worst,
        identity_node,
        decay_worst,
        decay_node,
        plus_worst,
        plus_node,
        gamma_min,
        rho_quad,
        sup_q2,
    }
}

fn chain_report(q: &QChainQuantities, steady_residual: f64, context_head: &str) -> PropertyReport {
    let tol_identity = 1e-12 * q.sup_q2.max(1.0);
    let rho_total = steady_residual.max(q.rho_quad);
    let budget = 10.0 * rho_total;

    let context = format!(
        "{context_head} identity={:e}/(tol {tol_identity:e}) decay={:e} plus={:e} \
         (budget {budget:e}) gamma_min={:e} rho_quad={:e} rho_given={steady_residual:e}",
        q.identity_worst, q.decay_worst, q.plus_worst, q.gamma_min, q.rho_quad
    );

    // report the check that comes closest to (or past) its budget
    let ratios = [
        (q.identity_worst / tol_identity, q.identity_worst, q.identity_node, tol_identity),
        (q.decay_worst / budget, q.decay_worst, q.decay_node, budget),
        (q.plus_worst / budget, q.plus_worst, q.plus_node, budget),
        (if q.gamma_min < 0.0 { 2.0 } else { 0.0 }, -q.gamma_min, 0, 0.0),
    ];
    let dominant = ratios.iter().max_by(|a, b| a.0.total_cmp(&b.0)).unwrap();
    PropertyReport::new(
        "q_chain",
        dominant.1,
        if dominant.0 > 1.0 { Some(dominant.2) } else { None },
        dominant.3,
        context,
    )
}

/// Chain check for a scalar field against a caller-supplied matrix; the
/// matrix's exterior data must continue `u` itself (the maps square it).
pub fn q_chain_check(u: &Field, a: &OperatorMatrix, trace: &GLTrace) -> Result<PropertyReport> {
    if !trace.is_steady() {
        return Err(FracError::NotSteady { residual: trace.residual });
    }
    if u.components() != 1 || u.grid() != a.grid() {
        return Err(FracError::GridMismatch);
    }
    let pieces = chain_pieces(vec![u.values().to_vec()], &[a], a, |t| t * t);
    Ok(chain_report(
        &chain_quantities(&pieces),
        trace.residual,
        &format!("scalar nodes={} alpha={};", a.node_count(), a.alpha()),
    ))
}

/// Raw chain maxima for a steady state of the periodic flow, with the
/// operator built on the truncated twin and the periodic extension as
/// exterior data (`periods` box widths per side, component mean beyond).
pub fn q_chain_quantities(
    u: &Field,
    alpha: f64,
    periods: usize,
) -> Result<QChainQuantities> {
    if u.grid().topology() != Topology::Periodic {
        return Err(FracError::TopologyMismatch {
            expected: Topology::Periodic,
            actual: u.grid().topology(),
        });
    }
    let grid = u.grid().truncated_twin();
    let n = grid.node_count();
    let comps = u.components();
    let cells = periods.max(1) * grid.points_per_axis();
    let mut lanes = Vec::with_capacity(comps);
    for c in 0..comps {
        lanes.push((0..n).map(|i| u.value(i, c)).collect::<Vec<f64>>());
    }
    let mut matrices = Vec::with_capacity(comps);
    for lane in &lanes {
        let closure = periodic_closure(&grid, lane.clone());
        let ext = ExteriorData::function(closure, cells, mean(lane));
        matrices.push(OperatorMatrix::build(&grid, alpha, ext)?);
    }
    let refs: Vec<&OperatorMatrix> = matrices.iter().collect();
    let pieces = if comps == 1 {
        chain_pieces(lanes, &refs, refs[0], |t| t * t)
    } else {
        // vector case: a separate matrix carries |g|^2 on its exterior cells
        let sq_lane: Vec<f64> = (0..n)
            .map(|i| (0..comps).map(|c| lanes[c][i] * lanes[c][i]).sum())
            .collect();
        let far_sq: f64 = lanes.iter().map(|l| mean(l) * mean(l)).sum();
        let closure = periodic_closure(&grid, sq_lane);
        let ext = ExteriorData::function(closure, cells, far_sq);
        let m_sq = OperatorMatrix::build(&grid, alpha, ext)?;
        chain_pieces(lanes, &refs, &m_sq, |t| t)
    };
    Ok(chain_quantities(&pieces))
}

/// Candidate for the Liouville lemma: nonnegative `f` claiming
/// `A f + f^r <= slack` nodewise with zero exterior data.
#[derive(Clone, Debug)]
pub struct SubsolutionCandidate {
    pub f: Field,
    pub exponent: f64,
    pub q: f64,
    pub certified: bool,
    pub slack: f64,
    pub worst_excess: f64,
    pub violation_node: Option<usize>,
}

impl SubsolutionCandidate {
    pub fn certify(
        f: Field,
        exponent: f64,
        q: f64,
        a: &OperatorMatrix,
        slack: f64,
    ) -> Result<Self> {
        require_zero_exterior(a)?;
        if f.grid() != a.grid() || f.components() != 1 {
            return Err(FracError::GridMismatch);
        }
        if !(exponent >= 1.0) || !(q >= 1.0) {
            return Err(FracError::InvalidConfig(format!(
                "need exponent >= 1 and q >= 1, got r={exponent} q={q}"
            )));
        }
        if f.values().iter().any(|v| *v < 0.0) {
            return Err(FracError::InvalidConfig("candidate must be nonnegative".into()));
        }
        let af = a.apply_values(f.values(), |g| g);
        let mut worst = f64::NEG_INFINITY;
        let mut node_at = 0;
        for i in 0..f.grid().node_count() {
            let v = af[i] + f.values()[i].powf(exponent);
            if v > worst {
                worst = v;
                node_at = i;
            }
        }
        let certified = worst <= slack;
        Ok(SubsolutionCandidate {
            f,
            exponent,
            q,
            certified,
            slack,
            worst_excess: worst,
            violation_node: if certified { None } else { Some(node_at) },
        })
    }
}

/// The Liouville conclusion for a certified candidate: test against the
/// potential of the cutoff at scale `R` and conclude `sup f` is pinned by the
/// certification slack. Uncertified candidates already carry their violating
/// node, which is the contrapositive certificate; the lemma is then upheld
/// vacuously.
pub fn liouville_certificate(
    cand: &SubsolutionCandidate,
    scale: f64,
    params: &FracParams,
    a: &OperatorMatrix,
) -> Result<PropertyReport> {
    require_zero_exterior(a)?;
    if cand.f.grid() != a.grid() {
        return Err(FracError::GridMismatch);
    }
    if !cand.certified {
        let node = cand.violation_node.expect("uncertified candidates carry a node");
        return Ok(PropertyReport::new(
            "liouville",
            0.0,
            Some(node),
            0.0,
            format!(
                "contrapositive: A f + f^r exceeds {:e} at node {} by {:e}; not a subsolution",
                cand.slack, node, cand.worst_excess
            ),
        ));
    }

    let grid = cand.f.grid();
    let pot = cutoff_potential(scale, params, grid)?;
    let xi = &pot.cutoff;
    let phi = &pot.phi;
    let h_measure = grid.cell_measure();

    // T(f) = <f, xi_R> + <xi_R f^r, phi>, both terms nonnegative
    let mut t1 = KahanSum::default();
    let mut t2 = KahanSum::default();
    for i in 0..grid.node_count() {
        let fv = cand.f.values()[i];
        t1.add(fv * xi.values()[i]);
        t2.add(xi.values()[i] * fv.powf(cand.exponent) * phi.values()[i]);
    }
    let term1 = h_measure * t1.value();
    let term2 = h_measure * t2.value();
    let t_total = term1 + term2;
    debug_assert!(term1 >= 0.0 && term2 >= 0.0);

    // budget from testing the certified inequality with phi:
    //   T(f) <= sup f * ||xi_R - A phi||_1 + slack * ||phi||_1
    let a_phi = a.apply(phi)?;
    let mut err1 = KahanSum::default();
    let mut phi1 = KahanSum::default();
    for i in 0..grid.node_count() {
        err1.add((xi.values()[i] - a_phi.values()[i]).abs());
        phi1.add(phi.values()[i].abs());
    }
    let sup_f = cand.f.sup_norm();
    let t_budget = sup_f * h_measure * err1.value() + cand.slack * h_measure * phi1.value();

    // conclusion: at the maximum, A f >= tail_min * sup f, so the slack pins sup f
    let tail_min = a.tail().iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let sup_budget = (cand.slack / tail_min).max(0.0) + 1e-14;

    let worst = (t_total - t_budget).max(sup_f - sup_budget);
    Ok(PropertyReport::new(
        "liouville",
        worst,
        None,
        0.0,
        format!(
            "certified r={} q={}: T={t_total:e} (budget {t_budget:e}), sup f={sup_f:e} \
             (budget {sup_budget:e}), slack={:e}, scale={scale}",
            cand.exponent, cand.q, cand.slack
        ),
    ))
}

/// Projected-ascent feasibility search for nontrivial nonnegative
/// subsolutions. The feasible set of `A f + f^r <= 0, f >= 0` collapses to
/// zero for an M-matrix with positive tails, and the search is the
/// desk-scale witness: it reports the best feasible sup it ever found and
/// whether every meaningfully positive candidate produced a violating node.
#[derive(Clone, Copy, Debug)]
pub struct FeasibilitySearch {
    pub restarts: usize,
    pub ascent_attempts: usize,
    pub exponent: f64,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct SearchOutcome {
    pub best_feasible_sup: f64,
    pub candidates: usize,
    /// Candidates with sup above this threshold...
    pub positive_threshold: f64,
    /// ...how many there were...
    pub positive_total: usize,
    /// ...and how many of those produced a violating-node certificate.
    pub positive_with_certificate: usize,
}

impl SearchOutcome {
    pub fn all_positive_certified_infeasible(&self) -> bool {
        self.positive_total == self.positive_with_certificate
    }
}

pub fn feasibility_search(a: &OperatorMatrix, search: &FeasibilitySearch) -> Result<SearchOutcome> {
    require_zero_exterior(a)?;
    let n = a.node_count();
    let r = search.exponent;
    if !(r >= 1.0) {
        return Err(FracError::InvalidConfig(format!("exponent must be >= 1, got {r}")));
    }
    let threshold = 1e-6;

    let feasible = |f: &[f64]| -> Option<usize> {
        let af = a.apply_values(f, |g| g);
        let mut worst = f64::NEG_INFINITY;
        let mut node = 0;
        for i in 0..n {
            let v = af[i] + f[i].powf(r);
            if v > worst {
                worst = v;
                node = i;
            }
        }
        if worst > 0.0 {
            Some(node)
        } else {
            None
        }
    };

    let per_restart = |idx: u64| -> (f64, bool, bool) {
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        rng.set_stream(idx);
        let amp = 10f64.powf(rng.random_range(-5.0..1.0));
        let mut f: Vec<f64> = (0..n).map(|_| amp * rng.random_range(0.0..1.0)).collect();
        let sup0 = f.iter().fold(0.0f64, |m, v| m.max(*v));
        let positive = sup0 > threshold;
        let has_certificate = feasible(&f).is_some();

        // repair by halving; a genuinely infeasible direction collapses to zero
        let mut guard = 0;
        while feasible(&f).is_some() {
            for v in f.iter_mut() {
                *v *= 0.5;
            }
            guard += 1;
            if guard > 60 || f.iter().fold(0.0f64, |m, v| m.max(*v)) < 1e-15 {
                f.iter_mut().for_each(|v| *v = 0.0);
                break;
            }
        }
        let mut best = f.iter().fold(0.0f64, |m, v| m.max(*v));

        // ascent: try to push mass back in while staying feasible
        for _ in 0..search.ascent_attempts {
            let node = rng.random_range(0..n);
            let bump = amp * 10f64.powf(rng.random_range(-8.0..0.0));
            let old = f[node];
            f[node] += bump;
            if feasible(&f).is_some() {
                f[node] = old;
            } else {
                best = best.max(f.iter().fold(0.0f64, |m, v| m.max(*v)));
            }
        }
        (best, positive, positive && has_certificate)
    };

    let results: Vec<(f64, bool, bool)> =
        (0..search.restarts as u64).into_par_iter().map(per_restart).collect();

    let mut best = 0.0f64;
    let mut positive_total = 0;
    let mut positive_with_certificate = 0;
    for (b, pos, cert) in results {
        best = best.max(b);
        if pos {
            positive_total += 1;
            if cert {
                positive_with_certificate += 1;
            }
        }
    }
    Ok(SearchOutcome {
        best_feasible_sup: best,
        candidates: search.restarts,
        positive_threshold: threshold,
        positive_total,
        positive_with_certificate,
    })
}

/// End-to-end replication of the boundedness argument: flow to a steady
/// state, verify the decomposition chain, certify `Q_+` as a subsolution with
/// `r = 2`, and run the Liouville certificate on it. `scale` is the cutoff
/// radius for the test function; `periods` the exterior sampling width.
pub fn theorem1_pipeline(
    u0: &Field,
    cfg: &GLConfig,
    scale: f64,
    periods: usize,
) -> Result<PropertyReport> {
    let params = FracParams::new(u0.grid().dim(), cfg.alpha)?;
    params.require_inverse()?;

    let (star, trace) = solve_steady(u0, cfg)?;
    if !trace.is_steady() {
        return Ok(PropertyReport::new(
            "theorem1_pipeline",
            trace.residual,
            None,
            trace.residual_bound,
            format!("stage solve_steady failed: not steady after {} steps", trace.steps),
        ));
    }

    let chain = q_chain_periodic(&star, &trace, cfg.alpha, periods)?;
    if !chain.passed {
        return Ok(PropertyReport::new(
            "theorem1_pipeline",
            chain.worst_violation,
            chain.violation_node,
            chain.tolerance,
            format!("stage q_chain failed: {}", chain.context),
        ));
    }

    let grid = star.grid().truncated_twin();
    let n = grid.node_count();
    let qplus: Vec<f64> = (0..n)
        .map(|i| {
            let m = star.node_norm(i);
            (m * m - 1.0).max(0.0)
        })
        .collect();
    let qplus_field = Field::from_values(grid.clone(), 1, qplus)?;
    let a0 = OperatorMatrix::build(&grid, cfg.alpha, ExteriorData::Zero)?;
    let slack = 10.0 * trace.residual.max(cfg.steady_tolerance);
    let cand = SubsolutionCandidate::certify(qplus_field, 2.0, 2.0, &a0, slack)?;
    if !cand.certified {
        return Ok(PropertyReport::new(
            "theorem1_pipeline",
            cand.worst_excess,
            cand.violation_node,
            slack,
            "stage certify failed: Q_+ is not a discrete subsolution within the residual budget",
        ));
    }

    let liou = liouville_certificate(&cand, scale, &params, &a0)?;
    if !liou.passed {
        return Ok(PropertyReport::new(
            "theorem1_pipeline",
            liou.worst_violation,
            liou.violation_node,
            liou.tolerance,
            format!("stage liouville failed: {}", liou.context),
        ));
    }

    let sup_qplus = cand.f.sup_norm();
    let tol = 1e-6;
    Ok(PropertyReport::new(
        "theorem1_pipeline",
        sup_qplus,
        None,
        tol,
        format!(
            "steady after {} steps, residual {:e}; chain ok; sup Q_+ = {sup_qplus:e}",
            trace.steps, trace.residual
        ),
    ))
}

/// Chain check for a steady state of the periodic flow; refuses fields that
/// are not certified steady, because the decay inequalities use the equation.
pub fn q_chain_periodic(
    u: &Field,
    trace: &GLTrace,
    alpha: f64,
    periods: usize,
) -> Result<PropertyReport> {
    if !trace.is_steady() {
        return Err(FracError::NotSteady { residual: trace.residual });
    }
    let q = q_chain_quantities(u, alpha, periods)?;
    Ok(chain_report(
        &q,
        trace.residual,
        &format!(
            "periodic nodes={} components={};",
            u.grid().node_count(),
            u.components()
        ),
    ))
}

/// Seeded sweep of random sign-changing fields through a nodewise check.
pub fn random_field_sweep(
    a: &OperatorMatrix,
    count: usize,
    seed: u64,
    check: impl Fn(&Field, &OperatorMatrix) -> Result<PropertyReport> + Sync,
) -> Result<Vec<PropertyReport>> {
    let n = a.node_count();
    let grid = a.grid().clone();
    (0..count as u64)
        .into_par_iter()
        .map(|idx| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(idx);
            let values: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
            let f = Field::from_values(grid.clone(), 1, values)?;
            check(&f, a)
        })
        .collect()
}
