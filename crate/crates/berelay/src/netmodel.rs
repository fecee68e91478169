//! Deployment geometry, propagation model and direct-path rates.
//!
//! Units are fixed crate-wide: bandwidth in MHz, power in mW, link gains in
//! MHz/mW and rates in Mbps, so that `gain * power / bandwidth` is
//! dimensionless inside the rate formula.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use crate::error::{Error, Result};

/// Nodes are numbered `1..=N`; index `0` is the access point.
pub type NodeId = usize;

/// Minimum distance kept between any two nodes, and between a node and the
/// access point. The power-law gain model diverges as distance goes to zero.
pub const MIN_NODE_SEPARATION_M: f64 = 1.0;

/// Default path-loss exponent.
pub const DEFAULT_PATHLOSS_EXP: f64 = 3.0;

/// A position in the plane, in meters. The access point sits at the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Distance to the access point at the origin.
    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Per-node state after deployment and initial allocation.
#[derive(Debug, Clone)]
pub struct NodeState {
    /// Node id in `1..=N`.
    pub id: NodeId,
    pub position: Point,
    /// Initially allotted bandwidth, MHz.
    pub w_in: f64,
    /// Maximum transmit power, mW.
    pub p_max: f64,
    /// Link gain to the access point, MHz/mW.
    pub rho_ap: f64,
    /// Initial direct rate, Mbps; always equals
    /// `direct_rate(w_in, p_max, rho_ap)`.
    pub r_in: f64,
}

impl NodeState {
    pub fn new(id: NodeId, position: Point, w_in: f64, p_max: f64, rho_ap: f64) -> Result<Self> {
        if w_in < 0.0 || p_max <= 0.0 || rho_ap < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "node {id}: need w_in >= 0, p_max > 0, rho_ap >= 0 \
                 (got {w_in}, {p_max}, {rho_ap})"
            )));
        }
        let r_in = direct_rate(w_in, p_max, rho_ap);
        Ok(NodeState {
            id,
            position,
            w_in,
            p_max,
            rho_ap,
            r_in,
        })
    }
}

/// One realization of every link gain in the network: the symmetric
/// node-to-node matrix and the node-to-AP vector, both in MHz/mW.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    n: usize,
    /// Row-major n x n, diagonal zero and unused.
    gains: Vec<f64>,
    ap_gains: Vec<f64>,
}

impl ChannelRealization {
    /// Mean (deterministic) gains from geometry: `k * d^-exponent` for every
    /// node pair and node-AP link.
    pub fn deterministic(positions: &[Point], k: f64, exponent: f64) -> Result<Self> {
        let n = positions.len();
        let mut gains = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let g = mean_gain(positions[i].distance(&positions[j]), k, exponent)?;
                gains[i * n + j] = g;
                gains[j * n + i] = g;
            }
        }
        let ap_gains = positions
            .iter()
            .map(|p| mean_gain(p.norm(), k, exponent))
            .collect::<Result<Vec<_>>>()?;
        Ok(ChannelRealization { n, gains, ap_gains })
    }

    /// Build directly from a symmetric matrix and an AP-gain vector.
    pub fn from_parts(gains: Vec<Vec<f64>>, ap_gains: Vec<f64>) -> Result<Self> {
        let n = ap_gains.len();
        if gains.len() != n || gains.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidArgument(format!(
                "gain matrix must be {n} x {n} to match {n} AP gains"
            )));
        }
        let mut flat = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let g = gains[i][j];
                if g < 0.0 || (gains[j][i] - g).abs() > 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "gains must be nonnegative and symmetric (entry {i},{j})"
                    )));
                }
                if i != j {
                    flat[i * n + j] = g;
                }
            }
        }
        if ap_gains.iter().any(|&g| g < 0.0) {
            return Err(Error::InvalidArgument("AP gains must be nonnegative".into()));
        }
        Ok(ChannelRealization {
            n,
            gains: flat,
            ap_gains,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Inter-node gain `rho_ij` for node ids in `1..=N`.
    pub fn gain(&self, i: NodeId, j: NodeId) -> f64 {
        debug_assert!(i != j, "diagonal of the gain matrix is unused");
        self.gains[(i - 1) * self.n + (j - 1)]
    }

    /// Node-to-AP gain `rho_i0` for a node id in `1..=N`.
    pub fn ap_gain(&self, i: NodeId) -> f64 {
        self.ap_gains[i - 1]
    }
}

/// A cell deployment: AP at the origin, nodes inside the given radius.
#[derive(Debug, Clone)]
pub struct Deployment {
    pub cell_radius_m: f64,
    pub nodes: Vec<NodeState>,
}

impl Deployment {
    pub fn new(cell_radius_m: f64, nodes: Vec<NodeState>) -> Result<Self> {
        for node in &nodes {
            if node.position.norm() > cell_radius_m * (1.0 + 1e-12) {
                return Err(Error::InvalidArgument(format!(
                    "node {} lies outside the {cell_radius_m} m cell",
                    node.id
                )));
            }
        }
        Ok(Deployment {
            cell_radius_m,
            nodes,
        })
    }

    pub fn positions(&self) -> Vec<Point> {
        self.nodes.iter().map(|n| n.position).collect()
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.nodes.iter().map(|n| n.id).collect()
    }
}

/// Convert dBm to mW: `10^(dbm/10)`.
pub fn dbm_to_mw(p_dbm: f64) -> f64 {
    10f64.powf(p_dbm / 10.0)
}

/// Place `n` nodes area-uniformly on the disk of the given radius.
///
/// Placements closer than [`MIN_NODE_SEPARATION_M`] to an earlier node or to
/// the origin are resampled, so power-law gains stay bounded.
pub fn place_nodes<R: Rng + ?Sized>(n: usize, radius_m: f64, rng: &mut R) -> Vec<Point> {
    let mut points: Vec<Point> = Vec::with_capacity(n);
    for _ in 0..n {
        let mut point = sample_disk(radius_m, rng);
        let mut attempts = 0;
        while too_close(&point, &points) && attempts < 10_000 {
            point = sample_disk(radius_m, rng);
            attempts += 1;
        }
        points.push(point);
    }
    points
}

fn sample_disk<R: Rng + ?Sized>(radius_m: f64, rng: &mut R) -> Point {
    // radius * sqrt(u) makes the density uniform in area.
    let r = radius_m * rng.random::<f64>().sqrt();
    let theta = 2.0 * std::f64::consts::PI * rng.random::<f64>();
    Point::new(r * theta.cos(), r * theta.sin())
}

fn too_close(point: &Point, existing: &[Point]) -> bool {
    if point.norm() < MIN_NODE_SEPARATION_M {
        return true;
    }
    existing
        .iter()
        .any(|p| p.distance(point) < MIN_NODE_SEPARATION_M)
}

/// Mean power-law gain `k * d^-exponent` in MHz/mW.
pub fn mean_gain(d_m: f64, k: f64, exponent: f64) -> Result<f64> {
    if d_m <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "distance must be positive, got {d_m} m (co-located nodes?)"
        )));
    }
    if k <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "gain constant must be positive, got {k}"
        )));
    }
    Ok(k * d_m.powf(-exponent))
}

/// Draw one Rayleigh-fading realization: every link gain is exponentially
/// distributed with the corresponding mean gain. Only the `i < j` entries of
/// the inter-node matrix are drawn; the matrix is mirrored, keeping the
/// channel reciprocal. A zero mean yields a zero gain.
pub fn sample_rayleigh_gains<R: Rng + ?Sized>(
    means: &ChannelRealization,
    rng: &mut R,
) -> ChannelRealization {
    let n = means.n;
    let mut gains = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let e: f64 = Exp1.sample(rng);
            let g = means.gains[i * n + j] * e;
            gains[i * n + j] = g;
            gains[j * n + i] = g;
        }
    }
    let ap_gains = means
        .ap_gains
        .iter()
        .map(|&m| {
            let e: f64 = Exp1.sample(rng);
            m * e
        })
        .collect();
    ChannelRealization { n, gains, ap_gains }
}

/// Shannon rate of a single link: `w * log2(1 + rho * p / w)` Mbps, with the
/// continuous limit 0 at `w = 0`.
///
/// Panics on negative inputs.
pub fn direct_rate(w_mhz: f64, p_mw: f64, rho: f64) -> f64 {
    assert!(
        w_mhz >= 0.0 && p_mw >= 0.0 && rho >= 0.0,
        "direct_rate needs nonnegative inputs (got w={w_mhz}, p={p_mw}, rho={rho})"
    );
    if w_mhz == 0.0 {
        return 0.0;
    }
    w_mhz * (1.0 + rho * p_mw / w_mhz).log2()
}

/// How the total bandwidth is split across nodes before any cooperation.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialAllocation {
    /// `total / N` for everyone.
    Equal,
    /// The maximizer of the summed alpha-fair utility of the direct rates,
    /// subject to the total-bandwidth budget.
    DirectOptimal,
    /// Caller-provided bandwidths, validated against the budget.
    Arbitrary(Vec<f64>),
}

/// Compute per-node initial bandwidths in MHz.
///
/// `ap_gains` are the node-to-AP gains the direct-optimal mode optimizes
/// against; `alpha` is ignored by the other modes.
pub fn initial_allocation(
    ap_gains: &[f64],
    power_mw: f64,
    total_bandwidth_mhz: f64,
    mode: &InitialAllocation,
    alpha: f64,
) -> Result<Vec<f64>> {
    let n = ap_gains.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if total_bandwidth_mhz <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "total bandwidth must be positive, got {total_bandwidth_mhz}"
        )));
    }
    match mode {
        InitialAllocation::Equal => Ok(vec![total_bandwidth_mhz / n as f64; n]),
        InitialAllocation::Arbitrary(list) => {
            if list.len() != n {
                return Err(Error::InvalidArgument(format!(
                    "arbitrary allocation has {} entries for {n} nodes",
                    list.len()
                )));
            }
            if list.iter().any(|&w| w < 0.0) {
                return Err(Error::InvalidArgument(
                    "arbitrary allocation entries must be nonnegative".into(),
                ));
            }
            let sum: f64 = list.iter().sum();
            if sum > total_bandwidth_mhz * (1.0 + 1e-9) {
                return Err(Error::InvalidArgument(format!(
                    "arbitrary allocation sums to {sum} MHz, budget is {total_bandwidth_mhz} MHz"
                )));
            }
            Ok(list.clone())
        }
        InitialAllocation::DirectOptimal => {
            direct_optimal_allocation(ap_gains, power_mw, total_bandwidth_mhz, alpha)
        }
    }
}

/// Water-filling on the shared marginal-utility multiplier: the summed
/// utility is separable and concave in the per-node bandwidths, so at the
/// optimum every node with positive bandwidth has the same marginal utility
/// `U'(R_i(W_i)) * R_i'(W_i)` and the budget is tight. Outer bisection on the
/// multiplier, inner bisection per node.
fn direct_optimal_allocation(
    ap_gains: &[f64],
    power_mw: f64,
    total: f64,
    alpha: f64,
) -> Result<Vec<f64>> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "alpha must be finite and nonnegative, got {alpha}"
        )));
    }
    let snr: Vec<f64> = ap_gains.iter().map(|&g| g * power_mw).collect();
    if snr.iter().all(|&c| c == 0.0) {
        // No node has a usable channel; any split is equally (un)useful.
        return Ok(vec![total / ap_gains.len() as f64; ap_gains.len()]);
    }

    let alloc_for = |lambda: f64| -> Vec<f64> {
        snr.iter()
            .map(|&c| {
                if c == 0.0 {
                    0.0
                } else {
                    bandwidth_at_marginal(c, alpha, lambda, total)
                }
            })
            .collect()
    };
    let sum_for = |lambda: f64| -> f64 { alloc_for(lambda).iter().sum() };

    // Bracket the multiplier: the allocated sum is decreasing in lambda.
    let mut lo = 1.0;
    let mut hi = 1.0;
    for _ in 0..200 {
        if sum_for(lo) > total {
            break;
        }
        lo *= 0.5;
    }
    for _ in 0..200 {
        if sum_for(hi) < total {
            break;
        }
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sum_for(mid) > total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    let mut alloc = alloc_for(lambda);
    // Scale out the residual bisection error so the budget is exactly spent.
    let sum: f64 = alloc.iter().sum();
    if sum > 0.0 {
        let scale = total / sum;
        for w in &mut alloc {
            *w *= scale;
        }
    }
    Ok(alloc)
}

/// Marginal utility of bandwidth for one direct link with `snr = rho * p`:
/// `R(w)^-alpha * R'(w)`, strictly decreasing in `w`.
fn marginal_utility(w: f64, snr: f64, alpha: f64) -> f64 {
    let rate = direct_rate(w, 1.0, snr);
    let x = snr / w;
    let rate_slope = (1.0 + x).log2() - x / ((1.0 + x) * std::f64::consts::LN_2);
    rate.powf(-alpha) * rate_slope
}

fn bandwidth_at_marginal(snr: f64, alpha: f64, lambda: f64, scale: f64) -> f64 {
    // Expand the upper end until the marginal drops below lambda, then bisect.
    let mut hi = scale.max(1e-9);
    for _ in 0..200 {
        if marginal_utility(hi, snr, alpha) < lambda {
            break;
        }
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if marginal_utility(mid, snr, alpha) > lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::utility::alpha_utility;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn dbm_conversions() {
        assert_eq!(dbm_to_mw(20.0), 100.0);
        assert_eq!(dbm_to_mw(0.0), 1.0);
        assert_eq!(dbm_to_mw(10.0), 10.0);
    }

    #[test]
    fn placement_stays_in_cell() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let points = place_nodes(20, 800.0, &mut rng);
        assert_eq!(points.len(), 20);
        for p in &points {
            assert!(p.norm() <= 800.0);
            assert!(p.norm() >= MIN_NODE_SEPARATION_M);
        }
        for i in 0..points.len() {
            for j in (i + 1)..points.len() {
                assert!(points[i].distance(&points[j]) >= MIN_NODE_SEPARATION_M);
            }
        }
    }

    #[test]
    fn placement_degenerate_cases() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        assert!(place_nodes(0, 800.0, &mut rng).is_empty());
        let single = place_nodes(1, 0.0, &mut rng);
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].norm(), 0.0);
    }

    #[test]
    fn placement_mean_distance_matches_disk_sampling() {
        // Area-uniform sampling on a disk of radius R has mean distance 2R/3.
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let points = place_nodes(10_000, 800.0, &mut rng);
        let mean = points.iter().map(|p| p.norm()).sum::<f64>() / points.len() as f64;
        let expect = 2.0 * 800.0 / 3.0;
        assert!(
            (mean - expect).abs() / expect < 0.01,
            "mean {mean}, expected {expect}"
        );
    }

    #[test]
    fn mean_gain_values() {
        let g = mean_gain(150.0, 6e6, 3.0).unwrap();
        assert!((g - 1.77778).abs() < 1e-4, "got {g}");
        let far = mean_gain(800.0, 6e6, 3.0).unwrap();
        assert!((far - 0.0117188).abs() < 1e-6, "got {far}");
        assert_eq!(mean_gain(1.0, 1.0, 3.0).unwrap(), 1.0);
        assert!(mean_gain(0.0, 6e6, 3.0).is_err());
        assert!(mean_gain(-5.0, 6e6, 3.0).is_err());
    }

    #[test]
    fn rayleigh_zero_mean_stays_zero() {
        let means =
            ChannelRealization::from_parts(vec![vec![0.0, 0.0], vec![0.0, 0.0]], vec![0.0, 1.0])
                .unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let real = sample_rayleigh_gains(&means, &mut rng);
        assert_eq!(real.gain(1, 2), 0.0);
        assert_eq!(real.ap_gain(1), 0.0);
        assert!(real.ap_gain(2) > 0.0);
    }

    #[test]
    fn rayleigh_law_of_large_numbers() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let mut sum = 0.0;
        let draws = 1_000_000;
        for _ in 0..draws {
            let e: f64 = Exp1.sample(&mut rng);
            sum += e;
        }
        let mean = sum / draws as f64;
        assert!((0.997..=1.003).contains(&mean), "sample mean {mean}");
    }

    #[test]
    fn rayleigh_deterministic_and_symmetric() {
        let positions = [
            Point::new(100.0, 0.0),
            Point::new(0.0, 250.0),
            Point::new(-300.0, 120.0),
        ];
        let means = ChannelRealization::deterministic(&positions, 6e6, 3.0).unwrap();
        let a = sample_rayleigh_gains(&means, &mut ChaCha12Rng::seed_from_u64(6));
        let b = sample_rayleigh_gains(&means, &mut ChaCha12Rng::seed_from_u64(6));
        assert_eq!(a, b);
        for i in 1..=3 {
            for j in 1..=3 {
                if i != j {
                    assert_eq!(a.gain(i, j), a.gain(j, i));
                }
            }
        }
    }

    #[test]
    fn direct_rate_values() {
        let r = direct_rate(10.0, 100.0, 1.77778);
        assert!((r - 42.31).abs() < 0.01, "got {r}");
        assert_eq!(direct_rate(5.0, 100.0, 0.0), 0.0);
        assert_eq!(direct_rate(0.0, 100.0, 1.0), 0.0);
    }

    #[test]
    fn direct_rate_monotone_and_concave_in_bandwidth() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..300 {
            let w: f64 = rng.random_range(0.01..20.0);
            let p: f64 = rng.random_range(1.0..200.0);
            let rho: f64 = rng.random_range(0.001..5.0);
            let dw: f64 = rng.random_range(0.001..5.0);
            // Nondecreasing in each argument.
            assert!(direct_rate(w + dw, p, rho) >= direct_rate(w, p, rho));
            assert!(direct_rate(w, p + 1.0, rho) >= direct_rate(w, p, rho));
            assert!(direct_rate(w, p, rho + 0.1) >= direct_rate(w, p, rho));
            // Midpoint concavity in w for fixed p * rho > 0.
            let w2: f64 = rng.random_range(0.01..20.0);
            let mid = direct_rate(0.5 * (w + w2), p, rho);
            let chord = 0.5 * (direct_rate(w, p, rho) + direct_rate(w2, p, rho));
            assert!(mid >= chord - 1e-9);
        }
    }

    #[test]
    fn equal_allocation_sums_to_total() {
        let gains = vec![1.0; 20];
        let alloc = initial_allocation(&gains, 100.0, 20.0, &InitialAllocation::Equal, 0.0).unwrap();
        assert!(alloc.iter().all(|&w| w == 1.0));
        assert_eq!(alloc.iter().sum::<f64>(), 20.0);
    }

    #[test]
    fn arbitrary_allocation_validated() {
        let gains = vec![1.0, 1.0];
        let ok = initial_allocation(
            &gains,
            100.0,
            2.0,
            &InitialAllocation::Arbitrary(vec![0.5, 1.5]),
            0.0,
        )
        .unwrap();
        assert_eq!(ok, vec![0.5, 1.5]);
        let over = InitialAllocation::Arbitrary(vec![1.5, 1.5]);
        assert!(initial_allocation(&gains, 100.0, 2.0, &over, 0.0).is_err());
        let neg = InitialAllocation::Arbitrary(vec![-0.1, 1.0]);
        assert!(initial_allocation(&gains, 100.0, 2.0, &neg, 0.0).is_err());
        let short = InitialAllocation::Arbitrary(vec![1.0]);
        assert!(initial_allocation(&gains, 100.0, 2.0, &short, 0.0).is_err());
    }

    #[test]
    fn direct_optimal_symmetric_split() {
        for &alpha in &[0.0, 1.0, 2.0] {
            let alloc = initial_allocation(
                &[0.3, 0.3],
                100.0,
                2.0,
                &InitialAllocation::DirectOptimal,
                alpha,
            )
            .unwrap();
            assert!((alloc[0] - 1.0).abs() < 1e-6, "alpha {alpha}: {alloc:?}");
            assert!((alloc[1] - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn direct_optimal_matches_grid_search() {
        // Two nodes, alpha = 0: compare against a 2000-point scan over W1.
        let gains = [1.0, 0.01];
        let power = 100.0;
        let total = 2.0;
        let alloc =
            initial_allocation(&gains, power, total, &InitialAllocation::DirectOptimal, 0.0)
                .unwrap();
        let mut best_w1 = 0.0;
        let mut best = f64::NEG_INFINITY;
        for i in 0..=2000 {
            let w1 = total * i as f64 / 2000.0;
            let obj = direct_rate(w1, power, gains[0]) + direct_rate(total - w1, power, gains[1]);
            if obj > best {
                best = obj;
                best_w1 = w1;
            }
        }
        assert!(
            (alloc[0] - best_w1).abs() < 1e-3,
            "solver {} vs grid {best_w1}",
            alloc[0]
        );
    }

    #[test]
    fn direct_optimal_beats_equal() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for &alpha in &[0.0, 0.5, 1.0, 2.0] {
            for _ in 0..20 {
                let n = rng.random_range(2..8);
                let gains: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..2.0)).collect();
                let total = n as f64;
                let opt = initial_allocation(
                    &gains,
                    100.0,
                    total,
                    &InitialAllocation::DirectOptimal,
                    alpha,
                )
                .unwrap();
                let utility = |alloc: &[f64]| -> f64 {
                    alloc
                        .iter()
                        .zip(&gains)
                        .map(|(&w, &g)| alpha_utility(direct_rate(w, 100.0, g), alpha))
                        .sum()
                };
                let equal = vec![1.0; n];
                assert!(
                    utility(&opt) >= utility(&equal) - 1e-6,
                    "alpha {alpha}: optimal {} < equal {}",
                    utility(&opt),
                    utility(&equal)
                );
                assert!((opt.iter().sum::<f64>() - total).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn node_state_recomputable_rate() {
        let node = NodeState::new(1, Point::new(150.0, 0.0), 10.0, 100.0, 1.77778).unwrap();
        assert_eq!(node.r_in, direct_rate(node.w_in, node.p_max, node.rho_ap));
        assert!(NodeState::new(1, Point::ORIGIN, -1.0, 100.0, 1.0).is_err());
        assert!(NodeState::new(1, Point::ORIGIN, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn deployment_containment() {
        let inside = NodeState::new(1, Point::new(100.0, 0.0), 1.0, 100.0, 0.5).unwrap();
        let outside = NodeState::new(2, Point::new(900.0, 0.0), 1.0, 100.0, 0.5).unwrap();
        assert!(Deployment::new(800.0, vec![inside.clone()]).is_ok());
        assert!(Deployment::new(800.0, vec![inside, outside]).is_err());
    }
}
