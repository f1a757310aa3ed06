//! Seeded random generation of toric log pairs and checkers for the
//! structural properties every valid pair must satisfy: semicontinuity,
//! boundedness with its equality case, the nonsingularity criterion,
//! agreement with recomputation on a smooth resolution, and product
//! additivity.
//!
//! A checker failure is a bug in this crate, not a finding about the
//! mathematics; every violation report carries the serialized pair, the
//! cone ids, and the exact values needed to replay it.

use num_traits::{One, Signed, Zero};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::{Fan, Validation};
use crate::files::PairFile;
use crate::lattice::{Int, LatticeVector, Rational};
use crate::logpair::ToricLogPair;

/// SplitMix64: the fixed pseudo-random generator used for all seeded
/// generation in this crate. Tiny, splittable by reseeding, and
/// bit-for-bit reproducible on every platform.
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..bound` (bound > 0).
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }

    /// Uniform value in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

/// How boundary coefficients are chosen during generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoefficientMode {
    /// b_i = 0 everywhere (every a_i = 1).
    ZeroBoundary,
    /// b_i uniform among p/q with denominator q <= 12 in [0, 1].
    RandomRationals,
    /// b_i = 1 everywhere (every a_i = 0).
    AllOnes,
}

/// Parameters of the seeded generator.
#[derive(Clone, Debug)]
pub struct GenConfig {
    /// Ambient lattice rank, 2..=5.
    pub rank: usize,
    /// Size of the primitive ray pool per instance.
    pub max_rays: usize,
    pub coefficient_mode: CoefficientMode,
    pub seed: u64,
    /// Number of pairs to generate.
    pub count: usize,
}

/// Ray coordinates are drawn from [-MAX_COORD, MAX_COORD].
const MAX_COORD: i64 = 3;
/// Simplicial cells with index above this are rejected: box enumeration
/// cost is proportional to the index.
const INDEX_CAP: u64 = 500;
/// Generation attempts per requested instance before giving up.
const RETRY_BUDGET: usize = 200;

impl GenConfig {
    pub fn new(rank: usize, seed: u64, count: usize) -> GenConfig {
        GenConfig {
            rank,
            max_rays: 8,
            coefficient_mode: CoefficientMode::RandomRationals,
            seed,
            count,
        }
    }
}

/// One checker violation, with everything needed to replay it.
#[derive(Clone, Debug)]
pub struct Violation {
    /// Canonical serialization of the offending pair.
    pub pair: String,
    /// Ids of the cones involved.
    pub cones: Vec<usize>,
    /// Exact values, formatted.
    pub values: Vec<String>,
    pub note: String,
}

/// Outcome of one property over one or more pairs.
#[derive(Clone, Debug)]
pub struct PropertyResult {
    pub property: String,
    /// Number of individual assertions checked.
    pub instances: usize,
    pub violations: Vec<Violation>,
}

impl PropertyResult {
    fn new(property: &str) -> PropertyResult {
        PropertyResult {
            property: property.to_string(),
            instances: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn merge(&mut self, other: PropertyResult) {
        assert_eq!(self.property, other.property);
        self.instances += other.instances;
        self.violations.extend(other.violations);
    }
}

fn violation(pair: &ToricLogPair, cones: &[usize], values: &[Rational], note: String) -> Violation {
    Violation {
        pair: PairFile::from_pair("violation", pair).serialize(),
        cones: cones.to_vec(),
        values: values.iter().map(|v| v.to_string()).collect(),
        note,
    }
}

/// Deterministic stream of valid pairs: random primitive rays with small
/// coordinates, greedy assembly of pairwise-compatible cones, coefficients
/// by mode. Invalid candidates are discarded; [`Error::GenerationExhausted`]
/// is returned if the retry budget runs out.
pub fn gen_pairs(cfg: &GenConfig) -> Result<Vec<ToricLogPair>> {
    let mut rng = SplitMix64::new(cfg.seed);
    let mut out = Vec::with_capacity(cfg.count);
    for _ in 0..cfg.count {
        let mut produced = None;
        for _ in 0..RETRY_BUDGET {
            if let Some(pair) = try_generate(cfg, &mut rng) {
                produced = Some(pair);
                break;
            }
        }
        match produced {
            Some(pair) => out.push(pair),
            None => return Err(Error::GenerationExhausted),
        }
    }
    Ok(out)
}

fn random_primitive_ray(cfg: &GenConfig, rng: &mut SplitMix64) -> Option<LatticeVector> {
    for _ in 0..50 {
        let v = LatticeVector::from_i64(
            &(0..cfg.rank)
                .map(|_| rng.range_i64(-MAX_COORD, MAX_COORD))
                .collect::<Vec<_>>(),
        );
        if let Ok(p) = v.primitive() {
            return Some(p);
        }
    }
    None
}

fn cells_within_index_cap(cone: &Cone) -> bool {
    cone.triangulate().iter().all(|cell| {
        cell.index()
            .map(|i| i <= Int::from(INDEX_CAP))
            .unwrap_or(false)
    })
}

fn try_generate(cfg: &GenConfig, rng: &mut SplitMix64) -> Option<ToricLogPair> {
    if cfg.max_rays == 0 || cfg.rank == 0 {
        return None;
    }
    // Ray pool.
    let mut pool: Vec<LatticeVector> = Vec::new();
    let mut misses = 0;
    while pool.len() < cfg.max_rays {
        let r = random_primitive_ray(cfg, rng)?;
        if pool.contains(&r) {
            misses += 1;
            if misses > 50 * cfg.max_rays {
                break; // pool saturated the coordinate box
            }
        } else {
            pool.push(r);
        }
    }
    if pool.is_empty() {
        return None;
    }

    // Greedy compatible cone assembly.
    let want = 1 + rng.below(3) as usize;
    let mut accepted: Vec<Cone> = Vec::new();
    'attempts: for _ in 0..40 {
        if accepted.len() >= want {
            break;
        }
        let size = match rng.below(6) {
            0 => cfg.rank + 1,
            1 => cfg.rank.saturating_sub(1).max(1),
            _ => cfg.rank,
        }
        .min(pool.len());
        let mut picks: Vec<usize> = Vec::new();
        while picks.len() < size {
            let i = rng.below(pool.len() as u64) as usize;
            if !picks.contains(&i) {
                picks.push(i);
            }
        }
        let gens: Vec<LatticeVector> = picks.iter().map(|&i| pool[i].clone()).collect();
        let Ok(candidate) = Cone::new(cfg.rank, &gens) else {
            continue;
        };
        if candidate.dim() == 0 || !cells_within_index_cap(&candidate) {
            continue;
        }
        for prev in &accepted {
            let comparable = candidate.rays().iter().all(|r| prev.contains(r))
                || prev.rays().iter().all(|r| candidate.contains(r));
            if comparable {
                continue 'attempts;
            }
            if crate::fan::check_common_face(prev, &candidate).is_err() {
                continue 'attempts;
            }
        }
        accepted.push(candidate);
    }
    if accepted.is_empty() {
        return None;
    }

    let fan = Fan::from_cones(cfg.rank, accepted, Validation::Skip).ok()?;
    let boundary: Vec<Rational> = fan
        .rays()
        .iter()
        .map(|_| match cfg.coefficient_mode {
            CoefficientMode::ZeroBoundary => Rational::zero(),
            CoefficientMode::AllOnes => Rational::one(),
            CoefficientMode::RandomRationals => {
                let q = rng.range_i64(1, 12);
                let p = rng.range_i64(0, q);
                Rational::new(Int::from(p), Int::from(q))
            }
        })
        .collect();
    ToricLogPair::new(fan, boundary).ok()
}

/// Lower semicontinuity: a_σ + codim σ <= a_τ + codim τ over all face
/// pairs τ ≺ σ.
pub fn check_lsc(pair: &ToricLogPair) -> PropertyResult {
    let mut result = PropertyResult::new("lsc");
    let report = pair.report();
    let cones = pair.fan().cones();
    for (sid, sigma) in cones.iter().enumerate() {
        for (tid, tau) in cones.iter().enumerate() {
            if !tau.rays().iter().all(|r| sigma.rays().contains(r)) {
                continue;
            }
            result.instances += 1;
            if report.closed_point[sid] > report.closed_point[tid] {
                result.violations.push(violation(
                    pair,
                    &[sid, tid],
                    &[
                        report.closed_point[sid].clone(),
                        report.closed_point[tid].clone(),
                    ],
                    "a_sigma + codim sigma > a_tau + codim tau".into(),
                ));
            }
        }
    }
    result
}

/// Boundedness 0 <= a_σ <= dim σ, together with the equality
/// characterization: the upper bound is attained exactly on smooth cones
/// all of whose ray discrepancies equal 1. (On a singular cone the bound
/// is strict even when every a_i = 1: the A1 cone with zero boundary has
/// a_σ = 1 < 2.)
pub fn check_bound(pair: &ToricLogPair) -> PropertyResult {
    let mut result = PropertyResult::new("bound");
    for (id, cone) in pair.fan().cones().iter().enumerate() {
        result.instances += 1;
        let a = pair.mld_orbit_by_id(id).expect("valid id").value;
        let dim = Rational::from_integer((cone.dim() as i64).into());
        if a.is_negative() || a > dim {
            result.violations.push(violation(
                pair,
                &[id],
                &[a.clone(), dim.clone()],
                "a_sigma outside [0, dim sigma]".into(),
            ));
            continue;
        }
        let all_ones = cone.rays().iter().all(|r| {
            let i = pair.fan().ray_index(r).expect("fan ray");
            pair.log_discrepancies()[i].is_one()
        });
        if (a == dim) != (all_ones && cone.is_smooth()) {
            result.violations.push(violation(
                pair,
                &[id],
                &[a, dim],
                "a_sigma = dim sigma must hold exactly on smooth all-ones cones".into(),
            ));
        }
    }
    result
}

/// Nonsingularity criterion: a_σ > dim σ - 1 forces σ smooth; equivalently
/// no singular cone exceeds dim σ - 1.
pub fn check_nonsingularity_criterion(pair: &ToricLogPair) -> PropertyResult {
    let mut result = PropertyResult::new("nonsingularity");
    for (id, cone) in pair.fan().cones().iter().enumerate() {
        result.instances += 1;
        let a = pair.mld_orbit_by_id(id).expect("valid id").value;
        let threshold = Rational::from_integer((cone.dim() as i64 - 1).into());
        if a > threshold && !cone.is_smooth() {
            result.violations.push(violation(
                pair,
                &[id],
                &[a, threshold],
                "a_sigma > dim sigma - 1 on a singular cone".into(),
            ));
        }
    }
    result
}

/// Resolution oracle: a_σ recomputed on a smooth subdivision, as the
/// minimum over interior cells of the sum of ray discrepancies, equals the
/// direct enumeration value. This is the independent route through the
/// divisorial description of the mld.
pub fn check_resolution_oracle(pair: &ToricLogPair) -> PropertyResult {
    let mut result = PropertyResult::new("resolution");
    let sub = pair
        .fan()
        .resolve()
        .expect("toric resolution always succeeds");
    let target = &sub.target;
    // Discrepancy of each target ray, read off a source cone containing it.
    let ray_value: Vec<Rational> = target
        .rays()
        .iter()
        .map(|v| {
            pair.divisor_discrepancy(v)
                .expect("target ray lies in the source support")
        })
        .collect();

    for (sid, sigma) in pair.fan().cones().iter().enumerate() {
        if sigma.is_zero_cone() {
            continue;
        }
        result.instances += 1;
        let direct = pair.mld_orbit_by_id(sid).expect("valid id").value;
        let mut best: Option<Rational> = None;
        for cell in target.cones() {
            if cell.is_zero_cone() || !sigma.relint_contains(&cell.relint_sample()) {
                continue;
            }
            debug_assert!(cell.is_smooth());
            let sum: Rational = cell
                .rays()
                .iter()
                .map(|r| ray_value[target.ray_index(r).expect("target ray")].clone())
                .sum();
            if best.as_ref().is_none_or(|b| sum < *b) {
                best = Some(sum);
            }
        }
        let recomputed = best.expect("some target cell is interior to sigma");
        if recomputed != direct {
            result.violations.push(violation(
                pair,
                &[sid],
                &[direct, recomputed],
                "smooth-resolution recomputation disagrees with enumeration".into(),
            ));
        }
    }
    result
}

/// Product additivity: a_{σ×τ} = a_σ + a_τ for all cone pairs.
pub fn check_product(p: &ToricLogPair, q: &ToricLogPair) -> PropertyResult {
    let mut result = PropertyResult::new("product");
    let product = product_pair(p, q);
    let p_rank = p.fan().rank();
    for (pid, pc) in p.fan().cones().iter().enumerate() {
        for (qid, qc) in q.fan().cones().iter().enumerate() {
            result.instances += 1;
            let mut gens: Vec<LatticeVector> = pc
                .rays()
                .iter()
                .map(|r| pad(r, p_rank + q.fan().rank(), 0))
                .collect();
            gens.extend(
                qc.rays()
                    .iter()
                    .map(|r| pad(r, p_rank + q.fan().rank(), p_rank)),
            );
            let cone = Cone::new(p_rank + q.fan().rank(), &gens).expect("product cone");
            let combined = product
                .mld_orbit(&cone)
                .expect("product cone is in the product fan")
                .value;
            let expected = p.mld_orbit_by_id(pid).expect("valid").value
                + q.mld_orbit_by_id(qid).expect("valid").value;
            if combined != expected {
                result.violations.push(violation(
                    &product,
                    &[product.fan().cone_id(&cone).expect("present")],
                    &[combined, expected],
                    "orbit mld is not additive on the product".into(),
                ));
            }
        }
    }
    result
}

fn pad(v: &LatticeVector, rank: usize, offset: usize) -> LatticeVector {
    let mut coords = vec![Int::zero(); rank];
    for (i, c) in v.coords().iter().enumerate() {
        coords[offset + i] = c.clone();
    }
    LatticeVector::new(coords)
}

/// The product of two pairs: product fan, coefficients carried over from
/// the factors.
pub fn product_pair(p: &ToricLogPair, q: &ToricLogPair) -> ToricLogPair {
    let fan = p.fan().product(q.fan());
    let p_rank = p.fan().rank();
    let boundary: Vec<Rational> = fan
        .rays()
        .iter()
        .map(|r| {
            let left = LatticeVector::new(r.coords()[..p_rank].to_vec());
            let right = LatticeVector::new(r.coords()[p_rank..].to_vec());
            if right.is_zero() {
                let i = p.fan().ray_index(&left).expect("left factor ray");
                p.boundary()[i].clone()
            } else {
                let i = q.fan().ray_index(&right).expect("right factor ray");
                q.boundary()[i].clone()
            }
        })
        .collect();
    ToricLogPair::new(fan, boundary).expect("product of valid pairs is valid")
}
