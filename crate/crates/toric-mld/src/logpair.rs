//! Toric log pairs: per-cone Cartier data, orbit and closed-point minimal
//! log discrepancies with witnesses, the mld spectrum and stratification,
//! and the singularity classification.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::fan::Fan;
use crate::lattice::{solve_rational, IntMatrix, LatticeVector, LinearForm, Rational};

/// A fan with boundary coefficients b_i ∈ [0, 1] on its rays. The log
/// discrepancies a_i = 1 - b_i and the per-cone linear forms φ with
/// φ(v_i) = a_i are derived at construction; their existence on every
/// maximal cone is exactly the R-Cartier condition for K+B.
#[derive(Debug)]
pub struct ToricLogPair {
    fan: Fan,
    boundary: Vec<Rational>,
    log_disc: Vec<Rational>,
    /// One form per maximal cone, aligned with `fan.maximal_ids()`.
    cartier: Vec<LinearForm>,
    /// Per-cone orbit mlds, filled on first use; the pair stays logically
    /// immutable.
    orbit_cache: OnceLock<Vec<OrbitMld>>,
}

impl Clone for ToricLogPair {
    fn clone(&self) -> Self {
        ToricLogPair {
            fan: self.fan.clone(),
            boundary: self.boundary.clone(),
            log_disc: self.log_disc.clone(),
            cartier: self.cartier.clone(),
            orbit_cache: self.orbit_cache.clone(),
        }
    }
}

/// The mld value of one cone together with a lattice point attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitMld {
    pub value: Rational,
    pub witness: LatticeVector,
}

/// Everything the mld map knows about a pair: per-cone orbit and
/// closed-point values, witnesses, the (finite) spectrum, and the strata.
#[derive(Clone, Debug)]
pub struct MldReport {
    /// Indexed by cone id.
    pub orbit: Vec<OrbitMld>,
    /// a_σ + codim σ per cone id: the mld at every closed point of orb(σ).
    pub closed_point: Vec<Rational>,
    /// Sorted distinct closed-point values.
    pub spectrum: Vec<Rational>,
    /// For each spectrum value, the ids of the cones in that stratum.
    pub strata: BTreeMap<Rational, Vec<usize>>,
}

/// One singularity flag with the first violating cone when it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flag {
    pub holds: bool,
    pub violator: Option<usize>,
}

impl Flag {
    fn ok() -> Flag {
        Flag {
            holds: true,
            violator: None,
        }
    }

    fn fail(cone: usize) -> Flag {
        Flag {
            holds: false,
            violator: Some(cone),
        }
    }
}

/// Threshold flags of the pair: log canonical / klt over all proper cones,
/// canonical / terminal over cones of dimension at least two.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub log_canonical: Flag,
    pub klt: Flag,
    pub canonical: Flag,
    pub terminal: Flag,
}

impl ToricLogPair {
    /// Builds the pair from a fan and one boundary coefficient per ray
    /// (aligned with `fan.rays()`).
    ///
    /// Errors: [`Error::BoundaryLength`], [`Error::CoefficientOutOfRange`],
    /// and [`Error::NotRCartier`] when some maximal cone admits no linear
    /// form matching the ray discrepancies (only possible for
    /// non-simplicial cones).
    pub fn new(fan: Fan, boundary: Vec<Rational>) -> Result<ToricLogPair> {
        if boundary.len() != fan.rays().len() {
            return Err(Error::BoundaryLength {
                expected: fan.rays().len(),
                got: boundary.len(),
            });
        }
        for (i, b) in boundary.iter().enumerate() {
            if b.is_negative() || *b > Rational::one() {
                return Err(Error::CoefficientOutOfRange { ray: i });
            }
        }
        let log_disc: Vec<Rational> = boundary.iter().map(|b| Rational::one() - b).collect();

        let mut cartier = Vec::with_capacity(fan.maximal_ids().len());
        for &mid in fan.maximal_ids() {
            let cone = &fan.cones()[mid];
            let rays = cone.rays();
            let matrix = if rays.is_empty() {
                IntMatrix::zero(0, fan.rank())
            } else {
                IntMatrix::from_rows(rays)
            };
            let rhs: Vec<Rational> = rays
                .iter()
                .map(|r| {
                    let idx = fan.ray_index(r).expect("cone ray is a fan ray");
                    log_disc[idx].clone()
                })
                .collect();
            match solve_rational(&matrix, &rhs) {
                Some(coords) => cartier.push(LinearForm::new(coords)),
                None => return Err(Error::NotRCartier { cone: mid }),
            }
        }

        Ok(ToricLogPair {
            fan,
            boundary,
            log_disc,
            cartier,
            orbit_cache: OnceLock::new(),
        })
    }

    /// Zero-boundary pair (B = 0, every a_i = 1).
    pub fn boundary_free(fan: Fan) -> Result<ToricLogPair> {
        let b = vec![Rational::zero(); fan.rays().len()];
        ToricLogPair::new(fan, b)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    /// Boundary coefficient b_i per ray index.
    pub fn boundary(&self) -> &[Rational] {
        &self.boundary
    }

    /// Log discrepancy a_i = 1 - b_i per ray index.
    pub fn log_discrepancies(&self) -> &[Rational] {
        &self.log_disc
    }

    /// The Cartier form of the maximal cone with the given id.
    pub fn cartier_form_of_maximal(&self, maximal_id: usize) -> Option<&LinearForm> {
        self.fan
            .maximal_ids()
            .iter()
            .position(|&m| m == maximal_id)
            .map(|pos| &self.cartier[pos])
    }

    /// A linear form valid on the given cone: the form of the first maximal
    /// cone containing it. Values on the cone do not depend on the choice.
    pub fn cartier_form(&self, cone_id: usize) -> &LinearForm {
        let cone = &self.fan.cones()[cone_id];
        for (pos, &mid) in self.fan.maximal_ids().iter().enumerate() {
            let max = &self.fan.cones()[mid];
            if cone.rays().iter().all(|r| max.contains(r)) {
                return &self.cartier[pos];
            }
        }
        unreachable!("every cone lies in a maximal cone")
    }

    /// The log discrepancy of the divisor attached to a primitive vector of
    /// the support: φ(v) for any cone containing v.
    pub fn divisor_discrepancy(&self, v: &LatticeVector) -> Option<Rational> {
        for (pos, &mid) in self.fan.maximal_ids().iter().enumerate() {
            if self.fan.cones()[mid].contains(v) {
                return Some(self.cartier[pos].eval(v));
            }
        }
        None
    }

    /// The minimal log discrepancy at the generic point of orb(σ), together
    /// with a minimizing lattice point of relint(σ).
    ///
    /// The minimum of φ over relint(σ) ∩ N is located by triangulating σ,
    /// walking every face of the triangulation whose relative interior lies
    /// in relint(σ), and reading candidates off the box points of each such
    /// face: w plus the rays of the face with vanishing barycentric
    /// coordinate at w. Ties go to the lexicographically smallest witness.
    pub fn mld_orbit(&self, cone: &Cone) -> Result<OrbitMld> {
        let id = self.fan.cone_id(cone).ok_or(Error::ConeNotInFan)?;
        self.mld_orbit_by_id(id)
    }

    pub fn mld_orbit_by_id(&self, cone_id: usize) -> Result<OrbitMld> {
        if cone_id >= self.fan.cones().len() {
            return Err(Error::ConeNotInFan);
        }
        let cache = self.orbit_cache.get_or_init(|| {
            (0..self.fan.cones().len())
                .map(|id| self.compute_orbit(id))
                .collect()
        });
        Ok(cache[cone_id].clone())
    }

    fn compute_orbit(&self, cone_id: usize) -> OrbitMld {
        let cone = &self.fan.cones()[cone_id];
        if cone.is_zero_cone() {
            return OrbitMld {
                value: Rational::zero(),
                witness: LatticeVector::zero(self.fan.rank()),
            };
        }
        let phi = self.cartier_form(cone_id);

        let mut faces: BTreeSet<Vec<LatticeVector>> = BTreeSet::new();
        for cell in cone.triangulate() {
            for face in cell.faces() {
                if face.dim() == 0 {
                    continue;
                }
                faces.insert(face.rays().to_vec());
            }
        }

        let mut best: Option<OrbitMld> = None;
        for rays in &faces {
            let face = Cone::new(cone.rank(), rays).expect("triangulation face is pointed");
            if !cone.relint_contains(&face.relint_sample()) {
                continue;
            }
            for (w, t) in face.box_points_with_coords().expect("face is simplicial") {
                let mut candidate = w;
                for (i, ti) in t.iter().enumerate() {
                    if ti.is_zero() {
                        candidate = candidate.add(&face.rays()[i]);
                    }
                }
                debug_assert!(cone.relint_contains(&candidate));
                let value = phi.eval(&candidate);
                let better = match &best {
                    None => true,
                    Some(cur) => {
                        value < cur.value || (value == cur.value && candidate < cur.witness)
                    }
                };
                if better {
                    best = Some(OrbitMld {
                        value,
                        witness: candidate,
                    });
                }
            }
        }
        let mut best = best.expect("a positive-dimensional cone has interior candidates");
        // A minimizer with positive value is already primitive (its primitive
        // generator would be strictly smaller); with value zero the primitive
        // generator is also a minimizer. Normalizing keeps the witness usable
        // as a stellar subdivision center verbatim.
        best.witness = best.witness.primitive().expect("witness is nonzero");
        debug_assert_eq!(phi.eval(&best.witness), best.value);
        best
    }

    /// a(x; B) for every closed point x of orb(σ): the orbit mld plus the
    /// codimension of the orbit.
    pub fn mld_closed_point(&self, cone: &Cone) -> Result<Rational> {
        let id = self.fan.cone_id(cone).ok_or(Error::ConeNotInFan)?;
        self.mld_closed_point_by_id(id)
    }

    pub fn mld_closed_point_by_id(&self, cone_id: usize) -> Result<Rational> {
        let cone = self.fan.cones().get(cone_id).ok_or(Error::ConeNotInFan)?;
        let orbit = self.mld_orbit_by_id(cone_id)?;
        let codim = self.fan.rank() - cone.dim();
        Ok(orbit.value + Rational::from_integer(codim.into()))
    }

    /// Computes the full report: orbit and closed-point values for every
    /// cone, the spectrum, and the stratification.
    pub fn report(&self) -> MldReport {
        let mut orbit = Vec::with_capacity(self.fan.cones().len());
        let mut closed_point = Vec::with_capacity(self.fan.cones().len());
        for (id, cone) in self.fan.cones().iter().enumerate() {
            let o = self.mld_orbit_by_id(id).expect("cone id is valid");
            let codim = self.fan.rank() - cone.dim();
            closed_point.push(&o.value + Rational::from_integer(codim.into()));
            orbit.push(o);
        }
        let mut strata: BTreeMap<Rational, Vec<usize>> = BTreeMap::new();
        for (id, value) in closed_point.iter().enumerate() {
            strata.entry(value.clone()).or_default().push(id);
        }
        let spectrum: Vec<Rational> = strata.keys().cloned().collect();
        MldReport {
            orbit,
            closed_point,
            spectrum,
            strata,
        }
    }

    /// Threshold classification. Log canonical and klt look at all proper
    /// cones; canonical and terminal at cones of dimension at least two.
    /// The first violating cone in canonical order is recorded per flag.
    pub fn classify(&self) -> Classification {
        let mut log_canonical = Flag::ok();
        let mut klt = Flag::ok();
        let mut canonical = Flag::ok();
        let mut terminal = Flag::ok();
        for (id, cone) in self.fan.cones().iter().enumerate() {
            if cone.is_zero_cone() {
                continue;
            }
            let a = self.mld_orbit_by_id(id).expect("valid id").value;
            if log_canonical.holds && a.is_negative() {
                log_canonical = Flag::fail(id);
            }
            if klt.holds && !a.is_positive() {
                klt = Flag::fail(id);
            }
            if cone.dim() >= 2 {
                if canonical.holds && a < Rational::one() {
                    canonical = Flag::fail(id);
                }
                if terminal.holds && a <= Rational::one() {
                    terminal = Flag::fail(id);
                }
            }
        }
        Classification {
            log_canonical,
            klt,
            canonical,
            terminal,
        }
    }

    /// Sum of the ray discrepancies of a smooth cone: the closed form the
    /// enumeration must agree with on smooth cones.
    pub fn smooth_cone_sum(&self, cone: &Cone) -> Option<Rational> {
        if !cone.is_smooth() {
            return None;
        }
        let mut acc = Rational::zero();
        for r in cone.rays() {
            acc += self.log_disc[self.fan.ray_index(r)?].clone();
        }
        Some(acc)
    }
}
