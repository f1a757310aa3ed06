//! Fans: face-closed cone collections with the pairwise common-face
//! property, fan products, stellar subdivision, and smooth resolution.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::cone::{intersect_cones, Cone};
use crate::error::{Error, Result};
use crate::lattice::{Int, LatticeVector, Rational};

/// Whether `Fan::new` runs the quadratic pairwise face-intersection check.
/// Construction-by-theorem sites (products, stellar subdivisions) skip it.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Validation {
    Full,
    Skip,
}

/// A finite, face-closed collection of pointed cones in a fixed lattice,
/// any two of which intersect in a common face.
///
/// Cones are stored in canonical order (dimension, then lexicographic on
/// rays); their position is the cone id used in reports and on the command
/// line. Rays carry their own canonical numbering.
#[derive(Clone, Debug)]
pub struct Fan {
    rank: usize,
    cones: Vec<Cone>,
    maximal: Vec<usize>,
    rays: Vec<LatticeVector>,
}

/// A refinement of one fan by another, with the containment certificate.
#[derive(Debug)]
pub struct Subdivision {
    pub source: Fan,
    pub target: Fan,
    /// For each maximal cone of the target (by id), the id of the smallest
    /// source cone containing it.
    pub containment: BTreeMap<usize, usize>,
}

impl Fan {
    /// Builds a fan from generator lists of its intended maximal cones.
    /// Faces are added automatically. With [`Validation::Full`], every pair
    /// of listed cones is checked to intersect along a common face.
    pub fn new(
        rank: usize,
        maximal_generators: &[Vec<LatticeVector>],
        validation: Validation,
    ) -> Result<Fan> {
        let mut candidates = Vec::new();
        for gens in maximal_generators {
            candidates.push(Cone::new(rank, gens)?);
        }
        Self::from_cones(rank, candidates, validation)
    }

    /// Convenience constructor from integer literals, fully validated.
    pub fn from_i64(rank: usize, maximal: &[&[&[i64]]]) -> Result<Fan> {
        let gens: Vec<Vec<LatticeVector>> = maximal
            .iter()
            .map(|cone| cone.iter().map(|g| LatticeVector::from_i64(g)).collect())
            .collect();
        Fan::new(rank, &gens, Validation::Full)
    }

    pub(crate) fn from_cones(
        rank: usize,
        candidates: Vec<Cone>,
        validation: Validation,
    ) -> Result<Fan> {
        if validation == Validation::Full {
            for (i, a) in candidates.iter().enumerate() {
                for b in candidates.iter().skip(i + 1) {
                    check_common_face(a, b)?;
                }
            }
        }

        // Close under faces, deduplicating by ray set before constructing
        // anything: shared faces are built once.
        let mut all: BTreeMap<Vec<LatticeVector>, Cone> = BTreeMap::new();
        let zero = Cone::new(rank, &[])?;
        all.insert(Vec::new(), zero);
        for c in &candidates {
            for set in c.face_sets() {
                let key: Vec<LatticeVector> = set.iter().map(|&i| c.rays()[i].clone()).collect();
                all.entry(key).or_insert_with(|| {
                    if set.len() == c.rays().len() {
                        c.clone()
                    } else {
                        c.subcone(set)
                    }
                });
            }
        }
        let mut cones: Vec<Cone> = all.into_values().collect();
        cones.sort();

        let ray_sets: Vec<BTreeSet<LatticeVector>> = cones
            .iter()
            .map(|c| c.rays().iter().cloned().collect())
            .collect();
        let maximal: Vec<usize> = (0..cones.len())
            .filter(|&i| !(0..cones.len()).any(|j| j != i && ray_sets[i].is_subset(&ray_sets[j])))
            .collect();

        let rays: Vec<LatticeVector> = cones
            .iter()
            .filter(|c| c.dim() == 1)
            .map(|c| c.rays()[0].clone())
            .collect();

        Ok(Fan {
            rank,
            cones,
            maximal,
            rays,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Every cone of the fan, in canonical order. The position of a cone in
    /// this slice is its id.
    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn maximal_ids(&self) -> &[usize] {
        &self.maximal
    }

    pub fn maximal_cones(&self) -> impl Iterator<Item = &Cone> {
        self.maximal.iter().map(|&i| &self.cones[i])
    }

    /// Primitive generators of the 1-dimensional cones, in canonical
    /// (lexicographic) order; the position is the ray index.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn ray_index(&self, ray: &LatticeVector) -> Option<usize> {
        self.rays.binary_search(ray).ok()
    }

    /// The id of a cone, if it belongs to the fan.
    pub fn cone_id(&self, cone: &Cone) -> Option<usize> {
        self.cones.binary_search(cone).ok()
    }

    /// Ray indices of a cone's generators.
    pub fn cone_ray_indices(&self, id: usize) -> Vec<usize> {
        self.cones[id]
            .rays()
            .iter()
            .map(|r| self.ray_index(r).expect("fan rays include all cone rays"))
            .collect()
    }

    /// True iff some cone contains `v`.
    pub fn supports(&self, v: &LatticeVector) -> bool {
        self.maximal_cones().any(|c| c.contains(v))
    }

    pub fn is_smooth(&self) -> bool {
        self.maximal_cones().all(Cone::is_smooth)
    }

    pub fn is_simplicial(&self) -> bool {
        self.maximal_cones().all(Cone::is_simplicial)
    }

    /// Runs the full pairwise validation, regardless of how the fan was
    /// constructed.
    pub fn validate(&self) -> Result<()> {
        for (i, a) in self.cones.iter().enumerate() {
            for b in self.cones.iter().skip(i + 1) {
                check_common_face(a, b)?;
            }
        }
        Ok(())
    }

    /// The product fan: cones are products of cones, rays are the rays of
    /// either factor padded with zeros.
    pub fn product(&self, other: &Fan) -> Fan {
        let rank = self.rank + other.rank;
        let pad_left = |v: &LatticeVector| -> LatticeVector {
            let mut coords = v.coords().to_vec();
            coords.extend(std::iter::repeat_n(Int::zero(), other.rank));
            LatticeVector::new(coords)
        };
        let pad_right = |v: &LatticeVector| -> LatticeVector {
            let mut coords = vec![Int::zero(); self.rank];
            coords.extend(v.coords().iter().cloned());
            LatticeVector::new(coords)
        };
        let mut maximal = Vec::new();
        for a in self.maximal_cones() {
            for b in other.maximal_cones() {
                let mut gens: Vec<LatticeVector> = a.rays().iter().map(&pad_left).collect();
                gens.extend(b.rays().iter().map(&pad_right));
                maximal.push(gens);
            }
        }
        Fan::new(rank, &maximal, Validation::Skip).expect("product of fans is a fan")
    }

    /// Stellar subdivision at `v`: every cone containing `v` is replaced by
    /// the joins of `v` with its maximal faces not containing `v`. For a
    /// simplicial fan and `v` an existing ray this is the identity.
    ///
    /// Errors with [`Error::NotInSupport`] if `v` is outside the fan.
    pub fn stellar_subdivide(&self, v: &LatticeVector) -> Result<Subdivision> {
        let target = self.stellar_target(v)?;
        let containment = containment_map(self, &target);
        Ok(Subdivision {
            source: self.clone(),
            target,
            containment,
        })
    }

    /// The subdivided fan alone; iterated callers build the containment
    /// certificate once at the end instead of per step.
    fn stellar_target(&self, v: &LatticeVector) -> Result<Fan> {
        let center = v.primitive()?;
        if !self.supports(&center) {
            return Err(Error::NotInSupport);
        }
        let mut new_maximal: Vec<Cone> = Vec::new();
        let mut changed = false;
        for cone in self.maximal_cones() {
            if !cone.contains(&center) {
                new_maximal.push(cone.clone());
                continue;
            }
            let cells = star_cells(cone, &center);
            if cells.len() == 1 && cells[0].rays() == cone.rays() {
                new_maximal.push(cone.clone());
                continue;
            }
            changed = true;
            new_maximal.extend(cells);
        }
        if changed {
            Fan::from_cones(self.rank, new_maximal, Validation::Skip)
        } else {
            Ok(self.clone())
        }
    }

    /// Iterated stellar subdivision until every cone is smooth.
    ///
    /// Non-simplicial cones are first subdivided at their own rays, then
    /// the singular simplicial cones are subdivided at box points: the
    /// non-smooth cone of largest index goes first, at its nonzero box
    /// point of smallest barycentric coordinate sum (lexicographic
    /// tie-break). Both phases terminate: ray pulls strictly reduce
    /// non-simplicial cones and box-point subdivisions strictly reduce the
    /// multiset of cone indices.
    pub fn resolve(&self) -> Result<Subdivision> {
        let mut current = self.clone();

        // Phase 1: simplicialize. Pulling every ray once suffices; the
        // interior-point fallback covers cones none of whose rays refines
        // them (pyramid-like apexes).
        while !current.is_simplicial() {
            let before: Vec<LatticeVector> = current.rays().to_vec();
            for ray in before {
                current = current.stellar_target(&ray)?;
            }
            if !current.is_simplicial() {
                let worst = current
                    .cones()
                    .iter()
                    .find(|c| !c.is_simplicial())
                    .expect("a non-simplicial cone exists")
                    .clone();
                current = current.stellar_target(&worst.relint_sample())?;
            }
        }

        // Phase 2: kill singular cones at box points. The cone set is kept
        // incrementally: one subdivision step only touches the star of its
        // center, so the fan is rebuilt once at the end rather than per step.
        let mut maximal: Vec<Cone> = current.maximal_cones().cloned().collect();
        let mut all: BTreeMap<Vec<LatticeVector>, Cone> = current
            .cones()
            .iter()
            .map(|c| (c.rays().to_vec(), c.clone()))
            .collect();
        loop {
            let center = {
                let mut worst: Option<&Cone> = None;
                for c in all.values() {
                    let idx = c.index().expect("fan is simplicial");
                    if idx.is_one() {
                        continue;
                    }
                    // Largest index first; ties in canonical cone order.
                    let better = match worst {
                        None => true,
                        Some(w) => {
                            let wi = w.index().expect("simplicial");
                            idx > wi || (idx == wi && c < w)
                        }
                    };
                    if better {
                        worst = Some(c);
                    }
                }
                match worst {
                    None => break,
                    Some(cone) => {
                        let mut best: Option<(Rational, LatticeVector)> = None;
                        for (w, t) in cone.box_points_with_coords().expect("simplicial") {
                            if w.is_zero() {
                                continue;
                            }
                            let sum: Rational = t.iter().cloned().sum();
                            let key = (sum, w);
                            match &best {
                                Some(b) if *b <= key => {}
                                _ => best = Some(key),
                            }
                        }
                        best.expect("singular cone has a nonzero box point").1
                    }
                }
            };
            // Star subdivision in place. Cells of the affected maximal cones
            // are the new maximal cones there; every cone containing the
            // center dies, and the faces of the cells replace them.
            let mut cells: Vec<Cone> = Vec::new();
            maximal.retain(|cone| {
                if cone.contains(&center) {
                    cells.extend(star_cells(cone, &center));
                    false
                } else {
                    true
                }
            });
            all.retain(|_, cone| !cone.contains(&center));
            for cell in &cells {
                for set in cell.face_sets() {
                    let key: Vec<LatticeVector> =
                        set.iter().map(|&i| cell.rays()[i].clone()).collect();
                    all.entry(key).or_insert_with(|| {
                        if set.len() == cell.rays().len() {
                            cell.clone()
                        } else {
                            cell.subcone(set)
                        }
                    });
                }
            }
            maximal.extend(cells);
        }
        let resolved = Fan::from_cones(self.rank, maximal, Validation::Skip)?;

        let containment = containment_map(self, &resolved);
        Ok(Subdivision {
            source: self.clone(),
            target: resolved,
            containment,
        })
    }
}

/// The star subdivision of one cone at a point it contains: joins of the
/// center with the maximal faces avoiding it.
fn star_cells(cone: &Cone, center: &LatticeVector) -> Vec<Cone> {
    // Membership of the center (a point of the cone) in the face spanned by
    // `set`: every facet of the cone vanishing on the face must vanish on
    // the center. Avoids materializing the face.
    let face_contains_center = |set: &[usize]| -> bool {
        cone.facet_normals().iter().all(|u| {
            let vanishes_on_face = set.iter().all(|&i| u.dot(&cone.rays()[i]).is_zero());
            !vanishes_on_face || u.dot(center).is_zero()
        })
    };
    let avoiding: Vec<&Vec<usize>> = cone
        .face_sets()
        .iter()
        .filter(|set| !face_contains_center(set))
        .collect();
    let maximal: Vec<&Vec<usize>> = avoiding
        .iter()
        .filter(|set| {
            !avoiding
                .iter()
                .any(|other| other.len() > set.len() && set.iter().all(|i| other.contains(i)))
        })
        .cloned()
        .collect();
    maximal
        .into_iter()
        .map(|set| {
            let mut gens: Vec<LatticeVector> =
                set.iter().map(|&i| cone.rays()[i].clone()).collect();
            gens.push(center.clone());
            Cone::new(cone.rank(), &gens).expect("star cell of a pointed cone is pointed")
        })
        .collect()
}

/// For each maximal cone of `target`, the smallest cone of `source`
/// containing it. `target` must refine `source`.
fn containment_map(source: &Fan, target: &Fan) -> BTreeMap<usize, usize> {
    let mut map = BTreeMap::new();
    for &tid in target.maximal_ids() {
        let cell = &target.cones()[tid];
        let mut best: Option<usize> = None;
        for (sid, cone) in source.cones().iter().enumerate() {
            if cell.rays().iter().all(|r| cone.contains(r)) {
                match best {
                    Some(b) if source.cones()[b].dim() <= cone.dim() => {}
                    _ => best = Some(sid),
                }
            }
        }
        map.insert(tid, best.expect("target refines source"));
    }
    map
}

/// Checks that two cones of a candidate fan intersect along a common face.
///
/// A quick certificate (the rays of either cone lying in the other) is
/// validated first; the honest H-representation intersection then rules out
/// overlaps that touch no ray of either cone.
pub(crate) fn check_common_face(a: &Cone, b: &Cone) -> Result<()> {
    if a == b {
        return Ok(());
    }
    let in_b: Vec<LatticeVector> = a.rays().iter().filter(|r| b.contains(r)).cloned().collect();
    let in_a: Vec<LatticeVector> = b.rays().iter().filter(|r| a.contains(r)).cloned().collect();
    let sa: BTreeSet<&LatticeVector> = in_b.iter().collect();
    let sb: BTreeSet<&LatticeVector> = in_a.iter().collect();
    if sa != sb {
        return Err(Error::NotAFan(format!(
            "cones {a} and {b} overlap outside a common face"
        )));
    }
    let face_of = |cone: &Cone, members: &[LatticeVector]| -> bool {
        match cone.smallest_face_containing(members) {
            None => false,
            Some(set) => set.len() == members.len(),
        }
    };
    if !face_of(a, &in_b) || !face_of(b, &in_b) {
        return Err(Error::NotAFan(format!(
            "cones {a} and {b} meet in a non-face"
        )));
    }
    let intersection = intersect_cones(a, b)?;
    let expected: BTreeSet<&LatticeVector> = intersection.rays().iter().collect();
    if expected != sa {
        return Err(Error::NotAFan(format!(
            "cones {a} and {b} intersect in {intersection}, not a common face"
        )));
    }
    Ok(())
}
