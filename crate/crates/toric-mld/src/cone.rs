//! Pointed rational polyhedral cones: construction with exact H-representation,
//! faces, simpliciality, membership, placing triangulation, and the
//! fundamental-parallelepiped lattice-point enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    integer_kernel_basis, nullspace, primitive_from_rational, rank as matrix_rank, snf,
    solve_rational, Int, IntMatrix, LatticeVector, Rational,
};

/// A pointed rational polyhedral cone in a fixed ambient lattice Z^rank.
///
/// All derived data (primitive extreme rays in canonical lexicographic
/// order, facet normals, span equations, the face lattice as ray-index sets)
/// is computed eagerly at construction, after which the cone is immutable.
#[derive(Clone)]
pub struct Cone {
    rank: usize,
    rays: Vec<LatticeVector>,
    dim: usize,
    facet_normals: Vec<LatticeVector>,
    span_normals: Vec<LatticeVector>,
    span_basis: Vec<LatticeVector>,
    ray_span_coords: Vec<LatticeVector>,
    face_sets: Vec<Vec<usize>>,
    /// |det| of the ray matrix in a span lattice basis; None when not
    /// simplicial.
    index: Option<Int>,
}

/// The lattice points of the fundamental parallelepiped of a simplicial
/// cone: barycentric coordinates in [0, 1) with respect to the rays.
/// `index` is the order of N_σ / Z⟨rays⟩; the cone is nonsingular exactly
/// when the box is {0}.
#[derive(Clone, Debug)]
pub struct BoxPoints {
    pub points: Vec<LatticeVector>,
    pub index: Int,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank && self.rays == other.rays
    }
}

impl Eq for Cone {}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Cone {
    /// Canonical order: by dimension, then lexicographically on the sorted
    /// ray list. Every deterministic tie-break in the crate derives from it.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.dim, &self.rays).cmp(&(other.dim, &other.rays))
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cone{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Cone {
    /// Builds the cone generated by `generators`, normalizing them to the
    /// primitive extreme rays. An empty generator list gives the zero cone.
    ///
    /// Errors with [`Error::NotPointed`] if the generated cone contains a
    /// line, and [`Error::ZeroVector`] if a generator is zero.
    pub fn new(rank: usize, generators: &[LatticeVector]) -> Result<Cone> {
        let mut prim: BTreeSet<LatticeVector> = BTreeSet::new();
        for g in generators {
            assert_eq!(g.rank(), rank, "generator rank mismatch");
            prim.insert(g.primitive()?);
        }
        let gens: Vec<LatticeVector> = prim.into_iter().collect();
        if gens.is_empty() {
            return Ok(Self::zero_cone(rank));
        }

        // Span of the generators. Full-dimensional cones (the common case)
        // keep ambient coordinates; lower-dimensional ones get a saturated
        // lattice basis of the span via SNF, plus the unimodular coordinate
        // change that cuts the span out.
        let gen_matrix = IntMatrix::from_rows(&gens);
        let dim = matrix_rank(&gen_matrix);
        let (span_basis, span_normals, gen_coords): (
            Vec<LatticeVector>,
            Vec<LatticeVector>,
            Vec<LatticeVector>,
        );
        let span_cols: Vec<LatticeVector>;
        if dim == rank {
            let id = IntMatrix::identity(rank);
            span_basis = (0..rank).map(|r| id.row(r)).collect();
            span_normals = Vec::new();
            span_cols = (0..rank).map(|c| id.col(c)).collect();
            gen_coords = gens.clone();
        } else {
            let s = snf(&gen_matrix);
            debug_assert_eq!(s.rank(), dim);
            let v_inv = s.v.inverse_unimodular();
            span_basis = (0..dim).map(|r| v_inv.row(r)).collect();
            span_normals = (dim..rank).map(|c| s.v.col(c)).collect();
            span_cols = (0..dim).map(|c| s.v.col(c)).collect();
            gen_coords = gens
                .iter()
                .map(|w| LatticeVector::new(span_cols.iter().map(|col| w.dot(col)).collect()))
                .collect();
        }
        let to_span = |w: &LatticeVector| -> LatticeVector {
            LatticeVector::new(span_cols.iter().map(|col| w.dot(col)).collect())
        };

        // Facets, computed inside the span: every facet hyperplane of a
        // full-dimensional cone is spanned by dim-1 of its generators.
        let facet_coords = facet_normals_in_span(dim, &gen_coords);
        if matrix_rank(&IntMatrix::from_rows(&facet_coords)) != dim {
            return Err(Error::NotPointed);
        }

        // A generator is an extreme ray iff its tight facets cut out a line.
        let mut rays = Vec::new();
        for (g, gc) in gens.iter().zip(&gen_coords) {
            let tight: Vec<LatticeVector> = facet_coords
                .iter()
                .filter(|u| u.dot(gc).is_zero())
                .cloned()
                .collect();
            let tight_rank = if tight.is_empty() {
                0
            } else {
                matrix_rank(&IntMatrix::from_rows(&tight))
            };
            if tight_rank == dim - 1 {
                rays.push(g.clone());
            }
        }
        rays.sort();

        // Ambient facet normals: push the span-coordinate forms through the
        // unimodular change, which keeps them primitive.
        let mut facet_normals: Vec<LatticeVector> = facet_coords
            .iter()
            .map(|u| {
                let mut acc = LatticeVector::zero(rank);
                for (c, col) in span_cols.iter().enumerate() {
                    acc = acc.add(&col.scale(&u.coords()[c]));
                }
                acc
            })
            .collect();
        facet_normals.sort();

        let ray_span_coords: Vec<LatticeVector> = rays.iter().map(&to_span).collect();

        let face_sets = enumerate_face_sets(&rays, &facet_normals);
        let index = (rays.len() == dim).then(|| IntMatrix::from_rows(&ray_span_coords).det().abs());

        Ok(Cone {
            rank,
            rays,
            dim,
            facet_normals,
            span_normals,
            span_basis,
            ray_span_coords,
            face_sets,
            index,
        })
    }

    /// Convenience constructor from integer literals.
    pub fn from_i64(rank: usize, generators: &[&[i64]]) -> Result<Cone> {
        let gens: Vec<LatticeVector> = generators
            .iter()
            .map(|g| LatticeVector::from_i64(g))
            .collect();
        Cone::new(rank, &gens)
    }

    fn zero_cone(rank: usize) -> Cone {
        let id = IntMatrix::identity(rank);
        Cone {
            rank,
            rays: Vec::new(),
            dim: 0,
            facet_normals: Vec::new(),
            span_normals: (0..rank).map(|c| id.col(c)).collect(),
            span_basis: Vec::new(),
            ray_span_coords: Vec::new(),
            face_sets: vec![Vec::new()],
            index: Some(Int::one()),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Primitive extreme ray generators in canonical (lexicographic) order.
    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// Supporting integer forms of the H-representation, nonnegative on the
    /// cone and vanishing exactly on the facets.
    pub fn facet_normals(&self) -> &[LatticeVector] {
        &self.facet_normals
    }

    /// Integer forms vanishing on the linear span of the cone.
    pub fn span_normals(&self) -> &[LatticeVector] {
        &self.span_normals
    }

    pub fn is_zero_cone(&self) -> bool {
        self.dim == 0
    }

    pub fn is_simplicial(&self) -> bool {
        self.rays.len() == self.dim
    }

    /// v lies in the cone iff the span equations vanish and every facet form
    /// is nonnegative at v.
    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.span_normals.iter().all(|u| u.dot(v).is_zero())
            && self.facet_normals.iter().all(|u| !u.dot(v).is_negative())
    }

    /// Strict version of [`Cone::contains`]: facet forms must be positive.
    /// The zero cone's relative interior is {0}.
    pub fn relint_contains(&self, v: &LatticeVector) -> bool {
        if self.dim == 0 {
            return v.is_zero();
        }
        self.span_normals.iter().all(|u| u.dot(v).is_zero())
            && self.facet_normals.iter().all(|u| u.dot(v).is_positive())
    }

    /// Membership for exact rational points, used by sampling tests.
    pub fn contains_rational(&self, v: &[Rational]) -> bool {
        let dot = |u: &LatticeVector| -> Rational {
            u.coords()
                .iter()
                .zip(v)
                .map(|(a, b)| Rational::from_integer(a.clone()) * b)
                .sum()
        };
        self.span_normals.iter().all(|u| dot(u).is_zero())
            && self.facet_normals.iter().all(|u| !dot(u).is_negative())
    }

    /// A lattice point in the relative interior: the sum of the rays
    /// (zero for the zero cone).
    pub fn relint_sample(&self) -> LatticeVector {
        self.rays
            .iter()
            .fold(LatticeVector::zero(self.rank), |acc, r| acc.add(r))
    }

    /// All faces as sorted ray-index sets, from the empty set (the zero
    /// cone) up to the full ray set, in canonical order.
    pub fn face_sets(&self) -> &[Vec<usize>] {
        &self.face_sets
    }

    /// All faces, each materialized as a cone; includes {0} and the cone
    /// itself. The face set is closed under intersection.
    pub fn faces(&self) -> Vec<Cone> {
        self.face_sets.iter().map(|set| self.subcone(set)).collect()
    }

    /// The cone spanned by the rays with the given indices.
    pub fn subcone(&self, set: &[usize]) -> Cone {
        let gens: Vec<LatticeVector> = set.iter().map(|&i| self.rays[i].clone()).collect();
        Cone::new(self.rank, &gens).expect("subcone of a pointed cone is pointed")
    }

    /// The ray-index set of the smallest face containing all `members`,
    /// or `None` if some member is not in the cone.
    pub fn smallest_face_containing(&self, members: &[LatticeVector]) -> Option<Vec<usize>> {
        if !members.iter().all(|m| self.contains(m)) {
            return None;
        }
        let tight: Vec<&LatticeVector> = self
            .facet_normals
            .iter()
            .filter(|u| members.iter().all(|m| u.dot(m).is_zero()))
            .collect();
        Some(
            (0..self.rays.len())
                .filter(|&i| tight.iter().all(|u| u.dot(&self.rays[i]).is_zero()))
                .collect(),
        )
    }

    /// Order of N_σ / Z⟨rays⟩ for a simplicial cone: the absolute
    /// determinant of the ray matrix in a lattice basis of the span.
    pub fn index(&self) -> Result<Int> {
        self.index.clone().ok_or(Error::NotSimplicial)
    }

    /// True iff the cone is simplicial and its rays extend to a basis of
    /// N ∩ span, i.e. the box is {0}. The zero cone is smooth.
    pub fn is_smooth(&self) -> bool {
        matches!(&self.index, Some(i) if i.is_one())
    }

    /// Enumerates the fundamental parallelepiped via Smith normal form
    /// coset representatives, so the cost is proportional to the index and
    /// not to the geometry's spread.
    ///
    /// Errors with [`Error::NotSimplicial`] on non-simplicial cones.
    pub fn box_points(&self) -> Result<BoxPoints> {
        let with_coords = self.box_points_with_coords()?;
        let index = self.index()?;
        let mut points: Vec<LatticeVector> = with_coords.into_iter().map(|(p, _)| p).collect();
        points.sort();
        Ok(BoxPoints { points, index })
    }

    /// Box points together with their barycentric coordinates with respect
    /// to the rays (in canonical ray order), sorted by point.
    pub fn box_points_with_coords(&self) -> Result<Vec<(LatticeVector, Vec<Rational>)>> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if self.dim == 0 {
            return Ok(vec![(LatticeVector::zero(self.rank), Vec::new())]);
        }
        let d = self.dim;
        let r_mat = IntMatrix::from_rows(&self.ray_span_coords);
        let s = snf(&r_mat);
        let v_inv = s.v.inverse_unimodular();
        let divisors: Vec<Int> = (0..d).map(|i| s.d.at(i, i).clone()).collect();
        debug_assert!(divisors.iter().all(|x| !x.is_zero()));

        // Barycentric coordinates of x are (x · adj) / det with adj the
        // integer adjugate of the ray matrix; one exact inverse up front
        // keeps the per-point work integral.
        let det = r_mat.det();
        let adj = {
            let mut adj = IntMatrix::zero(d, d);
            for j in 0..d {
                let rhs: Vec<Rational> = (0..d)
                    .map(|i| {
                        if i == j {
                            Rational::from_integer(det.clone())
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                let col = solve_rational(&r_mat, &rhs).expect("rays are independent");
                for (i, v) in col.into_iter().enumerate() {
                    debug_assert!(v.is_integer());
                    adj.set(i, j, v.to_integer());
                }
            }
            adj
        };

        let mut out = Vec::new();
        let mut counter = vec![Int::zero(); d];
        loop {
            // x = y * V^{-1} ranges over coset representatives of Z^d / Z^d·R
            // as y runs over the elementary divisor box.
            let x = LatticeVector::new(
                (0..d)
                    .map(|c| (0..d).map(|i| &counter[i] * v_inv.at(i, c)).sum::<Int>())
                    .collect(),
            );
            // Reduce into the fundamental parallelepiped.
            let mut p_span = x.clone();
            let mut t_frac = Vec::with_capacity(d);
            for i in 0..d {
                let numer: Int = (0..d).map(|k| &x.coords()[k] * adj.at(k, i)).sum();
                let fl = numer.div_floor(&det);
                if !fl.is_zero() {
                    p_span = p_span.sub(&self.ray_span_coords[i].scale(&fl));
                }
                t_frac.push(Rational::new(numer - &fl * &det, det.clone()));
            }
            let ambient = self.span_to_ambient(&p_span);
            out.push((ambient, t_frac));

            // Odometer over the divisor box.
            let mut i = 0;
            loop {
                if i == d {
                    out.sort_by(|a, b| a.0.cmp(&b.0));
                    return Ok(out);
                }
                counter[i] += 1;
                if counter[i] < divisors[i] {
                    break;
                }
                counter[i] = Int::zero();
                i += 1;
            }
        }
    }

    fn span_to_ambient(&self, p: &LatticeVector) -> LatticeVector {
        let mut acc = LatticeVector::zero(self.rank);
        for (c, b) in p.coords().iter().zip(&self.span_basis) {
            acc = acc.add(&b.scale(c));
        }
        acc
    }

    /// Barycentric coordinates of a lattice point of the span with respect
    /// to the rays of a simplicial cone. Errors with [`Error::NotInSupport`]
    /// if the point is outside the span.
    pub fn barycentric(&self, v: &LatticeVector) -> Result<Vec<Rational>> {
        if !self.is_simplicial() {
            return Err(Error::NotSimplicial);
        }
        if self.dim == 0 {
            return if v.is_zero() {
                Ok(Vec::new())
            } else {
                Err(Error::NotInSupport)
            };
        }
        let coords = self.span_coords_of(v).ok_or(Error::NotInSupport)?;
        let r_t = IntMatrix::from_rows(&self.ray_span_coords).transpose();
        Ok(solve_rational(&r_t, &coords.to_rational()).expect("independent rays"))
    }

    fn span_coords_of(&self, v: &LatticeVector) -> Option<LatticeVector> {
        if !self.span_normals.iter().all(|u| u.dot(v).is_zero()) {
            return None;
        }
        if self.dim == 0 {
            return Some(LatticeVector::zero(0));
        }
        // Solve c * span_basis = v; integral because the basis is a lattice
        // basis of N ∩ span.
        let b_t = IntMatrix::from_rows(&self.span_basis).transpose();
        let sol = solve_rational(&b_t, &v.to_rational())?;
        let ints: Vec<Int> = sol
            .iter()
            .map(|q| {
                debug_assert!(q.is_integer());
                q.to_integer()
            })
            .collect();
        Some(LatticeVector::new(ints))
    }

    /// Placing triangulation in canonical ray order: simplicial cones of
    /// full dimension, pairwise intersecting in common faces, covering the
    /// cone, and using only its existing rays.
    pub fn triangulate(&self) -> Vec<Cone> {
        let mut out: Vec<Cone> = self
            .triangulation_ray_sets()
            .iter()
            .map(|cell| self.subcone(cell))
            .collect();
        out.sort();
        out
    }

    /// Cells of the placing triangulation as sorted ray-index sets.
    pub fn triangulation_ray_sets(&self) -> Vec<Vec<usize>> {
        if self.is_simplicial() {
            return vec![(0..self.rays.len()).collect()];
        }
        let coords = &self.ray_span_coords;
        let m = coords.len();
        let mut cells: Vec<Vec<usize>> = vec![vec![0]];
        let mut included = vec![0usize];
        let mut cur_dim = 1usize;

        for j in 1..m {
            let g = &coords[j];
            let with_j: Vec<LatticeVector> = included
                .iter()
                .chain(std::iter::once(&j))
                .map(|&i| coords[i].clone())
                .collect();
            let new_dim = matrix_rank(&IntMatrix::from_rows(&with_j));
            if new_dim > cur_dim {
                // The new ray leaves the current span: cone every cell over it.
                for cell in &mut cells {
                    cell.push(j);
                    cell.sort_unstable();
                }
                cur_dim = new_dim;
            } else {
                // Same span: join the new ray to every visible boundary facet.
                let mut facet_owners: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
                for (ci, cell) in cells.iter().enumerate() {
                    for drop in 0..cell.len() {
                        let mut facet = cell.clone();
                        facet.remove(drop);
                        facet_owners.entry(facet).or_default().push(ci);
                    }
                }
                let mut new_cells = Vec::new();
                for (facet, owners) in &facet_owners {
                    if owners.len() != 1 {
                        continue;
                    }
                    let cell = &cells[owners[0]];
                    let opp = *cell.iter().find(|i| !facet.contains(i)).unwrap();
                    // A form vanishing on the facet and positive on its cell.
                    let mut rows: Vec<LatticeVector> =
                        facet.iter().map(|&i| coords[i].clone()).collect();
                    rows.push(coords[opp].clone());
                    let mut rhs = vec![Rational::zero(); facet.len()];
                    rhs.push(Rational::one());
                    let u = solve_rational(&IntMatrix::from_rows(&rows), &rhs)
                        .expect("cell rays are independent");
                    let val: Rational = u
                        .iter()
                        .zip(g.coords())
                        .map(|(a, b)| a * Rational::from_integer(b.clone()))
                        .sum();
                    if val.is_negative() {
                        let mut cell = facet.clone();
                        cell.push(j);
                        cell.sort_unstable();
                        new_cells.push(cell);
                    }
                }
                cells.extend(new_cells);
            }
            included.push(j);
        }
        cells.sort();
        cells
    }
}

/// Facet normals of a full-dimensional cone, in span coordinates: primitive
/// integer forms, nonnegative on all generators, each vanishing on a
/// (dim-1)-dimensional set of generators. Brute force over generator
/// subsets; fine at desk scale.
fn facet_normals_in_span(dim: usize, gen_coords: &[LatticeVector]) -> Vec<LatticeVector> {
    let mut found: BTreeSet<LatticeVector> = BTreeSet::new();
    for subset in subsets_of_size(gen_coords.len(), dim.saturating_sub(1)) {
        let rows: Vec<LatticeVector> = subset.iter().map(|&i| gen_coords[i].clone()).collect();
        let mat = if rows.is_empty() {
            IntMatrix::zero(0, dim)
        } else {
            IntMatrix::from_rows(&rows)
        };
        let null = nullspace(&mat);
        if null.len() != 1 {
            continue;
        }
        let Ok(mut u) = primitive_from_rational(&null[0]) else {
            continue;
        };
        let mut pos = false;
        let mut neg = false;
        for g in gen_coords {
            let d = u.dot(g);
            if d.is_positive() {
                pos = true;
            } else if d.is_negative() {
                neg = true;
            }
        }
        if pos && neg {
            continue;
        }
        if neg {
            u = u.neg();
        }
        // Facet test: the tight generators must span a hyperplane.
        let tight: Vec<LatticeVector> = gen_coords
            .iter()
            .filter(|g| u.dot(g).is_zero())
            .cloned()
            .collect();
        let tight_rank = if tight.is_empty() {
            0
        } else {
            matrix_rank(&IntMatrix::from_rows(&tight))
        };
        if tight_rank == dim - 1 {
            found.insert(u);
        }
    }
    found.into_iter().collect()
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All faces of a pointed cone as sorted ray-index sets: closure of the full
/// set under intersection with facet hyperplanes.
fn enumerate_face_sets(rays: &[LatticeVector], facet_normals: &[LatticeVector]) -> Vec<Vec<usize>> {
    let full: Vec<usize> = (0..rays.len()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue = vec![full];
    while let Some(set) = queue.pop() {
        if !seen.insert(set.clone()) {
            continue;
        }
        for u in facet_normals {
            let sub: Vec<usize> = set
                .iter()
                .copied()
                .filter(|&i| u.dot(&rays[i]).is_zero())
                .collect();
            if !seen.contains(&sub) {
                queue.push(sub);
            }
        }
    }
    let mut out: Vec<Vec<usize>> = seen.into_iter().collect();
    out.sort_by_key(|s| (s.len(), s.clone()));
    out
}

/// Extreme rays of {y ∈ Q^k : A y ≥ 0} for a pointed cone, by brute force
/// over (k-1)-subsets of the rows. Returns primitive integer directions,
/// deduplicated and sorted.
pub(crate) fn rays_from_halfspaces(k: usize, ineqs: &[LatticeVector]) -> Vec<LatticeVector> {
    if k == 0 {
        return Vec::new();
    }
    let mut found: BTreeSet<LatticeVector> = BTreeSet::new();
    for subset in subsets_of_size(ineqs.len(), k - 1) {
        let rows: Vec<LatticeVector> = subset.iter().map(|&i| ineqs[i].clone()).collect();
        let mat = if rows.is_empty() {
            IntMatrix::zero(0, k)
        } else {
            IntMatrix::from_rows(&rows)
        };
        let null = nullspace(&mat);
        if null.len() != 1 {
            continue;
        }
        let Ok(mut dir) = primitive_from_rational(&null[0]) else {
            continue;
        };
        let mut pos = false;
        let mut neg = false;
        for row in ineqs {
            let d = row.dot(&dir);
            if d.is_positive() {
                pos = true;
            } else if d.is_negative() {
                neg = true;
            }
        }
        if pos && neg {
            continue;
        }
        if neg {
            dir = dir.neg();
        }
        found.insert(dir);
    }
    found.into_iter().collect()
}

/// The honest intersection of two cones in the same lattice, computed from
/// the H-representations. Both inputs are pointed, so the intersection is a
/// pointed cone.
pub(crate) fn intersect_cones(a: &Cone, b: &Cone) -> Result<Cone> {
    assert_eq!(a.rank(), b.rank());
    let rank = a.rank();
    // Common subspace K = span(a) ∩ span(b), as a saturated lattice basis.
    let mut stacked: Vec<LatticeVector> = a.span_normals.clone();
    stacked.extend(b.span_normals.iter().cloned());
    let kernel: Vec<LatticeVector> = if stacked.is_empty() {
        let id = IntMatrix::identity(rank);
        (0..rank).map(|c| id.col(c)).collect()
    } else {
        integer_kernel_basis(&IntMatrix::from_rows(&stacked))
    };
    let k = kernel.len();
    if k == 0 {
        return Cone::new(rank, &[]);
    }
    // Restrict every facet inequality to K.
    let mut ineqs: BTreeSet<LatticeVector> = BTreeSet::new();
    for u in a.facet_normals.iter().chain(b.facet_normals.iter()) {
        let restricted = LatticeVector::new(kernel.iter().map(|kb| u.dot(kb)).collect());
        if restricted.is_zero() {
            continue;
        }
        ineqs.insert(restricted.primitive().expect("nonzero"));
    }
    let rows: Vec<LatticeVector> = ineqs.into_iter().collect();
    let dirs = rays_from_halfspaces(k, &rows);
    let ambient: Vec<LatticeVector> = dirs
        .iter()
        .map(|y| {
            let mut acc = LatticeVector::zero(rank);
            for (c, kb) in y.coords().iter().zip(&kernel) {
                acc = acc.add(&kb.scale(c));
            }
            acc
        })
        .collect();
    Cone::new(rank, &ambient)
}
