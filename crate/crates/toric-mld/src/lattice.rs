//! Exact integer and rational linear algebra: lattice vectors, linear forms,
//! integer matrices, Smith normal form, and rational linear solving.
//!
//! Everything here is arbitrary precision. There is no floating point
//! anywhere in the computation path: the mld equalities downstream are exact
//! and the tests assert them with zero tolerance.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision integer, the coordinate ring of the cocharacter lattice.
pub type Int = BigInt;

/// Arbitrary-precision rational, always reduced with positive denominator
/// (guaranteed by construction).
pub type Rational = BigRational;

/// Shorthand for a small rational constant.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(Int::from(numer), Int::from(denom))
}

/// A point of the lattice N = Z^n. Equality is coordinatewise and the derived
/// `Ord` is lexicographic, which is the canonical order used everywhere for
/// deterministic tie-breaking.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(Vec<Int>);

impl LatticeVector {
    pub fn new(coords: Vec<Int>) -> Self {
        LatticeVector(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticeVector(coords.iter().map(|&c| Int::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatticeVector(vec![Int::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Int] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        debug_assert_eq!(self.rank(), other.rank());
        LatticeVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Self {
        LatticeVector(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &Int) -> Self {
        LatticeVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Integer pairing with another vector (used for facet normals).
    pub fn dot(&self, other: &Self) -> Int {
        debug_assert_eq!(self.rank(), other.rank());
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    /// Greatest common divisor of the coordinates; zero for the zero vector.
    pub fn content(&self) -> Int {
        self.0.iter().fold(Int::zero(), |acc, c| acc.gcd(c))
    }

    /// The primitive generator of the ray through this vector.
    ///
    /// Errors with [`Error::ZeroVector`] on the zero vector.
    pub fn primitive(&self) -> Result<Self> {
        let g = self.content();
        if g.is_zero() {
            return Err(Error::ZeroVector);
        }
        Ok(LatticeVector(self.0.iter().map(|c| c / &g).collect()))
    }

    /// Coordinates as exact rationals.
    pub fn to_rational(&self) -> Vec<Rational> {
        self.0
            .iter()
            .map(|c| Rational::from_integer(c.clone()))
            .collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An element of M ⊗ Q: a rational linear form on the lattice. Evaluation is
/// the exact dot product.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinearForm(Vec<Rational>);

impl LinearForm {
    pub fn new(coords: Vec<Rational>) -> Self {
        LinearForm(coords)
    }

    pub fn zero(rank: usize) -> Self {
        LinearForm(vec![Rational::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn eval(&self, v: &LatticeVector) -> Rational {
        debug_assert_eq!(self.rank(), v.rank());
        self.0
            .iter()
            .zip(v.coords())
            .map(|(a, b)| a * Rational::from_integer(b.clone()))
            .sum()
    }

    pub fn eval_rational(&self, v: &[Rational]) -> Rational {
        debug_assert_eq!(self.rank(), v.len());
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A dense integer matrix with immutable dimensions.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[LatticeVector]) -> Self {
        let cols = rows.first().map_or(0, LatticeVector::rank);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            debug_assert_eq!(r.rank(), cols);
            data.extend(r.coords().iter().cloned());
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&c| Int::from(c)))
            .collect();
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &Int {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Int) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> LatticeVector {
        LatticeVector(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn col(&self, c: usize) -> LatticeVector {
        LatticeVector((0..self.rows).map(|r| self.at(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.at(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Int::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * other.at(k, c);
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == IntMatrix::identity(self.rows)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Int {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return Int::one();
        }
        let mut m = self.data.clone();
        let mut prev = Int::one();
        let mut sign = 1i8;
        for k in 0..n - 1 {
            if m[k * n + k].is_zero() {
                match (k + 1..n).find(|&i| !m[i * n + k].is_zero()) {
                    Some(i) => {
                        for c in 0..n {
                            m.swap(k * n + c, i * n + c);
                        }
                        sign = -sign;
                    }
                    None => return Int::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i * n + j] * &m[k * n + k] - &m[i * n + k] * &m[k * n + j]) / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + k] = Int::zero();
            }
            prev = m[k * n + k].clone();
        }
        let d = m[(n - 1) * n + (n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    /// Exact inverse of a unimodular matrix. Panics if the matrix is not
    /// unimodular; only internal callers with that guarantee use it.
    pub fn inverse_unimodular(&self) -> IntMatrix {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let id_cols: Vec<Vec<Rational>> = (0..n)
            .map(|c| {
                (0..n)
                    .map(|r| {
                        if r == c {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut inv = IntMatrix::zero(n, n);
        for (c, rhs) in id_cols.into_iter().enumerate() {
            let x = solve_rational(self, &rhs).expect("unimodular matrix is invertible");
            for (r, v) in x.into_iter().enumerate() {
                assert!(v.is_integer(), "matrix is not unimodular");
                inv.set(r, c, v.to_integer());
            }
        }
        inv
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row(dst) += k * row(src)
    fn add_row(&mut self, dst: usize, src: usize, k: &Int) {
        for c in 0..self.cols {
            let v = self.at(src, c) * k;
            self.data[dst * self.cols + c] += v;
        }
    }

    /// col(dst) += k * col(src)
    fn add_col(&mut self, dst: usize, src: usize, k: &Int) {
        for r in 0..self.rows {
            let v = self.at(r, src) * k;
            self.data[r * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = -self.at(r, c).clone();
            self.set(r, c, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal with a divisibility chain d_1 | d_2 | ... .
pub struct SmithNormalForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl SmithNormalForm {
    /// The nonzero diagonal entries, in chain order.
    pub fn elementary_divisors(&self) -> Vec<Int> {
        let n = self.d.rows().min(self.d.cols());
        (0..n)
            .map(|i| self.d.at(i, i).clone())
            .filter(|x| !x.is_zero())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.elementary_divisors().len()
    }
}

/// Computes the Smith normal form of an integer matrix.
///
/// Pivot rule: smallest absolute value among nonzero entries of the working
/// submatrix, ties broken row-major. This keeps coefficient growth tame and
/// makes the output deterministic.
pub fn snf(m: &IntMatrix) -> SmithNormalForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    let pick_pivot = |d: &IntMatrix, t: usize| -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, Int)> = None;
        for r in t..rows {
            for c in t..cols {
                let x = d.at(r, c);
                if x.is_zero() {
                    continue;
                }
                let a = x.abs();
                match &best {
                    Some((_, _, b)) if *b <= a => {}
                    _ => best = Some((r, c, a)),
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    };

    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pr, pc)) = pick_pivot(&d, t) else {
            break; // remaining submatrix is zero
        };
        d.swap_rows(t, pr);
        u.swap_rows(t, pr);
        d.swap_cols(t, pc);
        v.swap_cols(t, pc);

        loop {
            let mut dirty = false;
            // Clear the pivot column.
            for i in t + 1..rows {
                if d.at(i, t).is_zero() {
                    continue;
                }
                let q = -(d.at(i, t) / d.at(t, t));
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                if !d.at(i, t).is_zero() {
                    // Remainder is smaller than the pivot: promote it.
                    d.swap_rows(t, i);
                    u.swap_rows(t, i);
                    dirty = true;
                }
            }
            // Clear the pivot row.
            for j in t + 1..cols {
                if d.at(t, j).is_zero() {
                    continue;
                }
                let q = -(d.at(t, j) / d.at(t, t));
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                if !d.at(t, j).is_zero() {
                    d.swap_cols(t, j);
                    v.swap_cols(t, j);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            if (t + 1..rows).any(|i| !d.at(i, t).is_zero()) {
                continue; // column ops disturbed the pivot column
            }
            // Enforce divisibility of the remaining submatrix by the pivot.
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !d.at(i, j).mod_floor(d.at(t, t)).is_zero());
            match offender {
                Some((i, _)) => {
                    d.add_row(t, i, &Int::one());
                    u.add_row(t, i, &Int::one());
                }
                None => break,
            }
        }
        t += 1;
    }

    for i in 0..rows.min(cols) {
        if d.at(i, i).is_negative() {
            d.negate_row(i);
            u.negate_row(i);
        }
    }

    SmithNormalForm { u, d, v }
}

/// Solves `A x = b` exactly over the rationals.
///
/// Returns one solution if the system is consistent (Gaussian elimination
/// with first-nonzero pivot choice and free variables set to zero, so the
/// result is deterministic), and `None` otherwise.
pub fn solve_rational(a: &IntMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    assert_eq!(a.rows(), b.len(), "rhs length mismatch");
    let rows = a.rows();
    let cols = a.cols();
    let width = cols + 1;
    let mut m: Vec<Rational> = Vec::with_capacity(rows * width);
    for (r, rhs) in b.iter().enumerate() {
        for c in 0..cols {
            m.push(Rational::from_integer(a.at(r, c).clone()));
        }
        m.push(rhs.clone());
    }

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !m[r * width + c].is_zero()) else {
            continue;
        };
        for j in 0..width {
            m.swap(rank * width + j, pr * width + j);
        }
        let inv = m[rank * width + c].recip();
        for j in c..width {
            let v = &m[rank * width + j] * &inv;
            m[rank * width + j] = v;
        }
        for r in 0..rows {
            if r == rank || m[r * width + c].is_zero() {
                continue;
            }
            let factor = m[r * width + c].clone();
            for j in c..width {
                let v = &m[r * width + j] - &factor * &m[rank * width + j];
                m[r * width + j] = v;
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }

    // Consistency: a zero row with nonzero right-hand side kills the system.
    for r in rank..rows {
        if !m[r * width + cols].is_zero() {
            return None;
        }
    }

    let mut x = vec![Rational::zero(); cols];
    for (i, &c) in pivot_cols.iter().enumerate() {
        x[c] = m[i * width + cols].clone();
    }
    Some(x)
}

/// Rank of an integer matrix over Q.
pub fn rank(m: &IntMatrix) -> usize {
    row_reduce_rational(m).1.len()
}

/// Basis of the rational null space {x : M x = 0}, one vector per free
/// column, in ascending column order with the free variable set to one.
pub fn nullspace(m: &IntMatrix) -> Vec<Vec<Rational>> {
    let (red, pivot_cols) = row_reduce_rational(m);
    let cols = m.cols();
    let width = cols;
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut x = vec![Rational::zero(); cols];
        x[free] = Rational::one();
        for (i, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = -red[i * width + free].clone();
        }
        basis.push(x);
    }
    basis
}

/// Reduced row echelon form over Q; returns the reduced entries (row-major,
/// same width) together with the pivot columns.
fn row_reduce_rational(m: &IntMatrix) -> (Vec<Rational>, Vec<usize>) {
    let rows = m.rows();
    let cols = m.cols();
    let mut red: Vec<Rational> = (0..rows * cols)
        .map(|i| Rational::from_integer(m.at(i / cols, i % cols).clone()))
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..rows).find(|&r| !red[r * cols + c].is_zero()) else {
            continue;
        };
        for j in 0..cols {
            red.swap(rank * cols + j, pr * cols + j);
        }
        let inv = red[rank * cols + c].recip();
        for j in c..cols {
            let v = &red[rank * cols + j] * &inv;
            red[rank * cols + j] = v;
        }
        for r in 0..rows {
            if r == rank || red[r * cols + c].is_zero() {
                continue;
            }
            let factor = red[r * cols + c].clone();
            for j in c..cols {
                let v = &red[r * cols + j] - &factor * &red[rank * cols + j];
                red[r * cols + j] = v;
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    (red, pivot_cols)
}

/// Basis of the saturated lattice {x ∈ Z^n : M x = 0}: the kernel of the
/// forms given by the rows of `m`. The basis vectors extend to a basis of
/// Z^n, so the kernel lattice is a direct summand.
pub fn integer_kernel_basis(m: &IntMatrix) -> Vec<LatticeVector> {
    let s = snf(m);
    let r = s.rank();
    (r..m.cols()).map(|c| s.v.col(c)).collect()
}

/// Clears denominators and divides by the content, giving the primitive
/// integer vector on the same ray. Errors on the zero vector.
pub fn primitive_from_rational(v: &[Rational]) -> Result<LatticeVector> {
    let denom_lcm: Int = v.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<Int> = v
        .iter()
        .map(|q| (q * Rational::from_integer(denom_lcm.clone())).to_integer())
        .collect();
    LatticeVector::new(ints).primitive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::SplitMix64;

    fn lv(coords: &[i64]) -> LatticeVector {
        LatticeVector::from_i64(coords)
    }

    fn assert_snf_valid(m: &IntMatrix) -> SmithNormalForm {
        let s = snf(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d, "U*M*V != D for\n{m}");
        assert_eq!(s.u.det().abs(), Int::one(), "U not unimodular");
        assert_eq!(s.v.det().abs(), Int::one(), "V not unimodular");
        let divs = s.elementary_divisors();
        for w in divs.windows(2) {
            assert!(w[1].mod_floor(&w[0]).is_zero(), "chain broken: {divs:?}");
        }
        // Off-diagonal entries vanish.
        for r in 0..s.d.rows() {
            for c in 0..s.d.cols() {
                if r != c {
                    assert!(s.d.at(r, c).is_zero());
                }
            }
        }
        s
    }

    #[test]
    fn snf_diag_2_3() {
        let m = IntMatrix::from_i64(&[&[2, 0], &[0, 3]]);
        let s = assert_snf_valid(&m);
        assert_eq!(s.elementary_divisors(), vec![Int::from(1), Int::from(6)]);
    }

    #[test]
    fn snf_identity() {
        for n in 0..4 {
            let m = IntMatrix::identity(n);
            let s = assert_snf_valid(&m);
            assert_eq!(s.d, IntMatrix::identity(n));
        }
    }

    #[test]
    fn snf_lower_triangular() {
        let m = IntMatrix::from_i64(&[&[1, 0], &[1, 2]]);
        let s = assert_snf_valid(&m);
        assert_eq!(s.elementary_divisors(), vec![Int::from(1), Int::from(2)]);
    }

    #[test]
    fn snf_zero_and_rectangular() {
        let m = IntMatrix::zero(2, 3);
        let s = assert_snf_valid(&m);
        assert_eq!(s.rank(), 0);

        let m = IntMatrix::from_i64(&[&[4, 6, 8]]);
        let s = assert_snf_valid(&m);
        assert_eq!(s.elementary_divisors(), vec![Int::from(2)]);
    }

    /// gcd of all k×k minors, k = rank; the oracle for the divisor product.
    fn minor_gcd(m: &IntMatrix, k: usize) -> Int {
        fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in combos(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        rest.insert(0, first);
                        out.push(rest);
                    }
                }
            }
            out
        }
        let mut g = Int::zero();
        for rs in combos(m.rows(), k) {
            for cs in combos(m.cols(), k) {
                let mut sub = IntMatrix::zero(k, k);
                for (i, &r) in rs.iter().enumerate() {
                    for (j, &c) in cs.iter().enumerate() {
                        sub.set(i, j, m.at(r, c).clone());
                    }
                }
                g = g.gcd(&sub.det());
            }
        }
        g
    }

    #[test]
    fn snf_random_matrices_match_minor_gcd() {
        let mut rng = SplitMix64::new(0x51f1);
        for _ in 0..60 {
            let rows = 1 + (rng.next_u64() % 4) as usize;
            let cols = 1 + (rng.next_u64() % 4) as usize;
            let mut m = IntMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    m.set(r, c, Int::from(rng.next_u64() as i64 % 10));
                }
            }
            let s = assert_snf_valid(&m);
            let divs = s.elementary_divisors();
            let prod: Int = divs.iter().product();
            if divs.is_empty() {
                continue;
            }
            assert_eq!(prod.abs(), minor_gcd(&m, divs.len()).abs());
        }
    }

    #[test]
    fn primitive_examples() {
        assert_eq!(lv(&[2, 4]).primitive().unwrap(), lv(&[1, 2]));
        assert_eq!(lv(&[1, 0, 0]).primitive().unwrap(), lv(&[1, 0, 0]));
        assert_eq!(lv(&[-3, 6, 9]).primitive().unwrap(), lv(&[-1, 2, 3]));
        assert_eq!(lv(&[0, 0]).primitive(), Err(Error::ZeroVector));
    }

    #[test]
    fn primitive_is_idempotent_and_scale_invariant() {
        let mut rng = SplitMix64::new(0xbeef);
        for _ in 0..200 {
            let v = lv(&[
                rng.next_u64() as i64 % 7,
                rng.next_u64() as i64 % 7,
                rng.next_u64() as i64 % 7,
            ]);
            if v.is_zero() {
                continue;
            }
            let p = v.primitive().unwrap();
            assert_eq!(p.primitive().unwrap(), p);
            assert_eq!(p.content(), Int::one());
            let k = 1 + (rng.next_u64() % 5) as i64;
            assert_eq!(v.scale(&Int::from(k)).primitive().unwrap(), p);
        }
    }

    #[test]
    fn solve_examples() {
        let a = IntMatrix::from_i64(&[&[1, 0], &[1, 2]]);
        let b = vec![ratio(1, 1), ratio(1, 1)];
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(x, vec![ratio(1, 1), ratio(0, 1)]);

        let a = IntMatrix::identity(3);
        let b = vec![ratio(5, 2), ratio(-1, 3), ratio(0, 1)];
        assert_eq!(solve_rational(&a, &b).unwrap(), b);

        let a = IntMatrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, -1]]);
        let b = vec![ratio(1, 1), ratio(1, 1), ratio(1, 1), ratio(0, 1)];
        assert_eq!(solve_rational(&a, &b), None);
    }

    #[test]
    fn solve_random_systems_satisfy_residual() {
        let mut rng = SplitMix64::new(0xace);
        for _ in 0..100 {
            let rows = 1 + (rng.next_u64() % 4) as usize;
            let cols = 1 + (rng.next_u64() % 4) as usize;
            let mut a = IntMatrix::zero(rows, cols);
            for r in 0..rows {
                for c in 0..cols {
                    a.set(r, c, Int::from(rng.next_u64() as i64 % 5));
                }
            }
            let b: Vec<Rational> = (0..rows)
                .map(|_| ratio(rng.next_u64() as i64 % 7, 1 + (rng.next_u64() % 3) as i64))
                .collect();
            if let Some(x) = solve_rational(&a, &b) {
                for r in 0..rows {
                    let lhs: Rational = (0..cols)
                        .map(|c| Rational::from_integer(a.at(r, c).clone()) * &x[c])
                        .sum();
                    assert_eq!(lhs, b[r]);
                }
            } else {
                // Inconsistent: the augmented matrix must have higher rank.
                let s = snf(&a);
                let rank_a = s.rank();
                let mut aug = IntMatrix::zero(rows, cols + 1);
                let denom: Int = b.iter().fold(Int::one(), |acc, q| acc.lcm(q.denom()));
                for r in 0..rows {
                    for c in 0..cols {
                        aug.set(r, c, a.at(r, c) * &denom);
                    }
                    let scaled = &b[r] * Rational::from_integer(denom.clone());
                    aug.set(r, cols, scaled.to_integer());
                }
                assert!(snf(&aug).rank() > rank_a);
            }
        }
    }

    #[test]
    fn inverse_unimodular_roundtrip() {
        let m = IntMatrix::from_i64(&[&[1, 2, 0], &[0, 1, 3], &[0, 0, 1]]);
        let inv = m.inverse_unimodular();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }
}
