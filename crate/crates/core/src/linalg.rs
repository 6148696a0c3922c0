//! Vectors and matrices over F_q, and exact Gaussian elimination.

use std::fmt;
use std::ops::Index;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSampler, Modulus};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldVector {
    elems: Vec<FieldElement>,
    q: Modulus,
}

impl FieldVector {
    pub fn new(elems: Vec<FieldElement>, q: Modulus) -> Result<Self> {
        if let Some(bad) = elems.iter().find(|e| e.modulus() != q) {
            return Err(Error::ModulusMismatch {
                left: q.get(),
                right: bad.modulus().get(),
            });
        }
        Ok(FieldVector { elems, q })
    }

    /// Reduces every entry mod `q`.
    pub fn from_values(values: &[i64], q: Modulus) -> Self {
        let elems = values.iter().map(|&v| q.reduce(v as i128)).collect();
        FieldVector { elems, q }
    }

    pub fn zeros(len: usize, q: Modulus) -> Self {
        FieldVector {
            elems: vec![q.zero(); len],
            q,
        }
    }

    /// The `i`-th standard basis vector of length `len`.
    pub fn unit(len: usize, i: usize, q: Modulus) -> Self {
        let mut v = Self::zeros(len, q);
        v.elems[i] = q.one();
        v
    }

    pub fn random<S: FieldSampler + ?Sized>(len: usize, q: Modulus, rng: &mut S) -> Self {
        FieldVector {
            elems: (0..len).map(|_| rng.sample(q)).collect(),
            q,
        }
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn as_slice(&self) -> &[FieldElement] {
        &self.elems
    }

    pub fn iter(&self) -> std::slice::Iter<'_, FieldElement> {
        self.elems.iter()
    }

    pub fn values(&self) -> Vec<u32> {
        self.elems.iter().map(|e| e.value()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.elems.iter().all(|e| e.is_zero())
    }

    fn check_compatible(&self, other: &FieldVector) -> Result<()> {
        if self.q != other.q {
            return Err(Error::ModulusMismatch {
                left: self.q.get(),
                right: other.q.get(),
            });
        }
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(format!(
                "vector lengths {} and {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// `⟨self · other⟩ = Σ selfᵢ·otherᵢ mod q`.
    pub fn dot(&self, other: &FieldVector) -> Result<FieldElement> {
        self.check_compatible(other)?;
        Ok(self.dot_unchecked(other))
    }

    fn dot_unchecked(&self, other: &FieldVector) -> FieldElement {
        // Each product is < 2^62, so a u128 accumulator never overflows for any realistic length.
        let acc: u128 = self
            .elems
            .iter()
            .zip(&other.elems)
            .map(|(a, b)| a.value() as u128 * b.value() as u128)
            .sum();
        self.q.reduce(acc as i128)
    }

    pub fn add(&self, other: &FieldVector) -> Result<FieldVector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &FieldVector) -> Result<FieldVector> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(
        &self,
        other: &FieldVector,
        f: impl Fn(FieldElement, FieldElement) -> FieldElement,
    ) -> Result<FieldVector> {
        self.check_compatible(other)?;
        let elems = self
            .elems
            .iter()
            .zip(&other.elems)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Ok(FieldVector { elems, q: self.q })
    }

    pub fn scale(&self, c: FieldElement) -> FieldVector {
        FieldVector {
            elems: self.elems.iter().map(|&e| e * c).collect(),
            q: self.q,
        }
    }

    /// `self` (a row vector, length k) times `m` (k×n).
    pub fn mul_matrix(&self, m: &FieldMatrix) -> Result<FieldVector> {
        if self.q != m.q {
            return Err(Error::ModulusMismatch {
                left: self.q.get(),
                right: m.q.get(),
            });
        }
        if self.len() != m.rows {
            return Err(Error::DimensionMismatch(format!(
                "1x{} vector times {}x{} matrix",
                self.len(),
                m.rows,
                m.cols
            )));
        }
        Ok(FieldVector {
            elems: (0..m.cols)
                .map(|j| self.dot_unchecked(&m.column(j)))
                .collect(),
            q: self.q,
        })
    }

    /// Zero-extends to length `len`.
    pub fn padded(&self, len: usize) -> Result<FieldVector> {
        if len < self.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot pad a length-{} vector to length {len}",
                self.len()
            )));
        }
        let mut elems = self.elems.clone();
        elems.resize(len, self.q.zero());
        Ok(FieldVector { elems, q: self.q })
    }
}

impl Index<usize> for FieldVector {
    type Output = FieldElement;
    fn index(&self, i: usize) -> &FieldElement {
        &self.elems[i]
    }
}

impl fmt::Debug for FieldVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.values(), self.q)
    }
}

impl Serialize for FieldVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.elems.iter())
    }
}

impl<'a> IntoIterator for &'a FieldVector {
    type Item = &'a FieldElement;
    type IntoIter = std::slice::Iter<'a, FieldElement>;
    fn into_iter(self) -> Self::IntoIter {
        self.elems.iter()
    }
}

/// Dense row-major matrix over F_q.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    q: Modulus,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize, q: Modulus) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: vec![q.zero(); rows * cols],
            q,
        }
    }

    pub fn identity(n: usize, q: Modulus) -> Self {
        let mut m = Self::zeros(n, n, q);
        for i in 0..n {
            m.data[i * n + i] = q.one();
        }
        m
    }

    /// Builds from rows of integers, reducing mod `q`.
    pub fn from_rows(rows: &[Vec<i64>], q: Modulus) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&v| q.reduce(v as i128))
            .collect();
        Ok(FieldMatrix {
            rows: rows.len(),
            cols,
            data,
            q,
        })
    }

    pub fn from_row_major(
        rows: usize,
        cols: usize,
        data: Vec<FieldElement>,
        q: Modulus,
    ) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|e| e.modulus() != q) {
            return Err(Error::ModulusMismatch {
                left: q.get(),
                right: bad.modulus().get(),
            });
        }
        Ok(FieldMatrix {
            rows,
            cols,
            data,
            q,
        })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(columns: &[FieldVector]) -> Result<Self> {
        let first = columns
            .first()
            .ok_or_else(|| Error::DimensionMismatch("no columns".into()))?;
        let (q, rows, cols) = (first.q, first.len(), columns.len());
        for c in columns {
            first.check_compatible(c)?;
        }
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            data.extend(columns.iter().map(|c| c.elems[i]));
        }
        Ok(FieldMatrix {
            rows,
            cols,
            data,
            q,
        })
    }

    pub fn random<S: FieldSampler + ?Sized>(
        rows: usize,
        cols: usize,
        q: Modulus,
        rng: &mut S,
    ) -> Self {
        FieldMatrix {
            rows,
            cols,
            data: (0..rows * cols).map(|_| rng.sample(q)).collect(),
            q,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn modulus(&self) -> Modulus {
        self.q
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> FieldVector {
        FieldVector {
            elems: self.data[i * self.cols..(i + 1) * self.cols].to_vec(),
            q: self.q,
        }
    }

    pub fn column(&self, j: usize) -> FieldVector {
        FieldVector {
            elems: (0..self.rows).map(|i| self.get(i, j)).collect(),
            q: self.q,
        }
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            data.extend((0..self.rows).map(|i| self.get(i, j)));
        }
        FieldMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
            q: self.q,
        }
    }

    /// `self · v` with `v` treated as a column vector.
    pub fn mul_vector(&self, v: &FieldVector) -> Result<FieldVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times length-{} vector",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        (0..self.rows)
            .map(|i| self.row(i).dot(v))
            .collect::<Result<Vec<_>>>()
            .map(|elems| FieldVector { elems, q: self.q })
    }

    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        work.row_reduce(self.cols).len()
    }

    pub fn is_nonsingular(&self) -> Result<bool> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "nonsingularity of a non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        Ok(self.rank() == self.rows)
    }

    /// In-place reduced row echelon form over the first `pivot_cols` columns.
    /// Returns the pivot column of each nonzero row, top to bottom.
    fn row_reduce(&mut self, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            // first nonzero entry at or below row r
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self.get(r, c).inv().expect("pivot is nonzero");
            for j in 0..self.cols {
                self.data[r * self.cols + j] = self.data[r * self.cols + j] * inv;
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let sub = factor * self.data[r * self.cols + j];
                    self.data[i * self.cols + j] = self.data[i * self.cols + j] - sub;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

impl fmt::Debug for FieldMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<u32>> = (0..self.rows).map(|i| self.row(i).values()).collect();
        write!(f, "{rows:?} (mod {})", self.q)
    }
}

/// Serialized as a list of rows.
impl Serialize for FieldMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq((0..self.rows).map(|i| self.row(i)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolutionKind {
    Unique,
    Affine,
    Inconsistent,
}

/// Every solution of `A·x = b`: `particular + span(nullspace_basis)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionSet {
    pub kind: SolutionKind,
    pub particular: Option<FieldVector>,
    pub nullspace_basis: Vec<FieldVector>,
    pub rank: usize,
}

impl SolutionSet {
    pub fn unique(&self) -> Option<&FieldVector> {
        match self.kind {
            SolutionKind::Unique => self.particular.as_ref(),
            _ => None,
        }
    }

    /// Whether `x` is one of the solutions.
    pub fn contains(&self, a: &FieldMatrix, b: &FieldVector, x: &FieldVector) -> bool {
        self.kind != SolutionKind::Inconsistent && a.mul_vector(x).is_ok_and(|ax| &ax == b)
    }

    /// Number of solutions as `q^dim`, or `None` if it overflows `u128`.
    pub fn count(&self, q: Modulus) -> Option<u128> {
        match self.kind {
            SolutionKind::Inconsistent => Some(0),
            _ => (q.get() as u128).checked_pow(self.nullspace_basis.len() as u32),
        }
    }
}

/// Solves `A·x = b` exactly.
///
/// Pivots are the first nonzero entry scanning down each column. Free
/// variables are zero in the particular solution; each nullspace basis vector
/// sets one free variable and is scaled so its first nonzero entry is 1.
pub fn solve(a: &FieldMatrix, b: &FieldVector) -> Result<SolutionSet> {
    if a.rows != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} system with a length-{} right-hand side",
            a.rows,
            a.cols,
            b.len()
        )));
    }
    if a.q != b.q {
        return Err(Error::ModulusMismatch {
            left: a.q.get(),
            right: b.q.get(),
        });
    }
    let q = a.q;
    let n = a.cols;
    let mut aug = FieldMatrix::zeros(a.rows, n + 1, q);
    for i in 0..a.rows {
        for j in 0..n {
            aug.data[i * (n + 1) + j] = a.get(i, j);
        }
        aug.data[i * (n + 1) + n] = b[i];
    }
    let pivots = aug.row_reduce(n);
    let rank = pivots.len();

    if (rank..a.rows).any(|i| !aug.get(i, n).is_zero()) {
        return Ok(SolutionSet {
            kind: SolutionKind::Inconsistent,
            particular: None,
            nullspace_basis: Vec::new(),
            rank,
        });
    }

    let mut particular = FieldVector::zeros(n, q);
    for (r, &c) in pivots.iter().enumerate() {
        particular.elems[c] = aug.get(r, n);
    }

    let free = (0..n).filter(|c| !pivots.contains(c));
    let nullspace_basis: Vec<FieldVector> = free
        .map(|f| {
            let mut v = FieldVector::zeros(n, q);
            v.elems[f] = q.one();
            for (r, &c) in pivots.iter().enumerate() {
                v.elems[c] = -aug.get(r, f);
            }
            let lead = *v
                .iter()
                .find(|e| !e.is_zero())
                .expect("basis vector is nonzero");
            v.scale(lead.inv().expect("nonzero"))
        })
        .collect();

    let kind = if nullspace_basis.is_empty() {
        SolutionKind::Unique
    } else {
        SolutionKind::Affine
    };
    Ok(SolutionSet {
        kind,
        particular: Some(particular),
        nullspace_basis,
        rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::DipRng;

    fn q(v: u64) -> Modulus {
        Modulus::new(v).unwrap()
    }

    fn v(values: &[i64], m: u64) -> FieldVector {
        FieldVector::from_values(values, q(m))
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(v(&[0, 0], 7).dot(&v(&[3, 4], 7)).unwrap().value(), 0);
        assert_eq!(v(&[1, 2], 7).dot(&v(&[3, 4], 7)).unwrap().value(), 4);
        assert_eq!(v(&[5, 6], 7).dot(&v(&[2, 3], 7)).unwrap().value(), 0);
    }

    #[test]
    fn inner_product_rejects_mismatch() {
        assert!(matches!(
            v(&[1, 2], 7).dot(&v(&[1], 7)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            v(&[1], 7).dot(&v(&[1], 5)),
            Err(Error::ModulusMismatch { .. })
        ));
    }

    #[test]
    fn vector_arith_examples() {
        assert_eq!(v(&[3, 4], 7).sub(&v(&[2, 3], 7)).unwrap(), v(&[1, 1], 7));
        assert_eq!(v(&[1, 2], 7).add(&v(&[5, 6], 7)).unwrap(), v(&[6, 1], 7));
        assert_eq!(
            v(&[1, 2], 7).add(&FieldVector::zeros(2, q(7))).unwrap(),
            v(&[1, 2], 7)
        );
        assert!(v(&[1, 2], 7).add(&v(&[1, 2, 3], 7)).is_err());
    }

    #[test]
    fn vec_mat_examples() {
        let x = v(&[1, 2], 7);
        assert_eq!(x.mul_matrix(&FieldMatrix::identity(2, q(7))).unwrap(), x);
        let y = FieldMatrix::from_rows(&[vec![3, 1], vec![4, 1]], q(7)).unwrap();
        assert_eq!(x.mul_matrix(&y).unwrap(), v(&[4, 3], 7));
        assert_eq!(
            FieldVector::zeros(2, q(7)).mul_matrix(&y).unwrap(),
            FieldVector::zeros(2, q(7))
        );
        assert!(v(&[1, 2, 3], 7).mul_matrix(&y).is_err());
    }

    #[test]
    fn columns_and_transpose() {
        let m = FieldMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]], q(7)).unwrap();
        assert_eq!(m.column(2), v(&[3, 6], 7));
        assert_eq!(m.transpose().row(2), v(&[3, 6], 7));
        let rebuilt = FieldMatrix::from_columns(&[m.column(0), m.column(1), m.column(2)]).unwrap();
        assert_eq!(rebuilt, m);
    }

    #[test]
    fn solve_identity() {
        let s = solve(&FieldMatrix::identity(2, q(7)), &v(&[4, 6], 7)).unwrap();
        assert_eq!(s.kind, SolutionKind::Unique);
        assert_eq!(s.unique(), Some(&v(&[4, 6], 7)));
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn solve_rank_deficient() {
        let a = FieldMatrix::from_rows(&[vec![1, 1], vec![2, 2]], q(7)).unwrap();
        let s = solve(&a, &v(&[1, 2], 7)).unwrap();
        assert_eq!(s.kind, SolutionKind::Affine);
        assert_eq!(s.rank, 1);
        assert_eq!(s.nullspace_basis, vec![v(&[1, 6], 7)]);
        assert_eq!(s.count(q(7)), Some(7));

        let s = solve(&a, &v(&[1, 3], 7)).unwrap();
        assert_eq!(s.kind, SolutionKind::Inconsistent);
        assert!(s.particular.is_none());
        assert_eq!(s.count(q(7)), Some(0));
    }

    #[test]
    fn solve_rejects_bad_rhs() {
        let a = FieldMatrix::identity(2, q(7));
        assert!(matches!(
            solve(&a, &v(&[1, 2, 3], 7)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn zero_matrix_solution_space_is_everything() {
        let a = FieldMatrix::zeros(3, 3, q(5));
        let s = solve(&a, &FieldVector::zeros(3, q(5))).unwrap();
        assert_eq!(s.rank, 0);
        assert_eq!(s.nullspace_basis.len(), 3);
        assert_eq!(s.count(q(5)), Some(125));
    }

    #[test]
    fn nonsingularity_examples() {
        assert!(FieldMatrix::identity(3, q(5)).is_nonsingular().unwrap());
        let a = FieldMatrix::from_rows(&[vec![1, 1], vec![2, 2]], q(7)).unwrap();
        assert!(!a.is_nonsingular().unwrap());
        let wide = FieldMatrix::zeros(2, 3, q(7));
        assert!(wide.is_nonsingular().is_err());
    }

    #[test]
    fn six_of_sixteen_binary_matrices_are_nonsingular() {
        let f2 = q(2);
        let count = (0..16)
            .filter(|bits| {
                let rows = vec![
                    vec![bits & 1, (bits >> 1) & 1],
                    vec![(bits >> 2) & 1, (bits >> 3) & 1],
                ];
                FieldMatrix::from_rows(&rows, f2)
                    .unwrap()
                    .is_nonsingular()
                    .unwrap()
            })
            .count();
        assert_eq!(count, 6);
    }

    #[test]
    fn nonsingular_iff_unique_for_random_rhs() {
        let mut rng = DipRng::from_seed(3);
        for m in [2u64, 3, 7] {
            for _ in 0..50 {
                let a = FieldMatrix::random(3, 3, q(m), &mut rng);
                let ns = a.is_nonsingular().unwrap();
                for _ in 0..20 {
                    let b = FieldVector::random(3, q(m), &mut rng);
                    let s = solve(&a, &b).unwrap();
                    assert_eq!(ns, s.kind == SolutionKind::Unique, "{a:?}");
                }
            }
        }
    }

    #[test]
    fn same_input_same_representation() {
        let mut rng = DipRng::from_seed(11);
        let a = FieldMatrix::random(4, 5, q(3), &mut rng);
        let b = FieldVector::random(4, q(3), &mut rng);
        assert_eq!(
            solve(&a, &b).unwrap(),
            solve(&a.clone(), &b.clone()).unwrap()
        );
    }
}
