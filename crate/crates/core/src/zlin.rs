//! Exact linear algebra over the integers.
//!
//! Everything here is fraction-free and works over any exact integer type
//! implementing [`IntegerScalar`]; the rest of the crate instantiates it with
//! arbitrary-precision integers (see [`crate::Int`]).
//!
//! Conventions:
//! - [`hermite_normal_form`] is row-style: `U·M = H`, rows of `H` span the
//!   row lattice of `M`.
//! - [`cokernel`] reads the *columns* of `M` as relations, i.e. it presents
//!   `ℤ^rows / colspan(M)`.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Exact integer scalar usable by the normal-form routines.
pub trait IntegerScalar: Integer + Signed + Clone + fmt::Debug + fmt::Display {}

impl<T: Integer + Signed + Clone + fmt::Debug + fmt::Display> IntegerScalar for T {}

/// Dense row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: IntegerScalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows × cols");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![T::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed when `rows` is empty.
    pub fn from_rows(rows: Vec<Vec<T>>, cols: usize) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged row");
            data.extend(r);
        }
        Self::new(n, cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<T>], rows: usize) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged column");
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column_vecs(&self) -> Vec<Vec<T>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows, "row count mismatch");
        let mut out = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            self[(r, j)] = -self[(r, j)].clone();
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            self[(i, c)] = -self[(i, c)].clone();
        }
    }

    /// row[dst] -= k · row[src]
    fn sub_row_multiple(&mut self, dst: usize, src: usize, k: &T) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self[(src, j)].clone();
            if !s.is_zero() {
                self[(dst, j)] = self[(dst, j)].clone() - k.clone() * s;
            }
        }
    }

    /// col[dst] -= k · col[src]
    fn sub_col_multiple(&mut self, dst: usize, src: usize, k: &T) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self[(i, src)].clone();
            if !s.is_zero() {
                self[(i, dst)] = self[(i, dst)].clone() - k.clone() * s;
            }
        }
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

/// Row-style Hermite normal form `U·M = H`.
#[derive(Clone, Debug)]
pub struct Hermite<T> {
    pub h: Matrix<T>,
    pub u: Matrix<T>,
    /// Pivot column of each nonzero row of `h`, in row order.
    pub pivots: Vec<usize>,
}

/// Row-style Hermite normal form: echelon, positive pivots, entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form<T: IntegerScalar>(m: &Matrix<T>) -> Hermite<T> {
    let (rows, cols) = (m.rows, m.cols);
    let mut h = m.clone();
    let mut u = Matrix::identity(rows);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let best = (r..rows)
                .filter(|&i| !h[(i, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(p) = best else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = h[(i, col)].div_floor(&h[(r, col)]);
                h.sub_row_multiple(i, r, &q);
                u.sub_row_multiple(i, r, &q);
                if !h[(i, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(r, col)].is_zero() {
            continue;
        }
        if h[(r, col)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        for i in 0..r {
            let q = h[(i, col)].div_floor(&h[(r, col)]);
            h.sub_row_multiple(i, r, &q);
            u.sub_row_multiple(i, r, &q);
        }
        pivots.push(col);
        r += 1;
    }
    Hermite { h, u, pivots }
}

/// Smith normal form `U·M·V = D`.
#[derive(Clone, Debug)]
pub struct Smith<T> {
    pub u: Matrix<T>,
    /// Inverse of `u`, accumulated alongside it.
    pub u_inv: Matrix<T>,
    pub d: Matrix<T>,
    pub v: Matrix<T>,
    /// Number of nonzero diagonal entries; they occupy the leading positions.
    pub rank: usize,
}

impl<T: IntegerScalar> Smith<T> {
    pub fn diagonal(&self) -> Vec<T> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }
}

/// Smith normal form by iterated gcd elimination with explicit transforms.
pub fn smith_normal_form<T: IntegerScalar>(m: &Matrix<T>) -> Smith<T> {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = Matrix::identity(rows);
    let mut u_inv = Matrix::identity(rows);
    let mut v = Matrix::identity(cols);
    let mut rank = 0;

    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { u, u_inv, d, v, rank };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            u_inv.swap_cols(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = d[(i, t)].div_floor(&d[(t, t)]);
                d.sub_row_multiple(i, t, &q);
                u.sub_row_multiple(i, t, &q);
                // inverse op: col_t += q col_i
                u_inv.sub_col_multiple(t, i, &(-q));
                if !d[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = d[(t, j)].div_floor(&d[(t, t)]);
                d.sub_col_multiple(j, t, &q);
                v.sub_col_multiple(j, t, &q);
                if !d[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pull in any row whose entries the pivot does not divide
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&d[(t, t)])));
            match offender {
                Some(i) => {
                    // row_t += row_i
                    d.sub_row_multiple(t, i, &(-T::one()));
                    u.sub_row_multiple(t, i, &(-T::one()));
                    u_inv.sub_col_multiple(i, t, &T::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
            u_inv.negate_col(t);
        }
        rank += 1;
    }
    Smith { u, u_inv, d, v, rank }
}

/// Canonical presentation `ℤ^rank ⊕ ⊕ ℤ/d_i` of a finitely generated
/// abelian group, with the unimodular change of basis that realizes it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbGroupPresentation<T> {
    pub rank: usize,
    /// Invariant factors `d_1 | d_2 | …`, each at least 2.
    pub torsion: Vec<T>,
    /// Unimodular transform from raw coordinates to SNF coordinates.
    pub basis_change: Matrix<T>,
    basis_change_inv: Matrix<T>,
    /// Full SNF diagonal, padded with zeros to the ambient dimension.
    diagonal: Vec<T>,
}

impl<T: IntegerScalar> AbGroupPresentation<T> {
    /// Ambient dimension of the raw coordinates.
    pub fn ambient_dim(&self) -> usize {
        self.diagonal.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> T {
        self.torsion.iter().fold(T::one(), |acc, d| acc * d.clone())
    }

    /// Coordinates in the canonical decomposition: torsion coordinates first
    /// (each reduced modulo its factor), then free coordinates.
    pub fn canonical_coordinates(&self, raw: &[T]) -> Vec<T> {
        let y = self.basis_change.mul_vec(raw);
        let mut out = Vec::with_capacity(self.torsion.len() + self.rank);
        for (yi, di) in y.iter().zip(&self.diagonal) {
            if di.is_zero() || di.is_one() {
                continue;
            }
            out.push(yi.mod_floor(di));
        }
        for (yi, di) in y.iter().zip(&self.diagonal) {
            if di.is_zero() {
                out.push(yi.clone());
            }
        }
        out
    }

    /// Raw vectors of the canonical generators, torsion generators first.
    pub fn generators(&self) -> Vec<Vec<T>> {
        let mut gens = Vec::new();
        for (i, di) in self.diagonal.iter().enumerate() {
            if !di.is_zero() && !di.is_one() {
                gens.push(self.basis_change_inv.column(i));
            }
        }
        for (i, di) in self.diagonal.iter().enumerate() {
            if di.is_zero() {
                gens.push(self.basis_change_inv.column(i));
            }
        }
        gens
    }
}

impl<T: IntegerScalar> fmt::Display for AbGroupPresentation<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for d in &self.torsion {
            parts.push(format!("Z/{d}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Presents `ℤ^rows / colspan(M)`.
pub fn cokernel<T: IntegerScalar>(m: &Matrix<T>) -> AbGroupPresentation<T> {
    let snf = smith_normal_form(m);
    let n = m.rows;
    let mut diagonal: Vec<T> = snf.diagonal();
    diagonal.resize(n, T::zero());
    let torsion = diagonal
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect();
    let rank = diagonal.iter().filter(|d| d.is_zero()).count();
    AbGroupPresentation {
        rank,
        torsion,
        basis_change: snf.u,
        basis_change_inv: snf.u_inv,
        diagonal,
    }
}

/// Columns form a ℤ-basis of `{x ∈ ℤ^cols : M·x = 0}`.
pub fn kernel_basis<T: IntegerScalar>(m: &Matrix<T>) -> Matrix<T> {
    let hnf = hermite_normal_form(&m.transpose());
    let r = hnf.pivots.len();
    let n = m.cols;
    let cols: Vec<Vec<T>> = (r..n).map(|i| hnf.u.row(i).to_vec()).collect();
    Matrix::from_columns(&cols, n)
}

/// An integer solution of `M·x = b`, or `None` when there is none.
pub fn solve_integer<T: IntegerScalar>(m: &Matrix<T>, b: &[T]) -> Option<Vec<T>> {
    assert_eq!(m.rows, b.len(), "dimension mismatch");
    let snf = smith_normal_form(m);
    let c = snf.u.mul_vec(b);
    let mut y = vec![T::zero(); m.cols];
    for (i, ci) in c.iter().enumerate() {
        if i < snf.rank {
            let di = &snf.d[(i, i)];
            if !ci.is_multiple_of(di) {
                return None;
            }
            y[i] = ci.div_floor(di);
        } else if !ci.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// Exact determinant (Bareiss fraction-free elimination).
pub fn determinant<T: IntegerScalar>(m: &Matrix<T>) -> T {
    assert_eq!(m.rows, m.cols, "determinant of a non-square matrix");
    let n = m.rows;
    if n == 0 {
        return T::one();
    }
    let mut a = m.clone();
    let mut sign = T::one();
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[(i, j)].clone() * a[(k, k)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                a[(i, j)] = num.div_floor(&prev);
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * a[(n - 1, n - 1)].clone()
}

/// A sublattice of `ℤ^n`, kept as the nonzero rows of a row-style HNF.
///
/// Reduction against it is canonical: two vectors are congruent modulo the
/// lattice exactly when their reductions coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice<T> {
    dim: usize,
    basis: Matrix<T>,
    pivots: Vec<usize>,
}

impl<T: IntegerScalar> Lattice<T> {
    pub fn new(dim: usize, generators: Vec<Vec<T>>) -> Self {
        let m = Matrix::from_rows(generators, dim);
        let hnf = hermite_normal_form(&m);
        let r = hnf.pivots.len();
        let rows: Vec<Vec<T>> = (0..r).map(|i| hnf.h.row(i).to_vec()).collect();
        Self {
            dim,
            basis: Matrix::from_rows(rows, dim),
            pivots: hnf.pivots,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// HNF basis rows.
    pub fn basis(&self) -> &Matrix<T> {
        &self.basis
    }

    pub fn reduce(&self, v: &mut [T]) {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        for (i, &p) in self.pivots.iter().enumerate() {
            if v[p].is_zero() {
                continue;
            }
            let q = v[p].div_floor(&self.basis[(i, p)]);
            if q.is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate().skip(p) {
                let b = &self.basis[(i, j)];
                if !b.is_zero() {
                    *x = x.clone() - q.clone() * b.clone();
                }
            }
        }
    }

    /// Like [`Lattice::reduce`] but with pivot residues in `(−d/2, d/2]`.
    /// Also canonical; used for display.
    pub fn reduce_balanced(&self, v: &mut [T]) {
        assert_eq!(v.len(), self.dim, "dimension mismatch");
        let two = T::one() + T::one();
        for (i, &p) in self.pivots.iter().enumerate() {
            let d = &self.basis[(i, p)];
            let mut q = v[p].div_floor(d);
            if (v[p].clone() - q.clone() * d.clone()) * two.clone() > d.clone() {
                q = q + T::one();
            }
            if q.is_zero() {
                continue;
            }
            for (j, x) in v.iter_mut().enumerate().skip(p) {
                let b = &self.basis[(i, j)];
                if !b.is_zero() {
                    *x = x.clone() - q.clone() * b.clone();
                }
            }
        }
    }

    pub fn contains(&self, v: &[T]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// True when the lattice is all of `ℤ^n`.
    pub fn is_full(&self) -> bool {
        self.rank() == self.dim && self.pivots.iter().enumerate().all(|(i, &p)| self.basis[(i, p)].is_one())
    }

    /// `ℤ^n / self`.
    pub fn quotient(&self) -> AbGroupPresentation<T> {
        cokernel(&self.basis.transpose())
    }

    /// Lattice spanned by `self` together with extra generators.
    pub fn extended(&self, extra: Vec<Vec<T>>) -> Self {
        let mut gens = self.basis.row_vecs();
        gens.extend(extra);
        Self::new(self.dim, gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type M = Matrix<BigInt>;

    fn mat(rows: &[&[i64]]) -> M {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cols,
        )
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn is_hermite(h: &M) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero_row = false;
        for i in 0..h.rows() {
            let p = (0..h.cols()).find(|&j| !h[(i, j)].is_zero());
            match p {
                None => seen_zero_row = true,
                Some(p) => {
                    if seen_zero_row || last_pivot.is_some_and(|lp| p <= lp) {
                        return false;
                    }
                    if !h[(i, p)].is_positive() {
                        return false;
                    }
                    for k in 0..i {
                        if h[(k, p)].is_negative() || h[(k, p)] >= h[(i, p)] {
                            return false;
                        }
                    }
                    last_pivot = Some(p);
                }
            }
        }
        true
    }

    #[test]
    fn hnf_identity() {
        let id = mat(&[&[1, 0], &[0, 1]]);
        let r = hermite_normal_form(&id);
        assert_eq!(r.h, id);
        assert_eq!(r.u, id);
    }

    #[test]
    fn hnf_column_vector_takes_gcd() {
        let r = hermite_normal_form(&mat(&[&[4], &[6]]));
        assert_eq!(r.h, mat(&[&[2], &[0]]));
        assert_eq!(r.u.mul(&mat(&[&[4], &[6]])), r.h);
    }

    /// Row lattice membership for a nonsingular square integer matrix, done
    /// independently with exact rationals.
    fn in_row_lattice(basis: &M, v: &[BigInt]) -> bool {
        let n = basis.rows();
        let mut a: Vec<Vec<BigRational>> = (0..n)
            .map(|j| {
                let mut row: Vec<BigRational> =
                    (0..n).map(|i| BigRational::from(basis[(i, j)].clone())).collect();
                row.push(BigRational::from(v[j].clone()));
                row
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero()).expect("singular");
            a.swap(c, p);
            let piv = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x = x.clone() / piv.clone();
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let f = a[r][c].clone();
                    let src = a[c].clone();
                    for (x, s) in a[r].iter_mut().zip(src) {
                        *x = x.clone() - f.clone() * s;
                    }
                }
            }
        }
        a.iter().all(|row| row[n].is_integer())
    }

    #[test]
    fn hnf_two_by_two_matches_exhaustive_oracle() {
        let m = mat(&[&[2, 4], &[0, 3]]);
        // Oracle: enumerate every upper-triangular candidate satisfying the
        // defining conditions and keep those generating the same lattice.
        let mut found = Vec::new();
        for a in 1..=6i64 {
            for c in 1..=6i64 {
                for b in 0..c {
                    let cand = mat(&[&[a, b], &[0, c]]);
                    let same = (0..2).all(|i| in_row_lattice(&m, cand.row(i)))
                        && (0..2).all(|i| in_row_lattice(&cand, m.row(i)));
                    if same {
                        found.push(cand);
                    }
                }
            }
        }
        assert_eq!(found.len(), 1, "HNF must be unique");
        let r = hermite_normal_form(&m);
        assert_eq!(r.h, found[0]);
        assert_eq!(r.h, mat(&[&[2, 1], &[0, 3]]));
    }

    #[test]
    fn hnf_empty_passes_through() {
        let m: M = Matrix::zeros(0, 3);
        let r = hermite_normal_form(&m);
        assert_eq!(r.h.rows(), 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn snf_examples() {
        let z = smith_normal_form(&mat(&[&[0, 0], &[0, 0]]));
        assert!(z.d.is_zero());
        assert_eq!(z.rank, 0);

        // d_1 = gcd of entries = 2, d_1·d_2 = gcd of 2×2 minors = 24
        let s = smith_normal_form(&mat(&[&[6, 0], &[0, 4]]));
        assert_eq!(s.diagonal(), ints(&[2, 12]));

        let s = smith_normal_form(&mat(&[&[3]]));
        assert_eq!(s.diagonal(), ints(&[3]));
    }

    #[test]
    fn cokernel_examples() {
        let g = cokernel(&mat(&[&[2]]));
        assert_eq!((g.rank, g.torsion.clone()), (0, ints(&[2])));

        let g = cokernel(&Matrix::<BigInt>::zeros(2, 0));
        assert_eq!((g.rank, g.torsion.len()), (2, 0));

        let g = cokernel(&mat(&[&[1, 0], &[0, 6]]));
        assert_eq!((g.rank, g.torsion.clone()), (0, ints(&[6])));
        assert_eq!(g.to_string(), "Z/6");
    }

    #[test]
    fn kernel_examples() {
        let k = kernel_basis(&mat(&[&[1, -1]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        assert!(v == ints(&[1, 1]) || v == ints(&[-1, -1]));

        assert_eq!(kernel_basis(&mat(&[&[1, 0], &[0, 1]])).cols(), 0);

        let k = kernel_basis(&mat(&[&[2, 4]]));
        assert_eq!(k.cols(), 1);
        let v = k.column(0);
        // substitution and saturation: primitive vector orthogonal to (2,4)
        assert!(v == ints(&[2, -1]) || v == ints(&[-2, 1]));
    }

    #[test]
    fn solve_examples() {
        assert_eq!(solve_integer(&mat(&[&[2]]), &ints(&[4])), Some(ints(&[2])));
        assert_eq!(solve_integer(&mat(&[&[2]]), &ints(&[3])), None);
        assert_eq!(
            solve_integer(&mat(&[&[1, 2], &[0, 3]]), &ints(&[5, 3])),
            Some(ints(&[3, 1]))
        );
    }

    #[test]
    fn balanced_reduction() {
        let lat = Lattice::new(2, vec![ints(&[3, 1]), ints(&[0, 4])]);
        let mut v = ints(&[2, 0]);
        lat.reduce_balanced(&mut v);
        assert_eq!(v, ints(&[-1, -1]));
        let mut w = ints(&[5, 1]);
        lat.reduce_balanced(&mut w);
        assert_eq!(w, v);
    }

    #[test]
    fn lattice_reduction_is_canonical() {
        let l = Lattice::new(2, vec![ints(&[2, 1]), ints(&[0, 3])]);
        let mut a = ints(&[5, 7]);
        let mut b = ints(&[5 - 2 * 3, 7 - 3 - 3 * 4]);
        l.reduce(&mut a);
        l.reduce(&mut b);
        assert_eq!(a, b);
        assert!(l.contains(&ints(&[2, 4])));
        assert!(!l.contains(&ints(&[1, 0])));
        assert!(!l.is_full());
        assert_eq!(l.quotient().torsion, ints(&[6]));
        assert!(Lattice::new(2, vec![ints(&[1, 5]), ints(&[0, 1])]).is_full());
    }

    #[test]
    fn generic_over_machine_integers() {
        let m: Matrix<i128> = Matrix::from_rows(vec![vec![6, 0], vec![0, 4]], 2);
        assert_eq!(smith_normal_form(&m).diagonal(), vec![2, 12]);
        assert_eq!(determinant(&m), 24);
    }

    fn small_matrix() -> impl Strategy<Value = M> {
        (1usize..=8, 1usize..=8).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-6i64..=6, r * c)
                .prop_map(move |v| Matrix::new(r, c, v.into_iter().map(BigInt::from).collect()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn hnf_transform_is_unimodular(m in small_matrix()) {
            let r = hermite_normal_form(&m);
            prop_assert_eq!(r.u.mul(&m), r.h.clone());
            prop_assert_eq!(determinant(&r.u).abs(), BigInt::from(1));
            prop_assert!(is_hermite(&r.h));
            let again = hermite_normal_form(&r.h);
            prop_assert_eq!(again.h, r.h);
        }

        #[test]
        fn snf_transforms_are_unimodular(m in small_matrix()) {
            let s = smith_normal_form(&m);
            prop_assert_eq!(s.u.mul(&m).mul(&s.v), s.d.clone());
            prop_assert_eq!(determinant(&s.u).abs(), BigInt::from(1));
            prop_assert_eq!(determinant(&s.v).abs(), BigInt::from(1));
            prop_assert_eq!(s.u.mul(&s.u_inv), Matrix::identity(m.rows()));
            let diag = s.diagonal();
            for i in 0..diag.len() {
                for j in 0..diag.len() {
                    if i != j {
                        prop_assert!(s.d[(i, j)].is_zero());
                    }
                }
            }
            for w in diag.windows(2) {
                if !w[0].is_zero() {
                    prop_assert!(w[1].is_multiple_of(&w[0]));
                } else {
                    prop_assert!(w[1].is_zero());
                }
            }
        }

        #[test]
        fn cokernel_torsion_order_matches_diagonal(m in small_matrix()) {
            let g = cokernel(&m);
            let s = smith_normal_form(&m);
            let prod = s.diagonal().into_iter().filter(|d| !d.is_zero())
                .fold(BigInt::from(1), |a, d| a * d);
            prop_assert_eq!(g.torsion_order(), prod);
            for w in g.torsion.windows(2) {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
            prop_assert_eq!(g.rank, m.rows() - s.rank);
        }

        #[test]
        fn solve_recovers_consistent_systems(m in small_matrix(), seed in proptest::collection::vec(-4i64..=4, 8)) {
            let x: Vec<BigInt> = seed.into_iter().take(m.cols()).map(BigInt::from).collect();
            prop_assume!(x.len() == m.cols());
            let b = m.mul_vec(&x);
            let sol = solve_integer(&m, &b);
            prop_assert!(sol.is_some());
            prop_assert_eq!(m.mul_vec(&sol.unwrap()), b);
        }

        #[test]
        fn kernel_is_annihilated(m in small_matrix()) {
            let k = kernel_basis(&m);
            prop_assert!(m.mul(&k).is_zero());
            prop_assert_eq!(k.cols(), m.cols() - smith_normal_form(&m).rank);
        }

        #[test]
        fn reductions_are_canonical(m in small_matrix(), coeffs in proptest::collection::vec(-4i64..=4, 16)) {
            let lat = Lattice::new(m.cols(), m.row_vecs());
            let v: Vec<BigInt> = coeffs.iter().take(m.cols()).map(|c| BigInt::from(*c)).collect();
            prop_assume!(v.len() == m.cols());
            let mut w = v.clone();
            for (k, row) in m.row_vecs().iter().enumerate() {
                let c = BigInt::from(coeffs[(k + 8) % 16]);
                for (a, b) in w.iter_mut().zip(row) {
                    *a += &c * b;
                }
            }
            let (mut a, mut b) = (v.clone(), w.clone());
            lat.reduce(&mut a);
            lat.reduce(&mut b);
            prop_assert_eq!(&a, &b);
            let (mut a2, mut b2) = (v, w);
            lat.reduce_balanced(&mut a2);
            lat.reduce_balanced(&mut b2);
            prop_assert_eq!(&a2, &b2);
            let diff: Vec<BigInt> = a.iter().zip(&a2).map(|(x, y)| x - y).collect();
            prop_assert!(lat.contains(&diff));
        }
    }
}
