//! Exact integer and rational matrix arithmetic.
//!
//! Everything downstream (facet enumeration, box elements, Stanley-Reisner
//! quotients, the Jacobian oracle) runs on these routines, so they are all
//! exact: `BigInt` / `BigRational` scalars, fraction-free elimination on
//! integer rows, no floating point. Matrices are immutable after
//! construction and every operation is a pure function.

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::{One, Signed, Zero};

use crate::{Error, Result};

pub fn int(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Renders a rational as `a/b`, or just `a` when the denominator is one.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `a` or `a/b` with optional sign; the denominator must be nonzero.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::BadInput(format!("bad rational {s:?}")))?;
    let d: BigInt = match den {
        Some(d) => d
            .parse()
            .map_err(|_| Error::BadInput(format!("bad rational {s:?}")))?,
        None => BigInt::one(),
    };
    if d.is_zero() {
        return Err(Error::BadInput(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(n, d))
}

/// Dense row-major matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: Vec<Vec<BigInt>>, dim: usize) -> Self {
        let c = cols.len();
        assert!(cols.iter().all(|col| col.len() == dim), "ragged columns");
        let mut m = Self::zeros(dim, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
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

    pub fn at(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.at(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigInt::zero();
                for k in 0..self.cols {
                    acc += self.at(r, k) * other.at(k, c);
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn to_rational(&self) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect(),
        }
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(BigInt::one());
        }
        let mut a: Vec<Vec<BigInt>> = (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = -sign;
                    }
                    None => return Ok(BigInt::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev; // exact division (Bareiss)
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -det } else { det })
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().map(|d| d.abs().is_one()).unwrap_or(false)
    }
}

/// Smith decomposition `a = u * s * v` with `u`, `v` unimodular and `s`
/// diagonal with a divisibility chain `d_1 | d_2 | ...`.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols()))
            .map(|i| self.s.at(i, i).clone())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let mut s = a.clone();
    let mut u = IntMatrix::identity(a.rows());
    let mut v = IntMatrix::identity(a.cols());

    // row ops act on s from the left; u absorbs the inverse on its columns
    fn swap_rows(s: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize) {
        for c in 0..s.cols() {
            let (x, y) = (s.at(i, c).clone(), s.at(j, c).clone());
            s.set(i, c, y);
            s.set(j, c, x);
        }
        for r in 0..u.rows() {
            let (x, y) = (u.at(r, i).clone(), u.at(r, j).clone());
            u.set(r, i, y);
            u.set(r, j, x);
        }
    }
    fn swap_cols(s: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize) {
        for r in 0..s.rows() {
            let (x, y) = (s.at(r, i).clone(), s.at(r, j).clone());
            s.set(r, i, y);
            s.set(r, j, x);
        }
        for c in 0..v.cols() {
            let (x, y) = (v.at(i, c).clone(), v.at(j, c).clone());
            v.set(i, c, y);
            v.set(j, c, x);
        }
    }
    // rows (i,j) of s <- (x*ri + y*rj, -(b/g)*ri + (a/g)*rj), det 1
    #[allow(clippy::too_many_arguments)]
    fn bezout_rows(
        s: &mut IntMatrix,
        u: &mut IntMatrix,
        i: usize,
        j: usize,
        x: &BigInt,
        y: &BigInt,
        ag: &BigInt,
        bg: &BigInt,
    ) {
        for c in 0..s.cols() {
            let (p, q) = (s.at(i, c).clone(), s.at(j, c).clone());
            s.set(i, c, x * &p + y * &q);
            s.set(j, c, -(bg * &p) + ag * &q);
        }
        // u <- u * [[ag, -y], [bg, x]] on columns (i, j)
        for r in 0..u.rows() {
            let (p, q) = (u.at(r, i).clone(), u.at(r, j).clone());
            u.set(r, i, ag * &p + bg * &q);
            u.set(r, j, -(y * &p) + x * &q);
        }
    }
    #[allow(clippy::too_many_arguments)]
    fn bezout_cols(
        s: &mut IntMatrix,
        v: &mut IntMatrix,
        i: usize,
        j: usize,
        x: &BigInt,
        y: &BigInt,
        ag: &BigInt,
        bg: &BigInt,
    ) {
        for r in 0..s.rows() {
            let (p, q) = (s.at(r, i).clone(), s.at(r, j).clone());
            s.set(r, i, x * &p + y * &q);
            s.set(r, j, -(bg * &p) + ag * &q);
        }
        // v <- [[ag, bg], [-y, x]] * v on rows (i, j)
        for c in 0..v.cols() {
            let (p, q) = (v.at(i, c).clone(), v.at(j, c).clone());
            v.set(i, c, ag * &p + bg * &q);
            v.set(j, c, -(y * &p) + x * &q);
        }
    }
    // row j of s -= q * row i; u col i += q * col j
    fn add_row(s: &mut IntMatrix, u: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
        for c in 0..s.cols() {
            let val = s.at(j, c) - q * s.at(i, c);
            s.set(j, c, val);
        }
        for r in 0..u.rows() {
            let val = u.at(r, i) + q * u.at(r, j);
            u.set(r, i, val);
        }
    }
    fn add_col(s: &mut IntMatrix, v: &mut IntMatrix, i: usize, j: usize, q: &BigInt) {
        for r in 0..s.rows() {
            let val = s.at(r, j) - q * s.at(r, i);
            s.set(r, j, val);
        }
        for c in 0..v.cols() {
            let val = v.at(i, c) + q * v.at(j, c);
            v.set(i, c, val);
        }
    }
    fn negate_row(s: &mut IntMatrix, u: &mut IntMatrix, i: usize) {
        for c in 0..s.cols() {
            let val = -s.at(i, c);
            s.set(i, c, val);
        }
        for r in 0..u.rows() {
            let val = -u.at(r, i);
            u.set(r, i, val);
        }
    }

    let dim = s.rows().min(s.cols());
    let mut n = 0usize;
    while n < dim {
        // pull a nonzero entry into position (n, n)
        let mut found = false;
        'search: for r in n..s.rows() {
            for c in n..s.cols() {
                if !s.at(r, c).is_zero() {
                    if r != n {
                        swap_rows(&mut s, &mut u, n, r);
                    }
                    if c != n {
                        swap_cols(&mut s, &mut v, n, c);
                    }
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            break;
        }

        loop {
            // clear column n below the pivot
            for r in n + 1..s.rows() {
                if s.at(r, n).is_zero() {
                    continue;
                }
                let a = s.at(n, n).clone();
                let b = s.at(r, n).clone();
                if (&b % &a).is_zero() {
                    let q = &b / &a;
                    add_row(&mut s, &mut u, n, r, &q);
                } else {
                    let e = a.extended_gcd(&b);
                    let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
                    bezout_rows(&mut s, &mut u, n, r, &e.x, &e.y, &ag, &bg);
                }
            }
            // clear row n right of the pivot (may reintroduce column entries)
            let mut dirty = false;
            for c in n + 1..s.cols() {
                if s.at(n, c).is_zero() {
                    continue;
                }
                let a = s.at(n, n).clone();
                let b = s.at(n, c).clone();
                if (&b % &a).is_zero() {
                    let q = &b / &a;
                    add_col(&mut s, &mut v, n, c, &q);
                } else {
                    let e = a.extended_gcd(&b);
                    let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
                    bezout_cols(&mut s, &mut v, n, c, &e.x, &e.y, &ag, &bg);
                    dirty = true;
                }
            }
            if !dirty && (n + 1..s.rows()).all(|r| s.at(r, n).is_zero()) {
                break;
            }
        }

        // force divisibility of the remaining block by the pivot
        let mut needs_restart = false;
        'div: for r in n + 1..s.rows() {
            for c in n + 1..s.cols() {
                if !(s.at(r, c) % s.at(n, n)).is_zero() {
                    // fold row r into row n and redo the pivot step
                    let minus_one = -BigInt::one();
                    add_row(&mut s, &mut u, r, n, &minus_one);
                    needs_restart = true;
                    break 'div;
                }
            }
        }
        if needs_restart {
            continue;
        }
        if s.at(n, n).is_negative() {
            negate_row(&mut s, &mut u, n);
        }
        n += 1;
    }

    debug_assert_eq!(u.mul(&s).mul(&v), *a, "u*s*v must reconstruct the input");
    SmithDecomposition { u, s, v }
}

/// Dense row-major matrix over the rationals, every entry in lowest terms
/// (`BigRational` normalizes on construction).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_columns(cols: Vec<Vec<BigRational>>, dim: usize) -> Self {
        let c = cols.len();
        assert!(cols.iter().all(|col| col.len() == dim), "ragged columns");
        let mut m = Self::zeros(dim, c);
        for (j, col) in cols.into_iter().enumerate() {
            for (i, v) in col.into_iter().enumerate() {
                m.set(i, j, v);
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

    pub fn at(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigRational>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.at(r, c).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    if !self.at(r, k).is_zero() && !other.at(k, c).is_zero() {
                        acc += self.at(r, k) * other.at(k, c);
                    }
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    pub fn mat_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = BigRational::zero();
                for (k, x) in v.iter().enumerate() {
                    if !x.is_zero() {
                        acc += self.at(r, k) * x;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        SpanReducer::from_vectors(self.cols, (0..self.rows).map(|r| self.row(r).to_vec())).rank()
    }

    /// Columns of the returned matrix form a basis of the kernel.
    pub fn nullspace(&self) -> RatMatrix {
        let red = SpanReducer::from_vectors(self.cols, (0..self.rows).map(|r| self.row(r).to_vec()));
        let pivots = red.pivots().to_vec();
        let free: Vec<usize> = red.non_pivots();
        let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![BigRational::zero(); self.cols];
            v[f] = BigRational::one();
            for (row, &p) in red.basis_rows().iter().zip(pivots.iter()) {
                v[p] = -row[f].clone();
            }
            cols.push(v);
        }
        RatMatrix::from_columns(cols, self.cols)
    }

    /// A matrix-inverse via row reduction of `[self | I]`; `None` if singular.
    pub fn inverse(&self) -> Option<RatMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                for j in 0..n {
                    row.push(if j == r {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    });
                }
                row
            })
            .collect();
        let red = SpanReducer::from_vectors(2 * n, aug);
        if red.pivots() != (0..n).collect::<Vec<_>>().as_slice() {
            return None;
        }
        let rows: Vec<Vec<BigRational>> = red
            .basis_rows()
            .iter()
            .map(|row| row[n..].to_vec())
            .collect();
        Some(RatMatrix::from_rows(rows))
    }
}

pub fn rank_and_nullspace(a: &RatMatrix) -> (usize, RatMatrix) {
    let rank = a.rank();
    let ker = a.nullspace();
    debug_assert_eq!(rank + ker.cols(), a.cols());
    (rank, ker)
}

/// Solves `a * x = b` exactly; `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve_exact(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    assert_eq!(a.rows(), b.len(), "dimension mismatch");
    let aug: Vec<Vec<BigRational>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let red = SpanReducer::from_vectors(a.cols() + 1, aug);
    if red.pivots().contains(&a.cols()) {
        return None; // pivot in the rhs column
    }
    let mut x = vec![BigRational::zero(); a.cols()];
    for (row, &p) in red.basis_rows().iter().zip(red.pivots().iter()) {
        x[p] = row[a.cols()].clone();
    }
    Some(x)
}

/// Reduced row-echelon data for the span of a set of vectors.
///
/// Elimination is fraction-free on scaled integer rows (Bareiss-style
/// cross-multiplication with per-row content reduction) and only the final
/// stored rows are normalized back to pivot 1, which keeps intermediate
/// entries from blowing up.
#[derive(Debug, Clone)]
pub struct SpanReducer {
    ambient: usize,
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
}

fn scale_to_int(v: &[BigRational]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        if !x.is_zero() {
            lcm = lcm.lcm(x.denom());
        }
    }
    let mut row: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &row {
        if !x.is_zero() {
            g = g.gcd(x);
        }
    }
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
    row
}

impl SpanReducer {
    pub fn from_vectors<I>(ambient: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = Vec<BigRational>>,
    {
        // forward pass: integer echelon rows keyed by pivot column
        let mut basis: Vec<Vec<BigInt>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for v in vectors {
            assert_eq!(v.len(), ambient, "vector dimension mismatch");
            let mut row = scale_to_int(&v);
            for (b, &p) in basis.iter().zip(pivots.iter()) {
                if row[p].is_zero() {
                    continue;
                }
                let (bp, rp) = (b[p].clone(), row[p].clone());
                let g = bp.gcd(&rp);
                let (a, c) = (&bp / &g, &rp / &g);
                for j in 0..ambient {
                    row[j] = &row[j] * &a - &b[j] * &c;
                }
                let mut content = BigInt::zero();
                for x in &row {
                    if !x.is_zero() {
                        content = content.gcd(x);
                    }
                }
                if !content.is_zero() && !content.is_one() {
                    for x in row.iter_mut() {
                        *x = &*x / &content;
                    }
                }
            }
            if let Some(p) = row.iter().position(|x| !x.is_zero()) {
                let idx = pivots.partition_point(|&q| q < p);
                pivots.insert(idx, p);
                basis.insert(idx, row);
            }
        }
        // backward pass: eliminate pivot columns above, then normalize
        for i in (0..basis.len()).rev() {
            for j in i + 1..basis.len() {
                let p = pivots[j];
                if basis[i][p].is_zero() {
                    continue;
                }
                let (bp, rp) = (basis[j][p].clone(), basis[i][p].clone());
                let g = bp.gcd(&rp);
                let (a, c) = (&bp / &g, &rp / &g);
                let other = basis[j].clone();
                for k in 0..ambient {
                    basis[i][k] = &basis[i][k] * &a - &other[k] * &c;
                }
            }
        }
        let rows: Vec<Vec<BigRational>> = basis
            .into_iter()
            .zip(pivots.iter())
            .map(|(row, &p)| {
                let pivot = BigRational::from_integer(row[p].clone());
                row.into_iter()
                    .map(|x| BigRational::from_integer(x) / &pivot)
                    .collect()
            })
            .collect();
        SpanReducer {
            ambient,
            rows,
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn non_pivots(&self) -> Vec<usize> {
        let set: std::collections::HashSet<usize> = self.pivots.iter().copied().collect();
        (0..self.ambient).filter(|i| !set.contains(i)).collect()
    }

    pub fn basis_rows(&self) -> &[Vec<BigRational>] {
        &self.rows
    }

    /// Reduces `v` modulo the span: the result has zero at every pivot
    /// coordinate and equals `v` minus an element of the span.
    pub fn reduce(&self, mut v: Vec<BigRational>) -> Vec<BigRational> {
        assert_eq!(v.len(), self.ambient);
        for (row, &p) in self.rows.iter().zip(self.pivots.iter()) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            for j in 0..self.ambient {
                if !row[j].is_zero() {
                    let delta = &c * &row[j];
                    v[j] -= delta;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }
}

/// Basis of the intersection of two column spans inside `Q^dim`.
pub fn intersect_spans(
    dim: usize,
    a: &[Vec<BigRational>],
    b: &[Vec<BigRational>],
) -> Vec<Vec<BigRational>> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vec<BigRational>> = a.to_vec();
    cols.extend(b.iter().cloned());
    let m = RatMatrix::from_columns(cols, dim);
    let ker = m.nullspace();
    let mut out = Vec::new();
    for k in 0..ker.cols() {
        let coeffs = ker.column(k);
        let mut v = vec![BigRational::zero(); dim];
        for (i, ai) in a.iter().enumerate() {
            if coeffs[i].is_zero() {
                continue;
            }
            for (j, x) in ai.iter().enumerate() {
                let delta = &coeffs[i] * x;
                v[j] += delta;
            }
        }
        out.push(v);
    }
    // the combinations can be dependent; re-reduce to a basis
    let red = SpanReducer::from_vectors(dim, out);
    red.basis_rows().to_vec()
}

/// Rank over `F_p` for a fast precheck; `None` when some denominator is
/// divisible by `p`. Exact computations remain authoritative.
pub fn rank_mod_p(rows: &[Vec<BigRational>], cols: usize, p: u64) -> Option<usize> {
    fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = ((acc as u128 * b as u128) % p as u128) as u64;
            }
            b = ((b as u128 * b as u128) % p as u128) as u64;
            e >>= 1;
        }
        acc
    }
    let to_fp = |q: &BigRational| -> Option<u64> {
        let pb = BigInt::from(p);
        let num = ((q.numer() % &pb) + &pb) % &pb;
        let den = ((q.denom() % &pb) + &pb) % &pb;
        let num: u64 = num.try_into().ok()?;
        let den: u64 = den.try_into().ok()?;
        if den == 0 {
            return None;
        }
        Some(((num as u128 * pow_mod(den, p - 2, p) as u128) % p as u128) as u64)
    };
    let mut m: Vec<Vec<u64>> = Vec::with_capacity(rows.len());
    for row in rows {
        assert_eq!(row.len(), cols);
        let r: Option<Vec<u64>> = row.iter().map(to_fp).collect();
        m.push(r?);
    }
    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot_row) = (rank..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let inv = pow_mod(m[rank][col], p - 2, p);
        for j in col..cols {
            m[rank][j] = ((m[rank][j] as u128 * inv as u128) % p as u128) as u64;
        }
        for r in 0..m.len() {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                for j in col..cols {
                    let sub = (f as u128 * m[rank][j] as u128) % p as u128;
                    m[r][j] = ((m[r][j] as u128 + p as u128 - sub) % p as u128) as u64;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    Some(rank)
}

pub fn is_prime_u32(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
