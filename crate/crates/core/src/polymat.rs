//! Matrices of univariate polynomials: products, degree profiles, (shifted)
//! Popov normal forms, division by a reduced basis and determinants.
//!
//! Pivot convention: the pivot of a column is the *largest* row index among
//! entries reaching the column's shifted degree. With it, a matrix is in weak
//! Popov form when every column's pivot sits on the diagonal.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::interp::interpolate;
use crate::linalg::Matrix;
use crate::poly::{Poly, MUL_NTT_THRESHOLD};

/// Which variable the entries are polynomials in (informational).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
}

/// Integer weights on the rows of a matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shift(pub Vec<i64>);

impl Shift {
    pub fn zero(n: usize) -> Self {
        Shift(vec![0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Poly>,
    var: Var,
}

fn dim_err(what: &str, a: (usize, usize), b: (usize, usize)) -> Error {
    Error::DimMismatch(format!("{what}: {}x{} vs {}x{}", a.0, a.1, b.0, b.1))
}

impl PolyMatrix {
    pub fn zero(field: Field, rows: usize, cols: usize, var: Var) -> Self {
        PolyMatrix { field, rows, cols, entries: vec![Poly::zero(field); rows * cols], var }
    }

    pub fn identity(field: Field, n: usize, var: Var) -> Self {
        let mut m = Self::zero(field, n, n, var);
        for i in 0..n {
            m.set(i, i, Poly::one(field));
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        var: Var,
        mut e: impl FnMut(usize, usize) -> Poly,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let p = e(i, j);
                assert_eq!(p.field(), field, "entry over a different field");
                entries.push(p);
            }
        }
        PolyMatrix { field, rows, cols, entries, var }
    }

    /// Rows of coefficient lists (low-to-high), convenient for small literals.
    pub fn from_coeff_rows(field: Field, var: Var, rows: &[Vec<Vec<i64>>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_fn(field, rows.len(), cols, var, |i, j| Poly::from_i64(field, &rows[i][j]))
    }

    pub fn from_constant(m: &Matrix, var: Var) -> Self {
        let f = m.field();
        Self::from_fn(f, m.rows(), m.cols(), var, |i, j| Poly::constant(f, m[(i, j)]))
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn var(&self) -> Var {
        self.var
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Poly {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, p: Poly) {
        assert_eq!(p.field(), self.field, "entry over a different field");
        self.entries[i * self.cols + j] = p;
    }

    pub fn column(&self, j: usize) -> Vec<Poly> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn set_column(&mut self, j: usize, col: &[Poly]) {
        assert_eq!(col.len(), self.rows);
        for (i, p) in col.iter().enumerate() {
            self.set(i, j, p.clone());
        }
    }

    pub fn swap_columns(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.entries.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// Submatrix of the given size starting at `(r0, c0)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> PolyMatrix {
        Self::from_fn(self.field, rows, cols, self.var, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn transpose(&self) -> PolyMatrix {
        Self::from_fn(self.field, self.cols, self.rows, self.var, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Poly::is_zero)
    }

    /// Largest entry degree; `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    /// Entry-wise evaluation.
    pub fn eval(&self, pt: FieldElement) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).eval(pt))
    }

    /// Column degrees (unshifted).
    pub fn column_degrees(&self) -> Result<Vec<usize>> {
        (0..self.cols)
            .map(|j| {
                (0..self.rows)
                    .filter_map(|i| self.get(i, j).degree())
                    .max()
                    .ok_or(Error::ZeroColumn(j))
            })
            .collect()
    }

    fn check_shift(&self, shift: &Shift) -> Result<()> {
        if shift.len() != self.rows {
            return Err(Error::DimMismatch(format!(
                "shift of length {} for {} rows",
                shift.len(),
                self.rows
            )));
        }
        Ok(())
    }

    /// Pivot `(row, shifted degree)` of column `j`, or `None` for a zero column.
    pub fn pivot(&self, j: usize, shift: &Shift) -> Option<(usize, i64)> {
        let mut best: Option<(usize, i64)> = None;
        for i in 0..self.rows {
            if let Some(d) = self.get(i, j).degree() {
                let sd = d as i64 + shift.0[i];
                if best.is_none_or(|(_, b)| sd >= b) {
                    best = Some((i, sd));
                }
            }
        }
        best
    }

    pub fn shifted_column_degrees(&self, shift: &Shift) -> Result<Vec<i64>> {
        self.check_shift(shift)?;
        (0..self.cols)
            .map(|j| self.pivot(j, shift).map(|p| p.1).ok_or(Error::ZeroColumn(j)))
            .collect()
    }

    /// Shifted leading matrix: entry `(i, j)` is the coefficient of
    /// `x^(d_j - s_i)` in `p_ij`, `d_j` the shifted column degree.
    pub fn leading_matrix(&self, shift: &Shift) -> Result<Matrix> {
        let d = self.shifted_column_degrees(shift)?;
        Ok(Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            let e = d[j] - shift.0[i];
            if e < 0 {
                0
            } else {
                self.get(i, j).coeff(e as usize)
            }
        }))
    }

    pub fn mul(&self, other: &PolyMatrix) -> Result<PolyMatrix> {
        if self.cols != other.rows {
            return Err(dim_err("product", (self.rows, self.cols), (other.rows, other.cols)));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let f = self.field;
        let la = self.entries.iter().map(Poly::len).max().unwrap_or(0);
        let lb = other.entries.iter().map(Poly::len).max().unwrap_or(0);
        if la == 0 || lb == 0 {
            return Ok(Self::zero(f, self.rows, other.cols, self.var));
        }
        let size = (la + lb - 1).next_power_of_two();
        if la.min(lb) < MUL_NTT_THRESHOLD || !f.supports_ntt(size) {
            return Ok(Self::from_fn(f, self.rows, other.cols, self.var, |i, j| {
                (0..self.cols).fold(Poly::zero(f), |acc, k| &acc + &(self.get(i, k) * other.get(k, j)))
            }));
        }
        let transform = |p: &Poly| {
            let mut v = p.coeffs().to_vec();
            v.resize(size, 0);
            f.ntt_in_place(&mut v, false).expect("size checked");
            v
        };
        let ta: Vec<Vec<u64>> = self.entries.iter().map(transform).collect();
        let tb: Vec<Vec<u64>> = other.entries.iter().map(transform).collect();
        Ok(Self::from_fn(f, self.rows, other.cols, self.var, |i, j| {
            let mut acc = vec![0; size];
            for k in 0..self.cols {
                let (a, b) = (&ta[i * self.cols + k], &tb[k * other.cols + j]);
                for t in 0..size {
                    acc[t] = f.add(acc[t], f.mul(a[t], b[t]));
                }
            }
            f.ntt_in_place(&mut acc, true).expect("size checked");
            Poly::from_reduced(f, acc)
        }))
    }

    pub fn mul_vec(&self, v: &[Poly]) -> Result<Vec<Poly>> {
        if v.len() != self.cols {
            return Err(dim_err("matrix-vector", (self.rows, self.cols), (v.len(), 1)));
        }
        let f = self.field;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).fold(Poly::zero(f), |acc, k| &acc + &(self.get(i, k) * &v[k])))
            .collect())
    }

    /// `col_dst -= c * x^k * col_src`.
    fn sub_shifted_column(&mut self, dst: usize, src: usize, c: FieldElement, k: usize) {
        for i in 0..self.rows {
            let s = self.get(i, src);
            if !s.is_zero() {
                let t = &self.get(i, dst).clone() - &s.scale(c).shift(k);
                self.entries[i * self.cols + dst] = t;
            }
        }
    }

    fn scale_column(&mut self, j: usize, c: FieldElement) {
        for i in 0..self.rows {
            let t = self.get(i, j).scale(c);
            self.entries[i * self.cols + j] = t;
        }
    }
}

/// Degree profile and normal-form membership of a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormReport {
    pub column_degrees: Vec<usize>,
    pub shifted_column_degrees: Vec<i64>,
    pub leading_matrix: Matrix,
    pub is_column_reduced: bool,
    pub is_weak_popov: bool,
    pub is_popov: bool,
    pub is_shifted_weak_popov: bool,
    pub is_shifted_popov: bool,
}

fn deg_or_neg(p: &Poly) -> i64 {
    p.degree().map_or(i64::MIN / 4, |d| d as i64)
}

fn satisfies_c1(p: &PolyMatrix, s: &[i64]) -> bool {
    let n = p.rows();
    (0..n).all(|j| {
        let djj = deg_or_neg(p.get(j, j)) + s[j];
        (0..n).all(|i| {
            let dij = deg_or_neg(p.get(i, j)) + s[i];
            i == j || if i > j { dij < djj } else { dij <= djj }
        })
    })
}

fn satisfies_c2(p: &PolyMatrix) -> bool {
    let n = p.rows();
    (0..n).all(|i| {
        let dii = deg_or_neg(p.get(i, i));
        p.get(i, i).lc() == 1 && (0..n).all(|j| j == i || deg_or_neg(p.get(i, j)) < dii)
    })
}

/// Column degrees, leading matrix and the (shifted) reduced / weak Popov /
/// Popov predicates. Popov-type predicates require a square matrix.
pub fn form_predicates(p: &PolyMatrix, shift: &Shift) -> Result<FormReport> {
    let column_degrees = p.column_degrees()?;
    let shifted_column_degrees = p.shifted_column_degrees(shift)?;
    let leading_matrix = p.leading_matrix(shift)?;
    let square = p.rows() == p.cols();
    let is_column_reduced = square && leading_matrix.det()? != 0;
    let zero = vec![0; p.rows()];
    let is_weak_popov = square && satisfies_c1(p, &zero);
    let is_shifted_weak_popov = square && satisfies_c1(p, &shift.0);
    let c2 = square && satisfies_c2(p);
    Ok(FormReport {
        column_degrees,
        shifted_column_degrees,
        leading_matrix,
        is_column_reduced,
        is_weak_popov,
        is_popov: is_weak_popov && c2,
        is_shifted_weak_popov,
        is_shifted_popov: is_shifted_weak_popov && c2,
    })
}

/// Shifted weak Popov form `W = P U` (pivots on the diagonal) by simple
/// transformations, and the unimodular `U` when `track` is set.
pub fn weak_popov(p: &PolyMatrix, shift: &Shift, track: bool) -> Result<(PolyMatrix, Option<PolyMatrix>)> {
    if p.rows() != p.cols() {
        return Err(Error::DimMismatch("weak Popov form of a non-square matrix".into()));
    }
    p.check_shift(shift)?;
    let n = p.cols();
    let f = p.field();
    let mut w = p.clone();
    let mut u = track.then(|| PolyMatrix::identity(f, n, p.var()));
    // owner[i] = column currently holding pivot row i
    loop {
        let mut owner: Vec<Option<usize>> = vec![None; n];
        let mut clash = None;
        for j in 0..n {
            let (i, _) = w.pivot(j, shift).ok_or(Error::SingularBasis)?;
            match owner[i] {
                Some(k) => {
                    clash = Some((i, k, j));
                    break;
                }
                None => owner[i] = Some(j),
            }
        }
        let Some((i, a, b)) = clash else {
            let mut perm: Vec<usize> = owner.into_iter().map(|o| o.expect("square, distinct pivots")).collect();
            // place pivot of row i in column i
            let mut out = PolyMatrix::zero(f, n, n, p.var());
            let mut uo = u.as_ref().map(|_| PolyMatrix::zero(f, n, n, p.var()));
            for (i, j) in perm.drain(..).enumerate() {
                out.set_column(i, &w.column(j));
                if let (Some(uo), Some(u)) = (uo.as_mut(), u.as_ref()) {
                    uo.set_column(i, &u.column(j));
                }
            }
            return Ok((out, uo));
        };
        let (da, db) = (w.get(i, a).degree().unwrap(), w.get(i, b).degree().unwrap());
        let (hi, lo) = if da >= db { (a, b) } else { (b, a) };
        let k = da.max(db) - da.min(db);
        let c = f.div(w.get(i, hi).lc(), w.get(i, lo).lc())?;
        w.sub_shifted_column(hi, lo, c, k);
        if let Some(u) = u.as_mut() {
            u.sub_shifted_column(hi, lo, c, k);
        }
    }
}

/// Division of `v` by a shifted weak Popov `w` (diagonal pivots):
/// `v = w q + r` with `deg r_i < deg w_ii` for every row.
fn reduce_by_weak_popov(v: &[Poly], w: &PolyMatrix, shift: &Shift) -> Result<(Vec<Poly>, Vec<Poly>)> {
    let n = w.rows();
    let f = w.field();
    let d: Vec<usize> = (0..n).map(|i| w.get(i, i).degree().ok_or(Error::SingularBasis)).collect::<Result<_>>()?;
    let inv_lc: Vec<FieldElement> = (0..n).map(|i| f.inv(w.get(i, i).lc())).collect::<Result<_>>()?;
    let mut r: Vec<Vec<FieldElement>> = v.iter().map(|p| p.coeffs().to_vec()).collect();
    let mut q: Vec<Vec<FieldElement>> = vec![Vec::new(); n];
    let top = |c: &mut Vec<FieldElement>| {
        while c.last() == Some(&0) {
            c.pop();
        }
        c.len().checked_sub(1)
    };
    loop {
        let mut best: Option<(usize, usize, i64)> = None;
        for (i, ri) in r.iter_mut().enumerate() {
            if let Some(di) = top(ri) {
                if di >= d[i] {
                    let sd = di as i64 + shift.0[i];
                    if best.is_none_or(|(_, _, b)| sd >= b) {
                        best = Some((i, di, sd));
                    }
                }
            }
        }
        let Some((i, di, _)) = best else { break };
        let k = di - d[i];
        let c = f.mul(r[i][di], inv_lc[i]);
        if q[i].len() <= k {
            q[i].resize(k + 1, 0);
        }
        q[i][k] = f.add(q[i][k], c);
        for (l, rl) in r.iter_mut().enumerate() {
            let e = w.get(l, i).coeffs();
            if e.is_empty() {
                continue;
            }
            if rl.len() < e.len() + k {
                rl.resize(e.len() + k, 0);
            }
            for (t, &et) in e.iter().enumerate() {
                rl[t + k] = f.sub(rl[t + k], f.mul(c, et));
            }
        }
    }
    Ok((
        q.into_iter().map(|c| Poly::from_reduced(f, c)).collect(),
        r.into_iter().map(|c| Poly::from_reduced(f, c)).collect(),
    ))
}

/// The unique shifted Popov basis of the column module of `p`.
pub fn popov(p: &PolyMatrix, shift: &Shift) -> Result<PolyMatrix> {
    let (w, _) = weak_popov(p, shift, false)?;
    popov_from_weak(&w, shift)
}

/// Shifted Popov form from a shifted weak Popov `w` with diagonal pivots.
pub fn popov_from_weak(w: &PolyMatrix, shift: &Shift) -> Result<PolyMatrix> {
    let n = w.rows();
    let f = w.field();
    let mut out = PolyMatrix::zero(f, n, n, w.var());
    for j in 0..n {
        let dj = w.get(j, j).degree().ok_or(Error::SingularBasis)?;
        let mut v = vec![Poly::zero(f); n];
        v[j] = Poly::monomial(f, 1, dj);
        let (_, r) = reduce_by_weak_popov(&v, w, shift)?;
        for (i, ri) in r.iter().enumerate() {
            out.set(i, j, &v[i] - ri);
        }
    }
    Ok(out)
}

/// Makes the diagonal of a weak Popov matrix monic.
pub fn normalize_diagonal(w: &mut PolyMatrix) -> Result<()> {
    for j in 0..w.cols() {
        let c = w.field().inv(w.get(j, j).lc())?;
        w.scale_column(j, c);
    }
    Ok(())
}

/// `v = R q + r` for a nonsingular `R`, with `r` reduced: for every row `i`,
/// `deg r_i` is below the pivot degree attached to row `i` in a weak Popov
/// form of `R`. `q` is expressed in terms of the columns of `R` itself.
pub fn mat_divrem(v: &[Poly], r: &PolyMatrix) -> Result<(Vec<Poly>, Vec<Poly>)> {
    if r.rows() != r.cols() || v.len() != r.rows() {
        return Err(dim_err("division", (r.rows(), r.cols()), (v.len(), 1)));
    }
    let shift = Shift::zero(r.rows());
    let (w, u) = weak_popov(r, &shift, true)?;
    let (qw, rem) = reduce_by_weak_popov(v, &w, &shift)?;
    let q = u.expect("tracked").mul_vec(&qw)?;
    Ok((q, rem))
}

fn det_cofactor(p: &PolyMatrix) -> Poly {
    let g = |i, j| p.get(i, j);
    match p.rows() {
        0 => Poly::one(p.field()),
        1 => g(0, 0).clone(),
        2 => &(g(0, 0) * g(1, 1)) - &(g(0, 1) * g(1, 0)),
        3 => {
            let m = |a: (usize, usize), b: (usize, usize), c: (usize, usize), d: (usize, usize)| {
                &(g(a.0, a.1) * g(b.0, b.1)) - &(g(c.0, c.1) * g(d.0, d.1))
            };
            let t0 = g(0, 0) * &m((1, 1), (2, 2), (1, 2), (2, 1));
            let t1 = g(0, 1) * &m((1, 0), (2, 2), (1, 2), (2, 0));
            let t2 = g(0, 2) * &m((1, 0), (2, 1), (1, 1), (2, 0));
            &(&t0 - &t1) + &t2
        }
        _ => unreachable!("cofactor expansion only used up to 3x3"),
    }
}

/// Exact determinant: cofactor expansion up to 3x3, otherwise evaluation at
/// `sum(column degrees) + 1` points and interpolation.
pub fn pm_det(p: &PolyMatrix) -> Result<Poly> {
    if p.rows() != p.cols() {
        return Err(Error::DimMismatch("determinant of a non-square matrix".into()));
    }
    if p.rows() <= 3 {
        return Ok(det_cofactor(p));
    }
    let f = p.field();
    let Ok(cdeg) = p.column_degrees() else {
        return Ok(Poly::zero(f));
    };
    let needed = cdeg.iter().sum::<usize>() + 1;
    if (needed as u64) > f.modulus() {
        return Err(Error::SmallField { needed });
    }
    let pts: Vec<u64> = (0..needed as u64).collect();
    let vals = pts.iter().map(|&t| p.eval(t).det()).collect::<Result<Vec<_>>>()?;
    interpolate(f, &pts, &vals)
}
