//! Dense bivariate polynomials with explicit bidegree bounds.
//!
//! A [`BiPoly`] also serves as a polynomial in `x` with coefficients in
//! `K[y]/(y^k)`: products go through [`BiPoly::mul`] followed by
//! [`BiPoly::truncate_y`].

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::poly::{mul_coeffs, Poly};

/// `sum c[i][j] x^i y^j` with `i < xbound`, `j < ybound`, stored x-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiPoly {
    field: Field,
    xbound: usize,
    ybound: usize,
    grid: Vec<FieldElement>,
}

impl BiPoly {
    pub fn zero(field: Field, xbound: usize, ybound: usize) -> Self {
        BiPoly { field, xbound, ybound, grid: vec![0; xbound * ybound] }
    }

    pub fn from_fn(
        field: Field,
        xbound: usize,
        ybound: usize,
        mut c: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut grid = Vec::with_capacity(xbound * ybound);
        for i in 0..xbound {
            for j in 0..ybound {
                grid.push(field.elem(c(i, j)));
            }
        }
        BiPoly { field, xbound, ybound, grid }
    }

    /// Builds from the coefficients of `y^0, y^1, ...`, each a polynomial in `x`.
    pub fn from_y_coeffs(field: Field, xbound: usize, ys: &[Poly]) -> Result<Self> {
        let mut b = Self::zero(field, xbound, ys.len());
        for (j, p) in ys.iter().enumerate() {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if p.len() > xbound {
                return Err(Error::DegreeOverflow { degree: p.len() - 1, bound: xbound.saturating_sub(1) });
            }
            for (i, &c) in p.coeffs().iter().enumerate() {
                b.grid[i * b.ybound + j] = c;
            }
        }
        Ok(b)
    }

    /// Builds from the coefficients of `x^0, x^1, ...`, each a polynomial in `y`.
    pub fn from_x_coeffs(field: Field, ybound: usize, xs: &[Poly]) -> Result<Self> {
        let mut b = Self::zero(field, xs.len(), ybound);
        for (i, p) in xs.iter().enumerate() {
            if p.field() != field {
                return Err(Error::FieldMismatch);
            }
            if p.len() > ybound {
                return Err(Error::DegreeOverflow { degree: p.len() - 1, bound: ybound.saturating_sub(1) });
            }
            b.grid[i * ybound..i * ybound + p.len()].copy_from_slice(p.coeffs());
        }
        Ok(b)
    }

    /// A polynomial in `x` only.
    pub fn from_x_poly(p: &Poly, xbound: usize) -> Result<Self> {
        Self::from_y_coeffs(p.field(), xbound, std::slice::from_ref(p))
    }

    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    #[inline]
    pub fn xbound(&self) -> usize {
        self.xbound
    }

    #[inline]
    pub fn ybound(&self) -> usize {
        self.ybound
    }

    /// Coefficient of `x^i y^j`; zero outside the bounds.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        if i < self.xbound && j < self.ybound {
            self.grid[i * self.ybound + j]
        } else {
            0
        }
    }

    /// Panics outside the bounds.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert!(i < self.xbound && j < self.ybound, "index outside bidegree bounds");
        self.grid[i * self.ybound + j] = self.field.elem(v);
    }

    pub fn is_zero(&self) -> bool {
        self.grid.iter().all(|&c| c == 0)
    }

    /// Coefficient of `y^j` as a polynomial in `x`.
    pub fn y_coeff(&self, j: usize) -> Poly {
        let v = (0..self.xbound).map(|i| self.get(i, j)).collect();
        Poly::from_reduced(self.field, v)
    }

    /// Coefficient of `x^i` as a polynomial in `y`.
    pub fn x_coeff(&self, i: usize) -> Poly {
        if i >= self.xbound {
            return Poly::zero(self.field);
        }
        Poly::from_reduced(self.field, self.grid[i * self.ybound..(i + 1) * self.ybound].to_vec())
    }

    pub fn y_coeffs(&self) -> Vec<Poly> {
        (0..self.ybound).map(|j| self.y_coeff(j)).collect()
    }

    /// Largest `x`-degree present, `None` if zero.
    pub fn xdegree(&self) -> Option<usize> {
        (0..self.xbound).rev().find(|&i| (0..self.ybound).any(|j| self.get(i, j) != 0))
    }

    /// Largest `y`-degree present, `None` if zero.
    pub fn ydegree(&self) -> Option<usize> {
        (0..self.ybound).rev().find(|&j| (0..self.xbound).any(|i| self.get(i, j) != 0))
    }

    /// Same polynomial with new bounds; errors if a nonzero coefficient would be dropped.
    pub fn with_bounds(&self, xbound: usize, ybound: usize) -> Result<Self> {
        if let Some(d) = self.xdegree() {
            if d >= xbound {
                return Err(Error::DegreeOverflow { degree: d, bound: xbound.saturating_sub(1) });
            }
        }
        if let Some(d) = self.ydegree() {
            if d >= ybound {
                return Err(Error::DegreeOverflow { degree: d, bound: ybound.saturating_sub(1) });
            }
        }
        Ok(self.resized(xbound, ybound))
    }

    /// Changes the bounds, discarding anything outside them.
    pub fn resized(&self, xbound: usize, ybound: usize) -> Self {
        Self::from_fn(self.field, xbound, ybound, |i, j| self.get(i, j))
    }

    /// Shrinks the bounds to the actual bidegree (at least 1 in each direction).
    pub fn trimmed(&self) -> Self {
        let xb = self.xdegree().map_or(1, |d| d + 1);
        let yb = self.ydegree().map_or(1, |d| d + 1);
        self.resized(xb, yb)
    }

    /// Reduction modulo `y^k`.
    pub fn truncate_y(&self, k: usize) -> Self {
        self.resized(self.xbound, k)
    }

    /// Reduction modulo `x^k`.
    pub fn truncate_x(&self, k: usize) -> Self {
        self.resized(k, self.ybound)
    }

    fn check(&self, other: &BiPoly) -> Result<()> {
        if self.field != other.field {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check(other)?;
        let f = self.field;
        let (xb, yb) = (self.xbound.max(other.xbound), self.ybound.max(other.ybound));
        Ok(Self::from_fn(f, xb, yb, |i, j| f.add(self.get(i, j), other.get(i, j))))
    }

    pub fn sub(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check(other)?;
        let f = self.field;
        let (xb, yb) = (self.xbound.max(other.xbound), self.ybound.max(other.ybound));
        Ok(Self::from_fn(f, xb, yb, |i, j| f.sub(self.get(i, j), other.get(i, j))))
    }

    pub fn scale(&self, c: FieldElement) -> BiPoly {
        let f = self.field;
        BiPoly {
            grid: self.grid.iter().map(|&v| f.mul(v, c)).collect(),
            ..self.clone()
        }
    }

    /// Multiplication by `x^k y^l`.
    pub fn shift(&self, k: usize, l: usize) -> BiPoly {
        let mut out = Self::zero(self.field, self.xbound + k, self.ybound + l);
        for i in 0..self.xbound {
            for j in 0..self.ybound {
                out.grid[(i + k) * out.ybound + j + l] = self.get(i, j);
            }
        }
        out
    }

    /// Packs along `z = x + y * stride` (y-major), `stride >= xbound`.
    fn pack(&self, stride: usize) -> Vec<FieldElement> {
        let mut v = vec![0; stride * self.ybound];
        for i in 0..self.xbound {
            for j in 0..self.ybound {
                v[j * stride + i] = self.grid[i * self.ybound + j];
            }
        }
        v
    }

    /// `sum c_ij z^(i + stride j)` as a univariate polynomial.
    pub(crate) fn kronecker_pack(&self, stride: usize) -> Poly {
        Poly::from_reduced(self.field, self.pack(stride))
    }

    /// Inverse of [`BiPoly::kronecker_pack`], keeping the given bounds.
    pub(crate) fn kronecker_unpack(p: &Poly, stride: usize, xbound: usize, ybound: usize) -> BiPoly {
        let mut out = Self::zero(p.field(), xbound, ybound);
        for (z, &c) in p.coeffs().iter().enumerate() {
            let (i, j) = (z % stride, z / stride);
            if i < xbound && j < ybound {
                out.grid[i * ybound + j] = c;
            }
        }
        out
    }

    /// Exact product via Kronecker substitution; bounds add (minus one).
    pub fn mul(&self, other: &BiPoly) -> Result<BiPoly> {
        self.check(other)?;
        let f = self.field;
        if self.xbound == 0 || self.ybound == 0 || other.xbound == 0 || other.ybound == 0 {
            return Ok(Self::zero(f, 0, 0));
        }
        let xb = self.xbound + other.xbound - 1;
        let yb = self.ybound + other.ybound - 1;
        let prod = mul_coeffs(&f, &self.pack(xb), &other.pack(xb));
        let mut out = Self::zero(f, xb, yb);
        for (z, &c) in prod.iter().enumerate() {
            let (j, i) = (z / xb, z % xb);
            if j < yb {
                out.grid[i * yb + j] = c;
            }
        }
        Ok(out)
    }

    /// Product in `(K[y]/(y^k))[x]`.
    pub fn mul_trunc_y(&self, other: &BiPoly, k: usize) -> Result<BiPoly> {
        Ok(self.truncate_y(k).mul(&other.truncate_y(k))?.truncate_y(k))
    }

    /// Product with a polynomial in `x` only.
    pub fn mul_x_poly(&self, p: &Poly) -> Result<BiPoly> {
        if p.is_zero() {
            return Ok(Self::zero(self.field, self.xbound, self.ybound));
        }
        self.mul(&Self::from_x_poly(p, p.len())?)
    }

    /// Each `y`-coefficient reduced modulo `f(x)`.
    pub fn rem_x(&self, f: &Poly) -> Result<BiPoly> {
        let n = f.degree().ok_or(Error::DivisionByZero)?;
        let ys = self
            .y_coeffs()
            .iter()
            .map(|c| c.rem(f))
            .collect::<Result<Vec<_>>>()?;
        Self::from_y_coeffs(self.field, n.max(1), &ys)
    }

    /// `y^(mu-1) A(x, 1/y)`; requires `ydegree < mu`.
    pub fn y_reverse(&self, mu: usize) -> Result<BiPoly> {
        if let Some(d) = self.ydegree() {
            if d >= mu {
                return Err(Error::DegreeOverflow { degree: d, bound: mu.saturating_sub(1) });
            }
        }
        Ok(Self::from_fn(self.field, self.xbound, mu, |i, j| self.get(i, mu - 1 - j)))
    }

    /// Applies [`Poly::slice`] to every `y`-coefficient: `count + 1` x-coefficients from `start`.
    pub fn x_slice(&self, start: usize, count: usize) -> BiPoly {
        Self::from_fn(self.field, count + 1, self.ybound, |i, j| self.get(start + i, j))
    }

    /// `sum_j coeff_j(x) t^j rem f` by Horner in `y`.
    pub fn eval_y(&self, t: &Poly, f: &Poly) -> Result<Poly> {
        if f.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let t = t.rem(f)?;
        let mut acc = Poly::zero(self.field);
        for j in (0..self.ybound).rev() {
            acc = (&acc.mulmod(&t, f)? + &self.y_coeff(j)).rem(f)?;
        }
        Ok(acc)
    }

    /// Rewrites `y^i`, `i = i0 + i1 mu + i2 mu^2`, as `y0^i0 y1^i1 y2^i2`.
    pub fn inverse_kronecker(&self, mu: usize) -> Result<MultiPoly3> {
        let cap = mu * mu * mu;
        let yb = self.ydegree().map_or(0, |d| d + 1);
        if yb > cap || mu == 0 {
            return Err(Error::BlockTooSmall { ybound: self.ybound, capacity: cap });
        }
        let mut out = MultiPoly3::zero(self.field, self.xbound, mu);
        for i in 0..self.xbound {
            for e in 0..yb {
                let c = self.get(i, e);
                if c != 0 {
                    out.set(i, e % mu, (e / mu) % mu, e / (mu * mu), c);
                }
            }
        }
        Ok(out)
    }
}

/// Coefficients over `(x, y0, y1, y2)` with bounds `(m, mu, mu, mu)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly3 {
    field: Field,
    m: usize,
    mu: usize,
    data: Vec<FieldElement>,
}

impl MultiPoly3 {
    pub fn zero(field: Field, m: usize, mu: usize) -> Self {
        MultiPoly3 { field, m, mu, data: vec![0; m * mu * mu * mu] }
    }

    #[inline]
    fn idx(&self, a: usize, i0: usize, i1: usize, i2: usize) -> usize {
        ((a * self.mu + i2) * self.mu + i1) * self.mu + i0
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn get(&self, a: usize, i0: usize, i1: usize, i2: usize) -> FieldElement {
        self.data[self.idx(a, i0, i1, i2)]
    }

    pub fn set(&mut self, a: usize, i0: usize, i1: usize, i2: usize, v: FieldElement) {
        let k = self.idx(a, i0, i1, i2);
        self.data[k] = self.field.elem(v);
    }

    /// The polynomial `s_{i1 i2}(x, y0) = sum_a sum_i0 c x^a y0^i0`.
    pub fn block(&self, i1: usize, i2: usize) -> BiPoly {
        BiPoly::from_fn(self.field, self.m, self.mu, |a, i0| self.get(a, i0, i1, i2))
    }

    /// Substitutes `(y0, y1, y2) = (y, y^mu, y^(mu^2))`.
    pub fn substitute(&self) -> BiPoly {
        let mu = self.mu;
        let mut out = BiPoly::zero(self.field, self.m, mu * mu * mu);
        for a in 0..self.m {
            for i2 in 0..mu {
                for i1 in 0..mu {
                    for i0 in 0..mu {
                        out.set(a, i0 + i1 * mu + i2 * mu * mu, self.get(a, i0, i1, i2));
                    }
                }
            }
        }
        out
    }
}
