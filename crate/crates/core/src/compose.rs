//! Modular composition `g(a) rem f`: baselines, bivariate composition through
//! the `A_j`, `B_j` tables, the full relation-matrix pipeline, and bivariate
//! multipoint evaluation built on top of it.

use std::time::{Duration, Instant};

use crate::bipoly::BiPoly;
use crate::error::{Error, NonGenericReason, Result};
use crate::field::FieldElement;
use crate::interp::{interpolate, multipoint_eval, vanishing_poly};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polymat::{PolyMatrix, Var};
use crate::relations::{
    ceil_div, mm_basis, nmu_basis, powers_ab_with, reduce_by_mm, PowersAB, RelationBasis,
};
use crate::truncated::{recover_shifted_truncations, truncated_powers};

/// `g(a) rem f` by Horner's rule; the reference for everything else.
pub fn horner_compose(g: &Poly, a: &Poly, f: &Poly) -> Result<Poly> {
    if f.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let a = a.rem(f)?;
    let mut acc = Poly::zero(f.field());
    for &c in g.coeffs().iter().rev() {
        acc = (&acc.mulmod(&a, f)? + &Poly::constant(f.field(), c)).rem(f)?;
    }
    Ok(acc)
}

/// Smallest `r` with `r * r >= n`.
pub fn ceil_sqrt(n: usize) -> usize {
    let mut r = (n as f64).sqrt() as usize;
    while r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Smallest `r` with `r^3 >= n`.
pub fn ceil_cbrt(n: usize) -> usize {
    let mut r = (n as f64).cbrt() as usize;
    while r * r * r < n {
        r += 1;
    }
    while r > 0 && (r - 1) * (r - 1) * (r - 1) >= n {
        r -= 1;
    }
    r
}

/// Smallest `r` with `r^4 >= n`.
pub fn ceil_root4(n: usize) -> usize {
    let s = ceil_sqrt(n);
    let mut r = ceil_sqrt(s);
    while r > 1 && (r - 1).pow(4) >= n {
        r -= 1;
    }
    while r.pow(4) < n {
        r += 1;
    }
    r
}

/// Brent–Kung baby steps / giant steps composition.
///
/// Blocks of `n = deg f` coefficients of `g` are handled one at a time and
/// combined by Horner's rule in `a^n`.
pub fn brent_kung_compose(g: &Poly, a: &Poly, f: &Poly) -> Result<Poly> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let fld = f.field();
    if n == 0 {
        return Ok(Poly::zero(fld));
    }
    let a = a.rem(f)?;
    let m = ceil_sqrt(n).max(1);
    let mut pw = Vec::with_capacity(m + 1);
    pw.push(Poly::one(fld));
    for k in 0..m {
        pw.push(pw[k].mulmod(&a, f)?);
    }
    let basis = Matrix::from_fn(fld, m, n, |r, c| pw[r].coeff(c));
    let giant = &pw[m];
    let block = |coeffs: &[FieldElement]| -> Result<Poly> {
        let rows = coeffs.len().div_ceil(m);
        let cm = Matrix::from_fn(fld, rows, m, |r, c| coeffs.get(r * m + c).copied().unwrap_or(0));
        let vals = cm.mul(&basis)?;
        let mut acc = Poly::zero(fld);
        for r in (0..rows).rev() {
            acc = (&acc.mulmod(giant, f)? + &Poly::new(fld, vals.row(r).to_vec())).rem(f)?;
        }
        Ok(acc)
    };
    let coeffs = g.coeffs();
    if coeffs.len() <= n {
        return block(coeffs);
    }
    let an = a.powmod(n as u64, f)?;
    let mut acc = Poly::zero(fld);
    for chunk in coeffs.chunks(n).rev() {
        acc = (&acc.mulmod(&an, f)? + &block(chunk)?).rem(f)?;
    }
    Ok(acc)
}

/// `G(x, a) rem f` by the Nüsken–Ziegler scheme: `G = Gbar(x, y, y^k)`,
/// all `gbar_i(x, a)` from one polynomial matrix product, then Horner in `a^k`.
pub fn nz_bivariate_compose(g: &BiPoly, a: &Poly, f: &Poly) -> Result<Poly> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let fld = f.field();
    if n == 0 || g.is_zero() {
        return Ok(Poly::zero(fld));
    }
    let g = g.trimmed();
    let (m, d) = (g.xbound(), g.ybound());
    let a = a.rem(f)?;
    let k = ceil_sqrt(d).max(1);
    let rows = d.div_ceil(k);
    let mut pw = Vec::with_capacity(k + 1);
    pw.push(Poly::one(fld));
    for j in 0..k {
        pw.push(pw[j].mulmod(&a, f)?);
    }
    // x^m-adic pieces of the baby steps
    let pieces = n.div_ceil(m);
    let lhs = PolyMatrix::from_fn(fld, rows, k, Var::X, |i, j| {
        if i * k + j < d { g.y_coeff(i * k + j) } else { Poly::zero(fld) }
    });
    let rhs = PolyMatrix::from_fn(fld, k, pieces, Var::X, |j, v| pw[j].range(v * m, m));
    let prod = lhs.mul(&rhs)?;
    let giant = &pw[k];
    let mut acc = Poly::zero(fld);
    for i in (0..rows).rev() {
        let mut gi = Poly::zero(fld);
        for v in (0..pieces).rev() {
            gi = &gi.shift(m) + prod.get(i, v);
        }
        acc = (&acc.mulmod(giant, f)? + &gi).rem(f)?;
    }
    Ok(acc)
}

/// `G(x, a) rem f` for `G` of `y`-bound at most `mu^3`, using the `A_j`, `B_j`
/// tables of `(f, a, mu)`.
pub fn bivariate_compose(g: &BiPoly, f: &Poly, a: &Poly, tables: &PowersAB) -> Result<Poly> {
    tables.check(f, a)?;
    let fld = f.field();
    let mu = tables.mu();
    let delta = tables.delta().max(1);
    let gbar = g.inverse_kronecker(mu)?;
    let m = g.xbound().max(1);
    let e = delta.div_ceil(mu);
    let px = m + e - 1;
    let py = 2 * mu - 1;
    // Step 1: s_(i2) = sum_(i1) s_(i1 i2) A_(i1) as one mu x mu product
    let smat = PolyMatrix::from_fn(fld, mu, mu, Var::X, |i2, i1| gbar.block(i1, i2).kronecker_pack(px));
    let amat = PolyMatrix::from_fn(fld, mu, mu, Var::X, |i1, v| {
        tables.a[i1].resized(delta, mu).x_slice(v * e, e - 1).kronecker_pack(px)
    });
    let prod = smat.mul(&amat)?;
    // Step 2: S = sum s_(i2) B_(i2)
    let mut s = BiPoly::zero(fld, 1, 1);
    for i2 in 0..mu {
        let mut si = BiPoly::zero(fld, 1, py);
        for v in 0..mu {
            let piece = BiPoly::kronecker_unpack(prod.get(i2, v), px, px, py);
            if !piece.is_zero() {
                si = si.add(&piece.shift(v * e, 0))?;
            }
        }
        if !si.is_zero() {
            s = s.add(&si.mul(&tables.b[i2])?)?;
        }
    }
    // Step 3: Horner in y at a
    s.eval_y(a, f)
}

/// Timed phases of one pipeline run, in execution order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimings {
    pub phases: Vec<(&'static str, Duration)>,
}

impl PhaseTimings {
    fn time<T>(&mut self, name: &'static str, f: impl FnOnce() -> Result<T>) -> Result<T> {
        let start = Instant::now();
        let out = f();
        self.phases.push((name, start.elapsed()));
        out
    }

    pub fn total(&self) -> Duration {
        self.phases.iter().map(|p| p.1).sum()
    }
}

/// Precomputation for repeated compositions by a fixed `(f, a)` with
/// `f(0) != 0`: relation bases, `A_j`, `B_j` tables and the `M_m` basis.
#[derive(Clone, Debug)]
pub struct Composer {
    f: Poly,
    a: Poly,
    n: usize,
    m: usize,
    d: usize,
    tables: PowersAB,
    mbasis: RelationBasis,
    timings: PhaseTimings,
}

impl Composer {
    /// Runs the precomputation; `NonGeneric` when a degree law or a
    /// certificate fails.
    pub fn new(f: &Poly, a: &Poly) -> Result<Self> {
        let n = f.degree().ok_or(Error::DivisionByZero)?;
        if n == 0 {
            return Err(Error::BadParameters("modulus must have positive degree".into()));
        }
        if f.coeff(0) == 0 {
            return Err(Error::NeedsUnitConstantTerm);
        }
        let a = a.rem(f)?;
        if f.gcd(&a)?.degree() != Some(0) {
            return Err(Error::NonGeneric(NonGenericReason::NotCoprime));
        }
        let m = ceil_root4(n);
        let d = ceil_div(n, m);
        assert!(d <= m * m * m && m <= n, "parameter law violated for n={n}");
        let mut timings = PhaseTimings::default();
        let inv = a.inv_mod(f)?;
        let (basis, basis_inv) = timings.time("basis", || {
            let b = nmu_basis(f, &a, m)?;
            if !b.generic {
                return Err(Error::NonGeneric(NonGenericReason::NBasisDegree { expected: d, got: b.delta }));
            }
            Ok((b, nmu_basis(f, &inv, m)?))
        })?;
        let (tables, tables_inv) =
            timings.time("powers_ab", || Ok((powers_ab_with(f, &a, basis)?, powers_ab_with(f, &inv, basis_inv)?)))?;
        let table = timings.time("truncated_powers", || {
            let w = 2 * m - 1;
            let b1 = Poly::monomial(f.field(), 1, m - 1).rem(f)?;
            let b2 = b1.mulmod(&inv.powmod(d as u64, f)?, f)?;
            let low = truncated_powers(f, &inv, &b1, w, d, &tables_inv)?;
            let high = truncated_powers(f, &inv, &b2, w, d, &tables_inv)?;
            // exponent 2d is not covered by the two runs
            let top = b2.mulmod(&inv.powmod(d as u64, f)?, f)?.truncate(w);
            let rows: Vec<Poly> = low.into_iter().skip(1).chain(high).chain(std::iter::once(top)).collect();
            recover_shifted_truncations(f, &rows, m)
        })?;
        let mbasis = timings.time("m_basis", || mm_basis(f, &a, m, &table))?;
        Ok(Composer { f: f.clone(), a, n, m, d, tables, mbasis, timings })
    }

    /// `g(a) rem f`.
    pub fn compose(&mut self, g: &Poly) -> Result<Poly> {
        let fld = self.f.field();
        if g.field() != fld {
            return Err(Error::FieldMismatch);
        }
        let n = self.n;
        if g.len() <= n {
            return self.compose_short(g);
        }
        let an = self.a.powmod(n as u64, &self.f)?;
        let mut acc = Poly::zero(fld);
        for chunk in g.coeffs().chunks(n).rev() {
            let part = self.compose_short(&Poly::new(fld, chunk.to_vec()))?;
            acc = (&acc.mulmod(&an, &self.f)? + &part).rem(&self.f)?;
        }
        Ok(acc)
    }

    fn compose_short(&mut self, g: &Poly) -> Result<Poly> {
        let fld = self.f.field();
        let (mbasis, tables, f, a) = (&self.mbasis, &self.tables, &self.f, &self.a);
        let big = self.timings.time("reduction", || {
            let gy = BiPoly::from_x_coeffs(fld, g.len().max(1), std::slice::from_ref(g))?;
            reduce_by_mm(&gy, mbasis)
        })?;
        self.timings.time("composition", || bivariate_compose(&big, f, a, tables))
    }

    pub fn timings(&self) -> &PhaseTimings {
        &self.timings
    }

    /// `(n, m, d, mu, delta)` of this instance.
    pub fn params(&self) -> (usize, usize, usize, usize, usize) {
        (self.n, self.m, self.d, self.tables.mu(), self.tables.delta())
    }

    pub fn m_basis(&self) -> &RelationBasis {
        &self.mbasis
    }
}

/// `g(a) rem f` through relation matrices; `NonGeneric` instead of ever
/// returning a wrong value.
///
/// When `f = x^alpha f*` with `alpha > 0`, the composition modulo `x^alpha`
/// uses the segmented Brent–Kung baseline and the two parts are recombined by
/// Chinese remaindering.
pub fn univariate_compose(g: &Poly, a: &Poly, f: &Poly) -> Result<Poly> {
    univariate_compose_timed(g, a, f).map(|r| r.0)
}

/// [`univariate_compose`] together with the phase timings of the main path.
pub fn univariate_compose_timed(g: &Poly, a: &Poly, f: &Poly) -> Result<(Poly, PhaseTimings)> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let fld = f.field();
    if n == 0 {
        return Ok((Poly::zero(fld), PhaseTimings::default()));
    }
    let a = a.rem(f)?;
    if a.is_zero() {
        return Ok((Poly::constant(fld, g.coeff(0)).rem(f)?, PhaseTimings::default()));
    }
    let alpha = f.valuation();
    if alpha == 0 {
        let mut c = Composer::new(f, &a)?;
        let h = c.compose(g)?;
        return Ok((h, c.timings));
    }
    let xa = Poly::monomial(fld, 1, alpha);
    let fstar = Poly::new(fld, f.coeffs()[alpha..].to_vec());
    let hhat = brent_kung_compose(g, &a.truncate(alpha), &xa)?;
    if fstar.is_constant() {
        return Ok((hhat, PhaseTimings::default()));
    }
    let (hstar, t) = univariate_compose_timed(g, &a.rem(&fstar)?, &fstar)?;
    let inv = xa.rem(&fstar)?.inv_mod(&fstar)?;
    let lift = (&hstar - &hhat).mulmod(&inv, &fstar)?;
    Ok((&hhat + &lift.shift(alpha), t))
}

/// Values `G(x_i, y_i)` for points with pairwise distinct abscissae.
pub fn multipoint_eval_bivariate(g: &BiPoly, points: &[(FieldElement, FieldElement)]) -> Result<Vec<FieldElement>> {
    let fld = g.field();
    if points.is_empty() {
        return Ok(Vec::new());
    }
    let xs: Vec<FieldElement> = points.iter().map(|p| fld.elem(p.0)).collect();
    let ys: Vec<FieldElement> = points.iter().map(|p| fld.elem(p.1)).collect();
    let a = interpolate(fld, &xs, &ys)?;
    let f = vanishing_poly(fld, &xs);
    let n = points.len();
    let d = g.ydegree().map_or(1, |e| e + 1);
    let mu = ceil_cbrt(d).clamp(1, n);
    let basis = nmu_basis(&f, &a, mu)?;
    if !basis.generic {
        return Err(Error::NonGeneric(NonGenericReason::NBasisDegree {
            expected: ceil_div(n, mu),
            got: basis.delta,
        }));
    }
    let tables = powers_ab_with(&f, &a, basis)?;
    // few points and a large y-degree: slices of width mu^3, Horner in a^(mu^3)
    let width = mu * mu * mu;
    let step = a.powmod(width as u64, &f)?;
    let mut h = Poly::zero(fld);
    for k in (0..d.div_ceil(width)).rev() {
        let slice = BiPoly::from_fn(fld, g.xbound(), width.min(d - k * width), |i, j| g.get(i, k * width + j));
        h = &h.mulmod(&step, &f)? + &bivariate_compose(&slice, &f, &a, &tables)?;
    }
    Ok(multipoint_eval(&h, &xs))
}
