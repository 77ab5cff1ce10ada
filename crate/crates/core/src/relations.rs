//! Bases of the relation modules of `(x, a)` modulo `f`, and reductions
//! with respect to them.
//!
//! * `N_mu`: relations `p(x, y) = sum_{i<mu} p_i(x) y^i` (a `K[x]`-module),
//! * `M_mu`: relations `p(x, y) = sum_{i<mu} p_i(y) x^i` (a `K[y]`-module),
//!
//! where a relation means `p(x, a) = 0 mod f`. Bases are stored as square
//! polynomial matrices whose column `j` holds the `p_i` of the `j`-th relation.

use crate::approximant::matrix_generator;
use crate::bipoly::BiPoly;
use crate::error::{Error, NonGenericReason, Result};
use crate::linalg::Matrix;
use crate::poly::Poly;
use crate::polymat::{form_predicates, mat_divrem, popov_from_weak, popov, PolyMatrix, Shift, Var};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModuleKind {
    /// Bounded `y`-degree; entries are polynomials in `x`.
    N,
    /// Bounded `x`-degree; entries are polynomials in `y`.
    M,
}

/// A certified basis of a relation module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationBasis {
    pub matrix: PolyMatrix,
    pub kind: ModuleKind,
    pub mu: usize,
    /// Largest column degree.
    pub delta: usize,
    pub shift: Shift,
    /// `delta == ceil(n / mu)` and all certificates passed.
    pub generic: bool,
}

impl RelationBasis {
    /// Column degrees of the basis matrix.
    pub fn column_degrees(&self) -> Vec<usize> {
        self.matrix.column_degrees().expect("bases have no zero column")
    }

    /// Column `j` as a bivariate polynomial.
    pub fn relation(&self, j: usize) -> BiPoly {
        let f = self.matrix.field();
        let col = self.matrix.column(j);
        let len = col.iter().map(Poly::len).max().unwrap_or(0).max(1);
        match self.kind {
            ModuleKind::N => BiPoly::from_y_coeffs(f, len, &col),
            ModuleKind::M => BiPoly::from_x_coeffs(f, len, &col),
        }
        .expect("bounds cover the entries")
    }
}

pub(crate) fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

fn check_params(f: &Poly, mu: usize) -> Result<usize> {
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    if mu == 0 || mu > n {
        return Err(Error::BadParameters(format!("need 0 < mu <= deg f, got mu={mu}, n={n}")));
    }
    Ok(n)
}

/// `a^i rem f` for `i < count`.
fn power_list(a: &Poly, f: &Poly, count: usize) -> Result<Vec<Poly>> {
    let a = a.rem(f)?;
    let mut out = Vec::with_capacity(count);
    let mut cur = Poly::one(a.field()).rem(f)?;
    for _ in 0..count {
        let next = cur.mulmod(&a, f)?;
        out.push(std::mem::replace(&mut cur, next));
    }
    Ok(out)
}

/// Popov basis (shift 0) of `N_mu`, from the triangular basis
/// `{f, y - a rem f, ..., y^(mu-1) - a^(mu-1) rem f}`.
pub fn nmu_basis(f: &Poly, a: &Poly, mu: usize) -> Result<RelationBasis> {
    let n = check_params(f, mu)?;
    let fld = f.field();
    let abar = power_list(a, f, mu)?;
    let tri = PolyMatrix::from_fn(fld, mu, mu, Var::X, |i, j| {
        if j == 0 {
            if i == 0 { f.clone() } else { Poly::zero(fld) }
        } else if i == j {
            Poly::one(fld)
        } else if i == 0 {
            -&abar[j]
        } else {
            Poly::zero(fld)
        }
    });
    let r = popov(&tri, &Shift::zero(mu))?;
    let cdeg = r.column_degrees()?;
    if cdeg.iter().sum::<usize>() != n {
        return Err(Error::SingularBasis);
    }
    for j in 0..mu {
        let mut acc = Poly::zero(fld);
        for (i, ai) in abar.iter().enumerate() {
            acc = &acc + &r.get(i, j).mulmod(ai, f)?;
        }
        if !acc.rem(f)?.is_zero() {
            return Err(Error::SingularBasis);
        }
    }
    let delta = *cdeg.iter().max().unwrap();
    Ok(RelationBasis {
        matrix: r,
        kind: ModuleKind::N,
        mu,
        delta,
        shift: Shift::zero(mu),
        generic: delta == ceil_div(n, mu),
    })
}

/// Reduced representatives `U_j(x, y)` with `U_j(x, a) = u_j mod f`, read off
/// the `(0,..,0,n,..,n)`-Popov basis of the joint solution module.
pub fn joint_reduce(f: &Poly, a: &Poly, mu: usize, u: &[Poly]) -> Result<(RelationBasis, Vec<BiPoly>)> {
    let basis = nmu_basis(f, a, mu)?;
    let reps = joint_reduce_with(f, &basis, u)?;
    Ok((basis, reps))
}

/// As [`joint_reduce`], reusing an existing `N_mu` basis.
pub fn joint_reduce_with(f: &Poly, basis: &RelationBasis, u: &[Poly]) -> Result<Vec<BiPoly>> {
    if basis.kind != ModuleKind::N {
        return Err(Error::StaleTables);
    }
    let n = f.degree().ok_or(Error::DivisionByZero)?;
    let fld = f.field();
    let mu = basis.mu;
    let r = &basis.matrix;
    let mut out = Vec::with_capacity(u.len());
    for chunk in u.chunks(mu) {
        let l = chunk.len();
        let size = mu + l;
        let urem = chunk.iter().map(|p| p.rem(f)).collect::<Result<Vec<_>>>()?;
        // [R  u e_0; 0  I] already is in shifted weak Popov form
        let w = PolyMatrix::from_fn(fld, size, size, Var::X, |i, j| match (i < mu, j < mu) {
            (true, true) => r.get(i, j).clone(),
            (true, false) if i == 0 => urem[j - mu].clone(),
            (false, false) if i == j => Poly::one(fld),
            _ => Poly::zero(fld),
        });
        let shift = Shift((0..size).map(|i| if i < mu { 0 } else { n as i64 }).collect());
        let p = popov_from_weak(&w, &shift)?;
        for j in 0..l {
            for i in 0..l {
                let expect = if i == j { Poly::one(fld) } else { Poly::zero(fld) };
                if p.get(mu + i, mu + j) != &expect {
                    return Err(Error::SingularBasis);
                }
            }
            if (0..mu).any(|c| !p.get(mu + j, c).is_zero()) {
                return Err(Error::SingularBasis);
            }
            let col: Vec<Poly> = (0..mu).map(|i| p.get(i, mu + j).clone()).collect();
            out.push(BiPoly::from_y_coeffs(fld, basis.delta.max(1), &col)?);
        }
    }
    Ok(out)
}

/// `A_j(x, a) = a^(j mu)` and `B_j(x, a) = a^(j mu^2)` modulo `f`, both in
/// `K[x, y]_{<(delta, mu)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowersAB {
    pub a: Vec<BiPoly>,
    pub b: Vec<BiPoly>,
    pub basis: RelationBasis,
    /// `(f, a)` the tables were built for.
    pub modulus: Poly,
    pub base: Poly,
}

pub fn powers_ab(f: &Poly, a: &Poly, mu: usize) -> Result<PowersAB> {
    let basis = nmu_basis(f, a, mu)?;
    powers_ab_with(f, a, basis)
}

pub fn powers_ab_with(f: &Poly, a: &Poly, basis: RelationBasis) -> Result<PowersAB> {
    let mu = basis.mu;
    let a = a.rem(f)?;
    let a_mu = a.powmod(mu as u64, f)?;
    let a_mu2 = a_mu.powmod(mu as u64, f)?;
    let mut u = power_list(&a_mu, f, mu)?;
    u.extend(power_list(&a_mu2, f, mu)?);
    let mut reps = joint_reduce_with(f, &basis, &u)?;
    let b = reps.split_off(mu);
    Ok(PowersAB { a: reps, b, basis, modulus: f.clone(), base: a })
}

impl PowersAB {
    pub fn mu(&self) -> usize {
        self.basis.mu
    }

    pub fn delta(&self) -> usize {
        self.basis.delta
    }

    /// Errors unless the tables were built for this `(f, a)`.
    pub fn check(&self, f: &Poly, a: &Poly) -> Result<()> {
        if &self.modulus != f || self.base != a.rem(f)? {
            return Err(Error::StaleTables);
        }
        Ok(())
    }
}

/// `t[i][k] = [x^i a~^(k+1) rem f]_0^(m-1)` with `a~ = a^-1 mod f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedPowerTable {
    m: usize,
    entries: Vec<Vec<Poly>>,
}

impl TruncatedPowerTable {
    /// Wraps precomputed rows; `entries[i][k]` for `i < m`.
    pub fn new(entries: Vec<Vec<Poly>>) -> Result<Self> {
        let m = entries.len();
        let count = entries.first().map_or(0, Vec::len);
        if m == 0 || entries.iter().any(|r| r.len() != count) {
            return Err(Error::DimMismatch("ragged truncated power table".into()));
        }
        if entries.iter().flatten().any(|p| p.len() > m) {
            return Err(Error::DegreeOverflow { degree: m, bound: m - 1 });
        }
        Ok(TruncatedPowerTable { m, entries })
    }

    /// Direct computation with `count` exponents (`k < count`).
    pub fn direct(f: &Poly, a: &Poly, m: usize, count: usize) -> Result<Self> {
        let inv = a.inv_mod(f)?;
        let mut entries = vec![Vec::with_capacity(count); m];
        let mut p = Poly::one(f.field());
        for _ in 0..count {
            p = p.mulmod(&inv, f)?;
            let mut xp = p.clone();
            for row in entries.iter_mut() {
                row.push(xp.truncate(m));
                xp = xp.shift(1).rem(f)?;
            }
        }
        Self::new(entries)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of exponents `k`.
    pub fn count(&self) -> usize {
        self.entries[0].len()
    }

    pub fn get(&self, i: usize, k: usize) -> &Poly {
        &self.entries[i][k]
    }
}

fn nongeneric(what: &'static str) -> Error {
    Error::NonGeneric(NonGenericReason::MBasisCertificate(what))
}

/// Basis of `M_m` from truncated powers of `a^-1`, certified; `NonGeneric`
/// whenever a certificate fails.
pub fn mm_basis(f: &Poly, a: &Poly, m: usize, t: &TruncatedPowerTable) -> Result<RelationBasis> {
    let n = check_params(f, m)?;
    if f.coeff(0) == 0 {
        return Err(Error::NeedsUnitConstantTerm);
    }
    let a = a.rem(f)?;
    if f.gcd(&a)?.degree() != Some(0) {
        return Err(Error::NonGeneric(NonGenericReason::NotCoprime));
    }
    let delta = ceil_div(n, m);
    let sigma = 2 * delta;
    if t.m() != m || t.count() < sigma {
        return Err(Error::StaleTables);
    }
    let fld = f.field();
    // reversed sequence: its generators are the relations themselves
    let seq: Vec<Matrix> = (0..sigma)
        .map(|s| {
            let k = sigma - 1 - s;
            Matrix::from_fn(fld, m, m, |r, i| t.get(i, k).coeff(r))
        })
        .collect();
    let gen = matrix_generator(&seq)?;
    if gen.degenerate {
        return Err(Error::NonGeneric(NonGenericReason::DegenerateSequence));
    }
    let r = gen.matrix;
    let rep = form_predicates(&r, &Shift::zero(m))?;
    if !rep.is_column_reduced {
        return Err(nongeneric("column reduced"));
    }
    if rep.column_degrees.iter().sum::<usize>() != n {
        return Err(nongeneric("sum of column degrees"));
    }
    let dmax = *rep.column_degrees.iter().max().unwrap();
    if dmax > delta {
        return Err(nongeneric("degree bound"));
    }
    let basis = RelationBasis { matrix: r, kind: ModuleKind::M, mu: m, delta: dmax, shift: Shift::zero(m), generic: true };
    for j in 0..m {
        if !basis.relation(j).eval_y(&a, f)?.is_zero() {
            return Err(nongeneric("relation"));
        }
    }
    Ok(basis)
}

/// Popov basis of `M_m` by plain linear algebra on `x^i a^j rem f`, `j <= bound`.
///
/// Monomials are scanned by increasing `j`, then `i`; the first dependent
/// monomial of each row `i` yields the basis column with pivot `x^i y^j`.
pub fn mm_basis_oracle(f: &Poly, a: &Poly, m: usize, bound: usize) -> Result<PolyMatrix> {
    let n = check_params(f, m)?;
    let fld = f.field();
    let a = a.rem(f)?;
    let dense = |p: &Poly| (0..n).map(|i| p.coeff(i)).collect::<Vec<u64>>();
    // echelon rows: (pivot position, reduced vector, combination over monomial ids)
    let mut ech: Vec<(usize, Vec<u64>, Vec<u64>)> = Vec::new();
    let mut ids: Vec<(usize, usize)> = Vec::new();
    let mut found: Vec<Option<Vec<Poly>>> = vec![None; m];
    let mut apow = Poly::one(fld).rem(f)?;
    for j in 0..=bound {
        let mut xa = apow.clone();
        for (i, slot) in found.iter_mut().enumerate() {
            let v = dense(&xa);
            xa = xa.shift(1).rem(f)?;
            if slot.is_some() {
                continue;
            }
            let id = ids.len();
            let mut v = v;
            let mut comb = vec![0u64; id + 1];
            comb[id] = 1;
            for (piv, w, c) in &ech {
                let lam = v[*piv];
                if lam != 0 {
                    for (x, &y) in v.iter_mut().zip(w) {
                        *x = fld.sub(*x, fld.mul(lam, y));
                    }
                    for (x, &y) in comb.iter_mut().zip(c) {
                        *x = fld.sub(*x, fld.mul(lam, y));
                    }
                }
            }
            match v.iter().position(|&c| c != 0) {
                None => {
                    let mut rel: Vec<Vec<u64>> = vec![Vec::new(); m];
                    let mut put = |(ii, jj): (usize, usize), c: u64| {
                        if rel[ii].len() <= jj {
                            rel[ii].resize(jj + 1, 0);
                        }
                        rel[ii][jj] = fld.add(rel[ii][jj], c);
                    };
                    for (k, &c) in comb.iter().take(id).enumerate() {
                        put(ids[k], c);
                    }
                    put((i, j), 1);
                    *slot = Some(rel.into_iter().map(|c| Poly::new(fld, c)).collect());
                }
                Some(piv) => {
                    let inv = fld.inv(v[piv])?;
                    v.iter_mut().for_each(|x| *x = fld.mul(*x, inv));
                    comb.iter_mut().for_each(|x| *x = fld.mul(*x, inv));
                    ids.push((i, j));
                    ech.push((piv, v, comb));
                }
            }
        }
        if found.iter().all(Option::is_some) {
            let cols: Vec<Vec<Poly>> = found.into_iter().map(Option::unwrap).collect();
            return Ok(PolyMatrix::from_fn(fld, m, m, Var::Y, |i, j| cols[j][i].clone()));
        }
        apow = apow.mulmod(&a, f)?;
    }
    Err(Error::BoundTooSmall)
}

/// `G` with `G(x, a) = g(x, a) mod f`, `x`-degree below `m` and `y`-degree
/// below each row's pivot degree in the `M_m` basis.
pub fn reduce_by_mm(g: &BiPoly, basis: &RelationBasis) -> Result<BiPoly> {
    if basis.kind != ModuleKind::M {
        return Err(Error::StaleTables);
    }
    let m = basis.mu;
    let g = g.with_bounds(m, g.ybound().max(1))?;
    let v: Vec<Poly> = (0..m).map(|i| g.x_coeff(i)).collect();
    let (_, r) = mat_divrem(&v, &basis.matrix)?;
    BiPoly::from_x_coeffs(g.field(), basis.delta.max(1), &r)
}
